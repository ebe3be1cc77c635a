// Runs the (algorithm × seed) grid of a config and writes trace CSVs, a
// summary and an index to the output directory.
#pragma once

#include "pgdot/analysis.hpp"
#include "pgdot/benchmarks.hpp"
#include "pgdot/config.hpp"
#include "pgdot/datasets.hpp"
#include "pgdot/io.hpp"
#include "pgdot/mlp.hpp"
#include "pgdot/optimizers.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace pgdot {

/// Environment variable that overrides the configured output directory.
inline constexpr const char* kOutputDirEnv = "PGDOT_OUTPUT_DIR";

/// A problem ready to optimize. For the MLP `objective` is the full
/// training loss and `data` holds the training set.
struct ProblemInstance {
  Objective objective;
  std::shared_ptr<const Dataset> data;
  MlpSpec mlp;
  bool minibatch = false;
};

inline ProblemInstance build_problem(const ProblemConfig& p) {
  ProblemInstance inst;
  if (p.name == "staircase") {
    inst.objective = make_staircase(p.staircase);
  } else if (p.name == "airy_regression") {
    inst.objective = make_airy_regression(p.airy);
  } else if (p.name == "reglq") {
    inst.objective = make_reglq(p.reglq);
  } else if (p.name == "phase_retrieval") {
    inst.objective = make_phase_retrieval(p.phase);
  } else if (p.name == "mlp") {
    Dataset ds;
    if (p.data.source == "mnist_idx") {
      ds = load_mnist_idx(p.data.images, p.data.labels, p.data.limit);
    } else if (p.data.source == "cifar10_binary") {
      ds = load_cifar10(p.data.files, p.data.limit);
    } else {
      ds = synthetic_blobs(p.data.blobs);
    }
    inst.data = std::make_shared<const Dataset>(std::move(ds));
    inst.mlp = p.mlp;
    inst.objective = make_mlp_objective(p.mlp, inst.data);
    inst.minibatch = true;
  } else {
    throw ContractViolation("unknown problem '" + p.name + "'");
  }
  return inst;
}

/// Explicit x0 when configured, otherwise N(mean, variance) per coordinate
/// from the seed's initial-point stream (shared by every algorithm).
inline Vector initial_point(const ProblemConfig& p, std::uint64_t seed) {
  const int d = p.dim();
  if (p.init.x0) {
    if (p.init.x0->size() == 1) return Vector::Constant(d, p.init.x0->front());
    return Eigen::Map<const Vector>(p.init.x0->data(), d);
  }
  RngStream rng = derive_stream(seed, streams::kInitialPoint);
  const double sd = std::sqrt(p.init.variance);
  Vector x(d);
  for (int i = 0; i < d; ++i) x[i] = rng.normal(p.init.mean, sd);
  return x;
}

struct EpochRow {
  long epoch = 0;
  double train_loss = 0;
};

struct CellResult {
  std::string algorithm;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  RunTrace trace;
  double f0 = 0;
  std::optional<double> threshold;
  std::optional<StationarityReport> classification;
  std::vector<EpochRow> epochs;
};

struct ExperimentOptions {
  std::optional<std::string> output_dir;  // wins over env and config
  int jobs = 1;
  bool reverse_order = false;
};

struct ExperimentResult {
  std::filesystem::path output_dir;
  std::string config_hash;
  std::vector<CellResult> cells;  // sorted by (algorithm, seed)
  std::vector<std::string> artifacts;
  bool any_failed = false;
};

inline std::string trace_filename(const std::string& algorithm, std::uint64_t seed) {
  return "trace_" + algorithm + "_seed" + std::to_string(seed) + ".csv";
}

inline std::string epochs_filename(const std::string& algorithm, std::uint64_t seed) {
  return "epochs_" + algorithm + "_seed" + std::to_string(seed) + ".csv";
}

inline std::string trace_csv(const RunTrace& trace) {
  std::string out = "t,f,grad_norm,perturbed,nce\n";
  for (const auto& r : trace.rows) {
    out += std::to_string(r.t) + ',' + format_double(r.f) + ',' + format_double(r.grad_norm) +
           ',' + (r.perturbed ? '1' : '0') + ',' + (r.nce ? '1' : '0') + '\n';
  }
  return out;
}

inline std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg,
                                                const ExperimentOptions& opt) {
  if (opt.output_dir) return *opt.output_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return cfg.output_dir;
}

namespace detail {

inline CellResult run_cell(const ExperimentConfig& cfg, const ProblemInstance& prob,
                           const AlgorithmConfig& alg, std::uint64_t seed) {
  CellResult cell;
  cell.algorithm = std::string(to_string(alg.algorithm));
  cell.seed = seed;
  const Objective& obj = prob.objective;
  const Vector x0 = initial_point(cfg.problem, seed);

  RunOptions ro;
  ro.seed = seed;
  ro.record_every = cfg.record_every;
  ro.max_steps = cfg.max_steps;
  if (prob.minibatch) {
    auto schedule = std::make_shared<BatchSchedule>(prob.mlp, prob.data, seed);
    const long per_epoch = schedule->batches_per_epoch();
    ro.max_steps = cfg.max_steps * per_epoch;
    ro.batch_at = [schedule](long t) { return schedule->at(t); };
    ro.observer = [&cell, &obj, per_epoch](long t, const Vector& x) {
      if (t % per_epoch == 0) cell.epochs.push_back({t / per_epoch, checked_value(obj, x)});
    };
  }

  try {
    cell.f0 = checked_value(obj, x0);
    if (cfg.threshold) cell.threshold = cfg.threshold;
    if (cfg.threshold_fraction) cell.threshold = *cfg.threshold_fraction * cell.f0;
    cell.trace = run(obj, alg, x0, ro);
    if (obj.dim <= kMaxHessianDim) {
      cell.classification = classify_point(obj, cell.trace.final_x, cfg.classify_eps, cfg.classify_rho);
    }
  } catch (const RunFailure& e) {
    cell.ok = false;
    cell.error = e.what();
    cell.trace = e.partial;
  } catch (const std::exception& e) {
    cell.ok = false;
    cell.error = e.what();
    cell.trace.algorithm = cell.algorithm;
    cell.trace.problem = obj.name;
    cell.trace.seed = seed;
  }
  cell.trace.seed = seed;
  return cell;
}

inline nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

inline std::string csv_number(const nlohmann::json& v) {
  return v.is_null() ? "" : v.is_number_float() ? format_double(v.get<double>()) : v.dump();
}

/// Flat view of the summary rows; empty fields mean "not available".
inline std::string summary_csv(const nlohmann::json& rows) {
  std::string out =
      "algorithm,seed,f0,final_f,best_f,threshold,steps_to_threshold,steps,n_perturbations,n_nce,terminated,"
      "final_label,status\n";
  for (const auto& r : rows) {
    const auto& k = r["final_classification"];
    std::string status = r["status"].get<std::string>();
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out += r["algorithm"].get<std::string>() + ',' + r["seed"].dump() + ',' + csv_number(r["f0"]) + ',' +
           csv_number(r["final_f"]) + ',' + csv_number(r["best_f"]) + ',' + csv_number(r["threshold"]) + ',' +
           csv_number(r["steps_to_threshold"]) + ',' + r["steps"].dump() + ',' + r["n_perturbations"].dump() + ',' +
           r["n_nce"].dump() + ',' + (r["terminated"].get<bool>() ? "1" : "0") + ',' +
           (k.is_null() ? "" : k["label"].get<std::string>()) + ',' + status + '\n';
  }
  return out;
}

inline nlohmann::json summary_row(const CellResult& c) {
  nlohmann::json row;
  row["algorithm"] = c.algorithm;
  row["seed"] = c.seed;
  std::optional<long> hit;
  if (c.threshold) hit = steps_to_threshold(c.trace, *c.threshold);
  row["steps_to_threshold"] = hit ? nlohmann::json(*hit) : nlohmann::json(nullptr);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : c.trace.rows) best = std::min(best, r.f);
  row["best_f"] = finite_or_null(best);
  row["n_perturbations"] = c.trace.n_perturbations;
  row["n_nce"] = c.trace.n_nce;
  if (c.classification) {
    const auto& k = *c.classification;
    row["final_classification"] = {{"label", std::string(to_string(k.label))},
                                   {"grad_norm", finite_or_null(k.grad_norm)},
                                   {"lambda_min", finite_or_null(k.lambda_min)}};
  } else {
    row["final_classification"] = nullptr;
  }
  row["f0"] = finite_or_null(c.f0);
  row["final_f"] = finite_or_null(c.trace.final_f);
  row["threshold"] = optional_json(c.threshold);
  row["steps"] = c.trace.steps;
  row["terminated"] = c.trace.terminated;
  row["warnings"] = c.trace.warnings;
  row["status"] = c.ok ? "ok" : "failed: " + c.error;
  return row;
}

}  // namespace detail

/// Executes every (algorithm, seed) cell, optionally on `jobs` threads,
/// then writes the artifacts. Output bytes do not depend on execution
/// order or thread count.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                       const ExperimentOptions& opt = {}) {
  ExperimentResult result;
  result.output_dir = resolve_output_dir(cfg, opt);
  result.config_hash = config_hash(cfg);
  std::filesystem::create_directories(result.output_dir);

  const ProblemInstance prob = build_problem(cfg.problem);

  struct Task {
    const AlgorithmConfig* alg;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const auto& a : cfg.algorithms)
    for (auto s : cfg.seeds) tasks.push_back({&a, s});
  std::vector<CellResult> cells(tasks.size());

  std::vector<std::size_t> order(tasks.size());
  std::iota(order.begin(), order.end(), 0);
  if (opt.reverse_order) std::reverse(order.begin(), order.end());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < order.size();) {
      const Task& t = tasks[order[k]];
      cells[order[k]] = detail::run_cell(cfg, prob, *t.alg, t.seed);
    }
  };
  const int jobs = std::max(1, std::min<int>(opt.jobs, static_cast<int>(tasks.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Serialized reduction: everything below runs in canonical cell order.
  nlohmann::json index_entries = nlohmann::json::array();
  nlohmann::json rows = nlohmann::json::array();
  for (auto& c : cells) {
    c.trace.algorithm = c.algorithm;
    const std::string trace_name = trace_filename(c.algorithm, c.seed);
    write_file_atomic(result.output_dir / trace_name, trace_csv(c.trace));
    const std::string status = c.ok ? "ok" : "failed: " + c.error;
    index_entries.push_back({{"path", trace_name}, {"kind", "trace"}, {"algorithm", c.algorithm},
                             {"seed", c.seed}, {"status", status}});
    result.artifacts.push_back(trace_name);
    if (prob.minibatch) {
      std::string csv = "epoch,train_loss\n";
      for (const auto& e : c.epochs) csv += std::to_string(e.epoch) + ',' + format_double(e.train_loss) + '\n';
      const std::string name = epochs_filename(c.algorithm, c.seed);
      write_file_atomic(result.output_dir / name, csv);
      index_entries.push_back({{"path", name}, {"kind", "epochs"}, {"algorithm", c.algorithm},
                               {"seed", c.seed}, {"status", status}});
      result.artifacts.push_back(name);
    }
    rows.push_back(detail::summary_row(c));
    result.any_failed |= !c.ok;
  }

  nlohmann::json summary;
  summary["experiment"] = cfg.name;
  summary["problem"] = cfg.problem.name;
  summary["config_hash"] = result.config_hash;
  summary["rows"] = rows;
  write_file_atomic(result.output_dir / "summary.json", summary.dump(2) + "\n");
  index_entries.push_back({{"path", "summary.json"}, {"kind", "summary"},
                           {"status", result.any_failed ? "partial" : "ok"}});
  result.artifacts.push_back("summary.json");
  write_file_atomic(result.output_dir / "summary.csv", detail::summary_csv(rows));
  index_entries.push_back({{"path", "summary.csv"}, {"kind", "summary"},
                           {"status", result.any_failed ? "partial" : "ok"}});
  result.artifacts.push_back("summary.csv");

  std::sort(index_entries.begin(), index_entries.end(),
            [](const nlohmann::json& a, const nlohmann::json& b) {
              return a["path"].get<std::string>() < b["path"].get<std::string>();
            });
  nlohmann::json index;
  index["config_hash"] = result.config_hash;
  index["experiment"] = cfg.name;
  index["artifacts"] = index_entries;
  write_file_atomic(result.output_dir / "index.json", index.dump(2) + "\n");
  result.artifacts.push_back("index.json");
  std::sort(result.artifacts.begin(), result.artifacts.end());

  result.cells = std::move(cells);
  return result;
}

}  // namespace pgdot
