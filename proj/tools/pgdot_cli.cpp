// Command-line front end: experiments, walk simulations, derivative checks
// and stationarity classification.
#include "pgdot/pgdot.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace pgdot;

ProblemConfig problem_from(const std::string& name, const std::string& config_path) {
  if (config_path.empty()) return default_problem_config(name);
  ExperimentConfig cfg = parse_config(read_text_file(config_path));
  if (cfg.problem.name != name) {
    throw ContractViolation("config " + config_path + " describes problem '" + cfg.problem.name +
                            "', not '" + name + "'");
  }
  return cfg.problem;
}

Vector read_point(const std::string& path, int dim) {
  std::string text = read_text_file(path);
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream in(text);
  std::vector<double> v;
  for (std::string tok; in >> tok;) {
    auto d = detail::parse_number(tok);
    if (!d) throw FormatError(path + ": not a number: '" + tok + "'");
    v.push_back(*d);
  }
  if (static_cast<int>(v.size()) != dim) {
    throw FormatError(path + ": expected " + std::to_string(dim) + " values, found " +
                      std::to_string(v.size()));
  }
  return Eigen::Map<Vector>(v.data(), dim);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int cmd_run(const std::string& path, const std::string& out_dir, int jobs, bool reverse) {
  ExperimentConfig cfg = parse_config(read_text_file(path));
  ExperimentOptions opt;
  if (!out_dir.empty()) opt.output_dir = out_dir;
  opt.jobs = jobs;
  opt.reverse_order = reverse;
  ExperimentResult res = run_experiment(cfg, opt);
  for (const auto& c : res.cells) {
    std::cout << c.algorithm << " seed " << c.seed << ": "
              << (c.ok ? "final_f " + format_double(c.trace.final_f) : "FAILED " + c.error) << '\n';
  }
  std::cout << res.artifacts.size() << " artifacts in " << res.output_dir.string()
            << " (config " << res.config_hash << ")\n";
  return res.any_failed ? 1 : 0;
}

int cmd_walk(const std::string& kind_name, double alpha, long steps, int paths, std::uint64_t seed,
             const std::string& paths_csv, const std::string& msd_csv) {
  auto kind = parse_walk_kind(kind_name);
  if (!kind) throw ContractViolation("walk kind must be repelling or reinforced, got '" + kind_name + "'");
  if (!(alpha >= 0)) throw ContractViolation("alpha must be nonnegative");
  if (steps < 1000 || paths < 100) throw ContractViolation("walk requires T >= 1000 and at least 100 paths");
  const WeightFn w{alpha};

  std::vector<std::uint64_t> sum(steps + 1, 0);
  std::vector<double> ranges, locs;
  std::vector<std::vector<long>> kept;
  std::vector<std::uint64_t> kept_ids;
  for (int p = 0; p < paths; ++p) {
    std::vector<long> path = simulate(*kind, w, steps, seed, static_cast<std::uint64_t>(p));
    for (long t = 0; t <= steps; ++t) {
      const auto z = static_cast<std::uint64_t>(std::abs(path[t]));
      sum[t] += z * z;
    }
    ranges.push_back(static_cast<double>(path_range(path)));
    locs.push_back(localization_metric(path));
    if (!paths_csv.empty()) {
      kept.push_back(std::move(path));
      kept_ids.push_back(static_cast<std::uint64_t>(p));
    }
  }
  std::vector<double> msd(steps + 1);
  for (long t = 0; t <= steps; ++t) msd[t] = static_cast<double>(sum[t]) / paths;
  const SlopeFit fit = msd_slope(msd);

  std::cout << "msd_exponent " << format_double(fit.exponent) << '\n'
            << "msd_exponent_stderr " << format_double(fit.stderr_) << '\n'
            << "median_range " << format_double(median(ranges)) << '\n'
            << "min_range " << format_double(*std::min_element(ranges.begin(), ranges.end())) << '\n'
            << "median_localization " << format_double(median(locs)) << '\n'
            << "max_localization " << format_double(*std::max_element(locs.begin(), locs.end())) << '\n';

  if (!paths_csv.empty()) {
    std::ostringstream o;
    write_paths_csv(o, kept, kept_ids);
    write_file_atomic(paths_csv, o.str());
  }
  if (!msd_csv.empty()) {
    std::string o = "t,msd\n";
    for (long t = 0; t <= steps; ++t) o += std::to_string(t) + ',' + format_double(msd[t]) + '\n';
    write_file_atomic(msd_csv, o);
  }
  return 0;
}

int cmd_check(const std::string& name, const std::string& config_path) {
  const DerivativeCheck c = check_derivatives(problem_from(name, config_path));
  std::cout << "problem " << c.problem << '\n'
            << "points " << c.points << '\n'
            << "max_relative_gradient_error " << format_double(c.max_gradient_error) << '\n';
  if (c.eigen_checked) {
    std::cout << "max_eigenvalue_discrepancy " << format_double(c.max_eigen_discrepancy) << '\n';
  }
  std::cout << (c.passed() ? "PASS" : "FAIL") << '\n';
  return c.passed() ? 0 : 1;
}

int cmd_classify(const std::string& name, const std::string& point_file, double eps, double rho,
                 const std::string& config_path) {
  const ProblemInstance prob = build_problem(problem_from(name, config_path));
  const Vector x = read_point(point_file, prob.objective.dim);
  const StationarityReport r = classify_point(prob.objective, x, eps, rho);
  std::cout << "grad_norm " << format_double(r.grad_norm) << '\n'
            << "lambda_min " << format_double(r.lambda_min) << '\n'
            << "curvature_threshold " << format_double(r.curvature_threshold) << '\n'
            << "label " << to_string(r.label) << '\n';
  return 0;
}

int cmd_presets(const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& p : kPresets) {
    const auto path = std::filesystem::path(dir) / (std::string(p.name) + ".ini");
    write_file_atomic(path, p.text);
    std::cout << path.string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perturbed gradient methods with occupation-time adapted noise"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int jobs = 1;
  bool reverse = false;
  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("--output-dir", out_dir, "Output directory (overrides PGDOT_OUTPUT_DIR and the config)");
  run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  run->add_flag("--reverse-order", reverse, "Execute grid cells in reverse order");

  std::string kind, paths_csv, msd_csv;
  double alpha = 0;
  long steps = 0;
  int paths = 0;
  std::uint64_t seed = 0;
  auto* walk = app.add_subcommand("walk", "Simulate repelling or reinforced walks");
  walk->add_option("kind", kind, "repelling | reinforced")->required();
  walk->add_option("alpha", alpha, "Weight exponent in w(n) = 1 + n^alpha")->required();
  walk->add_option("T", steps, "Steps per path")->required();
  walk->add_option("paths", paths, "Number of paths")->required();
  walk->add_option("seed", seed, "Base seed")->required();
  walk->add_option("--paths-csv", paths_csv, "Write every path as seed,t,Z");
  walk->add_option("--msd-csv", msd_csv, "Write the ensemble MSD curve");

  std::string problem, problem_config;
  auto* check = app.add_subcommand("check", "Verify gradients and Hessian spectra of a problem");
  check->add_option("problem", problem, "Problem family")->required();
  check->add_option("--config", problem_config, "Take the problem block from this config")
      ->check(CLI::ExistingFile);

  std::string point_file;
  double eps = 0, rho = 0;
  auto* classify = app.add_subcommand("classify", "Label a point as first/second-order stationary");
  classify->add_option("problem", problem, "Problem family")->required();
  classify->add_option("point-file", point_file, "Whitespace or comma separated coordinates")
      ->required()
      ->check(CLI::ExistingFile);
  classify->add_option("eps", eps, "Gradient tolerance")->required();
  classify->add_option("rho", rho, "Hessian Lipschitz constant")->required();
  classify->add_option("--config", problem_config, "Take the problem block from this config")
      ->check(CLI::ExistingFile);

  auto* list = app.add_subcommand("list-problems", "Print the benchmark family names");

  std::string preset_dir = "presets";
  auto* presets_cmd = app.add_subcommand("presets", "Write the shipped presets to disk");
  presets_cmd->add_option("--dir", preset_dir, "Destination directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, out_dir, jobs, reverse);
    if (*walk) return cmd_walk(kind, alpha, steps, paths, seed, paths_csv, msd_csv);
    if (*check) return cmd_check(problem, problem_config);
    if (*classify) return cmd_classify(problem, point_file, eps, rho, problem_config);
    if (*list) {
      for (auto name : kProblemNames) std::cout << name << '\n';
      return 0;
    }
    if (*presets_cmd) return cmd_presets(preset_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
