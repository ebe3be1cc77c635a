// Experiment configuration: a keyed, sectioned plain-text format.
//
//   # comment
//   [experiment]          name, seeds, max_steps, record_every, output_dir,
//                         threshold | threshold_fraction, classify_eps, classify_rho
//   [problem]             name plus the family's structural keys
//   [defaults]            algorithm keys shared by every [algorithm ...] section
//   [algorithm pgdot]     one section per algorithm
//
// Values are numbers, `inf`, booleans (true/false), bare strings, or
// comma-separated lists. See docs/config.md for the complete key list.
#pragma once

#include "pgdot/benchmarks.hpp"
#include "pgdot/datasets.hpp"
#include "pgdot/io.hpp"
#include "pgdot/mlp.hpp"
#include "pgdot/optimizers.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace pgdot {

/// Every problem found while validating a config, not just the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors)
      : std::runtime_error(join(errors)), errors(std::move(errors)) {}
  std::vector<std::string> errors;

 private:
  static std::string join(const std::vector<std::string>& errs) {
    std::string s = "invalid config:";
    for (const auto& e : errs) s += "\n  " + e;
    return s;
  }
};

inline constexpr std::string_view kProblemNames[] = {
    "staircase", "airy_regression", "reglq", "phase_retrieval", "mlp"};

struct InitSpec {
  std::optional<std::vector<double>> x0;  // explicit point (one value broadcasts)
  double mean = 0.0;                      // otherwise x0 ~ N(mean, variance) per seed
  double variance = 0.0;
};

struct DataSpec {
  std::string source = "synthetic_blobs";  // mnist_idx | cifar10_binary | synthetic_blobs
  std::string images;
  std::string labels;
  std::vector<std::string> files;
  int limit = 0;
  BlobSpec blobs;
};

struct ProblemConfig {
  std::string name = "staircase";
  std::uint64_t data_seed = 0;
  StaircaseSpec staircase;
  AiryRegressionSpec airy;
  RegLqSpec reglq;
  PhaseRetrievalSpec phase;
  MlpSpec mlp;
  DataSpec data;
  InitSpec init;

  int dim() const {
    if (name == "staircase") return staircase.dim;
    if (name == "airy_regression") return airy.dim();
    if (name == "reglq") return 2;
    if (name == "phase_retrieval") return phase.dim;
    return mlp.param_count();
  }
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<std::uint64_t> seeds;
  long max_steps = 0;  // epochs for the mlp problem
  long record_every = 1;
  std::string output_dir = "out";
  std::optional<double> threshold;
  std::optional<double> threshold_fraction;
  double classify_eps = 1e-2;
  double classify_rho = 1.0;
  ProblemConfig problem;
  std::vector<AlgorithmConfig> algorithms;  // sorted by algorithm name
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::optional<double> parse_number(const std::string& s) {
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  double v = 0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) return std::nullopt;
  return v;
}

struct Entry {
  std::string value;
  int line = 0;
};

struct Section {
  std::string kind;  // experiment | problem | defaults | algorithm
  std::string arg;
  int line = 0;
  std::map<std::string, Entry> entries;
};

/// Typed access to one section; remembers consumed keys so leftovers can
/// be reported as unknown.
class Reader {
 public:
  Reader(const Section* primary, const Section* fallback, std::string path,
         std::vector<std::string>& errors)
      : primary_(primary), fallback_(fallback), path_(std::move(path)), errors_(errors) {}

  bool has(const std::string& key) const { return find(key) != nullptr; }

  std::optional<std::string> str(const std::string& key, bool required = false) {
    const Entry* e = find(key);
    used_.insert(key);
    if (!e) {
      if (required) errors_.push_back(path_ + "." + key + ": missing required key");
      return std::nullopt;
    }
    return e->value;
  }

  std::optional<double> number(const std::string& key, bool required = false,
                               bool positive = true) {
    auto s = str(key, required);
    if (!s) return std::nullopt;
    auto v = parse_number(*s);
    if (!v) {
      errors_.push_back(path_ + "." + key + ": expected a number, got '" + *s + "'");
      return std::nullopt;
    }
    if (positive && !(*v > 0)) {
      errors_.push_back(path_ + "." + key + ": must be positive, got " + *s);
      return std::nullopt;
    }
    return v;
  }

  std::optional<long> integer(const std::string& key, bool required = false,
                              bool positive = true) {
    auto v = number(key, required, positive);
    if (!v) return std::nullopt;
    if (*v != std::floor(*v) || std::isinf(*v)) {
      errors_.push_back(path_ + "." + key + ": expected an integer");
      return std::nullopt;
    }
    return static_cast<long>(*v);
  }

  std::optional<bool> boolean(const std::string& key) {
    auto s = str(key);
    if (!s) return std::nullopt;
    if (*s == "true" || *s == "1") return true;
    if (*s == "false" || *s == "0") return false;
    errors_.push_back(path_ + "." + key + ": expected true or false");
    return std::nullopt;
  }

  std::optional<std::vector<double>> numbers(const std::string& key, bool required = false) {
    auto s = str(key, required);
    if (!s) return std::nullopt;
    std::vector<double> out;
    for (const auto& item : split_list(*s)) {
      auto v = parse_number(item);
      if (!v || !std::isfinite(*v)) {
        errors_.push_back(path_ + "." + key + ": bad list element '" + item + "'");
        return std::nullopt;
      }
      out.push_back(*v);
    }
    return out;
  }

  void report_unknown() const {
    for (const Section* s : {primary_, fallback_}) {
      if (!s) continue;
      for (const auto& [key, entry] : s->entries) {
        if (!used_.count(key)) {
          errors_.push_back("line " + std::to_string(entry.line) + ": " +
                            (s == primary_ ? path_ : "defaults") + "." + key + ": unknown key");
        }
      }
    }
  }

 private:
  const Entry* find(const std::string& key) const {
    if (primary_) {
      auto it = primary_->entries.find(key);
      if (it != primary_->entries.end()) return &it->second;
    }
    if (fallback_) {
      auto it = fallback_->entries.find(key);
      if (it != fallback_->entries.end()) return &it->second;
    }
    return nullptr;
  }

  const Section* primary_;
  const Section* fallback_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> used_;
};

inline std::vector<Section> parse_sections(std::string_view text, std::vector<std::string>& errors) {
  std::vector<Section> sections;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back("line " + std::to_string(line_no) + ": malformed section header");
        continue;
      }
      std::istringstream hs(line.substr(1, line.size() - 2));
      Section s;
      hs >> s.kind >> s.arg;
      s.line = line_no;
      std::string extra;
      if (hs >> extra) {
        errors.push_back("line " + std::to_string(line_no) + ": unexpected text in section header");
      }
      sections.push_back(std::move(s));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    if (sections.empty()) {
      errors.push_back("line " + std::to_string(line_no) + ": key outside of any section");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto& entries = sections.back().entries;
    if (entries.count(key)) {
      errors.push_back("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
      continue;
    }
    entries[key] = Entry{value, line_no};
  }
  return sections;
}

inline void read_algorithm(Reader& rd, AlgorithmConfig& cfg, const std::string& path,
                           std::vector<std::string>& errors) {
  const Algorithm a = cfg.algorithm;
  if (auto m = rd.str("mode")) {
    if (*m == "theory") cfg.mode = Mode::theory;
    else if (*m == "practical") cfg.mode = Mode::practical;
    else errors.push_back(path + ".mode: expected theory or practical, got '" + *m + "'");
  }
  const bool practical = cfg.mode == Mode::practical;
  const bool perturbed = a == Algorithm::pgd || a == Algorithm::pgdot || a == Algorithm::pagd ||
                         a == Algorithm::pagdot;
  const bool momentum_used = is_accelerated_family(a) || a == Algorithm::sgd_momentum;

  if (auto v = rd.number("eta", practical)) cfg.eta = *v;
  if (auto v = rd.number("r", practical && perturbed)) cfg.r = *v;
  if (auto v = rd.number("g_thres", practical && perturbed)) cfg.g_thres = *v;
  if (auto v = rd.integer("t_thres", practical && perturbed)) cfg.t_thres = *v;
  if (auto v = rd.number("momentum", practical && momentum_used, false)) {
    if (*v < 0 || *v >= 1) errors.push_back(path + ".momentum: must lie in [0, 1)");
    else cfg.momentum = *v;
  }
  if (auto v = rd.number("h")) cfg.h = *v >= kUnboundedHalfWidth ? std::numeric_limits<double>::infinity() : *v;
  if (auto v = rd.integer("t_count")) cfg.t_count = static_cast<std::size_t>(*v);
  if (auto v = rd.number("alpha")) cfg.weight_alpha = *v;
  if (auto v = rd.number("nce_gamma")) cfg.nce_gamma = *v;
  if (auto v = rd.number("nce_s")) cfg.nce_s = *v;
  if (cfg.nce_gamma.has_value() != cfg.nce_s.has_value()) {
    errors.push_back(path + ": nce_gamma and nce_s must be given together");
  }

  const bool theory = cfg.mode == Mode::theory;
  if (auto v = rd.number("ell", theory)) cfg.theory.ell = *v;
  if (auto v = rd.number("rho", theory)) cfg.theory.rho = *v;
  if (auto v = rd.number("eps", theory)) cfg.theory.eps = *v;
  if (auto v = rd.number("c", theory)) cfg.theory.c = *v;
  if (auto v = rd.number("delta", theory)) cfg.theory.delta = *v;
  if (auto v = rd.number("delta_f", theory)) cfg.theory.delta_f = *v;
  if (auto p = rd.str("policy")) {
    if (*p == "warn") cfg.policy = HypothesisPolicy::warn;
    else if (*p == "strict") cfg.policy = HypothesisPolicy::strict;
    else errors.push_back(path + ".policy: expected warn or strict");
  }

  if (auto b = rd.boolean("reset_velocity_on_perturb")) cfg.reset_velocity_on_perturb = *b;
  if (auto b = rd.boolean("gate_full_gradient")) cfg.gate_full_gradient = *b;
  if (auto v = rd.number("beta1")) cfg.beta1 = *v;
  if (auto v = rd.number("beta2")) cfg.beta2 = *v;
  if (auto v = rd.number("adam_eps")) cfg.adam_eps = *v;
  if (auto v = rd.number("rms_decay")) cfg.rms_decay = *v;
}

inline void read_problem(Reader& rd, ProblemConfig& p, std::vector<std::string>& errors) {
  if (auto n = rd.str("name", true)) {
    if (std::find(std::begin(kProblemNames), std::end(kProblemNames), *n) == std::end(kProblemNames)) {
      errors.push_back("problem.name: unknown problem '" + *n + "'");
      return;
    }
    p.name = *n;
  } else {
    return;
  }
  if (auto v = rd.integer("data_seed", false, false)) p.data_seed = static_cast<std::uint64_t>(*v);
  if (auto v = rd.numbers("x0")) p.init.x0 = *v;
  if (auto v = rd.number("init_mean", false, false)) p.init.mean = *v;
  if (auto v = rd.number("init_variance", false, false)) {
    if (*v < 0) errors.push_back("problem.init_variance: must be nonnegative");
    else p.init.variance = *v;
  }

  if (p.name == "staircase") {
    if (auto v = rd.integer("N", true)) p.staircase.steps = static_cast<int>(*v);
    if (auto v = rd.number("L", true)) p.staircase.length = *v;
    if (auto v = rd.integer("d", true)) p.staircase.dim = static_cast<int>(*v);
  } else if (p.name == "airy_regression") {
    if (auto v = rd.integer("M")) p.airy.modes = static_cast<int>(*v);
    if (auto v = rd.integer("samples")) p.airy.samples = static_cast<int>(*v);
    if (auto v = rd.number("spacing")) p.airy.spacing = *v;
    if (auto v = rd.number("omega")) p.airy.omega = *v;
    if (auto v = rd.number("s0", false, false)) p.airy.shift = *v;
  } else if (p.name == "reglq") {
    if (auto v = rd.integer("samples")) p.reglq.samples = static_cast<int>(*v);
    p.reglq.data_seed = p.data_seed;
  } else if (p.name == "phase_retrieval") {
    if (auto v = rd.integer("samples")) p.phase.samples = static_cast<int>(*v);
    if (auto v = rd.integer("d")) p.phase.dim = static_cast<int>(*v);
    p.phase.data_seed = p.data_seed;
  } else if (p.name == "mlp") {
    if (auto v = rd.integer("n_hidden", true)) p.mlp.hidden = static_cast<int>(*v);
    if (auto v = rd.integer("batch_size")) p.mlp.batch_size = static_cast<int>(*v);
    if (auto a = rd.str("activation")) {
      if (auto act = parse_activation(*a)) p.mlp.activation = *act;
      else errors.push_back("problem.activation: expected sigmoid, tanh or relu");
    }
    if (auto s = rd.str("source", true)) {
      if (*s != "mnist_idx" && *s != "cifar10_binary" && *s != "synthetic_blobs") {
        errors.push_back("problem.source: expected mnist_idx, cifar10_binary or synthetic_blobs");
      }
      p.data.source = *s;
    }
    const bool mnist = p.data.source == "mnist_idx";
    const bool cifar = p.data.source == "cifar10_binary";
    if (auto s = rd.str("images", mnist)) p.data.images = *s;
    if (auto s = rd.str("labels", mnist)) p.data.labels = *s;
    if (auto s = rd.str("files", cifar)) p.data.files = split_list(*s);
    if (auto v = rd.integer("limit")) p.data.limit = static_cast<int>(*v);
    if (auto v = rd.integer("blob_samples")) p.data.blobs.samples = static_cast<int>(*v);
    if (auto v = rd.number("blob_noise", false, false)) p.data.blobs.noise = *v;
    if (auto v = rd.number("blob_center_max")) p.data.blobs.center_max = *v;
    p.data.blobs.seed = p.data_seed;
  }
  if (p.init.x0 && p.init.x0->size() != 1 && static_cast<int>(p.init.x0->size()) != p.dim()) {
    errors.push_back("problem.x0: expected 1 or " + std::to_string(p.dim()) + " values, got " +
                     std::to_string(p.init.x0->size()));
  }
}

}  // namespace detail

inline ExperimentConfig parse_config(std::string_view text) {
  std::vector<std::string> errors;
  const auto sections = detail::parse_sections(text, errors);

  const detail::Section* experiment = nullptr;
  const detail::Section* problem = nullptr;
  const detail::Section* defaults = nullptr;
  std::vector<const detail::Section*> algorithms;
  for (const auto& s : sections) {
    const std::string where = "line " + std::to_string(s.line) + ": ";
    auto single = [&](const detail::Section*& slot) {
      if (slot) errors.push_back(where + "duplicate [" + s.kind + "] section");
      slot = &s;
    };
    if (s.kind == "experiment") single(experiment);
    else if (s.kind == "problem") single(problem);
    else if (s.kind == "defaults") single(defaults);
    else if (s.kind == "algorithm") algorithms.push_back(&s);
    else errors.push_back(where + "unknown section [" + s.kind + "]");
  }

  ExperimentConfig cfg;
  if (!experiment) errors.push_back("experiment: missing [experiment] section");
  if (!problem) errors.push_back("problem: missing [problem] section");
  if (algorithms.empty()) errors.push_back("algorithm: no [algorithm ...] sections");

  if (problem) {
    detail::Reader rd(problem, nullptr, "problem", errors);
    detail::read_problem(rd, cfg.problem, errors);
    rd.report_unknown();
  }

  if (experiment) {
    detail::Reader rd(experiment, nullptr, "experiment", errors);
    if (auto s = rd.str("name")) cfg.name = *s;
    if (auto v = rd.numbers("seeds", true)) {
      for (double s : *v) {
        if (s < 0 || s != std::floor(s)) {
          errors.push_back("experiment.seeds: seeds must be nonnegative integers");
          break;
        }
        cfg.seeds.push_back(static_cast<std::uint64_t>(s));
      }
      std::sort(cfg.seeds.begin(), cfg.seeds.end());
      if (std::adjacent_find(cfg.seeds.begin(), cfg.seeds.end()) != cfg.seeds.end()) {
        errors.push_back("experiment.seeds: duplicate seed");
      }
    }
    if (auto v = rd.integer("max_steps", true)) cfg.max_steps = *v;
    cfg.record_every = cfg.problem.name == "mlp" ? 10 : 1;
    if (auto v = rd.integer("record_every")) cfg.record_every = *v;
    if (auto s = rd.str("output_dir")) cfg.output_dir = *s;
    if (auto v = rd.number("threshold", false, false)) cfg.threshold = *v;
    if (auto v = rd.number("threshold_fraction")) cfg.threshold_fraction = *v;
    if (cfg.threshold && cfg.threshold_fraction) {
      errors.push_back("experiment: give threshold or threshold_fraction, not both");
    }
    if (auto v = rd.number("classify_eps")) cfg.classify_eps = *v;
    if (auto v = rd.number("classify_rho")) cfg.classify_rho = *v;
    rd.report_unknown();
  }

  std::set<std::string> seen;
  for (const auto* s : algorithms) {
    const std::string path = "algorithm." + s->arg;
    auto kind = parse_algorithm(s->arg);
    if (!kind) {
      errors.push_back("line " + std::to_string(s->line) + ": unknown algorithm '" + s->arg + "'");
      continue;
    }
    if (!seen.insert(s->arg).second) {
      errors.push_back("line " + std::to_string(s->line) + ": duplicate algorithm '" + s->arg + "'");
      continue;
    }
    AlgorithmConfig a;
    a.algorithm = *kind;
    detail::Reader rd(s, defaults, path, errors);
    detail::read_algorithm(rd, a, path, errors);
    rd.report_unknown();
    cfg.algorithms.push_back(a);
  }
  // Keys in [defaults] that no algorithm consumed are typos as well.
  if (defaults && algorithms.empty()) {
    detail::Reader rd(defaults, nullptr, "defaults", errors);
    rd.report_unknown();
  }
  std::sort(cfg.algorithms.begin(), cfg.algorithms.end(),
            [](const AlgorithmConfig& a, const AlgorithmConfig& b) {
              return to_string(a.algorithm) < to_string(b.algorithm);
            });

  // Unknown-key reports from [defaults] repeat once per algorithm.
  std::sort(errors.begin(), errors.end());
  errors.erase(std::unique(errors.begin(), errors.end()), errors.end());
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

/// Fully-resolved, order-independent rendering of a config (output
/// location excluded). Two configs hash equal iff this text is equal.
inline std::string canonical_text(const ExperimentConfig& c) {
  std::ostringstream o;
  auto num = [](double v) { return format_double(v); };
  o << "experiment.name=" << c.name << '\n';
  o << "experiment.seeds=";
  for (std::size_t i = 0; i < c.seeds.size(); ++i) o << (i ? "," : "") << c.seeds[i];
  o << "\nexperiment.max_steps=" << c.max_steps << "\nexperiment.record_every=" << c.record_every;
  o << "\nexperiment.threshold=" << (c.threshold ? num(*c.threshold) : "none");
  o << "\nexperiment.threshold_fraction=" << (c.threshold_fraction ? num(*c.threshold_fraction) : "none");
  o << "\nexperiment.classify=" << num(c.classify_eps) << ',' << num(c.classify_rho) << '\n';

  const auto& p = c.problem;
  o << "problem.name=" << p.name << "\nproblem.data_seed=" << p.data_seed << '\n';
  o << "problem.init=";
  if (p.init.x0) {
    for (double v : *p.init.x0) o << num(v) << ',';
  } else {
    o << "normal," << num(p.init.mean) << ',' << num(p.init.variance);
  }
  o << '\n';
  if (p.name == "staircase") {
    o << "problem.staircase=" << p.staircase.steps << ',' << num(p.staircase.length) << ','
      << p.staircase.dim << '\n';
  } else if (p.name == "airy_regression") {
    o << "problem.airy=" << p.airy.modes << ',' << p.airy.samples << ',' << num(p.airy.spacing)
      << ',' << num(p.airy.omega) << ',' << num(p.airy.shift) << '\n';
  } else if (p.name == "reglq") {
    o << "problem.reglq=" << p.reglq.samples << '\n';
  } else if (p.name == "phase_retrieval") {
    o << "problem.phase=" << p.phase.samples << ',' << p.phase.dim << '\n';
  } else if (p.name == "mlp") {
    o << "problem.mlp=" << p.mlp.hidden << ',' << p.mlp.batch_size << ','
      << static_cast<int>(p.mlp.activation) << '\n';
    o << "problem.data=" << p.data.source << ',' << p.data.images << ',' << p.data.labels << ','
      << p.data.limit << ',' << p.data.blobs.samples << ',' << num(p.data.blobs.noise) << ','
      << num(p.data.blobs.center_max);
    for (const auto& f : p.data.files) o << ',' << f;
    o << '\n';
  }

  for (const auto& a : c.algorithms) {
    o << "algorithm." << to_string(a.algorithm) << '='
      << (a.mode == Mode::theory ? "theory" : "practical") << ',' << num(a.eta) << ','
      << num(a.r) << ',' << num(a.g_thres) << ',' << a.t_thres << ',' << num(a.momentum) << ','
      << num(a.h) << ',' << a.t_count << ',' << (a.nce_gamma ? num(*a.nce_gamma) : "none") << ','
      << (a.nce_s ? num(*a.nce_s) : "none") << ',' << num(a.theory.ell) << ','
      << num(a.theory.rho) << ',' << num(a.theory.eps) << ',' << num(a.theory.c) << ','
      << num(a.theory.delta) << ',' << num(a.theory.delta_f) << ','
      << static_cast<int>(a.policy) << ',' << num(a.weight_alpha) << ','
      << a.reset_velocity_on_perturb << ',' << a.gate_full_gradient << ',' << num(a.beta1)
      << ',' << num(a.beta2) << ',' << num(a.adam_eps) << ',' << num(a.rms_decay) << '\n';
  }
  return o.str();
}

inline std::string config_hash(const ExperimentConfig& c) { return fnv1a_hex(canonical_text(c)); }

}  // namespace pgdot
