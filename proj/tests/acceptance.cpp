// Acceptance checks. Prints one line per criterion:
//   criterion N PASS|FAIL|SOFT-FAIL (seconds) detail
// Usage: acceptance [--criterion N]. Exit status is nonzero when any
// selected criterion fails hard (SOFT-FAIL does not count).
#include "pgdot/pgdot.hpp"
#include "support/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <unistd.h>
#include <vector>

namespace fs = std::filesystem;
using namespace pgdot;

namespace {

enum class Status { pass, fail, soft_fail };

struct Outcome {
  Status status = Status::pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Vector vec2(double a, double b) {
  Vector x(2);
  x << a, b;
  return x;
}

template <class T>
T median(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

AlgorithmConfig theory_config(Algorithm a, const TheoryInputs& in) {
  AlgorithmConfig c;
  c.algorithm = a;
  c.mode = Mode::theory;
  c.theory = in;
  return c;
}

const TheoryInputs kSaddleInputs{1.0, 1.0, 1.0, 1.0, 0.1, 1.0};
const TheoryInputs kSaddleAccelInputs{1.0, 1.0, 1.0 / 16, 2.0, 1.0, 0.05};

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("pgdot_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

ExperimentConfig preset(const char* name) { return parse_config(preset_text(name)); }

const AlgorithmConfig& find_algorithm(const ExperimentConfig& cfg, Algorithm a) {
  for (const auto& c : cfg.algorithms)
    if (c.algorithm == a) return c;
  throw ContractViolation("algorithm missing from preset");
}

/// Runs every (algorithm, seed) cell of `cfg` in process.
std::map<std::pair<std::string, std::uint64_t>, CellResult> run_cells(const ExperimentConfig& cfg) {
  const ProblemInstance prob = build_problem(cfg.problem);
  std::map<std::pair<std::string, std::uint64_t>, CellResult> out;
  for (const auto& alg : cfg.algorithms)
    for (std::uint64_t seed : cfg.seeds) {
      CellResult c = detail::run_cell(cfg, prob, alg, seed);
      out[{c.algorithm, seed}] = std::move(c);
    }
  return out;
}

ExperimentConfig with_seeds(ExperimentConfig cfg, std::vector<std::uint64_t> seeds,
                            std::vector<Algorithm> keep = {}) {
  cfg.seeds = std::move(seeds);
  if (!keep.empty()) {
    std::erase_if(cfg.algorithms, [&](const AlgorithmConfig& a) {
      return std::find(keep.begin(), keep.end(), a.algorithm) == keep.end();
    });
  }
  return cfg;
}

const std::vector<std::uint64_t> kFiveSeeds{1, 2, 3, 4, 5};

double final_f(const CellResult& c) {
  if (!c.ok || c.trace.rows.empty()) return std::numeric_limits<double>::quiet_NaN();
  return c.trace.rows.back().f;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  std::string parts;
  for (std::string_view name : kProblemNames) {
    const DerivativeCheck c = check_derivatives(default_problem_config(std::string(name)));
    parts += fmt(" %s=%.2e/%.0e", c.problem.c_str(), c.max_gradient_error, c.tolerance);
    if (!c.passed()) o.status = Status::fail;
  }
  o.detail = "max relative gradient error:" + parts;
  return o;
}

bool rel_close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::abs(b); }

Outcome criterion2() {
  Outcome o;
  int bad = 0;
  RngStream rng = derive_stream(2, 0);
  for (int k = 0; k < 100; ++k) {
    const int d = 1 + static_cast<int>(rng.uniform() * 1000);
    const double ell = 0.1 + 10 * rng.uniform();
    const double rho = 0.1 + 10 * rng.uniform();
    // ε ≤ ℓ²/ρ keeps the inputs admissible.
    const double eps = std::min(ell * ell / rho, 1.0) * (0.001 + 0.999 * rng.uniform());
    const double c = 0.1 + 2 * rng.uniform();
    const double delta = 0.001 + 0.998 * rng.uniform();
    const double delta_f = 0.01 + 100 * rng.uniform();
    const TheoryInputs in{ell, rho, eps, c, delta, delta_f};

    const PgdotParams p = derive_pgdot_params(d, in, HypothesisPolicy::strict);
    const auto q = oracle::pgdot_constants(d, ell, rho, eps, c, delta, delta_f);
    bad += !(rel_close(p.chi, q.chi) && rel_close(p.eta, q.eta) && rel_close(p.r, q.r) &&
             rel_close(p.g_thres, q.g_thres) && rel_close(p.f_thres, q.f_thres) && p.t_thres == q.t_thres);

    const PagdotParams a = derive_pagdot_params(d, in, HypothesisPolicy::strict);
    const auto b = oracle::pagdot_constants(d, ell, rho, eps, c, delta, delta_f);
    bad += !(rel_close(a.chi, b.chi) && rel_close(a.kappa, b.kappa) && rel_close(a.eta, b.eta) &&
             rel_close(a.theta, b.theta) && rel_close(a.gamma, b.gamma) && rel_close(a.s, b.s) &&
             rel_close(a.r, b.r) && a.script_t == b.script_t);
  }

  const PgdotParams p = derive_pgdot_params(2, kSaddleInputs);
  const bool ex1 = p.chi == 12 && p.eta == 1 && p.r == 1.0 / 144 && p.g_thres == 1.0 / 144 &&
                   p.f_thres == 1.0 / 1728 && p.t_thres == 12;
  const PagdotParams a = derive_pagdot_params(2, kSaddleAccelInputs);
  const bool ex2 = a.chi == 1 && a.kappa == 4 && a.eta == 0.25 && a.theta == 0.125 && a.gamma == 1.0 / 16 &&
                   a.s == 1.0 / 64 && a.script_t == 4 && a.r == 1.0 / 16384;

  if (bad || !ex1 || !ex2) o.status = Status::fail;
  o.detail = fmt("%d/200 reference mismatches (rel 1e-12); worked examples pgdot=%s pagdot=%s", bad,
                 ex1 ? "exact" : "WRONG", ex2 ? "exact" : "WRONG");
  return o;
}

// Discrete fields must agree exactly; f and |∇f| to 1e-12 relative, since
// the reference orders its floating-point operations differently.
struct TraceDiff {
  bool structural = true;
  double max_rel = 0;
};

void compare_rows(const RunTrace& tr, const std::vector<oracle::PlainRow>& ref, TraceDiff& d) {
  if (tr.rows.size() != ref.size()) {
    d.structural = false;
    return;
  }
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
  for (std::size_t k = 0; k < ref.size(); ++k) {
    if (tr.rows[k].t != ref[k].t || tr.rows[k].perturbed != ref[k].perturbed) d.structural = false;
    if (tr.rows[k].f != ref[k].f) d.max_rel = std::max(d.max_rel, rel(tr.rows[k].f, ref[k].f));
    if (tr.rows[k].grad_norm != ref[k].grad_norm)
      d.max_rel = std::max(d.max_rel, rel(tr.rows[k].grad_norm, ref[k].grad_norm));
  }
}

Outcome criterion3() {
  Outcome o;
  const Objective f = quadratic_saddle();
  const long steps = 40;
  TraceDiff pgd, pagd;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    RunOptions opt;
    opt.max_steps = steps;
    opt.seed = seed;

    const PgdotParams p = derive_pgdot_params(2, kSaddleInputs);
    const RunTrace tr = run(f, theory_config(Algorithm::pgd, kSaddleInputs), vec2(1e-6, 0), opt);
    compare_rows(tr, oracle::plain_pgd(f, vec2(1e-6, 0), p.eta, p.r, p.g_thres, p.t_thres, p.f_thres, steps,
                                       derive_stream(seed, streams::kAlgorithm)),
                 pgd);

    const PagdotParams a = derive_pagdot_params(2, kSaddleAccelInputs);
    const RunTrace ta = run(f, theory_config(Algorithm::pagd, kSaddleAccelInputs), vec2(1e-6, 0), opt);
    long nce = 0;
    compare_rows(ta, oracle::plain_pagd(f, vec2(1e-6, 0), a.eta, a.theta, a.gamma, a.s, a.r, kSaddleAccelInputs.eps,
                                        a.script_t, steps, derive_stream(seed, streams::kAlgorithm), &nce),
                 pagd);
    if (ta.n_nce != nce) pagd.structural = false;
  }
  const bool ok = pgd.structural && pagd.structural && pgd.max_rel <= 1e-12 && pagd.max_rel <= 1e-12;
  if (!ok) o.status = Status::fail;
  o.detail = fmt("3 seeds x %ld steps: pgd events %s, max rel dev %.1e; pagd events/nce %s, max rel dev %.1e "
                 "(need <= 1e-12)",
                 steps, pgd.structural ? "equal" : "DIFFER", pgd.max_rel, pagd.structural ? "equal" : "DIFFER",
                 pagd.max_rel);
  return o;
}

const long kSaddleGdSteps = 2000;

RunTrace saddle_gd_trace() {
  AlgorithmConfig c;
  c.algorithm = Algorithm::gd;
  c.eta = derive_pgdot_params(2, kSaddleInputs).eta;
  RunOptions opt;
  opt.max_steps = kSaddleGdSteps;
  return run(quadratic_saddle(), c, vec2(1e-6, 0), opt);
}

Outcome criterion4() {
  Outcome o;
  const Objective f = quadratic_saddle();
  const PerturbedGdSettings s = pgd_settings(derive_pgdot_params(2, kSaddleInputs), SamplerKind::occupation);
  int escaped = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    OptimizerState st = make_state(vec2(1e-6, 0), s, derive_stream(seed, streams::kAlgorithm));
    while (!st.perturbed && st.t < 1000) pgdot_step(f, st, s);
    if (!st.perturbed) continue;
    const double f_saved = st.f_tilde;
    for (long k = 1; k < s.t_thres; ++k) pgdot_step(f, st, s);
    escaped += f.value(st.x) - f_saved <= -*s.f_thres;
  }

  const RunTrace gd = saddle_gd_trace();
  const double f0 = gd.rows.front().f;
  double drift = 0;
  for (const auto& r : gd.rows) drift = std::max(drift, std::abs(r.f - f0));

  const bool ok = escaped >= 27 && drift <= 1e-6 && gd.rows.back().t == kSaddleGdSteps;
  if (!ok) o.status = Status::fail;
  o.detail = fmt("pgdot escaped %d/30 (need 27); gd max |f-f0| over %ld steps = %.2e (need <= 1e-6)", escaped,
                 kSaddleGdSteps, drift);
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto cells = run_cells(with_seeds(preset("example1"), kFiveSeeds,
                                          {Algorithm::gd, Algorithm::pgdot, Algorithm::pagdot}));
  auto finals = [&](const char* a) {
    std::vector<double> v;
    for (auto s : kFiveSeeds) v.push_back(final_f(cells.at({a, s})));
    return median(v);
  };
  auto hits = [&](const char* a) {
    std::vector<long> v;
    for (auto s : kFiveSeeds)
      v.push_back(steps_to_threshold(cells.at({a, s}).trace, 0.3).value_or(std::numeric_limits<long>::max()));
    return median(v);
  };
  const double gd = finals("gd"), pg = finals("pgdot"), pa = finals("pagdot");
  const long hit_pg = hits("pgdot"), hit_pa = hits("pagdot");
  const bool ok = pg < gd - 0.1 && pa < gd - 0.1 && hit_pa <= hit_pg;
  if (!ok) o.status = Status::fail;
  o.detail = fmt("median final f gd=%.4g pgdot=%.4g pagdot=%.4g (need < gd-0.1); median steps to f<0.3 "
                 "pagdot=%ld pgdot=%ld",
                 gd, pg, pa, hit_pa, hit_pg);
  return o;
}

Outcome criterion6() {
  Outcome o;
  const ExperimentConfig cfg =
      with_seeds(preset("example3_pr"), kFiveSeeds, {Algorithm::gd, Algorithm::pgdot});
  const auto cells = run_cells(cfg);
  int good = 0;
  std::string per_seed;
  for (auto s : kFiveSeeds) {
    const CellResult& gd = cells.at({"gd", s});
    const CellResult& pg = cells.at({"pgdot", s});
    const double target = 0.5 * gd.f0;
    const auto gd_hit = steps_to_threshold(gd.trace, target);
    const auto pg_hit = steps_to_threshold(pg.trace, target);
    good += pg_hit.has_value() && !gd_hit.has_value();
    per_seed += fmt(" seed%llu(gd=%ld,pgdot=%ld)", static_cast<unsigned long long>(s), gd_hit.value_or(-1),
                    pg_hit.value_or(-1));
  }
  if (good < 4) o.status = Status::fail;
  o.detail = fmt("%d/5 seeds where pgdot reaches 0.5*f0 and gd does not within %ld steps (need 4); steps to "
                 "0.5*f0, -1 = never:",
                 good, cfg.max_steps) +
             per_seed;
  return o;
}

Outcome criterion7() {
  Outcome o;
  const long T = 100000;
  std::vector<double> rep_metric, rei_metric;
  long min_range = std::numeric_limits<long>::max();
  double max_metric = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto rep = simulate(WalkKind::repelling, WeightFn{5}, T, seed);
    const auto rei = simulate(WalkKind::reinforced, WeightFn{5}, T, seed);
    rep_metric.push_back(localization_metric(rep));
    rei_metric.push_back(localization_metric(rei));
    min_range = std::min(min_range, path_range(rep));
    max_metric = std::max(max_metric, rep_metric.back());
  }
  const double m_rep = median(rep_metric), m_rei = median(rei_metric);
  const bool ok = min_range > 20 && max_metric < 0.9 && m_rei > m_rep;
  if (!ok) o.status = Status::fail;
  o.detail = fmt("repelling min range=%ld (need > 20), max metric=%.4f (need < 0.9); median metric "
                 "reinforced=%.4f repelling=%.4f",
                 min_range, max_metric, m_rei, m_rep);
  return o;
}

Outcome criterion8() {
  Outcome o;
  const SlopeFit simple = msd_exponent(WalkKind::repelling, WeightFn{0}, 100000, 500, 8);
  const SlopeFit rep = msd_exponent(WalkKind::repelling, WeightFn{1}, 100000, 500, 8);
  const bool hard = std::abs(simple.exponent - 1.0) <= 0.05;
  const bool soft = rep.exponent > 1.1 && rep.exponent < 1.5;
  o.status = !hard ? Status::fail : soft ? Status::pass : Status::soft_fail;
  o.detail = fmt("constant weight exponent=%.4f+-%.4f (need 1+-0.05); repelling w=1+n exponent=%.4f+-%.4f "
                 "(soft, need in (1.1,1.5))",
                 simple.exponent, simple.stderr_, rep.exponent, rep.stderr_);
  return o;
}

Objective scalar(std::string name, std::function<double(double)> f, std::function<double(double)> df) {
  Objective o;
  o.name = std::move(name);
  o.dim = 1;
  o.value = [f](const Vector& x) { return f(x[0]); };
  o.gradient = [df](const Vector& x) { return Vector::Constant(1, df(x[0])); };
  return o;
}

// Per-step decrease f_{t+1} - f_t <= -(η/2)|∇f_t|² on consecutive rows.
int decrease_violations(const RunTrace& tr, double eta, long* pairs) {
  int bad = 0;
  for (std::size_t k = 0; k + 1 < tr.rows.size(); ++k) {
    const auto& a = tr.rows[k];
    const auto& b = tr.rows[k + 1];
    if (b.t != a.t + 1) continue;
    ++*pairs;
    const double tol = 1e-10;
    bad += b.f - a.f > -0.5 * eta * a.grad_norm * a.grad_norm + tol;
  }
  return bad;
}

Outcome criterion9() {
  Outcome o;
  struct Instance {
    Objective f;
    double eta;
    double x0;
  };
  const auto sigmoid = [](double x) { return 1 / (1 + std::exp(-x)); };
  std::vector<Instance> inst{
      {scalar("(x-1)^2", [](double x) { return (x - 1) * (x - 1); }, [](double x) { return 2 * (x - 1); }), 0.4, 0},
      {scalar("3(x+2)^2", [](double x) { return 3 * (x + 2) * (x + 2); }, [](double x) { return 6 * (x + 2); }),
       0.15, 1},
      {scalar("logcosh(x-2)", [](double x) { return std::log(std::cosh(x - 2)); },
              [](double x) { return std::tanh(x - 2); }),
       0.9, -3},
      {scalar("sqrt(1+(x+1)^2)", [](double x) { return std::sqrt(1 + (x + 1) * (x + 1)); },
              [](double x) { return (x + 1) / std::sqrt(1 + (x + 1) * (x + 1)); }),
       0.9, 4},
      {scalar("softplus(x)-0.3x", [](double x) { return std::log1p(std::exp(x)) - 0.3 * x; },
              [sigmoid](double x) { return sigmoid(x) - 0.3; }),
       3.6, -5},
      {scalar("(x-1)^2+cos(x)/2", [](double x) { return (x - 1) * (x - 1) + 0.5 * std::cos(x); },
              [](double x) { return 2 * (x - 1) - 0.5 * std::sin(x); }),
       0.36, -4},
  };
  int mono = 0;
  for (const auto& in : inst) {
    std::vector<double> xs{in.x0};
    Vector x = Vector::Constant(1, in.x0);
    for (int t = 0; t < 300; ++t) {
      x = gd_step(in.f, x, in.eta);
      xs.push_back(x[0]);
    }
    mono += monotone_after(xs, 0);
  }

  int rate_bad = 0;
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    RngStream rng = derive_stream(900 + trial, 0);
    const int d = 3 + static_cast<int>(trial) * 2;
    const double alpha = 0.05 + 0.5 * rng.uniform(), ell = alpha + 1 + 4 * rng.uniform();
    Matrix b(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) b(i, j) = rng.normal();
    const Matrix q = Eigen::HouseholderQR<Matrix>(b).householderQ();
    Vector spec(d);
    for (int i = 0; i < d; ++i) spec[i] = alpha + (ell - alpha) * i / (d - 1);
    const Matrix a = q * spec.asDiagonal() * q.transpose();
    const Vector xs = rng.normal_vector(d);
    Objective f;
    f.name = "quadratic";
    f.dim = d;
    f.value = [a, xs](const Vector& x) { return 0.5 * (x - xs).dot(a * (x - xs)); };
    f.gradient = [a, xs](const Vector& x) { return Vector(a * (x - xs)); };
    const Vector x0 = xs + 3 * rng.normal_vector(d);
    Vector x = x0;
    for (int t = 1; t <= 200; ++t) {
      x = gd_step(f, x, 1.0 / ell);
      // Relative slack covers rounding in the product only.
      if ((x - xs).norm() > std::pow(1 - alpha / ell, t) * (x0 - xs).norm() * (1 + 1e-12) + 1e-15) {
        ++rate_bad;
        break;
      }
    }
  }

  long pairs = 0;
  int dec_bad = decrease_violations(saddle_gd_trace(), derive_pgdot_params(2, kSaddleInputs).eta, &pairs);
  for (const char* name : {"example1", "example3_pr"}) {
    const ExperimentConfig cfg = with_seeds(preset(name), kFiveSeeds, {Algorithm::gd});
    const double eta = find_algorithm(cfg, Algorithm::gd).eta;
    for (const auto& [key, cell] : run_cells(cfg)) dec_bad += decrease_violations(cell.trace, eta, &pairs);
  }

  const bool ok = mono == 6 && rate_bad == 0 && dec_bad == 0 && pairs > 0;
  if (!ok) o.status = Status::fail;
  o.detail = fmt("(a) monotone %d/6; (b) rate-bound violations %d/5; (c) decrease violations %d of %ld gd steps",
                 mono, rate_bad, dec_bad, pairs);
  return o;
}

Outcome criterion10() {
  Outcome o;
  const std::vector<Algorithm> algs{Algorithm::sgd_momentum, Algorithm::adam,  Algorithm::amsgrad,
                                    Algorithm::rmsprop,      Algorithm::pgdot, Algorithm::pagdot};
  ExperimentConfig cfg = with_seeds(preset("example4_mnist"), {1, 2, 3}, algs);
  cfg.problem.data.source = "synthetic_blobs";
  cfg.problem.data.blobs.samples = 1280;
  cfg.max_steps = 600;

  const double log10v = std::log(10.0);
  TempDir tmp;
  const int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  ExperimentOptions eo;
  eo.jobs = jobs;
  eo.output_dir = (tmp.path / "offset").string();
  const ExperimentResult stuck = run_experiment(cfg, eo);
  ExperimentConfig centered = cfg;
  centered.problem.init.mean = 0;
  eo.output_dir = (tmp.path / "centered").string();
  const ExperimentResult zero = run_experiment(centered, eo);

  auto loss = [](const ExperimentResult& r, Algorithm a, std::uint64_t seed) {
    for (const auto& c : r.cells)
      if (c.algorithm == to_string(a) && c.seed == seed) return c.ok ? c.trace.final_f : std::nan("");
    return std::nan("");
  };

  bool ok = true;
  std::string detail = "N(-1,.01) final loss:";
  for (Algorithm a : algs) {
    const bool perturbed = a == Algorithm::pgdot || a == Algorithm::pagdot;
    int below = 0;
    detail += fmt(" %s[", std::string(to_string(a)).c_str());
    for (std::uint64_t s : {1u, 2u, 3u}) {
      const double l = loss(stuck, a, s);
      detail += fmt("%s%.3f", s == 1 ? "" : ",", l);
      if (perturbed) below += l < log10v - 0.5;
      else if (!(l > log10v - 0.2)) ok = false;
    }
    detail += "]";
    if (perturbed && below < 2) ok = false;
  }
  detail += "; N(0,.01) max final loss:";
  for (Algorithm a : algs) {
    double worst = 0;
    for (std::uint64_t s : {1u, 2u, 3u}) {
      const double l = loss(zero, a, s);
      worst = std::isnan(l) ? l : std::max(worst, l);
      if (!(l < log10v - 0.5)) ok = false;
    }
    detail += fmt(" %s=%.3f", std::string(to_string(a)).c_str(), worst);
  }
  if (!ok) o.status = Status::fail;
  o.detail = fmt("thresholds stuck > %.4f, descended < %.4f; ", log10v - 0.2, log10v - 0.5) + detail;
  return o;
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    out[fs::relative(e.path(), root).string()] =
        std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return out;
}

Outcome criterion11() {
  Outcome o;
  const ExperimentConfig cfg = preset("example1");
  TempDir tmp;
  auto go = [&](const char* sub, int jobs, bool reverse) {
    ExperimentOptions eo;
    eo.output_dir = (tmp.path / sub).string();
    eo.jobs = jobs;
    eo.reverse_order = reverse;
    run_experiment(cfg, eo);
    return read_tree(tmp.path / sub);
  };
  const auto a = go("a", 1, false);
  const auto b = go("b", 1, false);
  const auto c = go("c", 4, true);
  const bool rerun = a == b, order = a == c;
  if (!rerun || !order || a.empty()) o.status = Status::fail;
  o.detail = fmt("%zu files; rerun identical=%s; reversed order with 4 jobs identical=%s", a.size(),
                 rerun ? "yes" : "no", order ? "yes" : "no");
  return o;
}

struct Criterion {
  int id;
  double limit_seconds;
  Outcome (*fn)();
};

constexpr Criterion kCriteria[] = {
    {1, 10, criterion1},  {2, 1, criterion2},   {3, 5, criterion3},   {4, 30, criterion4},
    {5, 120, criterion5}, {6, 120, criterion6}, {7, 60, criterion7},  {8, 120, criterion8},
    {9, 10, criterion9},  {10, 600, criterion10}, {11, 60, criterion11},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > 11) {
    std::fprintf(stderr, "criterion must be 1..11\n");
    return 2;
  }

  bool failed = false;
  for (const Criterion& c : kCriteria) {
    if (only && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.fn();
    } catch (const std::exception& e) {
      out = {Status::fail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_seconds) {
      out.status = Status::fail;
      out.detail += fmt("; runtime over %.0f s limit", c.limit_seconds);
    }
    const char* label = out.status == Status::pass ? "PASS" : out.status == Status::fail ? "FAIL" : "SOFT-FAIL";
    std::printf("criterion %d %s (%.2f s) %s\n", c.id, label, secs, out.detail.c_str());
    std::fflush(stdout);
    failed |= out.status == Status::fail;
  }
  return failed ? 1 : 0;
}
