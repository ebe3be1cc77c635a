// Iteration rules: GD, accelerated GD with negative-curvature
// exploitation, the perturbed variants (uniform-ball and
// occupation-adapted), and the stochastic baselines.
#pragma once

#include "pgdot/core.hpp"
#include "pgdot/occupation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pgdot {

enum class Algorithm {
  gd,
  agd,
  pgd,
  pagd,
  pgdot,
  pagdot,
  sgd_momentum,
  adam,
  amsgrad,
  rmsprop,
};

inline constexpr Algorithm kAllAlgorithms[] = {
    Algorithm::gd,     Algorithm::agd,          Algorithm::pgd,
    Algorithm::pagd,   Algorithm::pgdot,        Algorithm::pagdot,
    Algorithm::sgd_momentum, Algorithm::adam,   Algorithm::amsgrad,
    Algorithm::rmsprop,
};

constexpr std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::gd: return "gd";
    case Algorithm::agd: return "agd";
    case Algorithm::pgd: return "pgd";
    case Algorithm::pagd: return "pagd";
    case Algorithm::pgdot: return "pgdot";
    case Algorithm::pagdot: return "pagdot";
    case Algorithm::sgd_momentum: return "sgd_momentum";
    case Algorithm::adam: return "adam";
    case Algorithm::amsgrad: return "amsgrad";
    case Algorithm::rmsprop: return "rmsprop";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

enum class Mode { theory, practical };
enum class SamplerKind { occupation, ball };

/// What to do when theory-mode inputs break the convergence hypotheses.
enum class HypothesisPolicy { warn, strict };

class HypothesisViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Theory-mode constants

struct TheoryInputs {
  double ell = 1.0;      // gradient Lipschitz constant
  double rho = 1.0;      // Hessian Lipschitz constant
  double eps = 1e-2;     // target accuracy
  double c = 1.0;        // free constant
  double delta = 0.1;    // failure probability
  double delta_f = 1.0;  // bound on f(x0) - f*
};

struct PgdotParams {
  int dim = 0;
  TheoryInputs inputs;
  double chi = 0;
  double eta = 0;
  double r = 0;
  double g_thres = 0;
  double f_thres = 0;
  long t_thres = 0;
  std::vector<std::string> warnings;
};

struct PagdotParams {
  int dim = 0;
  TheoryInputs inputs;
  double chi = 0;
  double kappa = 0;
  double eta = 0;
  double theta = 0;
  double gamma = 0;
  double s = 0;
  double r = 0;
  long script_t = 0;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<std::string> check_theory_inputs(int dim, const TheoryInputs& in,
                                                    HypothesisPolicy policy) {
  if (dim <= 0) throw ContractViolation("theory parameters: dim must be positive");
  for (double v : {in.ell, in.rho, in.eps, in.c, in.delta, in.delta_f}) {
    if (!(v > 0) || !std::isfinite(v)) {
      throw ContractViolation("theory parameters: all inputs must be positive and finite");
    }
  }
  std::vector<std::string> warnings;
  if (in.eps > in.ell * in.ell / in.rho) {
    std::string msg = "eps = " + std::to_string(in.eps) + " exceeds ell^2/rho = " +
                      std::to_string(in.ell * in.ell / in.rho);
    if (policy == HypothesisPolicy::strict) throw HypothesisViolation(msg);
    warnings.push_back(std::move(msg));
  }
  return warnings;
}

inline long ceil_to_long(double v) { return static_cast<long>(std::ceil(v)); }

}  // namespace detail

inline PgdotParams derive_pgdot_params(int dim, const TheoryInputs& in,
                                       HypothesisPolicy policy = HypothesisPolicy::warn) {
  PgdotParams p;
  p.warnings = detail::check_theory_inputs(dim, in, policy);
  p.dim = dim;
  p.inputs = in;
  const double d = dim;
  p.chi = 3.0 * std::max(std::log(d * in.ell * in.delta_f / (in.c * in.eps * in.eps * in.delta)), 4.0);
  const double chi2 = p.chi * p.chi;
  p.eta = in.c / in.ell;
  p.r = in.eps * std::sqrt(in.c) / (chi2 * in.ell);
  p.g_thres = std::sqrt(in.c) * in.eps / chi2;
  p.f_thres = in.c / (chi2 * p.chi) * std::sqrt(in.eps * in.eps * in.eps / in.rho);
  p.t_thres = detail::ceil_to_long(p.chi * in.ell / (in.c * in.c * std::sqrt(in.rho * in.eps)));
  return p;
}

inline PagdotParams derive_pagdot_params(int dim, const TheoryInputs& in,
                                         HypothesisPolicy policy = HypothesisPolicy::warn) {
  PagdotParams p;
  p.warnings = detail::check_theory_inputs(dim, in, policy);
  p.dim = dim;
  p.inputs = in;
  const double d = dim;
  p.chi = std::max(std::log(d * in.ell * in.delta_f / (in.rho * in.eps * in.delta)), 1.0);
  p.kappa = in.ell / std::sqrt(in.rho * in.eps);
  p.eta = 1.0 / (4.0 * in.ell);
  p.theta = 1.0 / (4.0 * std::sqrt(p.kappa));
  p.gamma = p.theta * p.theta / p.eta;
  p.s = p.gamma / (4.0 * in.rho);
  p.r = p.eta * in.eps / (std::pow(p.chi, 5) * std::pow(in.c, 8));
  p.script_t = detail::ceil_to_long(p.chi * in.c * std::sqrt(p.kappa));
  return p;
}

// ---------------------------------------------------------------------------
// Resolved settings for the two skeletons

struct WindowSettings {
  std::size_t t_count = 200;
  double h = std::numeric_limits<double>::infinity();
  double alpha = 5.0;
};

/// GD with optional perturbation at most once every t_thres steps.
struct PerturbedGdSettings {
  double eta = 0.1;
  bool perturb = true;
  SamplerKind sampler = SamplerKind::occupation;
  double r = 0.04;
  double g_thres = 0.01;
  long t_thres = 10;
  std::optional<double> f_thres;  // termination rule active only when set
  WindowSettings window;
};

struct NceSettings {
  double gamma = 0;
  double s = 0;
};

/// Accelerated GD (y = x + momentum·v) with optional perturbation and
/// optional negative-curvature exploitation.
struct PerturbedAgdSettings {
  double eta = 0.1;
  double momentum = 0.5;
  bool perturb = true;
  SamplerKind sampler = SamplerKind::occupation;
  double r = 0.04;
  double gate = 0.01;
  long cooldown = 10;
  std::optional<NceSettings> nce;
  bool reset_velocity_on_perturb = false;
  WindowSettings window;
};

inline PerturbedGdSettings pgd_settings(const PgdotParams& p, SamplerKind sampler,
                                        bool perturb = true) {
  PerturbedGdSettings s;
  s.eta = p.eta;
  s.perturb = perturb;
  s.sampler = sampler;
  s.r = p.r;
  s.g_thres = p.g_thres;
  s.t_thres = p.t_thres;
  if (perturb) s.f_thres = p.f_thres;
  return s;
}

inline PerturbedAgdSettings pagd_settings(const PagdotParams& p, SamplerKind sampler,
                                          bool perturb = true) {
  PerturbedAgdSettings s;
  s.eta = p.eta;
  s.momentum = 1.0 - p.theta;
  s.perturb = perturb;
  s.sampler = sampler;
  s.r = p.r;
  s.gate = p.inputs.eps;
  s.cooldown = p.script_t;
  s.nce = NceSettings{p.gamma, p.s};
  return s;
}

// ---------------------------------------------------------------------------
// State

struct OptimizerState {
  Vector x;
  Vector v;
  Vector x_tilde;
  double f_tilde = std::numeric_limits<double>::quiet_NaN();
  long t = 0;
  long t_noise = 0;
  OccupationWindow window;
  RngStream rng{0, 0};
  // Values observed at x_t (before any perturbation) during the last step.
  double f = std::numeric_limits<double>::quiet_NaN();
  double grad_norm = std::numeric_limits<double>::quiet_NaN();
  bool perturbed = false;
  bool nce = false;
};

inline OptimizerState make_state(const Vector& x0, long cooldown,
                                 const WindowSettings& window, RngStream rng) {
  OptimizerState s;
  s.x = x0;
  s.v = Vector::Zero(x0.size());
  s.x_tilde = x0;
  s.t_noise = -cooldown - 1;
  s.window = OccupationWindow(static_cast<int>(x0.size()), window.t_count, window.h);
  s.rng = rng;
  return s;
}

inline OptimizerState make_state(const Vector& x0, const PerturbedGdSettings& s, RngStream rng) {
  return make_state(x0, s.t_thres, s.window, rng);
}

inline OptimizerState make_state(const Vector& x0, const PerturbedAgdSettings& s, RngStream rng) {
  return make_state(x0, s.cooldown, s.window, rng);
}

// ---------------------------------------------------------------------------
// Steps

inline Vector gd_step(const Objective& obj, const Vector& x, double eta) {
  if (!(eta > 0)) throw ContractViolation("gd_step: eta must be positive");
  return x - eta * checked_gradient(obj, x);
}

namespace detail {

inline Vector perturb(const Vector& x, SamplerKind sampler, double r,
                      const OccupationWindow& window, double alpha, RngStream& rng) {
  if (sampler == SamplerKind::ball) return sample_ball_perturbation(x, r, rng);
  return sample_occupation_perturbation(x, window, r, WeightFn{alpha}, rng);
}

inline double gate_norm(const Objective* gate_obj, const Vector& x, double fallback) {
  return gate_obj ? checked_gradient(*gate_obj, x).norm() : fallback;
}

}  // namespace detail

/// One outer iteration of perturbed GD. Returns the saved pre-perturbation
/// point when the termination rule fires, std::nullopt otherwise.
///
/// `gate_obj`, when given, supplies the gradient for the perturbation gate
/// (full-data gate in mini-batch mode).
inline std::optional<Vector> pgdot_step(const Objective& obj, OptimizerState& st,
                                        const PerturbedGdSettings& cfg,
                                        const Objective* gate_obj = nullptr) {
  auto [f, g] = eval_objective(obj, st.x);
  st.f = f;
  st.grad_norm = g.norm();
  st.perturbed = false;
  st.nce = false;

  const Vector x_pre = st.x;
  if (cfg.perturb && st.t - st.t_noise > cfg.t_thres &&
      detail::gate_norm(gate_obj, st.x, st.grad_norm) <= cfg.g_thres) {
    st.x_tilde = st.x;
    st.f_tilde = f;
    st.t_noise = st.t;
    st.x = detail::perturb(st.x, cfg.sampler, cfg.r, st.window, cfg.window.alpha, st.rng);
    st.perturbed = true;
  }
  if (cfg.perturb && cfg.sampler == SamplerKind::occupation) st.window.record(x_pre);

  if (cfg.f_thres && st.t - st.t_noise == cfg.t_thres && f - st.f_tilde > -*cfg.f_thres) {
    return st.x_tilde;
  }

  if (st.perturbed) g = checked_gradient(obj, st.x);
  st.x -= cfg.eta * g;
  ++st.t;
  return std::nullopt;
}

/// Negative curvature exploitation. With ‖v‖ ≥ s the iterate stays put;
/// otherwise it moves ±s along v (along a random unit direction when
/// v = 0), keeping the lower of the two (x + δ on ties). Velocity resets.
inline std::pair<Vector, Vector> nce(const Objective& obj, const Vector& x, const Vector& v,
                                     double s, RngStream& rng) {
  if (!(s > 0)) throw ContractViolation("nce: s must be positive");
  Vector zero = Vector::Zero(x.size());
  const double vn = v.norm();
  if (vn >= s) return {x, zero};
  Vector delta;
  if (vn > 0) {
    delta = (s / vn) * v;
  } else {
    Vector u = rng.normal_vector(static_cast<int>(x.size()));
    while (u.norm() == 0.0) u = rng.normal_vector(static_cast<int>(x.size()));
    delta = (s / u.norm()) * u;
  }
  Vector plus = x + delta;
  Vector minus = x - delta;
  const double fp = checked_value(obj, plus);
  const double fm = checked_value(obj, minus);
  return {fm < fp ? std::move(minus) : std::move(plus), zero};
}

/// One outer iteration of perturbed accelerated GD.
inline void pagdot_step(const Objective& obj, OptimizerState& st,
                        const PerturbedAgdSettings& cfg,
                        const Objective* gate_obj = nullptr) {
  auto [f, g] = eval_objective(obj, st.x);
  st.f = f;
  st.grad_norm = g.norm();
  st.perturbed = false;
  st.nce = false;

  const Vector x_pre = st.x;
  if (cfg.perturb && st.t - st.t_noise > cfg.cooldown &&
      detail::gate_norm(gate_obj, st.x, st.grad_norm) <= cfg.gate) {
    st.x_tilde = st.x;
    st.f_tilde = f;
    st.t_noise = st.t;
    st.x = detail::perturb(st.x, cfg.sampler, cfg.r, st.window, cfg.window.alpha, st.rng);
    st.perturbed = true;
    if (cfg.reset_velocity_on_perturb) st.v.setZero();
  }
  if (cfg.perturb && cfg.sampler == SamplerKind::occupation) st.window.record(x_pre);

  const Vector y = st.x + cfg.momentum * st.v;
  auto [fy, gy] = eval_objective(obj, y);
  Vector x_next = y - cfg.eta * gy;
  Vector v_next = x_next - st.x;

  if (cfg.nce) {
    const double fx = st.perturbed ? checked_value(obj, st.x) : f;
    const Vector diff = st.x - y;
    if (fx <= fy + gy.dot(diff) - 0.5 * cfg.nce->gamma * diff.squaredNorm()) {
      std::tie(x_next, v_next) = nce(obj, st.x, st.v, cfg.nce->s, st.rng);
      st.nce = true;
    }
  }
  st.x = std::move(x_next);
  st.v = std::move(v_next);
  ++st.t;
}

// ---------------------------------------------------------------------------
// Stochastic baselines

enum class BaselineKind { sgd_momentum, adam, amsgrad, rmsprop };

struct BaselineHyper {
  BaselineKind kind = BaselineKind::sgd_momentum;
  double lr = 0.01;
  double momentum = 0.9;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double rms_decay = 0.9;
};

/// Moment accumulators. For AMSGrad `v_max` holds the running
/// component-wise maximum of the bias-corrected second moment.
struct BaselineState {
  Vector m;
  Vector v;
  Vector v_max;
  long t = 0;
};

inline Vector baseline_step(const BaselineHyper& hp, BaselineState& st, const Vector& x,
                            const Vector& grad) {
  if (grad.size() != x.size()) throw ContractViolation("baseline_step: shape mismatch");
  const auto n = x.size();
  if (st.m.size() != n) st.m = Vector::Zero(n);
  if (st.v.size() != n) st.v = Vector::Zero(n);
  if (hp.kind == BaselineKind::amsgrad && st.v_max.size() != n) st.v_max = Vector::Zero(n);
  ++st.t;
  switch (hp.kind) {
    case BaselineKind::sgd_momentum:
      st.m = hp.momentum * st.m - hp.lr * grad;
      return x + st.m;
    case BaselineKind::rmsprop:
      st.v = hp.rms_decay * st.v + (1.0 - hp.rms_decay) * grad.cwiseAbs2();
      return x - hp.lr * (grad.array() / (st.v.array().sqrt() + hp.eps)).matrix();
    case BaselineKind::adam:
    case BaselineKind::amsgrad: {
      st.m = hp.beta1 * st.m + (1.0 - hp.beta1) * grad;
      st.v = hp.beta2 * st.v + (1.0 - hp.beta2) * grad.cwiseAbs2();
      const double bc1 = 1.0 - std::pow(hp.beta1, static_cast<double>(st.t));
      const double bc2 = 1.0 - std::pow(hp.beta2, static_cast<double>(st.t));
      Vector v_hat = st.v / bc2;
      if (hp.kind == BaselineKind::amsgrad) {
        st.v_max = st.v_max.cwiseMax(v_hat);
        v_hat = st.v_max;
      }
      return x - hp.lr * ((st.m / bc1).array() / (v_hat.array().sqrt() + hp.eps)).matrix();
    }
  }
  return x;
}

// ---------------------------------------------------------------------------
// Algorithm configuration and the run driver

struct AlgorithmConfig {
  Algorithm algorithm = Algorithm::gd;
  Mode mode = Mode::practical;

  // Practical mode (raw hyperparameters).
  double eta = 0.1;
  double r = 0.04;
  double g_thres = 0.01;
  long t_thres = 10;
  double momentum = 0.5;
  double h = std::numeric_limits<double>::infinity();
  std::size_t t_count = 200;
  std::optional<double> nce_gamma;
  std::optional<double> nce_s;

  // Theory mode.
  TheoryInputs theory;
  HypothesisPolicy policy = HypothesisPolicy::warn;

  double weight_alpha = 5.0;
  bool reset_velocity_on_perturb = false;
  bool gate_full_gradient = false;

  // Baselines.
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  double rms_decay = 0.9;
};

using ResolvedAlgorithm = std::variant<PerturbedGdSettings, PerturbedAgdSettings, BaselineHyper>;

struct Resolution {
  ResolvedAlgorithm settings;
  std::vector<std::string> warnings;
};

inline bool is_gd_family(Algorithm a) {
  return a == Algorithm::gd || a == Algorithm::pgd || a == Algorithm::pgdot;
}

inline bool is_accelerated_family(Algorithm a) {
  return a == Algorithm::agd || a == Algorithm::pagd || a == Algorithm::pagdot;
}

inline Resolution resolve(const AlgorithmConfig& cfg, int dim) {
  const Algorithm a = cfg.algorithm;
  const bool perturb = a == Algorithm::pgd || a == Algorithm::pgdot ||
                       a == Algorithm::pagd || a == Algorithm::pagdot;
  const SamplerKind sampler =
      (a == Algorithm::pgd || a == Algorithm::pagd) ? SamplerKind::ball : SamplerKind::occupation;
  const WindowSettings window{cfg.t_count, cfg.h, cfg.weight_alpha};

  if (is_gd_family(a)) {
    if (cfg.mode == Mode::theory) {
      PgdotParams p = derive_pgdot_params(dim, cfg.theory, cfg.policy);
      PerturbedGdSettings s = pgd_settings(p, sampler, perturb);
      s.window = window;
      return {s, p.warnings};
    }
    PerturbedGdSettings s;
    s.eta = cfg.eta;
    s.perturb = perturb;
    s.sampler = sampler;
    s.r = cfg.r;
    s.g_thres = cfg.g_thres;
    s.t_thres = cfg.t_thres;
    s.window = window;
    return {s, {}};
  }
  if (is_accelerated_family(a)) {
    if (cfg.mode == Mode::theory) {
      PagdotParams p = derive_pagdot_params(dim, cfg.theory, cfg.policy);
      PerturbedAgdSettings s = pagd_settings(p, sampler, perturb);
      s.window = window;
      s.reset_velocity_on_perturb = cfg.reset_velocity_on_perturb;
      return {s, p.warnings};
    }
    PerturbedAgdSettings s;
    s.eta = cfg.eta;
    s.momentum = cfg.momentum;
    s.perturb = perturb;
    s.sampler = sampler;
    s.r = cfg.r;
    s.gate = cfg.g_thres;
    s.cooldown = cfg.t_thres;
    if (cfg.nce_gamma && cfg.nce_s) s.nce = NceSettings{*cfg.nce_gamma, *cfg.nce_s};
    s.reset_velocity_on_perturb = cfg.reset_velocity_on_perturb;
    s.window = window;
    return {s, {}};
  }
  BaselineHyper hp;
  switch (a) {
    case Algorithm::sgd_momentum: hp.kind = BaselineKind::sgd_momentum; break;
    case Algorithm::adam: hp.kind = BaselineKind::adam; break;
    case Algorithm::amsgrad: hp.kind = BaselineKind::amsgrad; break;
    default: hp.kind = BaselineKind::rmsprop; break;
  }
  hp.lr = cfg.mode == Mode::theory ? cfg.theory.c / cfg.theory.ell : cfg.eta;
  hp.momentum = cfg.momentum;
  hp.beta1 = cfg.beta1;
  hp.beta2 = cfg.beta2;
  hp.eps = cfg.adam_eps;
  hp.rms_decay = cfg.rms_decay;
  return {hp, {}};
}

struct TraceRow {
  long t = 0;
  double f = 0;
  double grad_norm = 0;
  bool perturbed = false;
  bool nce = false;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct RunTrace {
  std::string algorithm;
  std::string problem;
  std::uint64_t seed = 0;
  std::vector<TraceRow> rows;
  Vector final_x;
  double final_f = std::numeric_limits<double>::quiet_NaN();
  long steps = 0;
  long n_perturbations = 0;
  long n_nce = 0;
  bool terminated = false;
  std::vector<std::string> warnings;
};

/// A step failed; `partial` holds every row recorded before the failure.
class RunFailure : public std::runtime_error {
 public:
  RunFailure(const std::string& what, RunTrace partial)
      : std::runtime_error(what), partial(std::move(partial)) {}
  RunTrace partial;
};

struct RunOptions {
  long max_steps = 1000;
  std::uint64_t seed = 0;
  long record_every = 1;
  /// Mini-batch mode: objective for step t. Null for full-gradient runs.
  std::function<Objective(long)> batch_at;
  /// Called after each executed step with the new step count and iterate.
  std::function<void(long, const Vector&)> observer;
};

/// Drives one algorithm to the step budget (or the termination rule).
/// The trace holds one row per recorded step with the values at x_t
/// before any perturbation, plus a final row at t = max_steps evaluated
/// on the full objective when the budget is exhausted.
inline RunTrace run(const Objective& obj, const AlgorithmConfig& cfg, const Vector& x0,
                    const RunOptions& opt) {
  require_dim(obj, x0);
  if (opt.max_steps < 0) throw ContractViolation("run: max_steps must be nonnegative");
  if (opt.record_every <= 0) throw ContractViolation("run: record_every must be positive");

  Resolution res = resolve(cfg, obj.dim);
  RunTrace trace;
  trace.algorithm = std::string(to_string(cfg.algorithm));
  trace.problem = obj.name;
  trace.seed = opt.seed;
  trace.warnings = res.warnings;

  const RngStream rng = derive_stream(opt.seed, streams::kAlgorithm);
  const bool batched = static_cast<bool>(opt.batch_at);
  const Objective* gate_obj = batched && cfg.gate_full_gradient ? &obj : nullptr;

  Vector x = x0;
  auto push_row = [&](long t, double f, double gn, bool pert, bool nc) {
    if (t % opt.record_every == 0) trace.rows.push_back({t, f, gn, pert, nc});
  };

  try {
    std::visit(
        [&](const auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, BaselineHyper>) {
            BaselineState bs;
            for (long t = 0; t < opt.max_steps; ++t) {
              Objective batch = batched ? opt.batch_at(t) : Objective{};
              const Objective& o = batched ? batch : obj;
              auto [f, g] = eval_objective(o, x);
              push_row(t, f, g.norm(), false, false);
              x = baseline_step(s, bs, x, g);
              trace.steps = t + 1;
              if (!all_finite(x)) throw NumericalDomainError(obj.name + ": iterate diverged");
              if (opt.observer) opt.observer(t + 1, x);
            }
          } else {
            OptimizerState st = make_state(x, s, rng);
            for (long t = 0; t < opt.max_steps; ++t) {
              Objective batch = batched ? opt.batch_at(t) : Objective{};
              const Objective& o = batched ? batch : obj;
              std::optional<Vector> out;
              if constexpr (std::is_same_v<S, PerturbedGdSettings>) {
                out = pgdot_step(o, st, s, gate_obj);
              } else {
                pagdot_step(o, st, s, gate_obj);
              }
              push_row(t, st.f, st.grad_norm, st.perturbed, st.nce);
              trace.n_perturbations += st.perturbed;
              trace.n_nce += st.nce;
              if (out) {
                x = *out;
                trace.steps = t + 1;
                trace.terminated = true;
                return;
              }
              x = st.x;
              trace.steps = t + 1;
              if (!all_finite(x)) throw NumericalDomainError(obj.name + ": iterate diverged");
              if (opt.observer) opt.observer(t + 1, x);
            }
          }
        },
        res.settings);
    trace.final_x = x;
    if (trace.terminated) {
      trace.final_f = checked_value(obj, x);
    } else {
      auto [f, g] = eval_objective(obj, x);
      trace.final_f = f;
      trace.rows.push_back({trace.steps, f, g.norm(), false, false});
    }
  } catch (const std::exception& e) {
    trace.final_x = x;
    throw RunFailure(obj.name + " / " + trace.algorithm + ": " + e.what(), std::move(trace));
  }
  return trace;
}

}  // namespace pgdot
