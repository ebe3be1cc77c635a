// Benchmark problem families with analytic gradients.
#pragma once

#include "pgdot/airy.hpp"
#include "pgdot/core.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

namespace pgdot {

// ---------------------------------------------------------------------------
// Staircase: f(x) = g((1/d) Σ x_i²) with g a C¹ piecewise cubic whose flat
// points at r = L, 2L, ..., NL form rings of saddle points.

struct StaircaseSpec {
  int steps = 4;       // N
  double length = 1.0;  // L
  int dim = 4;
};

/// The one-dimensional profile and its derivative.
inline std::pair<double, double> staircase_profile(const StaircaseSpec& spec, double r) {
  const double L = spec.length;
  if (r < 0.5 * L) return {r * r * r, 3.0 * r * r};
  // Branch n covers [nL - L/2, nL + L/2); everything past NL + L/2
  // continues the n = N cubic.
  const double n = std::min<double>(std::floor(r / L + 0.5), spec.steps);
  const double u = r - n * L;
  return {u * u * u + 0.25 * n * L * L * L, 3.0 * u * u};
}

inline Evaluation staircase_value_grad(const StaircaseSpec& spec, const Vector& x) {
  if (x.size() != spec.dim) throw ContractViolation("staircase: dimension mismatch");
  const double d = spec.dim;
  const double r = x.squaredNorm() / d;
  auto [f, df] = staircase_profile(spec, r);
  return {f, (df * 2.0 / d) * x};
}

inline Objective make_staircase(const StaircaseSpec& spec) {
  Objective obj;
  obj.name = "staircase";
  obj.dim = spec.dim;
  obj.value = [spec](const Vector& x) { return staircase_value_grad(spec, x).value; };
  obj.gradient = [spec](const Vector& x) { return staircase_value_grad(spec, x).gradient; };
  obj.known_min = 0.0;
  return obj;
}

// ---------------------------------------------------------------------------
// Airy regression: fit Σ_m (a_m cos(λ_m s) + b_m sin(λ_m s)) e^{w_m s} to
// Ai(ω (s − s0)) on s_i = i/10. Parameters are interleaved per mode:
// x[4m..4m+3] = (a_m, b_m, λ_m, w_m).

struct AiryRegressionSpec {
  int modes = 4;
  int samples = 50;
  double spacing = 0.1;
  double omega = 3.2;
  double shift = 3.0;

  int dim() const { return 4 * modes; }
  double point(int i) const { return spacing * i; }
};

class AiryRegression {
 public:
  explicit AiryRegression(AiryRegressionSpec spec) : spec_(spec) {
    targets_.resize(spec.samples);
    for (int i = 0; i < spec.samples; ++i) {
      targets_[i] = airy_ai(spec.omega * (spec.point(i) - spec.shift));
    }
  }

  const AiryRegressionSpec& spec() const { return spec_; }
  const std::vector<double>& targets() const { return targets_; }

  double predict(const Vector& p, double s) const {
    double y = 0.0;
    for (int m = 0; m < spec_.modes; ++m) {
      const double a = p[4 * m], b = p[4 * m + 1], lam = p[4 * m + 2], w = p[4 * m + 3];
      y += (a * std::cos(lam * s) + b * std::sin(lam * s)) * checked_exp(w * s);
    }
    return y;
  }

  Evaluation value_grad(const Vector& p) const {
    if (p.size() != spec_.dim()) throw ContractViolation("airy_regression: dimension mismatch");
    const int n = spec_.samples;
    double loss = 0.0;
    Vector grad = Vector::Zero(spec_.dim());
    for (int i = 0; i < n; ++i) {
      const double s = spec_.point(i);
      const double res = predict(p, s) - targets_[i];
      loss += res * res;
      const double scale = 2.0 * res / n;
      for (int m = 0; m < spec_.modes; ++m) {
        const double a = p[4 * m], b = p[4 * m + 1], lam = p[4 * m + 2], w = p[4 * m + 3];
        const double c = std::cos(lam * s), sn = std::sin(lam * s), e = checked_exp(w * s);
        grad[4 * m] += scale * c * e;
        grad[4 * m + 1] += scale * sn * e;
        grad[4 * m + 2] += scale * s * (-a * sn + b * c) * e;
        grad[4 * m + 3] += scale * s * (a * c + b * sn) * e;
      }
    }
    return {loss / n, grad};
  }

 private:
  static double checked_exp(double v) {
    if (v > 700.0) throw NumericalDomainError("airy_regression: exponential overflow");
    return std::exp(v);
  }

  AiryRegressionSpec spec_;
  std::vector<double> targets_;
};

inline Evaluation airy_regression_value_grad(const AiryRegression& problem, const Vector& p) {
  return problem.value_grad(p);
}

inline Objective make_airy_regression(const AiryRegressionSpec& spec) {
  auto problem = std::make_shared<const AiryRegression>(spec);
  Objective obj;
  obj.name = "airy_regression";
  obj.dim = spec.dim();
  obj.value = [problem](const Vector& p) { return problem->value_grad(p).value; };
  obj.gradient = [problem](const Vector& p) { return problem->value_grad(p).gradient; };
  obj.known_min = 0.0;
  return obj;
}

// ---------------------------------------------------------------------------
// Regularized linear-quadratic problem in two dimensions:
// (1/N) Σ (½ xᵀHx + b_iᵀx + ‖x‖₁₀¹⁰) with H = diag(1, −0.1).

struct RegLqSpec {
  int samples = 10;
  std::array<double, 2> h_diag{1.0, -0.1};
  std::array<double, 2> b_variance{0.1, 0.001};
  std::uint64_t data_seed = 0;
};

class RegLq {
 public:
  explicit RegLq(const RegLqSpec& spec) : spec_(spec), b_mean_(Vector::Zero(2)) {
    RngStream rng = derive_stream(spec.data_seed, streams::kProblemData);
    for (int i = 0; i < spec.samples; ++i) {
      Vector b(2);
      for (int j = 0; j < 2; ++j) b[j] = rng.normal(0.0, std::sqrt(spec.b_variance[j]));
      b_.push_back(b);
      b_mean_ += b;
    }
    b_mean_ /= spec.samples;
  }

  const std::vector<Vector>& b() const { return b_; }
  const Vector& b_mean() const { return b_mean_; }

  Evaluation value_grad(const Vector& x) const {
    if (x.size() != 2) throw ContractViolation("reglq: dimension mismatch");
    double quad = 0.0, reg = 0.0;
    Vector g(2);
    for (int j = 0; j < 2; ++j) {
      quad += 0.5 * spec_.h_diag[j] * x[j] * x[j];
      const double p9 = std::pow(x[j], 9);
      reg += p9 * x[j];
      g[j] = spec_.h_diag[j] * x[j] + b_mean_[j] + 10.0 * p9;
    }
    return {quad + b_mean_.dot(x) + reg, g};
  }

 private:
  RegLqSpec spec_;
  std::vector<Vector> b_;
  Vector b_mean_;
};

inline Evaluation reglq_value_grad(const RegLq& problem, const Vector& x) {
  return problem.value_grad(x);
}

inline Objective make_reglq(const RegLqSpec& spec) {
  auto problem = std::make_shared<const RegLq>(spec);
  Objective obj;
  obj.name = "reglq";
  obj.dim = 2;
  obj.value = [problem](const Vector& x) { return problem->value_grad(x).value; };
  obj.gradient = [problem](const Vector& x) { return problem->value_grad(x).gradient; };
  return obj;
}

// ---------------------------------------------------------------------------
// Phase retrieval: (1/N) Σ ((a_iᵀx)² − y_i)² with y_i = (a_iᵀx*)².

struct PhaseRetrievalSpec {
  int samples = 200;
  int dim = 10;
  std::uint64_t data_seed = 0;
};

class PhaseRetrieval {
 public:
  explicit PhaseRetrieval(const PhaseRetrievalSpec& spec)
      : spec_(spec), a_(spec.samples, spec.dim), truth_(spec.dim), y_(spec.samples) {
    RngStream rng = derive_stream(spec.data_seed, streams::kProblemData);
    const double sd = 1.0 / std::sqrt(static_cast<double>(spec.dim));
    for (int j = 0; j < spec.dim; ++j) truth_[j] = rng.normal(0.0, sd);
    for (int i = 0; i < spec.samples; ++i) {
      for (int j = 0; j < spec.dim; ++j) a_(i, j) = rng.normal();
    }
    y_ = (a_ * truth_).cwiseAbs2();
  }

  const Matrix& sensing() const { return a_; }
  const Vector& truth() const { return truth_; }
  const Vector& measurements() const { return y_; }

  Evaluation value_grad(const Vector& x) const {
    if (x.size() != spec_.dim) throw ContractViolation("phase_retrieval: dimension mismatch");
    const Vector u = a_ * x;
    const Vector res = u.cwiseAbs2() - y_;
    const double n = spec_.samples;
    return {res.squaredNorm() / n, (4.0 / n) * (a_.transpose() * res.cwiseProduct(u))};
  }

 private:
  PhaseRetrievalSpec spec_;
  Matrix a_;
  Vector truth_;
  Vector y_;
};

inline Evaluation phase_retrieval_value_grad(const PhaseRetrieval& problem, const Vector& x) {
  return problem.value_grad(x);
}

inline Objective make_phase_retrieval(const PhaseRetrievalSpec& spec) {
  auto problem = std::make_shared<const PhaseRetrieval>(spec);
  Objective obj;
  obj.name = "phase_retrieval";
  obj.dim = spec.dim;
  obj.value = [problem](const Vector& x) { return problem->value_grad(x).value; };
  obj.gradient = [problem](const Vector& x) { return problem->value_grad(x).gradient; };
  obj.known_min = 0.0;
  return obj;
}

}  // namespace pgdot
