// Derivative verification for the benchmark families at their default
// sizes: analytic gradients against central differences and the Jacobi
// spectrum against an independent symmetric eigensolver.
#pragma once

#include "pgdot/analysis.hpp"
#include "pgdot/config.hpp"
#include "pgdot/experiment.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace pgdot {

/// Default problem block for a family. The MLP uses a 256-sample
/// synthetic dataset so that checks need no downloads.
inline ProblemConfig default_problem_config(const std::string& name) {
  if (std::find(std::begin(kProblemNames), std::end(kProblemNames), name) == std::end(kProblemNames)) {
    throw ContractViolation("unknown problem '" + name + "'");
  }
  ProblemConfig p;
  p.name = name;
  p.data.blobs.samples = 256;
  return p;
}

/// Random evaluation point scaled to the family's natural range.
inline Vector random_check_point(const std::string& name, int dim, RngStream& rng) {
  Vector x(dim);
  if (name == "airy_regression") {
    // (a, b, λ, w) per mode; keep the exponential rates moderate.
    for (int i = 0; i < dim; ++i) {
      const int role = i % 4;
      x[i] = role == 3 ? rng.normal(0.0, 0.3) : rng.normal(0.0, 1.0);
    }
  } else if (name == "reglq") {
    for (int i = 0; i < dim; ++i) x[i] = rng.normal(0.0, 0.5);
  } else if (name == "mlp") {
    for (int i = 0; i < dim; ++i) x[i] = rng.normal(0.0, 0.3);
  } else {
    for (int i = 0; i < dim; ++i) x[i] = rng.normal(0.0, 1.0);
  }
  return x;
}

struct DerivativeCheck {
  std::string problem;
  int points = 0;
  double max_gradient_error = 0;   // relative
  double tolerance = 0;
  double max_eigen_discrepancy = 0;  // |Jacobi − Eigen| / max(1, |λ|), d ≤ 64 only
  bool eigen_checked = false;

  bool passed() const {
    return max_gradient_error < tolerance && (!eigen_checked || max_eigen_discrepancy < 1e-8);
  }
};

/// Compares gradients at `points` random points. For the MLP, where a
/// full difference gradient is expensive, 20 random coordinates per point
/// are differenced instead.
inline DerivativeCheck check_derivatives(const ProblemConfig& cfg, int points = 20,
                                         std::uint64_t seed = 12345) {
  const ProblemInstance prob = build_problem(cfg);
  const Objective& obj = prob.objective;
  DerivativeCheck out;
  out.problem = cfg.name;
  out.points = points;
  out.tolerance = cfg.name == "mlp" ? 1e-4 : 1e-5;
  RngStream rng = derive_stream(seed, streams::kProblemData);

  for (int k = 0; k < points; ++k) {
    const Vector x = random_check_point(cfg.name, obj.dim, rng);
    const Vector g = checked_gradient(obj, x);
    if (cfg.name == "mlp") {
      Vector ga(20), gf(20);
      Vector probe = x;
      for (int j = 0; j < 20; ++j) {
        const int i = static_cast<int>(rng.uniform() * obj.dim);
        probe[i] = x[i] + kFdGradientStep;
        const double up = checked_value(obj, probe);
        probe[i] = x[i] - kFdGradientStep;
        const double down = checked_value(obj, probe);
        probe[i] = x[i];
        ga[j] = g[i];
        gf[j] = (up - down) / (2 * kFdGradientStep);
      }
      out.max_gradient_error = std::max(out.max_gradient_error, relative_error(ga, gf));
    } else {
      out.max_gradient_error = std::max(out.max_gradient_error, relative_error(g, fd_gradient(obj, x)));
    }
    if (obj.dim <= kMaxHessianDim) {
      const Matrix h = fd_hessian(obj, x);
      const Vector ours = symmetric_eigenvalues(h);
      const Vector ref = Eigen::SelfAdjointEigenSolver<Matrix>(h, Eigen::EigenvaluesOnly).eigenvalues();
      for (int i = 0; i < obj.dim; ++i) {
        out.max_eigen_discrepancy = std::max(
            out.max_eigen_discrepancy, std::abs(ours[i] - ref[i]) / std::max(1.0, std::abs(ref[i])));
      }
      out.eigen_checked = true;
    }
  }
  return out;
}

}  // namespace pgdot
