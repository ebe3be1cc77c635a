// Finite-difference checks, Hessian spectra, stationarity labels and
// trace summaries.
#pragma once

#include "pgdot/core.hpp"
#include "pgdot/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pgdot {

inline constexpr double kFdGradientStep = 1e-6;
inline constexpr double kFdHessianStep = 1e-4;
inline constexpr int kMaxHessianDim = 64;

inline Vector fd_gradient(const Objective& obj, const Vector& x, double h = kFdGradientStep) {
  if (!(h > 0)) throw ContractViolation("fd_gradient: step must be positive");
  require_dim(obj, x);
  Vector g(obj.dim);
  Vector probe = x;
  for (int i = 0; i < obj.dim; ++i) {
    probe[i] = x[i] + h;
    const double up = checked_value(obj, probe);
    probe[i] = x[i] - h;
    const double down = checked_value(obj, probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

/// ‖a − b‖ / max(‖a‖, ‖b‖), 0 when both vanish.
inline double relative_error(const Vector& a, const Vector& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

/// Symmetrized Hessian from central differences of the analytic gradient.
inline Matrix fd_hessian(const Objective& obj, const Vector& x, double h = kFdHessianStep) {
  require_dim(obj, x);
  if (obj.dim > kMaxHessianDim) {
    throw ContractViolation("fd_hessian: dimension " + std::to_string(obj.dim) +
                            " exceeds the dense limit of 64");
  }
  Matrix hess(obj.dim, obj.dim);
  Vector probe = x;
  for (int j = 0; j < obj.dim; ++j) {
    probe[j] = x[j] + h;
    const Vector up = checked_gradient(obj, probe);
    probe[j] = x[j] - h;
    const Vector down = checked_gradient(obj, probe);
    probe[j] = x[j];
    hess.col(j) = (up - down) / (2.0 * h);
  }
  if (!hess.allFinite()) throw NumericalDomainError(obj.name + ": non-finite Hessian entry");
  return 0.5 * (hess + hess.transpose());
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, swept
/// until the off-diagonal Frobenius norm drops below 1e-12 (scaled by
/// the matrix norm when that exceeds one). Returned ascending.
inline Vector symmetric_eigenvalues(Matrix a) {
  const int n = static_cast<int>(a.rows());
  const double tol = 1e-12 * std::max(1.0, a.norm());
  auto off_norm = [&] {
    double s = 0;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        if (p != q) s += a(p, q) * a(p, q);
    return std::sqrt(s);
  };
  for (int sweep = 0; sweep < 100 && off_norm() >= tol; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Vector eig = a.diagonal();
  std::sort(eig.data(), eig.data() + n);
  return eig;
}

inline double min_hessian_eig(const Objective& obj, const Vector& x, double h = kFdHessianStep) {
  return symmetric_eigenvalues(fd_hessian(obj, x, h))[0];
}

enum class StationarityLabel { eps_second_order, eps_first_order, neither };

constexpr std::string_view to_string(StationarityLabel l) {
  switch (l) {
    case StationarityLabel::eps_second_order: return "eps_second_order";
    case StationarityLabel::eps_first_order: return "eps_first_order";
    case StationarityLabel::neither: return "neither";
  }
  return "?";
}

struct StationarityReport {
  double grad_norm = 0;
  double lambda_min = 0;
  double eps = 0;
  double rho = 0;
  double curvature_threshold = 0;  // −√(ρε)
  StationarityLabel label = StationarityLabel::neither;
};

inline StationarityReport classify_point(const Objective& obj, const Vector& x, double eps,
                                         double rho) {
  if (!(eps > 0) || !(rho > 0)) throw ContractViolation("classify_point: eps and rho must be positive");
  StationarityReport rep;
  rep.eps = eps;
  rep.rho = rho;
  rep.curvature_threshold = -std::sqrt(rho * eps);
  rep.grad_norm = checked_gradient(obj, x).norm();
  rep.lambda_min = min_hessian_eig(obj, x);
  if (rep.grad_norm <= eps) {
    rep.label = rep.lambda_min >= rep.curvature_threshold ? StationarityLabel::eps_second_order
                                                          : StationarityLabel::eps_first_order;
  }
  return rep;
}

/// True iff the consecutive differences after the burn-in prefix never
/// change sign (zeros are neutral).
inline bool monotone_after(const std::vector<double>& trace, double burn_in) {
  if (trace.size() < 10) throw ContractViolation("monotone_after: trace needs at least 10 points");
  const std::size_t start = static_cast<std::size_t>(std::floor(burn_in * trace.size()));
  bool up = false, down = false;
  for (std::size_t t = start + 1; t < trace.size(); ++t) {
    const double d = trace[t] - trace[t - 1];
    up |= d > 0;
    down |= d < 0;
  }
  return !(up && down);
}

struct EscapeRow {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::optional<long> steps_to_threshold;  // empty: never crossed
  double best_f = std::numeric_limits<double>::infinity();
  long n_perturbations = 0;
  long n_nce = 0;
};

/// First recorded step with f < threshold.
inline std::optional<long> steps_to_threshold(const RunTrace& trace, double threshold) {
  for (const auto& row : trace.rows) {
    if (row.f < threshold) return row.t;
  }
  return std::nullopt;
}

/// One row per trace, ordered by (algorithm, seed).
inline std::vector<EscapeRow> escape_summary(const std::vector<RunTrace>& traces, double threshold) {
  std::vector<EscapeRow> rows;
  for (const auto& tr : traces) {
    if (tr.problem != traces.front().problem) {
      throw ContractViolation("escape_summary: traces come from different objectives (" +
                              traces.front().problem + " vs " + tr.problem + ")");
    }
    EscapeRow r;
    r.algorithm = tr.algorithm;
    r.seed = tr.seed;
    r.steps_to_threshold = steps_to_threshold(tr, threshold);
    for (const auto& row : tr.rows) r.best_f = std::min(r.best_f, row.f);
    r.n_perturbations = tr.n_perturbations;
    r.n_nce = tr.n_nce;
    rows.push_back(std::move(r));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const EscapeRow& a, const EscapeRow& b) {
    return std::tie(a.algorithm, a.seed) < std::tie(b.algorithm, b.seed);
  });
  return rows;
}

}  // namespace pgdot
