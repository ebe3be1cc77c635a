// Occupation-time bookkeeping and the two perturbation samplers.
#pragma once

#include "pgdot/core.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace pgdot {

/// w(n) = 1 + n^alpha. Positive, increasing and unbounded for alpha > 0.
/// alpha = 0 gives the constant weight 2 (0^0 = 1).
struct WeightFn {
  double alpha = 5.0;

  double operator()(std::size_t n) const {
    return 1.0 + std::pow(static_cast<double>(n), alpha);
  }
};

/// Probability of moving LEFT: w(R) / (w(L) + w(R)).
inline double left_probability(const WeightFn& w, std::size_t left,
                               std::size_t right) {
  const double wl = w(left);
  const double wr = w(right);
  return wr / (wl + wr);
}

/// Half-widths at or above this value count as unwindowed.
inline constexpr double kUnboundedHalfWidth = 1e12;

struct OccupationCounts {
  std::size_t left = 0;
  std::size_t right = 0;
};

/// Fixed-capacity per-coordinate history of iterates.
///
/// Stores the last `t_count` recorded vectors in a ring buffer. Queries
/// count stored values inside [xi − h, xi] (left, ties included) and
/// (xi, xi + h] (right).
class OccupationWindow {
 public:
  OccupationWindow() = default;

  OccupationWindow(int dim, std::size_t t_count,
                   double h = std::numeric_limits<double>::infinity())
      : dim_(dim), capacity_(t_count), h_(h) {
    if (dim <= 0) throw ContractViolation("OccupationWindow: dim must be positive");
    if (t_count == 0) throw ContractViolation("OccupationWindow: t_count must be positive");
    if (!(h > 0)) throw ContractViolation("OccupationWindow: h must be positive");
    buffer_.resize(static_cast<std::size_t>(dim) * t_count);
  }

  int dim() const { return dim_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return size_; }
  double half_width() const { return h_; }
  bool unbounded() const { return h_ >= kUnboundedHalfWidth; }

  void record(const Vector& x) {
    if (x.size() != dim_) {
      throw ContractViolation("OccupationWindow::record: dimension mismatch");
    }
    const std::size_t slot = head_;
    for (int i = 0; i < dim_; ++i) buffer_[slot * dim_ + i] = x[i];
    head_ = (head_ + 1) % capacity_;
    if (size_ < capacity_) ++size_;
  }

  OccupationCounts counts(int i, double xi) const {
    if (i < 0 || i >= dim_) {
      throw ContractViolation("OccupationWindow::counts: coordinate out of range");
    }
    OccupationCounts c;
    const bool open = unbounded();
    for (std::size_t k = 0; k < size_; ++k) {
      const double xs = buffer_[k * dim_ + i];
      if (xs <= xi) {
        if (open || xs >= xi - h_) ++c.left;
      } else if (open || xs <= xi + h_) {
        ++c.right;
      }
    }
    return c;
  }

  /// Stored values of coordinate i, oldest first.
  std::vector<double> history(int i) const {
    std::vector<double> out;
    out.reserve(size_);
    const std::size_t start = size_ < capacity_ ? 0 : head_;
    for (std::size_t k = 0; k < size_; ++k) {
      out.push_back(buffer_[((start + k) % capacity_) * dim_ + i]);
    }
    return out;
  }

 private:
  int dim_ = 0;
  std::size_t capacity_ = 0;
  double h_ = std::numeric_limits<double>::infinity();
  std::vector<double> buffer_;  // slot-major: buffer_[slot * dim_ + i]
  std::size_t head_ = 0;
  std::size_t size_ = 0;
};

/// Per-coordinate occupation-adapted perturbation inside the cube of
/// half-width r/√d around x. For each coordinate (ascending) one
/// Bernoulli sign draw is taken, then one uniform magnitude draw.
inline Vector sample_occupation_perturbation(const Vector& x,
                                             const OccupationWindow& window,
                                             double r, const WeightFn& w,
                                             RngStream& rng) {
  if (window.dim() != x.size()) {
    throw ContractViolation("sample_occupation_perturbation: dimension mismatch");
  }
  const double amplitude = r / std::sqrt(static_cast<double>(x.size()));
  Vector out = x;
  for (int i = 0; i < x.size(); ++i) {
    const OccupationCounts c = window.counts(i, x[i]);
    const bool go_left = rng.bernoulli(left_probability(w, c.left, c.right));
    const double step = amplitude * rng.uniform();
    out[i] = go_left ? x[i] - step : x[i] + step;
  }
  return out;
}

/// x + ξ with ξ uniform on the solid ball of radius r: a normalized
/// Gaussian direction (d normal draws) scaled by r·U^{1/d}.
inline Vector sample_ball_perturbation(const Vector& x, double r, RngStream& rng) {
  if (!(r > 0)) throw ContractViolation("sample_ball_perturbation: r must be positive");
  const int d = static_cast<int>(x.size());
  Vector dir = rng.normal_vector(d);
  double n = dir.norm();
  while (n == 0.0) {
    dir = rng.normal_vector(d);
    n = dir.norm();
  }
  const double radius = r * std::pow(rng.uniform(), 1.0 / d);
  return x + (radius / n) * dir;
}

}  // namespace pgdot
