// Shared types: vectors, the objective contract, error types and
// counter-based random streams.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace pgdot {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Thrown when a caller breaks a precondition (wrong dimension, bad index).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an evaluation produces NaN/Inf or leaves its supported domain.
class NumericalDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed input files (IDX, CIFAR-10, point files).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool all_finite(const Vector& x) { return x.allFinite(); }

/// A differentiable function with an analytic gradient.
///
/// `value` and `gradient` must be deterministic and safe to call
/// concurrently. The Lipschitz constants and known minimum are optional
/// metadata used by theory-mode parameter derivation and reports.
struct Objective {
  std::string name;
  int dim = 0;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::optional<double> lipschitz_grad;
  std::optional<double> lipschitz_hess;
  std::optional<double> known_min;
};

struct Evaluation {
  double value;
  Vector gradient;
};

inline void require_dim(const Objective& obj, const Vector& x) {
  if (x.size() != obj.dim) {
    throw ContractViolation(obj.name + ": expected dimension " +
                            std::to_string(obj.dim) + ", got " +
                            std::to_string(x.size()));
  }
}

inline double checked_value(const Objective& obj, const Vector& x) {
  require_dim(obj, x);
  const double v = obj.value(x);
  if (!std::isfinite(v)) {
    throw NumericalDomainError(obj.name + ": non-finite objective value");
  }
  return v;
}

inline Vector checked_gradient(const Objective& obj, const Vector& x) {
  require_dim(obj, x);
  Vector g = obj.gradient(x);
  if (g.size() != obj.dim) {
    throw ContractViolation(obj.name + ": gradient has wrong dimension");
  }
  if (!all_finite(g)) {
    throw NumericalDomainError(obj.name + ": non-finite gradient");
  }
  return g;
}

inline Evaluation eval_objective(const Objective& obj, const Vector& x) {
  require_dim(obj, x);
  if (!all_finite(x)) {
    throw ContractViolation(obj.name + ": non-finite input point");
  }
  return {checked_value(obj, x), checked_gradient(obj, x)};
}

/// ½‖x‖², used throughout the tests and as a sanity problem.
inline Objective half_squared_norm(int dim) {
  Objective obj;
  obj.name = "half_squared_norm";
  obj.dim = dim;
  obj.value = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  obj.gradient = [](const Vector& x) -> Vector { return x; };
  obj.lipschitz_grad = 1.0;
  obj.lipschitz_hess = 1.0;
  obj.known_min = 0.0;
  return obj;
}

/// ½(x₁² − x₂²): the canonical strict saddle at the origin.
inline Objective quadratic_saddle() {
  Objective obj;
  obj.name = "quadratic_saddle";
  obj.dim = 2;
  obj.value = [](const Vector& x) { return 0.5 * (x[0] * x[0] - x[1] * x[1]); };
  obj.gradient = [](const Vector& x) -> Vector {
    Vector g(2);
    g << x[0], -x[1];
    return g;
  };
  obj.lipschitz_grad = 1.0;
  obj.lipschitz_hess = 1.0;
  return obj;
}

namespace detail {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based random stream.
///
/// Draw k of a stream is a pure function of (key, k), where the key is
/// derived from (base_seed, stream_id). Streams are cheap to copy and
/// never shared between threads; parallelism comes from deriving
/// distinct stream ids.
class RngStream {
 public:
  RngStream(std::uint64_t base_seed, std::uint64_t stream_id)
      : base_seed_(base_seed),
        stream_id_(stream_id),
        key_(detail::mix64(detail::mix64(base_seed ^ 0x5DEECE66DULL) +
                           detail::kGolden * (stream_id + 1))) {}

  std::uint64_t base_seed() const { return base_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64() {
    ++counter_;
    return detail::mix64(key_ + detail::kGolden * counter_);
  }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// True with probability p; p <= 0 never fires, p >= 1 always does.
  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  Vector normal_vector(int dim) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = normal();
    return v;
  }

  friend bool operator==(const RngStream& a, const RngStream& b) {
    return a.key_ == b.key_ && a.counter_ == b.counter_;
  }

 private:
  std::uint64_t base_seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline RngStream derive_stream(std::uint64_t base_seed, std::uint64_t cell_id) {
  return RngStream(base_seed, cell_id);
}

/// Reserved stream ids so that independent consumers of one seed never
/// overlap.
namespace streams {
constexpr std::uint64_t kAlgorithm = 0;
constexpr std::uint64_t kInitialPoint = 1;
constexpr std::uint64_t kBatchOrder = 2;
constexpr std::uint64_t kProblemData = 3;
}  // namespace streams

}  // namespace pgdot
