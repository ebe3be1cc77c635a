// One-hidden-layer perceptron on 10×10 images with softmax cross-entropy.
#pragma once

#include "pgdot/core.hpp"
#include "pgdot/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace pgdot {

enum class Activation { sigmoid, tanh, relu };

inline std::optional<Activation> parse_activation(std::string_view name) {
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "tanh") return Activation::tanh;
  if (name == "relu") return Activation::relu;
  return std::nullopt;
}

struct MlpSpec {
  int inputs = kImageDim;
  int hidden = 32;
  int classes = kNumClasses;
  Activation activation = Activation::sigmoid;
  int batch_size = 128;

  /// Layout: W1 (hidden × inputs, row-major), b1, W2 (classes × hidden,
  /// row-major), b2.
  int param_count() const { return hidden * inputs + hidden + classes * hidden + classes; }
};

/// Weights and biases drawn i.i.d. from N(mean, variance).
inline Vector mlp_init(const MlpSpec& spec, double mean, double variance, RngStream& rng) {
  Vector p(spec.param_count());
  const double sd = std::sqrt(variance);
  for (int i = 0; i < p.size(); ++i) p[i] = rng.normal(mean, sd);
  return p;
}

namespace detail {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct MlpView {
  Eigen::Map<const RowMajor> w1;
  Eigen::Map<const Vector> b1;
  Eigen::Map<const RowMajor> w2;
  Eigen::Map<const Vector> b2;

  MlpView(const MlpSpec& s, const double* p)
      : w1(p, s.hidden, s.inputs),
        b1(p + s.hidden * s.inputs, s.hidden),
        w2(p + s.hidden * s.inputs + s.hidden, s.classes, s.hidden),
        b2(p + s.hidden * s.inputs + s.hidden + s.classes * s.hidden, s.classes) {}
};

inline Matrix activate(Activation a, const Matrix& z) {
  switch (a) {
    case Activation::sigmoid: return (1.0 / (1.0 + (-z.array()).exp())).matrix();
    case Activation::tanh: return z.array().tanh().matrix();
    case Activation::relu: return z.cwiseMax(0.0);
  }
  return z;
}

// Derivative expressed through the activation output h (and z for relu).
inline Matrix activate_grad(Activation a, const Matrix& z, const Matrix& h) {
  switch (a) {
    case Activation::sigmoid: return (h.array() * (1.0 - h.array())).matrix();
    case Activation::tanh: return (1.0 - h.array().square()).matrix();
    case Activation::relu: return (z.array() > 0.0).cast<double>().matrix();
  }
  return h;
}

}  // namespace detail

/// Mean cross-entropy over `batch` (sample indices into `data`) and, when
/// `grad` is non-null, its exact gradient.
inline double mlp_loss(const MlpSpec& spec, const Vector& params, const Dataset& data,
                       std::span<const int> batch, Vector* grad) {
  if (params.size() != spec.param_count()) throw ContractViolation("mlp: parameter count mismatch");
  if (batch.empty()) throw ContractViolation("mlp: empty batch");
  const detail::MlpView net(spec, params.data());
  const int n = static_cast<int>(batch.size());
  Matrix x(spec.inputs, n);
  for (int k = 0; k < n; ++k) x.col(k) = data.images.col(batch[k]);

  const Matrix z1 = (net.w1 * x).colwise() + net.b1;
  const Matrix h = detail::activate(spec.activation, z1);
  Matrix logits = (net.w2 * h).colwise() + net.b2;

  double loss = 0.0;
  Matrix probs(spec.classes, n);
  for (int k = 0; k < n; ++k) {
    const double mx = logits.col(k).maxCoeff();
    const Eigen::ArrayXd e = (logits.col(k).array() - mx).exp();
    const double sum = e.sum();
    const int y = data.labels[batch[k]];
    loss -= logits(y, k) - mx - std::log(sum);
    probs.col(k) = (e / sum).matrix();
  }
  loss /= n;

  if (grad) {
    Matrix dz2 = probs;
    for (int k = 0; k < n; ++k) dz2(data.labels[batch[k]], k) -= 1.0;
    dz2 /= n;
    const Matrix dz1 =
        (net.w2.transpose() * dz2).cwiseProduct(detail::activate_grad(spec.activation, z1, h));
    grad->resize(spec.param_count());
    double* g = grad->data();
    Eigen::Map<detail::RowMajor>(g, spec.hidden, spec.inputs) = dz1 * x.transpose();
    g += spec.hidden * spec.inputs;
    Eigen::Map<Vector>(g, spec.hidden) = dz1.rowwise().sum();
    g += spec.hidden;
    Eigen::Map<detail::RowMajor>(g, spec.classes, spec.hidden) = dz2 * h.transpose();
    g += spec.classes * spec.hidden;
    Eigen::Map<Vector>(g, spec.classes) = dz2.rowwise().sum();
  }
  return loss;
}

inline Evaluation mlp_value_grad(const MlpSpec& spec, const Vector& params, const Dataset& data,
                                 std::span<const int> batch) {
  Evaluation e;
  e.value = mlp_loss(spec, params, data, batch, &e.gradient);
  return e;
}

/// Objective over a fixed subset of samples. The dataset and index list
/// are shared, so building one per mini-batch is cheap.
inline Objective make_mlp_objective(const MlpSpec& spec, std::shared_ptr<const Dataset> data,
                                    std::shared_ptr<const std::vector<int>> indices,
                                    std::string name = "mlp") {
  Objective obj;
  obj.name = std::move(name);
  obj.dim = spec.param_count();
  obj.value = [spec, data, indices](const Vector& p) {
    return mlp_loss(spec, p, *data, *indices, nullptr);
  };
  obj.gradient = [spec, data, indices](const Vector& p) {
    Vector g;
    mlp_loss(spec, p, *data, *indices, &g);
    return g;
  };
  return obj;
}

inline Objective make_mlp_objective(const MlpSpec& spec, std::shared_ptr<const Dataset> data) {
  auto all = std::make_shared<std::vector<int>>(data->size());
  std::iota(all->begin(), all->end(), 0);
  return make_mlp_objective(spec, std::move(data), std::move(all));
}

/// Epoch-wise shuffled mini-batches; batch b of epoch e is a pure function
/// of (seed, e, b). The last batch of an epoch may be short.
class BatchSchedule {
 public:
  BatchSchedule(MlpSpec spec, std::shared_ptr<const Dataset> data, std::uint64_t seed)
      : spec_(spec), data_(std::move(data)), seed_(seed) {
    const int n = data_->size();
    batches_per_epoch_ = (n + spec_.batch_size - 1) / spec_.batch_size;
  }

  int batches_per_epoch() const { return batches_per_epoch_; }

  Objective at(long step) {
    const long epoch = step / batches_per_epoch_;
    const int b = static_cast<int>(step % batches_per_epoch_);
    if (epoch != cached_epoch_) shuffle(epoch);
    const int begin = b * spec_.batch_size;
    const int end = std::min(begin + spec_.batch_size, data_->size());
    auto idx = std::make_shared<std::vector<int>>(order_.begin() + begin, order_.begin() + end);
    return make_mlp_objective(spec_, data_, std::move(idx), "mlp_batch");
  }

 private:
  void shuffle(long epoch) {
    order_.resize(data_->size());
    std::iota(order_.begin(), order_.end(), 0);
    RngStream rng = derive_stream(seed_, 1000 + static_cast<std::uint64_t>(epoch));
    for (int i = static_cast<int>(order_.size()) - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.uniform() * (i + 1));
      std::swap(order_[i], order_[j]);
    }
    cached_epoch_ = epoch;
  }

  MlpSpec spec_;
  std::shared_ptr<const Dataset> data_;
  std::uint64_t seed_;
  int batches_per_epoch_ = 1;
  long cached_epoch_ = -1;
  std::vector<int> order_;
};

}  // namespace pgdot
