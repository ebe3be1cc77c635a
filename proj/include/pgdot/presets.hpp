// The six shipped experiment presets (one per row of the hyperparameter
// table, one per example).
#pragma once

#include <string_view>
#include <utility>

namespace pgdot {

struct Preset {
  std::string_view name;
  std::string_view text;
};

namespace presets {

inline constexpr std::string_view kExample1 = R"(# Staircase of cubic saddle rings, N = 4, L = 1, d = 4.
[experiment]
name = example1
seeds = 1, 2, 3
max_steps = 2000
threshold = 0.3
output_dir = out/example1

[problem]
name = staircase
N = 4
L = 1
d = 4
x0 = 1.5

[defaults]
mode = practical
h = 0.04
t_count = 200
eta = 0.1
t_thres = 10
g_thres = 0.01
r = 0.04
momentum = 0.5

[algorithm gd]
[algorithm agd]
[algorithm pgd]
[algorithm pagd]
[algorithm pgdot]
[algorithm pagdot]
)";

inline constexpr std::string_view kExample2 = R"(# Airy-function regression with four damped oscillatory modes (d = 16).
[experiment]
name = example2
seeds = 1, 2, 3
max_steps = 14000
threshold_fraction = 0.5
output_dir = out/example2

[problem]
name = airy_regression
M = 4
samples = 50
spacing = 0.1
omega = 3.2
s0 = 3.0
init_mean = 0
init_variance = 0.01

[defaults]
mode = practical
h = 0.04
t_count = 200
eta = 0.1
t_thres = 50
g_thres = 0.1
r = 0.1
momentum = 0.5

[algorithm gd]
[algorithm agd]
[algorithm pgd]
[algorithm pagd]
[algorithm pgdot]
[algorithm pagdot]
)";

inline constexpr std::string_view kExample3Lq = R"(# Regularized linear-quadratic problem, started at the origin.
[experiment]
name = example3_lq
seeds = 1, 2, 3
max_steps = 3000
threshold = -0.01
output_dir = out/example3_lq

[problem]
name = reglq
samples = 10
data_seed = 0
x0 = 0

[defaults]
mode = practical
h = 1
t_count = 200
eta = 0.01
t_thres = 50
g_thres = 0.01
r = 0.01
momentum = 0.5

[algorithm gd]
[algorithm agd]
[algorithm pgd]
[algorithm pagd]
[algorithm pgdot]
[algorithm pagdot]
)";

inline constexpr std::string_view kExample3Pr = R"(# Phase retrieval, N = 200 measurements in d = 10, x0 ~ N(0, I/(10000 d)).
[experiment]
name = example3_pr
seeds = 1, 2, 3
max_steps = 1200
threshold_fraction = 0.5
output_dir = out/example3_pr

[problem]
name = phase_retrieval
samples = 200
d = 10
data_seed = 0
init_mean = 0
init_variance = 1e-5

[defaults]
mode = practical
h = 1
t_count = 200
eta = 0.001
t_thres = 50
g_thres = 1
r = 0.01
momentum = 0.5

[algorithm gd]
[algorithm agd]
[algorithm pgd]
[algorithm pagd]
[algorithm pgdot]
[algorithm pagdot]
)";

// max_steps counts epochs for the mlp problem.
inline constexpr std::string_view kExample4Mnist = R"(# One-hidden-layer sigmoid MLP on MNIST downsampled to 10x10.
[experiment]
name = example4_mnist
seeds = 1, 2, 3
max_steps = 200
record_every = 10
output_dir = out/example4_mnist

[problem]
name = mlp
n_hidden = 32
batch_size = 128
source = mnist_idx
images = data/mnist/train-images-idx3-ubyte
labels = data/mnist/train-labels-idx1-ubyte
init_mean = -1
init_variance = 0.01

[defaults]
mode = practical
h = inf
t_count = 50
eta = 0.01
t_thres = 10
g_thres = 0.1
r = 0.5
momentum = 0.9

[algorithm sgd_momentum]
[algorithm adam]
[algorithm amsgrad]
[algorithm rmsprop]
[algorithm pgd]
[algorithm pagd]
[algorithm pgdot]
[algorithm pagdot]
)";

inline constexpr std::string_view kExample4Cifar = R"(# One-hidden-layer sigmoid MLP on CIFAR-10 (grayscale, 10x10).
[experiment]
name = example4_cifar
seeds = 1, 2, 3
max_steps = 200
record_every = 10
output_dir = out/example4_cifar

[problem]
name = mlp
n_hidden = 32
batch_size = 128
source = cifar10_binary
files = data/cifar-10-batches-bin/data_batch_1.bin, data/cifar-10-batches-bin/data_batch_2.bin, data/cifar-10-batches-bin/data_batch_3.bin, data/cifar-10-batches-bin/data_batch_4.bin, data/cifar-10-batches-bin/data_batch_5.bin
init_mean = -1
init_variance = 0.01

[defaults]
mode = practical
h = inf
t_count = 50
eta = 0.01
t_thres = 10
g_thres = 0.1
r = 0.5
momentum = 0.9

[algorithm sgd_momentum]
[algorithm adam]
[algorithm amsgrad]
[algorithm rmsprop]
[algorithm pgd]
[algorithm pagd]
[algorithm pgdot]
[algorithm pagdot]
)";

}  // namespace presets

inline constexpr Preset kPresets[] = {
    {"example1", presets::kExample1},         {"example2", presets::kExample2},
    {"example3_lq", presets::kExample3Lq},    {"example3_pr", presets::kExample3Pr},
    {"example4_mnist", presets::kExample4Mnist}, {"example4_cifar", presets::kExample4Cifar},
};

inline std::string_view preset_text(std::string_view name) {
  for (const auto& p : kPresets)
    if (p.name == name) return p.text;
  return {};
}

}  // namespace pgdot
