// Repelling vs reinforced walks with w(n) = 1 + n^alpha.
// usage: walk_summary [alpha] [T]
#include "pgdot/walks.hpp"

#include <cstdio>
#include <cstdlib>

int main(int argc, char** argv) {
  using namespace pgdot;
  const double alpha = argc > 1 ? std::atof(argv[1]) : 5.0;
  const long steps = argc > 2 ? std::atol(argv[2]) : 100000;

  for (WalkKind kind : {WalkKind::repelling, WalkKind::reinforced}) {
    const auto path = simulate(kind, WeightFn{alpha}, steps, 1);
    std::printf("%-10s range %ld  localization %.4f  Z_T %ld\n", kind == WalkKind::repelling ? "repelling" : "reinforced",
                path_range(path), localization_metric(path), path.back());
  }
  const SlopeFit fit = msd_exponent(WalkKind::repelling, WeightFn{alpha}, steps, 200, 1);
  std::printf("repelling MSD exponent %.3f (stderr %.4f)\n", fit.exponent, fit.stderr_);
}
