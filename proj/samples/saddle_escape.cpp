// Gradient descent stalls on the rim of the staircase; the perturbed
// methods leave it. Prints final f and steps to f < 0.3 per algorithm.
#include "pgdot/pgdot.hpp"

#include <cstdio>

int main() {
  using namespace pgdot;
  const Objective f = make_staircase({4, 1.0, 4});
  const Vector x0 = Vector::Constant(4, 1.5);

  for (Algorithm a : {Algorithm::gd, Algorithm::pgd, Algorithm::pgdot, Algorithm::pagdot}) {
    AlgorithmConfig cfg;
    cfg.algorithm = a;
    cfg.eta = 0.1;
    cfg.r = 0.04;
    cfg.g_thres = 0.01;
    cfg.t_thres = 10;
    cfg.h = 0.04;

    RunOptions opt;
    opt.max_steps = 2000;
    opt.seed = 1;
    const RunTrace tr = run(f, cfg, x0, opt);
    const auto hit = steps_to_threshold(tr, 0.3);
    std::printf("%-7s final f %.6f  perturbations %ld  steps to f<0.3 %s\n", std::string(to_string(a)).c_str(),
                tr.final_f, tr.n_perturbations, hit ? std::to_string(*hit).c_str() : "never");
  }
}
