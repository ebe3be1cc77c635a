// Self-interacting nearest-neighbour walks on the integers.
//
// The repelling walk steps toward the less-visited neighbour site with
// probability w(heavier count)/(w(L)+w(R)); the reinforced walk uses the
// same probability to step toward the more-visited one.
#pragma once

#include "pgdot/core.hpp"
#include "pgdot/occupation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string_view>
#include <vector>

namespace pgdot {

enum class WalkKind { repelling, reinforced };

inline std::optional<WalkKind> parse_walk_kind(std::string_view s) {
  if (s == "repelling") return WalkKind::repelling;
  if (s == "reinforced") return WalkKind::reinforced;
  return std::nullopt;
}

class WalkState {
 public:
  WalkState(WalkKind kind, WeightFn weight, RngStream rng)
      : kind_(kind), weight_(weight), rng_(rng), counts_(64, 0), origin_(32) {
    counts_[origin_] = 1;
  }

  long position() const { return z_; }
  long steps() const { return t_; }
  WalkKind kind() const { return kind_; }

  std::uint64_t visits(long site) const {
    const long idx = site + origin_;
    if (idx < 0 || idx >= static_cast<long>(counts_.size())) return 0;
    return counts_[idx];
  }

  std::uint64_t total_visits() const {
    std::uint64_t s = 0;
    for (auto c : counts_) s += c;
    return s;
  }

  /// Probability that the next step goes to z − 1.
  double left_move_probability() const {
    const std::uint64_t l = visits(z_ - 1), r = visits(z_ + 1);
    const double p_repel = left_probability(weight_, l, r);
    return kind_ == WalkKind::repelling ? p_repel : 1.0 - p_repel;
  }

  /// One transition. A single uniform u decides the move: with L ≠ R the
  /// walk takes its preferred direction iff u < w(max)/(w(L)+w(R)), so
  /// repelling and reinforced walks fed the same draws move oppositely.
  void step() {
    const std::uint64_t l = visits(z_ - 1), r = visits(z_ + 1);
    const double u = rng_.uniform();
    bool left;
    if (l == r) {
      left = u < 0.5;
    } else {
      const double wl = weight_(l), wr = weight_(r);
      const bool heavy_left = l > r;
      const double q = (heavy_left ? wl : wr) / (wl + wr);
      const bool away = kind_ == WalkKind::repelling ? (u < q) : !(u < q);
      left = away ? !heavy_left : heavy_left;
    }
    z_ += left ? -1 : 1;
    ++t_;
    ensure(z_);
    ++counts_[z_ + origin_];
  }

 private:
  void ensure(long site) {
    while (site + origin_ < 1 || site + origin_ >= static_cast<long>(counts_.size()) - 1) {
      const long grow = static_cast<long>(counts_.size());
      std::vector<std::uint64_t> bigger(counts_.size() + 2 * grow, 0);
      std::copy(counts_.begin(), counts_.end(), bigger.begin() + grow);
      counts_.swap(bigger);
      origin_ += grow;
    }
  }

  WalkKind kind_;
  WeightFn weight_;
  RngStream rng_;
  std::vector<std::uint64_t> counts_;
  long origin_;
  long z_ = 0;
  long t_ = 0;
};

inline void walk_step(WalkState& state) { state.step(); }

/// Path of length T + 1 starting at 0.
inline std::vector<long> simulate(WalkKind kind, WeightFn weight, long steps, std::uint64_t seed,
                                  std::uint64_t path_id = 0) {
  if (steps < 1) throw ContractViolation("simulate: T must be at least 1");
  WalkState w(kind, weight, derive_stream(seed, path_id));
  std::vector<long> path;
  path.reserve(steps + 1);
  path.push_back(0);
  for (long t = 0; t < steps; ++t) {
    w.step();
    path.push_back(w.position());
  }
  return path;
}

/// Fraction of the second half of the path spent on its five most-visited
/// sites.
inline double localization_metric(const std::vector<long>& path) {
  if (path.size() < 100) throw ContractViolation("localization_metric: path too short");
  const std::size_t start = path.size() / 2;
  const auto [lo, hi] = std::minmax_element(path.begin() + start, path.end());
  std::vector<std::size_t> hist(static_cast<std::size_t>(*hi - *lo + 1), 0);
  for (std::size_t t = start; t < path.size(); ++t) ++hist[path[t] - *lo];
  const std::size_t keep = std::min<std::size_t>(5, hist.size());
  std::partial_sort(hist.begin(), hist.begin() + keep, hist.end(), std::greater<>());
  std::size_t top = 0;
  for (std::size_t k = 0; k < keep; ++k) top += hist[k];
  return static_cast<double>(top) / static_cast<double>(path.size() - start);
}

inline long path_range(const std::vector<long>& path) {
  const auto [lo, hi] = std::minmax_element(path.begin(), path.end());
  return *hi - *lo;
}

struct SlopeFit {
  double exponent = 0;
  double stderr_ = 0;
};

/// Least-squares slope of log msd[t] against log t over integer t in
/// [T/10, T], where T = msd.size() − 1.
inline SlopeFit msd_slope(const std::vector<double>& msd) {
  const long total = static_cast<long>(msd.size()) - 1;
  const long first = std::max<long>(1, total / 10);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long n = 0;
  for (long t = first; t <= total; ++t) {
    if (!(msd[t] > 0)) continue;
    const double x = std::log(static_cast<double>(t)), y = std::log(msd[t]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) throw ContractViolation("msd_slope: not enough positive points");
  const double mx = sx / n, my = sy / n;
  const double vxx = sxx - n * mx * mx;
  SlopeFit fit;
  fit.exponent = (sxy - n * mx * my) / vxx;
  const double intercept = my - fit.exponent * mx;
  double ssr = 0;
  for (long t = first; t <= total; ++t) {
    if (!(msd[t] > 0)) continue;
    const double e = std::log(msd[t]) - (intercept + fit.exponent * std::log(static_cast<double>(t)));
    ssr += e * e;
  }
  fit.stderr_ = std::sqrt(ssr / (n - 2) / vxx);
  return fit;
}

/// Ensemble mean of Z_t² over `paths` independent walks (path p uses
/// stream p of `seed`).
inline std::vector<double> ensemble_msd(WalkKind kind, WeightFn weight, long steps, int paths,
                                        std::uint64_t seed) {
  std::vector<std::uint64_t> sum(steps + 1, 0);
  for (int p = 0; p < paths; ++p) {
    WalkState w(kind, weight, derive_stream(seed, static_cast<std::uint64_t>(p)));
    for (long t = 1; t <= steps; ++t) {
      w.step();
      const auto z = static_cast<std::uint64_t>(std::abs(w.position()));
      sum[t] += z * z;
    }
  }
  std::vector<double> msd(steps + 1);
  for (long t = 0; t <= steps; ++t) msd[t] = static_cast<double>(sum[t]) / paths;
  return msd;
}

inline SlopeFit msd_exponent(WalkKind kind, WeightFn weight, long steps, int paths,
                             std::uint64_t seed) {
  if (steps < 1000 || paths < 100) {
    throw ContractViolation("msd_exponent: requires T >= 1000 and at least 100 paths");
  }
  return msd_slope(ensemble_msd(kind, weight, steps, paths, seed));
}

inline void write_paths_csv(std::ostream& out, const std::vector<std::vector<long>>& paths,
                            const std::vector<std::uint64_t>& seeds) {
  out << "seed,t,Z\n";
  for (std::size_t p = 0; p < paths.size(); ++p) {
    for (std::size_t t = 0; t < paths[p].size(); ++t) {
      out << seeds[p] << ',' << t << ',' << paths[p][t] << '\n';
    }
  }
}

}  // namespace pgdot
