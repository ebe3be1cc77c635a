// Airy function of the first kind on [-15, 10].
#pragma once

#include "pgdot/core.hpp"

#include <cmath>
#include <string>

namespace pgdot {

inline constexpr double kAiryMin = -15.0;
inline constexpr double kAiryMax = 10.0;

namespace detail {

// Maclaurin series Ai(z) = Ai(0) f(z) + Ai'(0) g(z). Terms are summed
// until they no longer change the partial sums.
inline double airy_ai_series(double z) {
  constexpr double kAi0 = 0.355028053887817239260;
  constexpr double kAip0 = -0.258819403792806798405;
  const double z3 = z * z * z;
  double f = 1.0, term_f = 1.0;
  double g = z, term_g = z;
  for (int k = 0; k < 200; ++k) {
    term_f *= z3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
    term_g *= z3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
    const double f_next = f + term_f;
    const double g_next = g + term_g;
    if (f_next == f && g_next == g) break;
    f = f_next;
    g = g_next;
  }
  return kAi0 * f + kAip0 * g;
}

// Coefficients of the large-argument expansions,
// u_k = (6k-5)(6k-3)(6k-1) / ((2k-1) 216 k) u_{k-1}.
inline double airy_u(int k) {
  double u = 1.0;
  for (int j = 1; j <= k; ++j) {
    u *= (6.0 * j - 5.0) * (6.0 * j - 3.0) * (6.0 * j - 1.0) / ((2.0 * j - 1.0) * 216.0 * j);
  }
  return u;
}

inline double airy_ai_asymptotic_positive(double z) {
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  double sum = 0.0, prev = INFINITY;
  for (int k = 0; k < 40; ++k) {
    const double term = airy_u(k) / std::pow(zeta, k);
    if (term > prev) break;  // past the smallest term
    sum += (k % 2 ? -term : term);
    prev = term;
  }
  return std::exp(-zeta) / (2.0 * std::sqrt(M_PI) * std::pow(z, 0.25)) * sum;
}

inline double airy_ai_asymptotic_negative(double z) {
  const double x = -z;
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  double p = 0.0, q = 0.0, prev = INFINITY;
  for (int k = 0; k < 40; ++k) {
    const double term = airy_u(k) / std::pow(zeta, k);
    if (term > prev) break;
    const int m = k / 2;
    const double signed_term = (m % 2 ? -term : term);
    if (k % 2 == 0) p += signed_term; else q += signed_term;
    prev = term;
  }
  const double phase = zeta + M_PI / 4.0;
  return (std::sin(phase) * p - std::cos(phase) * q) / (std::sqrt(M_PI) * std::pow(x, 0.25));
}

}  // namespace detail

/// Ai(s) to about 1e-10 absolute accuracy on [-15, 10]: power series on
/// [-8, 5], large-argument expansions outside.
inline double airy_ai(double s) {
  if (!(s >= kAiryMin && s <= kAiryMax)) {
    throw NumericalDomainError("airy_ai: argument " + std::to_string(s) +
                               " outside supported range [-15, 10]");
  }
  if (s > 5.0) return detail::airy_ai_asymptotic_positive(s);
  if (s < -8.0) return detail::airy_ai_asymptotic_negative(s);
  return detail::airy_ai_series(s);
}

}  // namespace pgdot
