#pragma once

#include <cstdint>
#include <stdexcept>

namespace tailmix {

/// Hurwitz zeta function: sum_{i>=0} (q+i)^(-s) for s > 1, q > 0.
/// Evaluated by explicit summation of the leading terms plus an
/// Euler-Maclaurin tail correction; the term count grows until the
/// correction's error bound drops below ~1e-13.
double hurwitz_zeta(double s, double q);

/// Finite power sum: sum_{k=1}^{u} k^(-alpha), alpha > 1, u >= 1.
/// Summed directly (ascending magnitude), no series truncation.
double partial_power_sum(double alpha, std::int64_t u);

/// log(exp(log_a) - exp(log_b)) without cancellation; requires log_a > log_b.
/// log_b may be -infinity, in which case the result is log_a.
double log_diff_exp(double log_a, double log_b);

/// log(1 - exp(x)) for x < 0, stable near both ends.
double log1m_exp(double x);

/// Power-law exponent alpha > 1, interchangeable with the GPD-style shape
/// parametrization alpha = 1/xi + 1.
struct Exponent {
  explicit Exponent(double a) : alpha(a) {
    if (!(a > 1.0)) throw std::domain_error("Exponent: alpha must exceed 1");
  }
  static Exponent from_shape(double xi) {
    if (!(xi > 0.0)) throw std::domain_error("Exponent: shape must be positive");
    return Exponent(1.0 / xi + 1.0);
  }
  double shape() const { return 1.0 / (alpha - 1.0); }
  double alpha;
};

}  // namespace tailmix
