#include "tailmix/special_functions.hpp"

#include <cmath>
#include <limits>

namespace tailmix {

namespace {

// B_{2j} / (2j)! for the Euler-Maclaurin correction terms.
constexpr long double kBernoulliTerm[] = {
    8.33333333333333287e-02L,   // B_2/2!
    -1.38888888888888894e-03L,  // B_4/4!
    3.30687830687830710e-05L,   // B_6/6!
    -8.26719576719576754e-07L,  // B_8/8!
    2.08767569878681002e-08L,   // B_10/10!
    -5.28419013868749322e-10L,  // B_12/12!
    1.33825365306846789e-11L,   // B_14/14!
    -3.38968029632258272e-13L,  // B_16/16!
    8.58606205627784517e-15L,   // B_18/18!
    -2.17486869855806192e-16L,  // B_20/20!
    5.50900282836022953e-18L,   // B_22/22!
    -1.39544646858125223e-19L,  // B_24/24!
};
constexpr int kBernoulliCount = 12;

}  // namespace

double hurwitz_zeta(double s, double q) {
  if (!(s > 1.0)) throw std::domain_error("hurwitz_zeta: require s > 1");
  if (!(q > 0.0)) throw std::domain_error("hurwitz_zeta: require q > 0");

  const long double ls = static_cast<long double>(s);
  std::int64_t n_terms = 16;
  for (int attempt = 0; attempt < 10; ++attempt, n_terms *= 4) {
    long double head = 0.0L;
    for (std::int64_t k = 0; k < n_terms; ++k) {
      const long double term = powl(q + static_cast<long double>(k), -ls);
      head += term;
      // The series itself has converged to double precision; no tail needed.
      if (term < 1e-19L * head) return static_cast<double>(head);
    }

    const long double w = q + static_cast<long double>(n_terms);
    long double total = head + powl(w, 1.0L - ls) / (ls - 1.0L) + 0.5L * powl(w, -ls);

    // Correction terms B_{2j}/(2j)! * s(s+1)...(s+2j-2) * w^(-s-2j+1); the
    // truncation error is bounded by the first omitted term.
    long double rising = ls;
    long double wpow = powl(w, -ls - 1.0L);
    bool converged = false;
    for (int j = 0; j < kBernoulliCount; ++j) {
      const long double term = kBernoulliTerm[j] * rising * wpow;
      total += term;
      if (fabsl(term) <= 1e-17L * fabsl(total)) {
        converged = true;
        break;
      }
      rising *= (ls + static_cast<long double>(2 * j + 1)) *
                (ls + static_cast<long double>(2 * j + 2));
      wpow /= w * w;
    }
    if (converged) return static_cast<double>(total);
  }
  // Unreachable for s > 1, q > 0 within the attempt budget.
  throw std::runtime_error("hurwitz_zeta: failed to converge");
}

double partial_power_sum(double alpha, std::int64_t u) {
  if (!(alpha > 1.0)) throw std::domain_error("partial_power_sum: require alpha > 1");
  if (u < 1) throw std::domain_error("partial_power_sum: require u >= 1");
  long double sum = 0.0L;
  for (std::int64_t k = u; k >= 1; --k) {
    sum += powl(static_cast<long double>(k), -static_cast<long double>(alpha));
  }
  return static_cast<double>(sum);
}

double log_diff_exp(double log_a, double log_b) {
  if (!(log_a > log_b)) throw std::domain_error("log_diff_exp: require log_a > log_b");
  if (std::isinf(log_b) && log_b < 0.0) return log_a;
  return log_a + std::log1p(-std::exp(log_b - log_a));
}

double log1m_exp(double x) {
  if (!(x < 0.0)) throw std::domain_error("log1m_exp: require x < 0");
  // Crossover at -log 2 keeps both branches well conditioned.
  if (x < -0.6931471805599453) return std::log1p(-std::exp(x));
  return std::log(-std::expm1(x));
}

}  // namespace tailmix
