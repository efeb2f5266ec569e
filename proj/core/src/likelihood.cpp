#include "tailmix/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tailmix/optimize.hpp"
#include "tailmix/rng.hpp"
#include "tailmix/special_functions.hpp"

namespace tailmix {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogXi1Lo = -9.210340371976182;  // log 1e-4
constexpr double kLogXi1Hi = 9.210340371976182;   // log 1e4

// xlogy with the 0 * log(0) = 0 convention used by the phi factor of the
// likelihood when a side of the split is empty.
double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

// Bulk product sum_{x_i <= u} c_i log[(H(x_i) - H(x_i-1)) / H(u)].
double bulk_product_loglik(const FrequencyTable& table, BulkFamily bulk,
                           double xi1, std::int64_t u) {
  if (!(xi1 > 0.0) || !std::isfinite(xi1)) return kNegInf;
  const double inv_xi1 = 1.0 / xi1;
  double log_norm, log_p = 0.0, alpha = 0.0;
  if (bulk == BulkFamily::geometric) {
    log_p = log1m_exp(-inv_xi1);
    log_norm = log1m_exp(-static_cast<double>(u) * inv_xi1);
  } else {
    alpha = inv_xi1 + 1.0;
    log_norm = std::log(partial_power_sum(alpha, u));
  }
  double total = 0.0;
  std::int64_t n_bulk = 0;
  for (const auto& [value, count] : table.entries()) {
    if (value > u) break;
    n_bulk += count;
    if (bulk == BulkFamily::geometric) {
      total += static_cast<double>(count) *
               (log_p - static_cast<double>(value - 1) * inv_xi1);
    } else {
      total += static_cast<double>(count) *
               (-alpha * std::log(static_cast<double>(value)));
    }
  }
  return total - static_cast<double>(n_bulk) * log_norm;
}

// Tail product sum_{x_i > u} c_i log[G_u(x_i) - G_u(x_i - 1)].
double tail_product_loglik(const FrequencyTable& table, double xi2, double sigma,
                           std::int64_t u) {
  if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(xi2)) return kNegInf;
  MixtureParams p;
  p.xi2 = xi2;
  p.sigma = sigma;
  p.u = u;
  if (!(p.sigma_u() > 0.0)) return kNegInf;
  double total = 0.0;
  for (const auto& [value, count] : table.entries()) {
    if (value <= u) continue;
    const double term = igpd_log_pmf(value, p);
    if (std::isinf(term)) return kNegInf;
    total += static_cast<double>(count) * term;
  }
  return total;
}

std::size_t unique_exceedances(const FrequencyTable& table, std::int64_t u) {
  std::size_t k = 0;
  for (const auto& e : table.entries()) {
    if (e.value > u) ++k;
  }
  return k;
}

}  // namespace

double log_likelihood(const FrequencyTable& table, const MixtureSpec& spec,
                      const MixtureParams& params) {
  if (table.empty()) throw std::invalid_argument("log_likelihood: empty table");
  if (!(params.xi1 > 0.0) || !(params.sigma > 0.0) || params.u < 1 ||
      !(params.phi_u >= 0.0 && params.phi_u <= 1.0) ||
      !(params.sigma_u() > 0.0)) {
    return kNegInf;
  }
  const MixtureDist dist(spec, params);
  double total = 0.0;
  for (const auto& [value, count] : table.entries()) {
    const double term = dist.log_pmf(value);
    if (std::isinf(term) && term < 0.0) return kNegInf;
    total += static_cast<double>(count) * term;
  }
  return total;
}

double mle_exceedance(const FrequencyTable& table, std::int64_t u) {
  if (table.empty()) throw std::invalid_argument("mle_exceedance: empty table");
  return static_cast<double>(table.count_exceeding(u)) /
         static_cast<double>(table.n());
}

ComponentMle mle_components(const FrequencyTable& table, const MixtureSpec& spec,
                            std::int64_t u) {
  if (table.empty()) throw std::invalid_argument("mle_components: empty table");
  if (u < 1) throw std::invalid_argument("mle_components: require u >= 1");

  ComponentMle result;
  const std::int64_t n = table.n();
  const std::int64_t n_u = table.count_exceeding(u);
  const std::int64_t n_bulk = n - n_u;
  result.bulk_degenerate = (n_bulk == 0);
  result.tail_degenerate = (unique_exceedances(table, u) < 2);

  // Bulk: golden-section over log xi1.
  if (!result.bulk_degenerate) {
    const auto bulk_obj = [&](double log_xi1) {
      return bulk_product_loglik(table, spec.bulk, std::exp(log_xi1), u);
    };
    const double log_xi1 = golden_section_max(bulk_obj, kLogXi1Lo, kLogXi1Hi);
    result.xi1 = std::exp(log_xi1);
    result.bulk_loglik = bulk_obj(log_xi1);
  } else {
    result.xi1 = 1.0;
    result.bulk_loglik = 0.0;
  }

  // Tail: Nelder-Mead on (xi2, log sigma) from several seeded starts; the
  // likelihood has a known ridge between the two, so keep the best restart.
  if (n_u > 0) {
    double excess_sum = 0.0;
    for (const auto& [value, count] : table.entries()) {
      if (value > u) {
        excess_sum += static_cast<double>(count) *
                      (static_cast<double>(value - u) - 0.5);
      }
    }
    const double mean_excess =
        std::max(0.5, excess_sum / static_cast<double>(n_u));
    const auto tail_obj = [&](const std::array<double, 2>& x) {
      return tail_product_loglik(table, x[0], std::exp(x[1]), u);
    };
    Rng rng(0x7a1Lu ^ static_cast<std::uint64_t>(u));
    SimplexResult best{{0.0, 0.0}, kNegInf};
    for (int restart = 0; restart < 5; ++restart) {
      std::array<double, 2> start;
      if (restart == 0) {
        start = {0.1, std::log(mean_excess)};
      } else {
        start = {rng.uniform01() * 2.5 - 0.5,
                 std::log(mean_excess) + 2.0 * (rng.uniform01() - 0.5)};
      }
      if (!std::isfinite(tail_obj(start))) continue;
      const auto fit = nelder_mead_max_2d(tail_obj, start, {0.25, 0.5}, 1e-8, 800);
      if (fit.fval > best.fval) best = fit;
    }
    result.xi2 = best.x[0];
    result.sigma = std::exp(best.x[1]);
    result.tail_loglik = best.fval;
  } else {
    result.xi2 = 0.0;
    result.sigma = 1.0;
    result.tail_loglik = 0.0;
  }

  const double phi_hat = static_cast<double>(n_u) / static_cast<double>(n);
  result.loglik = xlogy(static_cast<double>(n_bulk), 1.0 - phi_hat) +
                  xlogy(static_cast<double>(n_u), phi_hat) +
                  result.bulk_loglik + result.tail_loglik;
  return result;
}

ProfileResult profile_threshold(const FrequencyTable& table,
                                const MixtureSpec& spec, double phi_lo,
                                double phi_hi) {
  if (table.empty()) throw std::invalid_argument("profile_threshold: empty table");
  if (!(phi_lo >= 0.0 && phi_lo < phi_hi && phi_hi <= 1.0)) {
    throw std::invalid_argument("profile_threshold: bad phi bounds");
  }

  ProfileResult result;
  const std::int64_t u_max = table.max_value();
  for (std::int64_t u = 1; u <= u_max; ++u) {
    const double phi_hat = mle_exceedance(table, u);
    if (phi_hat > phi_hi) continue;
    if (phi_hat < phi_lo) break;  // nonincreasing in u, nothing further qualifies

    const ComponentMle mle = mle_components(table, spec, u);
    ProfilePoint point;
    point.u = u;
    point.tail_degenerate = mle.tail_degenerate;
    point.params.xi1 = mle.xi1;
    point.params.xi2 = mle.xi2;
    point.params.sigma = mle.sigma;
    point.params.u = u;
    if (spec.constrained) {
      point.params.phi_u =
          constrained_phi(spec.bulk, mle.xi1, mle.xi2, mle.sigma, u);
      point.loglik = log_likelihood(table, spec, point.params);
    } else {
      point.params.phi_u = phi_hat;
      point.loglik = mle.loglik;
    }
    result.points.push_back(point);
  }

  if (result.points.empty()) {
    throw std::runtime_error(
        "profile_threshold: no candidate thresholds inside the exceedance bounds");
  }
  result.argmax = 0;
  for (std::size_t i = 1; i < result.points.size(); ++i) {
    if (result.points[i].loglik > result.points[result.argmax].loglik) {
      result.argmax = i;
    }
  }
  return result;
}

}  // namespace tailmix
