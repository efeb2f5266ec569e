#include "tailmix/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tailmix/special_functions.hpp"

namespace tailmix {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_tail_scale(double sigma_u) {
  if (!(sigma_u > 0.0)) {
    throw std::domain_error("gpd: require sigma + xi2*u > 0");
  }
}

// log conditional tail survival log[1 - G_u(z)] at real z >= u.
double tail_log_survival(double z, std::int64_t u, double xi2, double sigma_u) {
  const double rel = (z - static_cast<double>(u)) / sigma_u;
  if (std::abs(xi2) < kXi2Epsilon) return -rel;
  const double arg = 1.0 + xi2 * rel;
  if (arg <= 0.0) return kNegInf;  // beyond the upper endpoint, xi2 < 0
  return -std::log1p(xi2 * rel) / xi2;
}

}  // namespace

double gpd_conditional_cdf(double x, std::int64_t u, double xi2, double sigma) {
  const double sigma_u = sigma + xi2 * static_cast<double>(u);
  check_tail_scale(sigma_u);
  if (u < 1) throw std::domain_error("gpd_conditional_cdf: require u >= 1");
  if (!(x >= static_cast<double>(u))) {
    throw std::domain_error("gpd_conditional_cdf: require x >= u");
  }
  const double log_surv = tail_log_survival(x, u, xi2, sigma_u);
  if (std::isinf(log_surv)) return 1.0;
  return -std::expm1(log_surv);
}

double gpd_conditional_pdf(double x, std::int64_t u, double xi2, double sigma) {
  const double sigma_u = sigma + xi2 * static_cast<double>(u);
  check_tail_scale(sigma_u);
  if (u < 1) throw std::domain_error("gpd_conditional_pdf: require u >= 1");
  if (!(x >= static_cast<double>(u))) {
    throw std::domain_error("gpd_conditional_pdf: require x >= u");
  }
  const double rel = (x - static_cast<double>(u)) / sigma_u;
  if (std::abs(xi2) < kXi2Epsilon) return std::exp(-rel) / sigma_u;
  const double arg = 1.0 + xi2 * rel;
  if (arg <= 0.0) return 0.0;
  return std::exp((-1.0 / xi2 - 1.0) * std::log(arg)) / sigma_u;
}

MixtureDist::MixtureDist(const MixtureSpec& spec, const MixtureParams& params)
    : spec_(spec), params_(params) {
  if (!(params.xi1 > 0.0)) throw std::domain_error("mixture: require xi1 > 0");
  if (!(params.sigma > 0.0)) throw std::domain_error("mixture: require sigma > 0");
  if (params.u < 1) throw std::domain_error("mixture: require u >= 1");
  if (!(params.phi_u >= 0.0 && params.phi_u <= 1.0)) {
    throw std::domain_error("mixture: require phi_u in [0, 1]");
  }
  sigma_u_ = params.sigma_u();
  check_tail_scale(sigma_u_);

  log_phi_ = std::log(params.phi_u);
  log1m_phi_ = std::log1p(-params.phi_u);
  inv_xi1_ = 1.0 / params.xi1;

  if (spec.bulk == BulkFamily::geometric) {
    log_p_geom_ = log1m_exp(-inv_xi1_);
    log_bulk_norm_ = log1m_exp(-static_cast<double>(params.u) * inv_xi1_);
  } else {
    alpha_ = inv_xi1_ + 1.0;
    power_bulk_cdf_.resize(static_cast<std::size_t>(params.u));
    long double acc = 0.0L;
    for (std::int64_t k = 1; k <= params.u; ++k) {
      acc += std::pow(static_cast<double>(k), -alpha_);
      power_bulk_cdf_[static_cast<std::size_t>(k - 1)] = static_cast<double>(acc);
    }
    log_bulk_norm_ = std::log(power_bulk_cdf_.back());
  }
}

double MixtureDist::log_tail_survival(double z) const {
  return tail_log_survival(z, params_.u, params_.xi2, sigma_u_);
}

double MixtureDist::bulk_cdf_ratio(std::int64_t x) const {
  if (x <= 0) return 0.0;
  if (x >= params_.u) return 1.0;
  if (spec_.bulk == BulkFamily::geometric) {
    // (1 - e^{-x/xi1}) / (1 - e^{-u/xi1}), computed via expm1 at both ends.
    return std::expm1(-static_cast<double>(x) * inv_xi1_) /
           std::expm1(-static_cast<double>(params_.u) * inv_xi1_);
  }
  return power_bulk_cdf_[static_cast<std::size_t>(x - 1)] /
         power_bulk_cdf_.back();
}

double MixtureDist::log_pmf(std::int64_t x) const {
  if (x < 1) throw std::domain_error("mixture log_pmf: require x >= 1");
  if (x <= params_.u) {
    double log_mass;
    if (spec_.bulk == BulkFamily::geometric) {
      log_mass = log_p_geom_ - static_cast<double>(x - 1) * inv_xi1_;
    } else {
      log_mass = -alpha_ * std::log(static_cast<double>(x));
    }
    return log1m_phi_ + log_mass - log_bulk_norm_;
  }
  const double a = log_tail_survival(static_cast<double>(x - 1));
  const double b = log_tail_survival(static_cast<double>(x));
  if (std::isinf(a)) return kNegInf;           // whole interval past the endpoint
  if (std::isinf(b)) return log_phi_ + a;      // last partial interval of support
  if (!(a > b)) return kNegInf;                // survival underflowed to equality
  return log_phi_ + log_diff_exp(a, b);
}

double MixtureDist::log_survival(std::int64_t x) const {
  if (x < 1) throw std::domain_error("mixture log_survival: require x >= 1");
  if (x <= params_.u) {
    const double bulk_part =
        (1.0 - params_.phi_u) * (1.0 - bulk_cdf_ratio(x - 1));
    return std::log(params_.phi_u + bulk_part);
  }
  return log_phi_ + log_tail_survival(static_cast<double>(x - 1));
}

std::int64_t MixtureDist::sample_bulk(Rng& rng) const {
  const double target = rng.uniform01();
  if (spec_.bulk == BulkFamily::geometric) {
    // Smallest k with H(k)/H(u) >= target, H(k) = 1 - e^{-k/xi1}.
    const double h_u = -std::expm1(-static_cast<double>(params_.u) * inv_xi1_);
    const double k = std::ceil(-params_.xi1 * std::log1p(-target * h_u));
    return std::clamp<std::int64_t>(static_cast<std::int64_t>(k), 1, params_.u);
  }
  const double scaled = target * power_bulk_cdf_.back();
  const auto it = std::lower_bound(power_bulk_cdf_.begin(),
                                   power_bulk_cdf_.end(), scaled);
  const auto idx = static_cast<std::int64_t>(it - power_bulk_cdf_.begin());
  return std::min<std::int64_t>(idx + 1, params_.u);
}

std::int64_t MixtureDist::sample_tail(Rng& rng) const {
  const double target = rng.uniform01();
  const double u_real = static_cast<double>(params_.u);
  double z;
  if (std::abs(params_.xi2) < kXi2Epsilon) {
    z = u_real - sigma_u_ * std::log1p(-target);
  } else {
    z = u_real +
        sigma_u_ * std::expm1(-params_.xi2 * std::log1p(-target)) / params_.xi2;
  }
  const auto x = static_cast<std::int64_t>(std::ceil(z));
  return std::max(x, params_.u + 1);
}

std::int64_t MixtureDist::sample(Rng& rng) const {
  if (rng.uniform01() < params_.phi_u) return sample_tail(rng);
  return sample_bulk(rng);
}

double igpd_log_pmf(std::int64_t x, const MixtureParams& params) {
  if (x <= params.u) throw std::domain_error("igpd_log_pmf: require x > u");
  const double sigma_u = params.sigma_u();
  check_tail_scale(sigma_u);
  const double a =
      tail_log_survival(static_cast<double>(x - 1), params.u, params.xi2, sigma_u);
  const double b =
      tail_log_survival(static_cast<double>(x), params.u, params.xi2, sigma_u);
  if (std::isinf(a)) return kNegInf;
  if (std::isinf(b)) return a;
  if (!(a > b)) return kNegInf;
  return log_diff_exp(a, b);
}

double bulk_log_pmf(std::int64_t x, BulkFamily bulk, const MixtureParams& params) {
  if (x < 1 || x > params.u) {
    throw std::domain_error("bulk_log_pmf: require 1 <= x <= u");
  }
  if (!(params.xi1 > 0.0)) throw std::domain_error("bulk_log_pmf: require xi1 > 0");
  const double inv_xi1 = 1.0 / params.xi1;
  if (bulk == BulkFamily::geometric) {
    return log1m_exp(-inv_xi1) - static_cast<double>(x - 1) * inv_xi1 -
           log1m_exp(-static_cast<double>(params.u) * inv_xi1);
  }
  const double alpha = inv_xi1 + 1.0;
  return -alpha * std::log(static_cast<double>(x)) -
         std::log(partial_power_sum(alpha, params.u));
}

double constrained_phi(BulkFamily bulk, double xi1, double xi2, double sigma,
                       std::int64_t u) {
  if (!(xi1 > 0.0)) throw std::domain_error("constrained_phi: require xi1 > 0");
  if (!(sigma > 0.0)) throw std::domain_error("constrained_phi: require sigma > 0");
  if (u < 1) throw std::domain_error("constrained_phi: require u >= 1");
  const double sigma_u = sigma + xi2 * static_cast<double>(u);
  check_tail_scale(sigma_u);

  // phi = h(u) sigma_u / (H(u) + h(u) sigma_u) as a logistic of log-domain
  // quantities, so bulk masses far below DBL_MIN still resolve.
  double log_h, log_big_h;
  const double inv_xi1 = 1.0 / xi1;
  if (bulk == BulkFamily::geometric) {
    log_h = log1m_exp(-inv_xi1) - static_cast<double>(u - 1) * inv_xi1;
    log_big_h = log1m_exp(-static_cast<double>(u) * inv_xi1);
  } else {
    const double alpha = inv_xi1 + 1.0;
    log_h = -alpha * std::log(static_cast<double>(u));
    log_big_h = std::log(partial_power_sum(alpha, u));
  }
  const double t = log_h + std::log(sigma_u) - log_big_h;
  return 1.0 / (1.0 + std::exp(-t));
}

double mixture_log_pmf(std::int64_t x, const MixtureSpec& spec,
                       const MixtureParams& params) {
  return MixtureDist(spec, params).log_pmf(x);
}

double mixture_log_survival(std::int64_t x, const MixtureSpec& spec,
                            const MixtureParams& params) {
  return MixtureDist(spec, params).log_survival(x);
}

double discrete_power_law_log_pmf(std::int64_t x, double alpha, std::int64_t u0) {
  if (u0 < 1) throw std::domain_error("discrete_power_law: require u0 >= 1");
  if (x < u0) throw std::domain_error("discrete_power_law: require x >= u0");
  if (!(alpha > 1.0)) throw std::domain_error("discrete_power_law: require alpha > 1");
  return -alpha * std::log(static_cast<double>(x)) -
         std::log(hurwitz_zeta(alpha, static_cast<double>(u0)));
}

std::vector<std::int64_t> sample_mixture(const MixtureSpec& spec,
                                         const MixtureParams& params,
                                         std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample_mixture: require n >= 1");
  const MixtureDist dist(spec, params);
  Rng rng(seed);
  std::vector<std::int64_t> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(dist.sample(rng));
  return out;
}

}  // namespace tailmix
