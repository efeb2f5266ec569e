#pragma once

#include <cstdint>
#include <vector>

#include "tailmix/rng.hpp"

namespace tailmix {

enum class BulkFamily { geometric, power_law };

/// One of the four model variants: bulk family below the threshold and
/// whether the exceedance probability is tied down by density continuity.
struct MixtureSpec {
  BulkFamily bulk = BulkFamily::geometric;
  bool constrained = false;
};

/// Parameter state of the mixture. phi_u is derived, never free: callers
/// resolve it (empirical proportion or continuity constraint) before
/// evaluating any density.
struct MixtureParams {
  double xi1 = 1.0;       // bulk shape, > 0
  double xi2 = 0.0;       // tail shape, unbounded
  double sigma = 1.0;     // threshold-independent tail scale, > 0
  std::int64_t u = 1;     // integer threshold, >= 1
  double phi_u = 0.1;     // exceedance probability Pr(X > u)

  double sigma_u() const { return sigma + xi2 * static_cast<double>(u); }
};

/// Shape-switch threshold below which the GPD exponential limit is used.
inline constexpr double kXi2Epsilon = 1e-8;

/// CDF of the GPD conditional on exceeding u, evaluated at x >= u:
/// G_u(x) = 1 - [1 + xi2 (x-u) / (sigma + xi2 u)]_+^(-1/xi2).
/// Returns 1 beyond the upper endpoint when xi2 < 0.
double gpd_conditional_cdf(double x, std::int64_t u, double xi2, double sigma);

/// Density of the GPD conditional on exceeding u; 0 beyond the upper
/// endpoint when xi2 < 0.
double gpd_conditional_pdf(double x, std::int64_t u, double xi2, double sigma);

/// log[G_u(x) - G_u(x-1)] for integer x > u: mass of the integer-discretized
/// GPD, unnormalized by phi_u. -infinity where negative-xi2 support is
/// exhausted.
double igpd_log_pmf(std::int64_t x, const MixtureParams& params);

/// Normalized bulk mass on [1, u]: log[(H(x) - H(x-1)) / H(u)].
double bulk_log_pmf(std::int64_t x, BulkFamily bulk, const MixtureParams& params);

/// Exceedance probability making the underlying density continuous at u:
/// phi = h(u) sigma_u / (H(u) + h(u) sigma_u) with h(u) the bulk mass at u.
/// Not clamped to any prior support.
double constrained_phi(BulkFamily bulk, double xi1, double xi2, double sigma,
                       std::int64_t u);

/// Full mixture log-PMF at integer x >= 1 (phi_u already resolved).
double mixture_log_pmf(std::int64_t x, const MixtureSpec& spec,
                       const MixtureParams& params);

/// log Pr(X >= x) for the mixture.
double mixture_log_survival(std::int64_t x, const MixtureSpec& spec,
                            const MixtureParams& params);

/// Discrete power law on integers >= u0: -alpha log x - log zeta(alpha, u0).
double discrete_power_law_log_pmf(std::int64_t x, double alpha, std::int64_t u0);

/// n independent draws; bulk by inverse CDF over {1..u}, tail by drawing the
/// continuous GPD above u and taking the ceiling.
std::vector<std::int64_t> sample_mixture(const MixtureSpec& spec,
                                         const MixtureParams& params,
                                         std::size_t n, std::uint64_t seed);

/// Mixture evaluator with the normalizing quantities precomputed once, for
/// repeated PMF/survival evaluation at fixed parameters (the MCMC hot path).
class MixtureDist {
 public:
  MixtureDist(const MixtureSpec& spec, const MixtureParams& params);

  double log_pmf(std::int64_t x) const;
  double log_survival(std::int64_t x) const;
  double survival(std::int64_t x) const { return std::exp(log_survival(x)); }
  std::int64_t sample(Rng& rng) const;

  const MixtureParams& params() const { return params_; }
  const MixtureSpec& spec() const { return spec_; }

 private:
  double log_tail_survival(double z) const;    // log[1 - G_u(z)], z >= u
  double bulk_cdf_ratio(std::int64_t x) const; // H(x)/H(u) for x in [0, u]
  std::int64_t sample_bulk(Rng& rng) const;
  std::int64_t sample_tail(Rng& rng) const;

  MixtureSpec spec_;
  MixtureParams params_;
  double sigma_u_ = 0.0;
  double log_phi_ = 0.0;
  double log1m_phi_ = 0.0;
  double log_bulk_norm_ = 0.0;          // log H(u)
  double log_p_geom_ = 0.0;             // log(1 - exp(-1/xi1)), geometric only
  double inv_xi1_ = 0.0;
  double alpha_ = 0.0;                  // 1/xi1 + 1, power-law only
  std::vector<double> power_bulk_cdf_;  // H(1..u), power-law only
};

}  // namespace tailmix
