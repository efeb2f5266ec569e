#pragma once

#include <cstdint>
#include <vector>

#include "tailmix/distributions.hpp"
#include "tailmix/frequency_table.hpp"

namespace tailmix {

/// Mixture log-likelihood over a compressed sample: sum of
/// count * log_pmf(value) over unique values. Returns -infinity (not an
/// error) for parameters with nonpositive tail scale or any zero-mass
/// observation.
double log_likelihood(const FrequencyTable& table, const MixtureSpec& spec,
                      const MixtureParams& params);

/// Empirical proportion of exceedances: phi_hat = #{x_i > u} / n.
double mle_exceedance(const FrequencyTable& table, std::int64_t u);

struct ComponentMle {
  double xi1 = 0.0;
  double xi2 = 0.0;
  double sigma = 0.0;
  double loglik = 0.0;        // full mixture log-likelihood at the MLEs
  double bulk_loglik = 0.0;   // maximized bulk product
  double tail_loglik = 0.0;   // maximized tail product
  bool bulk_degenerate = false;  // no observations at or below u
  bool tail_degenerate = false;  // fewer than two unique exceedance values
};

/// Componentwise MLE at fixed threshold: 1-D golden-section on log xi1 for
/// the bulk product, Nelder-Mead on (xi2, log sigma) with random restarts
/// for the tail product. loglik plugs in the empirical phi_hat = n_u/n.
ComponentMle mle_components(const FrequencyTable& table, const MixtureSpec& spec,
                            std::int64_t u);

struct ProfilePoint {
  std::int64_t u = 0;
  double loglik = 0.0;
  MixtureParams params;  // phi_u resolved per the spec's constraint mode
  bool tail_degenerate = false;
};

struct ProfileResult {
  std::vector<ProfilePoint> points;  // sorted by u
  std::size_t argmax = 0;            // index of the best point
  const ProfilePoint& best() const { return points[argmax]; }
};

/// Profile log-likelihood over every integer threshold whose empirical
/// exceedance proportion lies in [phi_lo, phi_hi]. With spec.constrained the
/// continuity-constrained phi is plugged into the likelihood instead of the
/// empirical proportion; the component estimates are unchanged.
ProfileResult profile_threshold(const FrequencyTable& table,
                                const MixtureSpec& spec, double phi_lo,
                                double phi_hi);

}  // namespace tailmix
