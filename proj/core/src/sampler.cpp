#include "tailmix/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

#include "tailmix/likelihood.hpp"

namespace tailmix {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogTwoPi = 1.8378770664093453;

double log_uniform_density(double x, double lo, double hi) {
  if (!(x > lo && x < hi)) return kNegInf;
  return -std::log(hi - lo);
}

double log_gamma_density(double x, double shape, double scale_or_rate,
                         bool is_rate) {
  if (!(x > 0.0)) return kNegInf;
  const double rate = is_rate ? scale_or_rate : 1.0 / scale_or_rate;
  return shape * std::log(rate) - std::lgamma(shape) +
         (shape - 1.0) * std::log(x) - rate * x;
}

double log_normal_density(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -0.5 * z * z - std::log(sd) - 0.5 * kLogTwoPi;
}

}  // namespace

void PriorSpec::validate() const {
  if (!(xi1_lo >= 0.0) || !(xi1_hi > xi1_lo)) {
    throw std::invalid_argument("priors: require 0 <= xi1_lo < xi1_hi");
  }
  if (!(xi2_sd > 0.0)) throw std::invalid_argument("priors: require xi2_sd > 0");
  if (!(sigma_shape > 0.0) || !(sigma_scale > 0.0)) {
    throw std::invalid_argument("priors: require positive Gamma hyperparameters");
  }
  if (!(phi_lo >= 0.0 && phi_lo < phi_hi && phi_hi <= 1.0)) {
    throw std::invalid_argument("priors: require 0 <= phi_lo < phi_hi <= 1");
  }
  if (!(prior_m1 >= 0.0 && prior_m1 <= 1.0)) {
    throw std::invalid_argument("priors: require prior_m1 in [0, 1]");
  }
}

double PriorSpec::log_density(double xi1, double xi2, double sigma,
                              double phi) const {
  const double lp_xi1 = log_uniform_density(xi1, xi1_lo, xi1_hi);
  if (std::isinf(lp_xi1)) return kNegInf;
  const double lp_phi = (phi >= phi_lo && phi <= phi_hi)
                            ? -std::log(phi_hi - phi_lo)
                            : kNegInf;
  if (std::isinf(lp_phi)) return kNegInf;
  const double lp_sigma =
      log_gamma_density(sigma, sigma_shape, sigma_scale, sigma_scale_is_rate);
  if (std::isinf(lp_sigma)) return kNegInf;
  return lp_xi1 + lp_phi + lp_sigma + log_normal_density(xi2, xi2_mean, xi2_sd);
}

void McmcConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("mcmc: require iterations >= 1");
  if (burn_in < 0 || burn_in >= iterations) {
    throw std::invalid_argument("mcmc: require 0 <= burn_in < iterations");
  }
  if (thin < 1) throw std::invalid_argument("mcmc: require thin >= 1");
  if (u_step < 1) throw std::invalid_argument("mcmc: require u_step >= 1");
  if (!(step_log_xi1 >= 0.0 && step_xi2 >= 0.0 && step_log_sigma >= 0.0)) {
    throw std::invalid_argument("mcmc: proposal scales must be nonnegative");
  }
}

LogPosteriorFn make_log_posterior(const FrequencyTable& table, BulkFamily bulk,
                                  const PriorSpec& priors) {
  return [&table, bulk, priors](int m, double xi1, double xi2, double sigma,
                                std::int64_t u, double& phi_out) -> double {
    phi_out = std::numeric_limits<double>::quiet_NaN();
    if (u < 1 || !(xi1 > 0.0) || !(sigma > 0.0) || !std::isfinite(xi1) ||
        !std::isfinite(xi2) || !std::isfinite(sigma)) {
      return kNegInf;
    }
    if (!(sigma + xi2 * static_cast<double>(u) > 0.0)) return kNegInf;

    const double phi = (m == 1) ? constrained_phi(bulk, xi1, xi2, sigma, u)
                                : mle_exceedance(table, u);
    phi_out = phi;
    const double lp_prior = priors.log_density(xi1, xi2, sigma, phi);
    if (std::isinf(lp_prior)) return kNegInf;

    MixtureParams params;
    params.xi1 = xi1;
    params.xi2 = xi2;
    params.sigma = sigma;
    params.u = u;
    params.phi_u = phi;
    const double ll = log_likelihood(table, {bulk, m == 1}, params);
    if (std::isinf(ll)) return kNegInf;
    return ll + lp_prior;
  };
}

double log_posterior(const FrequencyTable& table, const MixtureSpec& spec,
                     const MixtureParams& params, const PriorSpec& priors) {
  double phi = 0.0;
  return make_log_posterior(table, spec.bulk, priors)(
      spec.constrained ? 1 : 0, params.xi1, params.xi2, params.sigma, params.u,
      phi);
}

ChainState gibbs_sweep(const ChainState& state, const LogPosteriorFn& posterior,
                       const SweepScales& scales, bool allow_model_flip,
                       double prior_m1, Rng& rng, SweepStats* stats) {
  ChainState cur = state;
  const auto note = [&](int block, bool accepted) {
    if (stats == nullptr) return;
    ++stats->attempts[block];
    if (accepted) ++stats->accepts[block];
  };

  // (a) Gaussian random walk on log xi1; the log-scale walk contributes a
  // xi1'/xi1 proposal ratio.
  {
    const double log_xi1_new = std::log(cur.xi1) + rng.normal(0.0, scales.log_xi1);
    const double xi1_new = std::exp(log_xi1_new);
    double phi_new = 0.0;
    const double lp_new =
        posterior(cur.m, xi1_new, cur.xi2, cur.sigma, cur.u, phi_new);
    const double log_ratio = lp_new - cur.log_post + log_xi1_new - std::log(cur.xi1);
    const bool accept = std::log(rng.uniform01()) < log_ratio;
    if (accept) {
      cur.xi1 = xi1_new;
      cur.phi_u = phi_new;
      cur.log_post = lp_new;
    }
    note(0, accept);
  }

  // (b) Joint Gaussian random walk on (xi2, log sigma).
  {
    const double xi2_new = cur.xi2 + rng.normal(0.0, scales.xi2);
    const double log_sigma_new =
        std::log(cur.sigma) + rng.normal(0.0, scales.log_sigma);
    const double sigma_new = std::exp(log_sigma_new);
    double phi_new = 0.0;
    const double lp_new =
        posterior(cur.m, cur.xi1, xi2_new, sigma_new, cur.u, phi_new);
    const double log_ratio =
        lp_new - cur.log_post + log_sigma_new - std::log(cur.sigma);
    const bool accept = std::log(rng.uniform01()) < log_ratio;
    if (accept) {
      cur.xi2 = xi2_new;
      cur.sigma = sigma_new;
      cur.phi_u = phi_new;
      cur.log_post = lp_new;
    }
    note(1, accept);
  }

  // (c) Symmetric integer random walk on u, uniform over +-{1..u_step}.
  {
    const std::int64_t step = rng.uniform_int(1, scales.u_step);
    const std::int64_t u_new = cur.u + (rng.bernoulli(0.5) ? step : -step);
    double phi_new = 0.0;
    const double lp_new =
        u_new < 1 ? kNegInf
                  : posterior(cur.m, cur.xi1, cur.xi2, cur.sigma, u_new, phi_new);
    const bool accept = std::log(rng.uniform01()) < lp_new - cur.log_post;
    if (accept) {
      cur.u = u_new;
      cur.phi_u = phi_new;
      cur.log_post = lp_new;
    }
    note(2, accept);
  }

  // (d) Model flip M -> 1-M, accepted by the posterior ratio times the
  // model prior odds.
  if (allow_model_flip) {
    const int m_new = 1 - cur.m;
    const double prior_cur = cur.m == 1 ? prior_m1 : 1.0 - prior_m1;
    const double prior_new = m_new == 1 ? prior_m1 : 1.0 - prior_m1;
    double phi_new = 0.0;
    const double lp_new =
        posterior(m_new, cur.xi1, cur.xi2, cur.sigma, cur.u, phi_new);
    const double log_ratio =
        lp_new - cur.log_post + std::log(prior_new) - std::log(prior_cur);
    const bool accept = std::log(rng.uniform01()) < log_ratio;
    if (accept) {
      cur.m = m_new;
      cur.phi_u = phi_new;
      cur.log_post = lp_new;
    }
    note(3, accept);
  }

  return cur;
}

namespace {

ChainState initialize_chain(const FrequencyTable& table, BulkFamily bulk,
                            ModelMode mode, const PriorSpec& priors,
                            const LogPosteriorFn& posterior, Rng& rng) {
  const MixtureSpec profile_spec{bulk, mode == ModelMode::constrained_only};
  const ProfileResult profile =
      profile_threshold(table, profile_spec, priors.phi_lo, priors.phi_hi);
  const MixtureParams& best = profile.best().params;

  int m_first = 1;
  if (mode == ModelMode::unconstrained_only) {
    m_first = 0;
  } else if (mode == ModelMode::both && priors.prior_m1 < 0.5) {
    m_first = 0;
  }

  for (int attempt = 0; attempt < 200; ++attempt) {
    ChainState state;
    state.xi1 = best.xi1 * std::exp(0.1 * rng.normal());
    state.xi2 = best.xi2 + 0.1 * std::max(std::abs(best.xi2), 0.1) * rng.normal();
    state.sigma = best.sigma * std::exp(0.1 * rng.normal());
    state.u = best.u;

    for (const int m : {m_first, 1 - m_first}) {
      if (mode == ModelMode::constrained_only && m != 1) continue;
      if (mode == ModelMode::unconstrained_only && m != 0) continue;
      double phi = 0.0;
      const double lp =
          posterior(m, state.xi1, state.xi2, state.sigma, state.u, phi);
      if (std::isfinite(lp)) {
        state.m = m;
        state.phi_u = phi;
        state.log_post = lp;
        return state;
      }
    }
  }
  throw std::runtime_error("run_chain: no finite-posterior starting state found");
}

}  // namespace

Trace run_chain(const FrequencyTable& table, BulkFamily bulk, ModelMode mode,
                const PriorSpec& priors, const McmcConfig& config) {
  priors.validate();
  config.validate();
  if (table.empty()) throw std::invalid_argument("run_chain: empty table");

  const LogPosteriorFn posterior = make_log_posterior(table, bulk, priors);
  Rng rng(config.seed);
  ChainState state = initialize_chain(table, bulk, mode, priors, posterior, rng);

  SweepScales scales{config.step_log_xi1, config.step_xi2, config.step_log_sigma,
                     config.u_step};
  const bool allow_flip = mode == ModelMode::both;

  Trace trace;
  if (config.iterations > config.burn_in) {
    trace.reserve(
        static_cast<std::size_t>((config.iterations - config.burn_in) / config.thin));
  }

  constexpr std::int64_t kAdaptBatch = 100;
  constexpr double kTargetAcceptance = 0.25;
  SweepStats batch_stats;

  for (std::int64_t iter = 1; iter <= config.iterations; ++iter) {
    const bool in_burn_in = iter <= config.burn_in;
    state = gibbs_sweep(state, posterior, scales, allow_flip, priors.prior_m1,
                        rng, config.adapt && in_burn_in ? &batch_stats : nullptr);

    if (config.adapt && in_burn_in && iter % kAdaptBatch == 0) {
      const auto tune = [&](double& scale, int block) {
        if (batch_stats.attempts[block] == 0) return;
        const double rate = static_cast<double>(batch_stats.accepts[block]) /
                            static_cast<double>(batch_stats.attempts[block]);
        scale = std::clamp(scale * std::exp(rate - kTargetAcceptance), 1e-4, 1e3);
      };
      tune(scales.log_xi1, 0);
      tune(scales.xi2, 1);
      tune(scales.log_sigma, 1);  // joint block shares one acceptance rate
      batch_stats = SweepStats{};
    }

    if (!in_burn_in && (iter - config.burn_in) % config.thin == 0) {
      trace.push_back({iter, state.m, state.xi1, state.xi2, state.sigma, state.u,
                       state.phi_u, state.log_post});
    }
  }
  return trace;
}

Trace run_chains(const FrequencyTable& table, BulkFamily bulk, ModelMode mode,
                 const PriorSpec& priors, const McmcConfig& config,
                 int n_chains) {
  if (n_chains < 1) throw std::invalid_argument("run_chains: require n_chains >= 1");
  if (n_chains == 1) return run_chain(table, bulk, mode, priors, config);

  std::vector<std::future<Trace>> futures;
  futures.reserve(static_cast<std::size_t>(n_chains));
  for (int c = 0; c < n_chains; ++c) {
    McmcConfig chain_config = config;
    chain_config.seed = config.seed + 1000003ULL * static_cast<std::uint64_t>(c);
    futures.push_back(std::async(std::launch::async, [&table, bulk, mode, &priors,
                                                      chain_config] {
      return run_chain(table, bulk, mode, priors, chain_config);
    }));
  }
  Trace merged;
  for (auto& fut : futures) {
    Trace part = fut.get();
    merged.insert(merged.end(), part.begin(), part.end());
  }
  return merged;
}

BayesFactor bayes_factor(const Trace& trace, const PriorSpec& priors) {
  if (!(priors.prior_m1 > 0.0 && priors.prior_m1 < 1.0)) {
    throw std::invalid_argument("bayes_factor: require prior_m1 in (0, 1)");
  }
  BayesFactor result;
  for (const auto& row : trace) {
    if (row.m == 1) {
      ++result.rows_m1;
    } else {
      ++result.rows_m0;
    }
  }
  const double prior_odds = (1.0 - priors.prior_m1) / priors.prior_m1;
  if (result.rows_m0 == 0 || result.rows_m1 == 0) {
    result.degenerate = true;
    result.b01 = result.rows_m1 == 0
                     ? std::numeric_limits<double>::infinity()
                     : 0.0;
    return result;
  }
  result.b01 = (static_cast<double>(result.rows_m0) /
                static_cast<double>(result.rows_m1)) /
               prior_odds;
  return result;
}

}  // namespace tailmix
