#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "oracles.hpp"
#include "tailmix/distributions.hpp"
#include "tailmix/special_functions.hpp"

using namespace tailmix;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sum of the implemented PMF over its whole support: explicit terms to the
// cutoff plus the implemented survival past it.
double total_mass(const MixtureSpec& spec, const MixtureParams& params,
                  std::int64_t cutoff) {
  const MixtureDist dist(spec, params);
  long double sum = 0.0L;
  for (std::int64_t x = 1; x <= cutoff; ++x) {
    sum += std::exp(dist.log_pmf(x));
  }
  return static_cast<double>(sum) + dist.survival(cutoff + 1);
}

}  // namespace

TEST_SUITE("distributions") {

TEST_CASE("gpd conditional cdf: hand values") {
  CHECK(gpd_conditional_cdf(1.0, 1, 0.5, 1.0) == 0.0);
  // sigma_u = 1.5: 1 - (1 + 0.5/1.5)^-2 = 0.4375
  CHECK(gpd_conditional_cdf(2.0, 1, 0.5, 1.0) == doctest::Approx(0.4375).epsilon(1e-14));
  // exponential limit: 1 - e^-1
  CHECK(gpd_conditional_cdf(5.0, 3, 0.0, 2.0) ==
        doctest::Approx(0.6321205588285577).epsilon(1e-12));
  // beyond the xi2 < 0 endpoint (u - sigma_u/xi2 = 4) the cdf saturates
  CHECK(gpd_conditional_cdf(6.0, 1, -0.5, 2.0) == 1.0);
  CHECK_THROWS_AS(gpd_conditional_cdf(0.5, 1, 0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(gpd_conditional_cdf(3.0, 2, -1.0, 1.0), std::domain_error);
}

TEST_CASE("gpd conditional density reduces to the Pareto density") {
  // With sigma0 = xi*mu the conditional GPD is Pareto with alpha = 1/xi + 1;
  // in the (sigma, xi) parametrization that is sigma = 0.
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const double xi = 0.15 + 2.85 * rng.uniform01();
    const std::int64_t u = rng.uniform_int(1, 50);
    const double z = static_cast<double>(u) * (1.0 + 3.0 * rng.uniform01()) + 1e-6;
    const double lhs = gpd_conditional_pdf(z, u, xi, 0.0);
    const double rhs = oracles::pareto_pdf(z, 1.0 / xi + 1.0, static_cast<double>(u));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("igpd: hand values and truncated support") {
  MixtureParams p;
  p.xi2 = 0.5;
  p.sigma = 1.0;
  p.u = 1;
  CHECK(igpd_log_pmf(2, p) == doctest::Approx(std::log(0.4375)).epsilon(1e-13));

  MixtureParams q;
  q.xi2 = -0.5;
  q.sigma = 2.0;
  q.u = 1;  // upper endpoint at 4
  CHECK(igpd_log_pmf(6, q) == -kInf);
  CHECK(igpd_log_pmf(5, q) == -kInf);
  // masses over the truncated support sum to one, the last interval folding
  // in the partial mass up to the endpoint
  double total = 0.0;
  for (std::int64_t x = 2; x <= 4; ++x) total += std::exp(igpd_log_pmf(x, q));
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(igpd_log_pmf(1, p), std::domain_error);
}

TEST_CASE("igpd telescopes to one") {
  Rng rng(11);
  for (const double xi2 : {0.5, 0.0, -0.3, 2.0}) {
    const MixtureParams p = oracles::random_params(rng, xi2);
    long double total = 0.0L;
    const std::int64_t cutoff = p.u + 200000;
    for (std::int64_t x = p.u + 1; x <= cutoff; ++x) {
      const double lp = igpd_log_pmf(x, p);
      if (lp == -kInf) break;
      total += std::exp(lp);
    }
    // add the conditional tail survival past the cutoff
    const double tail =
        1.0 - gpd_conditional_cdf(static_cast<double>(cutoff), p.u, p.xi2, p.sigma);
    CHECK(static_cast<double>(total) + tail == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("bulk pmf: hand values and normalization") {
  MixtureParams atom;
  atom.xi1 = 0.7;
  atom.u = 1;
  CHECK(bulk_log_pmf(1, BulkFamily::power_law, atom) == 0.0);

  MixtureParams geo;
  geo.xi1 = 1.0 / std::log(2.0);  // success probability 1/2
  geo.u = 2;
  CHECK(bulk_log_pmf(1, BulkFamily::geometric, geo) ==
        doctest::Approx(std::log(2.0 / 3.0)).epsilon(1e-13));

  MixtureParams pow;
  pow.xi1 = 1.0;  // alpha = 2
  pow.u = 3;
  CHECK(bulk_log_pmf(2, BulkFamily::power_law, pow) ==
        doctest::Approx(std::log(0.25 / (1.0 + 0.25 + 1.0 / 9.0))).epsilon(1e-13));

  CHECK_THROWS_AS(bulk_log_pmf(4, BulkFamily::power_law, pow), std::domain_error);
  CHECK_THROWS_AS(bulk_log_pmf(0, BulkFamily::geometric, geo), std::domain_error);

  Rng rng(5);
  for (const auto bulk : {BulkFamily::geometric, BulkFamily::power_law}) {
    for (int rep = 0; rep < 10; ++rep) {
      const MixtureParams p = oracles::random_params(rng, 0.2);
      double total = 0.0;
      for (std::int64_t x = 1; x <= p.u; ++x) {
        total += std::exp(bulk_log_pmf(x, bulk, p));
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("constrained phi: hand values and monotonicity in sigma") {
  // geometric with p = 1/2, u = 2: h = 1/4, H = 3/4, sigma_u = 2 -> phi = 0.4
  CHECK(constrained_phi(BulkFamily::geometric, 1.0 / std::log(2.0), 0.5, 1.0, 2) ==
        doctest::Approx(0.4).epsilon(1e-13));
  // u = 1 balances h sigma_u = H when sigma_u = 1, for either bulk
  CHECK(constrained_phi(BulkFamily::geometric, 1.3, 0.25, 0.75, 1) ==
        doctest::Approx(0.5).epsilon(1e-13));
  CHECK(constrained_phi(BulkFamily::power_law, 0.8, 0.25, 0.75, 1) ==
        doctest::Approx(0.5).epsilon(1e-13));

  for (const auto bulk : {BulkFamily::geometric, BulkFamily::power_law}) {
    double prev = 0.0;
    for (double sigma = 0.25; sigma < 8.0; sigma += 0.25) {
      const double phi = constrained_phi(bulk, 1.4, 0.3, sigma, 5);
      CHECK(phi > prev);
      CHECK(phi > 0.0);
      CHECK(phi < 1.0);
      prev = phi;
    }
  }
}

TEST_CASE("mixture pmf: hand value and normalization over the support") {
  MixtureParams p;
  p.xi1 = 0.9;
  p.xi2 = 0.4;
  p.sigma = 1.0;
  p.u = 1;
  p.phi_u = 0.3;
  CHECK(mixture_log_pmf(1, {BulkFamily::power_law, false}, p) ==
        doctest::Approx(std::log(0.7)).epsilon(1e-14));
  CHECK_THROWS_AS(mixture_log_pmf(0, {BulkFamily::power_law, false}, p),
                  std::domain_error);

  Rng rng(21);
  for (const auto bulk : {BulkFamily::geometric, BulkFamily::power_law}) {
    for (const bool constrained : {false, true}) {
      for (int rep = 0; rep < 5; ++rep) {
        MixtureParams params = oracles::random_params(rng);
        if (constrained) {
          params.phi_u = constrained_phi(bulk, params.xi1, params.xi2,
                                         params.sigma, params.u);
        }
        const double mass =
            total_mass({bulk, constrained}, params, params.u + 50000);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("geometric-IGPD pmf equals the unit integral of the exponential-GPD") {
  Rng rng(31);
  std::vector<MixtureParams> cases;
  MixtureParams base;
  base.xi1 = 2.0;
  base.xi2 = 0.5;
  base.sigma = 1.5;
  base.u = 5;
  base.phi_u = 0.2;
  cases.push_back(base);
  for (int i = 0; i < 4; ++i) cases.push_back(oracles::random_params(rng));

  for (const MixtureParams& p : cases) {
    const MixtureSpec spec{BulkFamily::geometric, false};
    for (const std::int64_t x : {std::int64_t{1}, p.u, p.u + 1, p.u + 10}) {
      const double pmf = std::exp(mixture_log_pmf(x, spec, p));
      const double integral =
          oracles::exp_gpd_unit_integral(x, p.xi1, p.xi2, p.sigma, p.u, p.phi_u);
      CHECK(std::abs(pmf - integral) < 1e-8);
    }
  }
}

TEST_CASE("mixture survival: boundary values and telescoping") {
  Rng rng(41);
  const MixtureParams p = oracles::random_params(rng);
  const MixtureSpec spec{BulkFamily::geometric, false};
  CHECK(mixture_log_survival(1, spec, p) == 0.0);
  CHECK(mixture_log_survival(p.u + 1, spec, p) ==
        doctest::Approx(std::log(p.phi_u)).epsilon(1e-13));
  CHECK_THROWS_AS(mixture_log_survival(0, spec, p), std::domain_error);

  for (int rep = 0; rep < 200; ++rep) {
    const auto bulk =
        rng.bernoulli(0.5) ? BulkFamily::geometric : BulkFamily::power_law;
    const MixtureParams params = oracles::random_params(rng);
    const MixtureSpec s{bulk, false};
    const MixtureDist dist(s, params);
    const std::int64_t x = rng.uniform_int(1, params.u + 20);
    const double lhs = dist.survival(x) - dist.survival(x + 1);
    const double rhs = std::exp(dist.log_pmf(x));
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("survival is strictly decreasing over the occupied support") {
  Rng rng(43);
  const MixtureParams p = oracles::random_params(rng, 0.7);
  const MixtureDist dist({BulkFamily::power_law, false}, p);
  double prev = dist.survival(1);
  for (std::int64_t x = 2; x <= p.u + 30; ++x) {
    const double cur = dist.survival(x);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("xi2 -> 0 continuity at the exponential branch") {
  for (const double xi2 : {1e-9, -1e-9}) {
    MixtureParams nearly;
    nearly.xi1 = 1.5;
    nearly.xi2 = xi2;
    nearly.sigma = 2.0;
    nearly.u = 4;
    nearly.phi_u = 0.25;
    MixtureParams exact = nearly;
    exact.xi2 = 0.0;
    const MixtureSpec spec{BulkFamily::geometric, false};
    const MixtureDist d_near(spec, nearly), d_exact(spec, exact);
    for (const std::int64_t x : {std::int64_t{2}, std::int64_t{5},
                                 std::int64_t{9}, std::int64_t{40}}) {
      CHECK(std::abs(d_near.log_pmf(x) - d_exact.log_pmf(x)) < 1e-6);
      CHECK(std::abs(d_near.log_survival(x) - d_exact.log_survival(x)) < 1e-6);
    }
  }
}

TEST_CASE("discrete power law: hand value, normalization, scale-free ratio") {
  CHECK(discrete_power_law_log_pmf(1, 2.0, 1) ==
        doctest::Approx(-std::log(1.6449340668482264)).epsilon(1e-13));

  // normalization: explicit sum to 10^7 plus the zeta remainder
  const double alpha = 2.0;
  long double total = 0.0L;
  for (std::int64_t x = 10'000'000; x >= 1; --x) {
    total += std::exp(discrete_power_law_log_pmf(x, alpha, 1));
  }
  total += hurwitz_zeta(alpha, 10'000'001.0) / hurwitz_zeta(alpha, 1.0);
  CHECK(static_cast<double>(total) == doctest::Approx(1.0).epsilon(1e-8));

  for (const double a : {1.5, 2.0, 3.0}) {
    for (const std::int64_t x : {std::int64_t{3}, std::int64_t{10}}) {
      const double ratio = std::exp(discrete_power_law_log_pmf(x, a, 1) -
                                    discrete_power_law_log_pmf(2 * x, a, 1));
      CHECK(ratio == doctest::Approx(std::pow(2.0, a)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(discrete_power_law_log_pmf(1, 2.0, 2), std::domain_error);
}

TEST_CASE("sampling: degenerate bulk, determinism, Monte Carlo consistency") {
  MixtureParams atom;
  atom.xi1 = 1.0;
  atom.xi2 = 0.5;
  atom.sigma = 1.0;
  atom.u = 1;
  atom.phi_u = 0.0;
  const auto ones = sample_mixture({BulkFamily::power_law, false}, atom, 500, 3);
  for (const auto v : ones) CHECK(v == 1);

  MixtureParams p;
  p.xi1 = 1.8;
  p.xi2 = 0.4;
  p.sigma = 1.2;
  p.u = 6;
  p.phi_u = 0.3;
  const MixtureSpec spec{BulkFamily::geometric, false};
  const auto a = sample_mixture(spec, p, 2000, 17);
  const auto b = sample_mixture(spec, p, 2000, 17);
  CHECK(a == b);

  // empirical pmf within 3 binomial SEs per cell (expected count >= 10),
  // remaining mass aggregated into one cell
  const std::size_t n = 1'000'000;
  const auto draws = sample_mixture(spec, p, n, 1234);
  std::map<std::int64_t, std::int64_t> counts;
  for (const auto v : draws) ++counts[v];

  const MixtureDist dist(spec, p);
  double aggregated_p = 0.0;
  std::int64_t aggregated_n = 0;
  std::int64_t exceed = 0;
  for (const auto& [value, count] : counts) {
    if (value > p.u) exceed += count;
  }
  std::int64_t checked_cells = 0;
  for (std::int64_t x = 1; x <= counts.rbegin()->first; ++x) {
    const double prob = std::exp(dist.log_pmf(x));
    const double expected = prob * static_cast<double>(n);
    const auto it = counts.find(x);
    const double observed = it == counts.end() ? 0.0 : static_cast<double>(it->second);
    if (expected >= 10.0) {
      const double se = std::sqrt(expected * (1.0 - prob));
      CHECK(std::abs(observed - expected) <= 3.0 * se);
      ++checked_cells;
    } else {
      aggregated_p += prob;
      aggregated_n += static_cast<std::int64_t>(observed);
    }
  }
  CHECK(checked_cells > 10);
  aggregated_p += dist.survival(counts.rbegin()->first + 1);
  const double agg_expected = aggregated_p * static_cast<double>(n);
  CHECK(std::abs(static_cast<double>(aggregated_n) - agg_expected) <=
        3.0 * std::sqrt(agg_expected * (1.0 - aggregated_p)) + 1.0);

  // empirical exceedance proportion vs phi_u
  const double phi_se = std::sqrt(p.phi_u * (1.0 - p.phi_u) / static_cast<double>(n));
  CHECK(std::abs(static_cast<double>(exceed) / static_cast<double>(n) - p.phi_u) <=
        3.0 * phi_se);
}

TEST_CASE("mixture parameter validation") {
  MixtureParams p;
  p.xi1 = -1.0;
  CHECK_THROWS_AS(MixtureDist({BulkFamily::geometric, false}, p), std::domain_error);
  p = MixtureParams{};
  p.sigma = 0.5;
  p.xi2 = -0.2;
  p.u = 10;  // sigma_u = -1.5
  CHECK_THROWS_AS(MixtureDist({BulkFamily::geometric, false}, p), std::domain_error);
  p = MixtureParams{};
  p.phi_u = 1.5;
  CHECK_THROWS_AS(MixtureDist({BulkFamily::geometric, false}, p), std::domain_error);
}

}  // TEST_SUITE
