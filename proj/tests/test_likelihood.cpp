#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "tailmix/likelihood.hpp"
#include "tailmix/special_functions.hpp"

using namespace tailmix;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

FrequencyTable table_from(std::vector<FrequencyEntry> pairs) {
  return FrequencyTable::from_pairs(std::move(pairs));
}

FrequencyTable random_table(Rng& rng, int max_unique = 12) {
  std::vector<FrequencyEntry> pairs;
  const std::int64_t k = rng.uniform_int(1, max_unique);
  for (std::int64_t i = 0; i < k; ++i) {
    pairs.push_back({rng.uniform_int(1, 40), rng.uniform_int(1, 20)});
  }
  return FrequencyTable::from_pairs(std::move(pairs));
}

// Truncated-geometric MLE by staged grid search on xi1, refined to 1e-6.
double grid_search_geometric_mle(const FrequencyTable& table, std::int64_t u) {
  const auto objective = [&](double xi1) {
    double total = 0.0;
    MixtureParams p;
    p.xi1 = xi1;
    p.u = u;
    for (const auto& [value, count] : table.entries()) {
      if (value > u) continue;
      total += static_cast<double>(count) *
               bulk_log_pmf(value, BulkFamily::geometric, p);
    }
    return total;
  };
  double lo = 0.05, hi = 50.0;
  double best = lo;
  for (double step = 0.05; step > 5e-7; step /= 10.0) {
    double best_val = -kInf;
    for (double x = lo; x <= hi; x += step) {
      const double val = objective(x);
      if (val > best_val) {
        best_val = val;
        best = x;
      }
    }
    lo = std::max(0.05 * step, best - 2.0 * step);
    hi = best + 2.0 * step;
  }
  return best;
}

}  // namespace

TEST_SUITE("likelihood") {

TEST_CASE("frequency table bookkeeping") {
  const auto table = table_from({{5, 1}, {1, 2}, {5, 2}, {0, 4}});
  CHECK(table.n() == 5);
  CHECK(table.zero_count() == 4);
  CHECK(table.entries().size() == 2);
  CHECK(table.entries()[0].value == 1);
  CHECK(table.entries()[1].count == 3);
  CHECK(table.count_exceeding(0) == 5);
  CHECK(table.count_exceeding(1) == 3);
  CHECK(table.count_exceeding(4) == 3);
  CHECK(table.count_exceeding(5) == 0);
  CHECK(table.max_value() == 5);
  CHECK_THROWS_AS(table_from({{-1, 2}}), std::invalid_argument);
}

TEST_CASE("log likelihood: single observation and compressed-vs-expanded") {
  MixtureParams p;
  p.xi1 = 0.9;
  p.xi2 = 0.4;
  p.sigma = 1.0;
  p.u = 1;
  p.phi_u = 0.3;
  const MixtureSpec spec{BulkFamily::power_law, false};
  CHECK(log_likelihood(table_from({{1, 1}}), spec, p) ==
        doctest::Approx(std::log(0.7)).epsilon(1e-14));

  MixtureParams q;
  q.xi1 = 1.4;
  q.xi2 = 0.3;
  q.sigma = 1.1;
  q.u = 3;
  q.phi_u = 0.2;
  const auto table = table_from({{1, 2}, {5, 1}});
  const double expanded = mixture_log_pmf(1, spec, q) + mixture_log_pmf(1, spec, q) +
                          mixture_log_pmf(5, spec, q);
  CHECK(log_likelihood(table, spec, q) == doctest::Approx(expanded).epsilon(1e-12));

  Rng rng(8);
  for (int rep = 0; rep < 25; ++rep) {
    const auto t = random_table(rng);
    const MixtureParams params = oracles::random_params(rng, 0.6);
    const MixtureSpec s{rep % 2 == 0 ? BulkFamily::geometric : BulkFamily::power_law,
                        false};
    long double expanded_sum = 0.0L;
    for (const auto& [value, count] : t.entries()) {
      for (std::int64_t i = 0; i < count; ++i) {
        expanded_sum += mixture_log_pmf(value, s, params);
      }
    }
    CHECK(std::abs(log_likelihood(t, s, params) -
                   static_cast<double>(expanded_sum)) < 1e-9);
  }
}

TEST_CASE("log likelihood goes to -infinity instead of throwing") {
  const MixtureSpec spec{BulkFamily::geometric, false};
  MixtureParams p;
  p.xi1 = 1.0;
  p.xi2 = -0.5;
  p.sigma = 2.0;
  p.u = 1;  // endpoint at 4
  p.phi_u = 0.2;
  CHECK(log_likelihood(table_from({{1, 3}, {6, 1}}), spec, p) == -kInf);

  MixtureParams bad;
  bad.xi2 = -0.4;
  bad.sigma = 0.5;
  bad.u = 10;  // sigma_u < 0
  bad.phi_u = 0.2;
  CHECK(log_likelihood(table_from({{1, 1}}), spec, bad) == -kInf);
}

TEST_CASE("empirical exceedance proportion") {
  const auto table = table_from({{1, 1}, {2, 1}, {3, 1}, {10, 1}});
  CHECK(mle_exceedance(table, 3) == 0.25);
  CHECK(mle_exceedance(table, 10) == 0.0);
  CHECK(mle_exceedance(table, 12) == 0.0);
  CHECK(mle_exceedance(table, 0) == 1.0);
}

TEST_CASE("bulk MLE matches a fine grid search on truncated-geometric data") {
  MixtureParams truth;
  truth.xi1 = 1.7;
  truth.xi2 = 0.0;
  truth.sigma = 1.7;
  truth.u = 1;
  truth.phi_u = 0.0;
  // phi = 0 makes every draw a bulk draw from the truncated geometric
  MixtureParams upper = truth;
  upper.u = 60;
  const auto values =
      sample_mixture({BulkFamily::geometric, false}, upper, 20000, 91);
  const auto table = FrequencyTable::from_values(values);

  const std::int64_t u = table.max_value();
  const ComponentMle mle = mle_components(table, {BulkFamily::geometric, false}, u);
  const double grid = grid_search_geometric_mle(table, u);
  CHECK(std::abs(mle.xi1 - grid) < 1e-4);
  CHECK_FALSE(mle.bulk_degenerate);
}

TEST_CASE("component MLEs land within three estimated standard errors") {
  MixtureParams truth;
  truth.xi1 = 2.0;
  truth.xi2 = 0.25;
  truth.sigma = 2.0;
  truth.u = 12;
  truth.phi_u = 0.15;
  const MixtureSpec spec{BulkFamily::geometric, false};
  const auto table =
      FrequencyTable::from_values(sample_mixture(spec, truth, 100000, 2024));
  const ComponentMle mle = mle_components(table, spec, truth.u);

  // standard errors from finite-difference curvature of each product
  const auto bulk_obj = [&](double xi1) {
    MixtureParams p = truth;
    p.xi1 = xi1;
    double total = 0.0;
    for (const auto& [value, count] : table.entries()) {
      if (value > truth.u) continue;
      total += static_cast<double>(count) *
               bulk_log_pmf(value, BulkFamily::geometric, p);
    }
    return total;
  };
  const double h1 = 1e-4;
  const double d2_bulk = (bulk_obj(mle.xi1 + h1) - 2.0 * bulk_obj(mle.xi1) +
                          bulk_obj(mle.xi1 - h1)) /
                         (h1 * h1);
  const double se_xi1 = 1.0 / std::sqrt(-d2_bulk);
  CHECK(std::abs(mle.xi1 - truth.xi1) < 3.0 * se_xi1);

  const auto tail_obj = [&](double xi2, double sigma) {
    MixtureParams p = truth;
    p.xi2 = xi2;
    p.sigma = sigma;
    double total = 0.0;
    for (const auto& [value, count] : table.entries()) {
      if (value <= truth.u) continue;
      total += static_cast<double>(count) * igpd_log_pmf(value, p);
    }
    return total;
  };
  const double h2 = 1e-3;
  const double daa = (tail_obj(mle.xi2 + h2, mle.sigma) -
                      2.0 * tail_obj(mle.xi2, mle.sigma) +
                      tail_obj(mle.xi2 - h2, mle.sigma)) /
                     (h2 * h2);
  const double dbb = (tail_obj(mle.xi2, mle.sigma + h2) -
                      2.0 * tail_obj(mle.xi2, mle.sigma) +
                      tail_obj(mle.xi2, mle.sigma - h2)) /
                     (h2 * h2);
  const double dab = (tail_obj(mle.xi2 + h2, mle.sigma + h2) -
                      tail_obj(mle.xi2 + h2, mle.sigma - h2) -
                      tail_obj(mle.xi2 - h2, mle.sigma + h2) +
                      tail_obj(mle.xi2 - h2, mle.sigma - h2)) /
                     (4.0 * h2 * h2);
  const double det = daa * dbb - dab * dab;
  const double se_xi2 = std::sqrt(-dbb / det);
  const double se_sigma = std::sqrt(-daa / det);
  CHECK(std::abs(mle.xi2 - truth.xi2) < 3.0 * se_xi2);
  CHECK(std::abs(mle.sigma - truth.sigma) < 3.0 * se_sigma);
}

TEST_CASE("single unique exceedance value is flagged as degenerate") {
  const auto table = table_from({{1, 30}, {2, 20}, {9, 4}});
  const ComponentMle mle = mle_components(table, {BulkFamily::geometric, false}, 5);
  CHECK(mle.tail_degenerate);
}

TEST_CASE("profile: pure truncated-geometric data yields a flat profile") {
  // With no tail regime every split fits the sample equally well: the
  // profile stays flat across all candidate thresholds (the argmax position
  // is pure Monte Carlo noise), in sharp contrast to regime-switch data.
  MixtureParams bulk_only;
  bulk_only.xi1 = 2.5;
  bulk_only.xi2 = 0.0;
  bulk_only.sigma = 2.5;  // tail continues the same geometric decay
  bulk_only.u = 1;
  bulk_only.phi_u = std::exp(-1.0 / 2.5);  // Pr(X > 1) of the plain geometric
  const MixtureSpec spec{BulkFamily::geometric, false};
  const auto table =
      FrequencyTable::from_values(sample_mixture(spec, bulk_only, 100000, 5150));

  const ProfileResult profile = profile_threshold(table, spec, 0.005, 0.4);
  double worst = profile.best().loglik;
  for (const auto& point : profile.points) {
    CHECK(profile.best().loglik >= point.loglik);
    worst = std::min(worst, point.loglik);
  }
  CHECK(profile.points.size() >= 8);
  CHECK(profile.best().loglik - worst < 25.0);
}

TEST_CASE("profile: hard regime switch at u = 20 is located") {
  MixtureParams truth;
  truth.xi1 = 3.0;
  truth.xi2 = 0.7;
  truth.sigma = 5.0;
  truth.u = 20;
  truth.phi_u = 0.15;
  const MixtureSpec spec{BulkFamily::geometric, false};
  const auto table =
      FrequencyTable::from_values(sample_mixture(spec, truth, 100000, 808));
  const ProfileResult profile = profile_threshold(table, spec, 0.005, 0.4);
  CHECK(profile.best().u >= 18);
  CHECK(profile.best().u <= 22);
  // a regime switch produces a far-from-flat profile
  double worst = profile.best().loglik;
  for (const auto& point : profile.points) worst = std::min(worst, point.loglik);
  CHECK(profile.best().loglik - worst > 100.0);
}

TEST_CASE("profile candidate window follows the exceedance filter") {
  std::vector<FrequencyEntry> pairs;
  for (std::int64_t v = 1; v <= 200; ++v) pairs.push_back({v, 1});
  const auto table = table_from(std::move(pairs));  // n = 200, n_u = 200 - u
  const double a_phi = 0.005, b_phi = 0.4;
  const ProfileResult profile =
      profile_threshold(table, {BulkFamily::geometric, false}, a_phi, b_phi);
  // candidates are exactly the u with a_phi <= (200-u)/200 <= b_phi
  CHECK(profile.points.front().u == 120);  // 80/200 = 0.4 boundary included
  CHECK(profile.points.back().u == 199);   // 1/200 = 0.005 boundary included
  for (const auto& point : profile.points) {
    const double phi_hat = mle_exceedance(table, point.u);
    CHECK(phi_hat >= a_phi);
    CHECK(phi_hat <= b_phi);
  }

  CHECK_THROWS_AS(profile_threshold(table_from({{1, 1}}), {BulkFamily::geometric, false},
                                    0.005, 0.4),
                  std::runtime_error);
}

TEST_CASE("unconstrained likelihood dominates the constrained one") {
  Rng rng(606);
  for (int rep = 0; rep < 100; ++rep) {
    const auto bulk =
        rep % 2 == 0 ? BulkFamily::geometric : BulkFamily::power_law;
    const auto table = random_table(rng);
    MixtureParams params = oracles::random_params(rng, 0.8, 20);
    const std::int64_t n_u = table.count_exceeding(params.u);
    if (n_u == table.n() || n_u == 0) {
      params.u = table.max_value() > 1 ? table.max_value() - 1 : 1;
    }
    MixtureParams unconstrained = params;
    unconstrained.phi_u = mle_exceedance(table, params.u);
    MixtureParams constrained = params;
    constrained.phi_u =
        constrained_phi(bulk, params.xi1, params.xi2, params.sigma, params.u);
    const double lu = log_likelihood(table, {bulk, false}, unconstrained);
    const double lc = log_likelihood(table, {bulk, true}, constrained);
    CHECK(lu >= lc - 1e-9);
  }
}

}  // TEST_SUITE
