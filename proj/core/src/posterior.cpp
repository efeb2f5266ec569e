#include "tailmix/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "tailmix/distributions.hpp"

namespace tailmix {

namespace {

MixtureParams params_from_row(const TraceRow& row) {
  MixtureParams p;
  p.xi1 = row.xi1;
  p.xi2 = row.xi2;
  p.sigma = row.sigma;
  p.u = row.u;
  p.phi_u = row.phi_u;
  return p;
}

}  // namespace

std::pair<Trace, Trace> split_by_model(const Trace& trace) {
  Trace constrained, unconstrained;
  for (const auto& row : trace) {
    (row.m == 1 ? constrained : unconstrained).push_back(row);
  }
  return {std::move(constrained), std::move(unconstrained)};
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty sample");
  q = std::clamp(q, 0.0, 1.0);
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

SummaryStats mean_sd(const std::vector<double>& values) {
  if (values.empty()) return {};
  double sum = 0.0;
  for (const double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

SurvivalBand survival_band(const Trace& trace, const FrequencyTable& table,
                           const MixtureSpec& spec, double level) {
  if (trace.empty()) throw std::invalid_argument("survival_band: empty trace");
  if (table.empty()) throw std::invalid_argument("survival_band: empty table");
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("survival_band: require level in (0, 1)");
  }

  std::vector<MixtureDist> dists;
  dists.reserve(trace.size());
  for (const auto& row : trace) dists.emplace_back(spec, params_from_row(row));

  const std::int64_t x_max = table.max_value();
  const double n = static_cast<double>(table.n());
  const double q_lo = (1.0 - level) / 2.0;
  const double q_hi = 1.0 - q_lo;

  SurvivalBand band;
  band.reserve(static_cast<std::size_t>(x_max));
  std::vector<double> values(trace.size());
  for (std::int64_t x = 1; x <= x_max; ++x) {
    for (std::size_t i = 0; i < dists.size(); ++i) {
      values[i] = dists[i].survival(x);
    }
    SurvivalBandRow row;
    row.x = x;
    row.emp_survival =
        static_cast<double>(table.count_exceeding(x - 1)) / n;
    row.lower = quantile(values, q_lo);
    row.median = quantile(values, 0.5);
    row.upper = quantile(values, q_hi);
    band.push_back(row);
  }
  return band;
}

KsResult ks_statistic(const Trace& trace, const FrequencyTable& table,
                      const MixtureSpec& spec) {
  if (trace.empty()) throw std::invalid_argument("ks_statistic: empty trace");
  if (table.empty()) throw std::invalid_argument("ks_statistic: empty table");

  const auto mode_row = std::max_element(
      trace.begin(), trace.end(),
      [](const TraceRow& a, const TraceRow& b) { return a.log_post < b.log_post; });
  const MixtureDist dist(spec, params_from_row(*mode_row));

  const std::int64_t x_max = table.max_value();
  const double n = static_cast<double>(table.n());
  KsResult result{-1.0, 1};
  for (std::int64_t x = 1; x <= x_max; ++x) {
    const double emp = static_cast<double>(table.count_exceeding(x - 1)) / n;
    const double gap = std::abs(emp - dist.survival(x));
    if (gap > result.ks) {
      result.ks = gap;
      result.argmax_x = x;
    }
  }
  return result;
}

ExponentPosterior exponent_posterior(const Trace& trace) {
  ExponentPosterior out;
  out.alpha1.reserve(trace.size());
  for (const auto& row : trace) {
    out.alpha1.push_back(1.0 / row.xi1 + 1.0);
    if (row.xi2 > 0.0) {
      out.alpha2.push_back(1.0 / row.xi2 + 1.0);
    } else {
      ++out.dropped_nonpositive_xi2;
    }
  }
  return out;
}

DataDiagnostics data_diagnostics(const FrequencyTable& table, double phi_lo,
                                 double phi_hi) {
  if (table.empty()) throw std::invalid_argument("data_diagnostics: empty table");
  DataDiagnostics out;
  out.proportion_le_2 = static_cast<double>(table.count_at_most(2)) /
                        static_cast<double>(table.n());
  out.zero_proportion =
      static_cast<double>(table.zero_count()) /
      static_cast<double>(table.zero_count() + table.n());

  // phi values reachable as an empirical exceedance proportion: distinct
  // n_u/n over integer thresholds u >= 1, intersected with [phi_lo, phi_hi].
  std::set<std::int64_t> tail_counts;
  const double n = static_cast<double>(table.n());
  for (std::int64_t u = 1; u <= table.max_value(); ++u) {
    const std::int64_t n_u = table.count_exceeding(u);
    const double ratio = static_cast<double>(n_u) / n;
    if (ratio < phi_lo) break;  // nonincreasing in u
    if (ratio <= phi_hi) tail_counts.insert(n_u);
  }
  out.phi_grid_size = tail_counts.size();
  return out;
}

}  // namespace tailmix
