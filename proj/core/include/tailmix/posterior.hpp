#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tailmix/frequency_table.hpp"
#include "tailmix/sampler.hpp"

namespace tailmix {

/// Partition a trace by model indicator, preserving order. Returns
/// (constrained rows, unconstrained rows).
std::pair<Trace, Trace> split_by_model(const Trace& trace);

struct SurvivalBandRow {
  std::int64_t x = 0;
  double emp_survival = 0.0;  // empirical Pr(X >= x), zeros excluded
  double lower = 0.0;
  double median = 0.0;
  double upper = 0.0;
};

using SurvivalBand = std::vector<SurvivalBandRow>;

/// Pointwise posterior credible band of the fitted survival function over
/// x in [1, max(data)]: per-x empirical quantiles (1-level)/2, 1/2 and
/// 1-(1-level)/2 of S_X(x) across the trace rows.
SurvivalBand survival_band(const Trace& trace, const FrequencyTable& table,
                           const MixtureSpec& spec, double level);

struct KsResult {
  double ks = 0.0;
  std::int64_t argmax_x = 0;  // smallest x attaining the maximum
};

/// Maximum absolute difference between empirical and fitted survival over
/// x in [1, max(data)], the fit taken at the best-scoring trace row (the
/// trace approximation of the joint posterior mode).
KsResult ks_statistic(const Trace& trace, const FrequencyTable& table,
                      const MixtureSpec& spec);

struct ExponentPosterior {
  std::vector<double> alpha1;  // 1/xi1 + 1, one per row
  std::vector<double> alpha2;  // 1/xi2 + 1, rows with xi2 > 0 only
  std::size_t dropped_nonpositive_xi2 = 0;
};

ExponentPosterior exponent_posterior(const Trace& trace);

struct DataDiagnostics {
  double proportion_le_2 = 0.0;   // share of sample <= 2, zeros excluded
  std::size_t phi_grid_size = 0;  // achievable empirical phi values in bounds
  double zero_proportion = 0.0;   // zeros / (zeros + n)
};

DataDiagnostics data_diagnostics(const FrequencyTable& table, double phi_lo,
                                 double phi_hi);

struct SummaryStats {
  double mean = 0.0;
  double sd = 0.0;
};

SummaryStats mean_sd(const std::vector<double>& values);

/// Empirical quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

}  // namespace tailmix
