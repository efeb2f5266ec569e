#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "tailmix/frequency_table.hpp"
#include "tailmix/likelihood.hpp"
#include "tailmix/posterior.hpp"
#include "tailmix/sampler.hpp"

namespace tailmix {

enum class DataFormat { freq_csv, raw, edges };

DataFormat parse_data_format(const std::string& name);
std::string to_string(DataFormat format);
BulkFamily parse_bulk_family(const std::string& name);
std::string to_string(BulkFamily bulk);
ModelMode parse_model_mode(const std::string& name);
std::string to_string(ModelMode mode);

/// `x,count` CSV: rows with x = 0 accumulate into the zero bucket,
/// duplicate x values are summed.
FrequencyTable ingest_frequency_csv(const std::filesystem::path& path);

/// One nonnegative integer per line; blank lines ignored.
FrequencyTable ingest_raw(const std::filesystem::path& path);

/// Whitespace-separated `source target` per line; `#` comment lines skipped.
/// Produces the in-degree frequency table; nodes appearing only as sources
/// land in the zero bucket.
FrequencyTable ingest_edge_list(const std::filesystem::path& path);

FrequencyTable ingest(const std::filesystem::path& path, DataFormat format);

void write_frequency_csv(const FrequencyTable& table,
                         const std::filesystem::path& path);
void write_raw(const FrequencyTable& table, const std::filesystem::path& path);

/// Synthesizes an edge list whose in-degree table reproduces `table`
/// exactly, including the zero bucket. Requires sum(value*count) >=
/// zero_count so each zero-degree node can appear as a source.
void write_edge_list(const FrequencyTable& table,
                     const std::filesystem::path& path);

void write_trace_csv(const Trace& trace, const std::filesystem::path& path);
Trace read_trace_csv(const std::filesystem::path& path);
void write_band_csv(const SurvivalBand& band, const std::filesystem::path& path);
void write_profile_csv(const ProfileResult& profile,
                       const std::filesystem::path& path);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// Seed precedence: explicit flag value, then the TAILMIX_SEED environment
/// variable, then a fixed default (runs stay deterministic when unseeded).
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag_seed);

/// Everything one `fit` / `profile` / `ks` run needs.
struct RunConfig {
  std::filesystem::path data_path;
  DataFormat format = DataFormat::freq_csv;
  BulkFamily bulk = BulkFamily::geometric;
  ModelMode mode = ModelMode::both;
  PriorSpec priors;
  McmcConfig mcmc;
  int chains = 1;
  double band_level = 0.99;
  std::filesystem::path out_dir = ".";
};

/// Runs the chain(s) and writes trace.csv, summary.json, band.csv (plus
/// band_unconstrained.csv when both models are present) and
/// diagnostics.json under config.out_dir.
void run_fit(const RunConfig& config);

/// Writes profile.csv (profile likelihood over the threshold).
void run_profile(const RunConfig& config);

/// Recomputes KS statistics and the Bayes factor from a stored trace;
/// writes ks.json under config.out_dir.
void run_ks(const RunConfig& config, const std::filesystem::path& trace_path);

struct SimulateConfig {
  BulkFamily bulk = BulkFamily::geometric;
  MixtureParams params;
  bool derive_phi = false;  // resolve phi_u by the continuity constraint
  std::size_t n = 1;
  std::uint64_t seed = 12345;
  std::filesystem::path out;  // empty = stdout
};

/// Writes n draws, one integer per line (raw format).
void run_simulate(const SimulateConfig& config);

}  // namespace tailmix
