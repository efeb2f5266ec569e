#include "tailmix/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "tailmix/distributions.hpp"

namespace tailmix {

namespace {

using nlohmann::json;

std::string location(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::int64_t parse_int(std::string_view token, const std::filesystem::path& path,
                       std::size_t line) {
  token = trim(token);
  std::int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw std::runtime_error(location(path, line) + ": expected an integer, got '" +
                             std::string(token) + "'");
  }
  return value;
}

double parse_double(std::string_view token, const std::filesystem::path& path,
                    std::size_t line) {
  token = trim(token);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw std::runtime_error(location(path, line) + ": expected a number, got '" +
                             std::string(token) + "'");
  }
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::vector<std::string_view> split(std::string_view s, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

void require_nonempty(const FrequencyTable& table,
                      const std::filesystem::path& path) {
  if (table.empty()) {
    throw std::runtime_error(path.string() + ": no positive values in input");
  }
}

}  // namespace

DataFormat parse_data_format(const std::string& name) {
  if (name == "freq-csv") return DataFormat::freq_csv;
  if (name == "raw") return DataFormat::raw;
  if (name == "edges") return DataFormat::edges;
  throw std::invalid_argument("unknown data format: " + name);
}

std::string to_string(DataFormat format) {
  switch (format) {
    case DataFormat::freq_csv: return "freq-csv";
    case DataFormat::raw: return "raw";
    case DataFormat::edges: return "edges";
  }
  return "?";
}

BulkFamily parse_bulk_family(const std::string& name) {
  if (name == "geometric") return BulkFamily::geometric;
  if (name == "powerlaw") return BulkFamily::power_law;
  throw std::invalid_argument("unknown bulk family: " + name);
}

std::string to_string(BulkFamily bulk) {
  return bulk == BulkFamily::geometric ? "geometric" : "powerlaw";
}

ModelMode parse_model_mode(const std::string& name) {
  if (name == "both") return ModelMode::both;
  if (name == "constrained") return ModelMode::constrained_only;
  if (name == "unconstrained") return ModelMode::unconstrained_only;
  throw std::invalid_argument("unknown model mode: " + name);
}

std::string to_string(ModelMode mode) {
  switch (mode) {
    case ModelMode::both: return "both";
    case ModelMode::constrained_only: return "constrained";
    case ModelMode::unconstrained_only: return "unconstrained";
  }
  return "?";
}

FrequencyTable ingest_frequency_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  std::vector<FrequencyEntry> pairs;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view content = trim(line);
    if (content.empty()) continue;
    if (!saw_header) {
      if (content != "x,count") {
        throw std::runtime_error(location(path, line_no) +
                                 ": expected header 'x,count'");
      }
      saw_header = true;
      continue;
    }
    const auto fields = split(content, ',');
    if (fields.size() != 2) {
      throw std::runtime_error(location(path, line_no) +
                               ": expected two comma-separated fields");
    }
    const std::int64_t value = parse_int(fields[0], path, line_no);
    const std::int64_t count = parse_int(fields[1], path, line_no);
    if (value < 0 || count < 0) {
      throw std::runtime_error(location(path, line_no) +
                               ": fields must be nonnegative");
    }
    pairs.push_back({value, count});
  }
  if (!saw_header) throw std::runtime_error(path.string() + ": missing header");
  FrequencyTable table = FrequencyTable::from_pairs(std::move(pairs));
  require_nonempty(table, path);
  return table;
}

FrequencyTable ingest_raw(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::int64_t> values;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view content = trim(line);
    if (content.empty()) continue;
    const std::int64_t value = parse_int(content, path, line_no);
    if (value < 0) {
      throw std::runtime_error(location(path, line_no) + ": negative value");
    }
    values.push_back(value);
  }
  FrequencyTable table = FrequencyTable::from_values(values);
  require_nonempty(table, path);
  return table;
}

FrequencyTable ingest_edge_list(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  std::unordered_map<std::string, std::int64_t> in_degree;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    std::istringstream tokens{std::string(content)};
    std::string source, target, extra;
    if (!(tokens >> source >> target) || (tokens >> extra)) {
      throw std::runtime_error(location(path, line_no) +
                               ": expected 'source target'");
    }
    in_degree.try_emplace(source, 0);
    ++in_degree[target];
  }
  std::vector<std::int64_t> degrees;
  degrees.reserve(in_degree.size());
  for (const auto& [node, degree] : in_degree) degrees.push_back(degree);
  FrequencyTable table = FrequencyTable::from_values(degrees);
  require_nonempty(table, path);
  return table;
}

FrequencyTable ingest(const std::filesystem::path& path, DataFormat format) {
  switch (format) {
    case DataFormat::freq_csv: return ingest_frequency_csv(path);
    case DataFormat::raw: return ingest_raw(path);
    case DataFormat::edges: return ingest_edge_list(path);
  }
  throw std::logic_error("ingest: bad format");
}

void write_frequency_csv(const FrequencyTable& table,
                         const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << "x,count\n";
  if (table.zero_count() > 0) out << "0," << table.zero_count() << "\n";
  for (const auto& [value, count] : table.entries()) {
    out << value << "," << count << "\n";
  }
}

void write_raw(const FrequencyTable& table, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  for (const auto& [value, count] : table.entries()) {
    for (std::int64_t i = 0; i < count; ++i) out << value << "\n";
  }
  for (std::int64_t i = 0; i < table.zero_count(); ++i) out << "0\n";
}

void write_edge_list(const FrequencyTable& table,
                     const std::filesystem::path& path) {
  std::int64_t total_edges = 0;
  for (const auto& [value, count] : table.entries()) total_edges += value * count;
  if (total_edges < table.zero_count()) {
    throw std::invalid_argument(
        "write_edge_list: not enough edges to reference every zero-degree node");
  }
  std::ofstream out = open_output(path);
  std::int64_t zero_sources_used = 0;
  std::int64_t node_id = 0;
  for (const auto& [value, count] : table.entries()) {
    for (std::int64_t i = 0; i < count; ++i) {
      const std::string target = "n" + std::to_string(node_id++);
      for (std::int64_t k = 0; k < value; ++k) {
        // Zero-degree nodes appear exactly once, as sources; remaining
        // in-edges are self-loops so no extra nodes come into existence.
        if (zero_sources_used < table.zero_count()) {
          out << "z" << zero_sources_used++ << " " << target << "\n";
        } else {
          out << target << " " << target << "\n";
        }
      }
    }
  }
}

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buffer, ptr);
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag_seed) {
  if (flag_seed) return *flag_seed;
  if (const char* env = std::getenv("TAILMIX_SEED")) {
    return static_cast<std::uint64_t>(std::stoull(env));
  }
  return 12345;
}

void write_trace_csv(const Trace& trace, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << "iter,M,xi1,xi2,sigma,u,phi_u,log_post\n";
  for (const auto& row : trace) {
    out << row.iter << "," << row.m << "," << format_double(row.xi1) << ","
        << format_double(row.xi2) << "," << format_double(row.sigma) << ","
        << row.u << "," << format_double(row.phi_u) << ","
        << format_double(row.log_post) << "\n";
  }
}

Trace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  Trace trace;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view content = trim(line);
    if (content.empty()) continue;
    if (!saw_header) {
      if (content != "iter,M,xi1,xi2,sigma,u,phi_u,log_post") {
        throw std::runtime_error(location(path, line_no) + ": bad trace header");
      }
      saw_header = true;
      continue;
    }
    const auto fields = split(content, ',');
    if (fields.size() != 8) {
      throw std::runtime_error(location(path, line_no) + ": expected 8 fields");
    }
    TraceRow row;
    row.iter = parse_int(fields[0], path, line_no);
    row.m = static_cast<int>(parse_int(fields[1], path, line_no));
    row.xi1 = parse_double(fields[2], path, line_no);
    row.xi2 = parse_double(fields[3], path, line_no);
    row.sigma = parse_double(fields[4], path, line_no);
    row.u = parse_int(fields[5], path, line_no);
    row.phi_u = parse_double(fields[6], path, line_no);
    row.log_post = parse_double(fields[7], path, line_no);
    trace.push_back(row);
  }
  if (!saw_header) throw std::runtime_error(path.string() + ": missing header");
  return trace;
}

void write_band_csv(const SurvivalBand& band, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << "x,emp_surv,lo,med,hi\n";
  for (const auto& row : band) {
    out << row.x << "," << format_double(row.emp_survival) << ","
        << format_double(row.lower) << "," << format_double(row.median) << ","
        << format_double(row.upper) << "\n";
  }
}

void write_profile_csv(const ProfileResult& profile,
                       const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << "u,loglik,xi1,xi2,sigma,phi_u\n";
  for (const auto& point : profile.points) {
    out << point.u << "," << format_double(point.loglik) << ","
        << format_double(point.params.xi1) << ","
        << format_double(point.params.xi2) << ","
        << format_double(point.params.sigma) << ","
        << format_double(point.params.phi_u) << "\n";
  }
}

namespace {

json priors_to_json(const PriorSpec& priors) {
  return json{{"xi1_lo", priors.xi1_lo},
              {"xi1_hi", priors.xi1_hi},
              {"xi2_mean", priors.xi2_mean},
              {"xi2_sd", priors.xi2_sd},
              {"sigma_shape", priors.sigma_shape},
              {"sigma_scale", priors.sigma_scale},
              {"sigma_scale_is_rate", priors.sigma_scale_is_rate},
              {"phi_lo", priors.phi_lo},
              {"phi_hi", priors.phi_hi},
              {"prior_m1", priors.prior_m1}};
}

json config_to_json(const RunConfig& config) {
  return json{{"data", config.data_path.string()},
              {"format", to_string(config.format)},
              {"bulk", to_string(config.bulk)},
              {"mode", to_string(config.mode)},
              {"priors", priors_to_json(config.priors)},
              {"mcmc",
               {{"iterations", config.mcmc.iterations},
                {"burn_in", config.mcmc.burn_in},
                {"thin", config.mcmc.thin},
                {"seed", config.mcmc.seed},
                {"step_log_xi1", config.mcmc.step_log_xi1},
                {"step_xi2", config.mcmc.step_xi2},
                {"step_log_sigma", config.mcmc.step_log_sigma},
                {"u_step", config.mcmc.u_step},
                {"adapt", config.mcmc.adapt}}},
              {"chains", config.chains},
              {"band_level", config.band_level},
              {"out_dir", config.out_dir.string()}};
}

json stats_to_json(const std::vector<double>& values) {
  const SummaryStats stats = mean_sd(values);
  return json{{"mean", stats.mean},
              {"sd", stats.sd},
              {"q005", quantile(values, 0.005)},
              {"q025", quantile(values, 0.025)},
              {"q500", quantile(values, 0.5)},
              {"q975", quantile(values, 0.975)},
              {"q995", quantile(values, 0.995)}};
}

json model_summary_json(const Trace& trace, const FrequencyTable& table,
                        const MixtureSpec& spec) {
  std::vector<double> xi1, xi2, sigma, u, phi;
  xi1.reserve(trace.size());
  for (const auto& row : trace) {
    xi1.push_back(row.xi1);
    xi2.push_back(row.xi2);
    sigma.push_back(row.sigma);
    u.push_back(static_cast<double>(row.u));
    phi.push_back(row.phi_u);
  }
  const ExponentPosterior exponents = exponent_posterior(trace);
  const KsResult ks = ks_statistic(trace, table, spec);

  json out;
  out["rows"] = trace.size();
  out["params"] = {{"xi1", stats_to_json(xi1)},
                   {"xi2", stats_to_json(xi2)},
                   {"sigma", stats_to_json(sigma)},
                   {"u", stats_to_json(u)},
                   {"phi_u", stats_to_json(phi)}};
  out["alpha1"] = stats_to_json(exponents.alpha1);
  if (!exponents.alpha2.empty()) {
    out["alpha2"] = stats_to_json(exponents.alpha2);
  }
  out["alpha2_dropped_nonpositive_xi2"] = exponents.dropped_nonpositive_xi2;
  out["ks"] = {{"value", ks.ks}, {"argmax_x", ks.argmax_x}};
  return out;
}

json diagnostics_to_json(const FrequencyTable& table, const PriorSpec& priors) {
  const DataDiagnostics diag =
      data_diagnostics(table, priors.phi_lo, priors.phi_hi);
  return json{{"n", table.n()},
              {"zero_count", table.zero_count()},
              {"max_value", table.max_value()},
              {"unique_values", table.unique_values()},
              {"proportion_le_2", diag.proportion_le_2},
              {"phi_grid_size", diag.phi_grid_size},
              {"zero_proportion", diag.zero_proportion},
              {"phi_lo", priors.phi_lo},
              {"phi_hi", priors.phi_hi}};
}

void write_json(const json& value, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << value.dump(2) << "\n";
}

}  // namespace

void run_fit(const RunConfig& config) {
  const FrequencyTable table = ingest(config.data_path, config.format);
  const Trace trace = run_chains(table, config.bulk, config.mode, config.priors,
                                 config.mcmc, config.chains);
  std::filesystem::create_directories(config.out_dir);
  write_trace_csv(trace, config.out_dir / "trace.csv");

  const auto [trace_m1, trace_m0] = split_by_model(trace);
  const MixtureSpec spec_m1{config.bulk, true};
  const MixtureSpec spec_m0{config.bulk, false};

  json summary;
  summary["config"] = config_to_json(config);
  summary["n"] = table.n();

  if (!trace_m1.empty()) {
    summary["models"]["constrained"] = model_summary_json(trace_m1, table, spec_m1);
  }
  if (!trace_m0.empty()) {
    summary["models"]["unconstrained"] =
        model_summary_json(trace_m0, table, spec_m0);
  }

  if (config.mode == ModelMode::both) {
    const BayesFactor bf = bayes_factor(trace, config.priors);
    summary["bayes_factor"] = {{"b01", bf.degenerate && bf.rows_m1 == 0
                                           ? json("inf")
                                           : json(bf.b01)},
                               {"rows_m0", bf.rows_m0},
                               {"rows_m1", bf.rows_m1},
                               {"degenerate", bf.degenerate}};
  }

  // band.csv carries the constrained fit when present; with both models in
  // the trace the unconstrained band lands in band_unconstrained.csv.
  if (!trace_m1.empty()) {
    write_band_csv(survival_band(trace_m1, table, spec_m1, config.band_level),
                   config.out_dir / "band.csv");
    if (!trace_m0.empty()) {
      write_band_csv(survival_band(trace_m0, table, spec_m0, config.band_level),
                     config.out_dir / "band_unconstrained.csv");
    }
  } else if (!trace_m0.empty()) {
    write_band_csv(survival_band(trace_m0, table, spec_m0, config.band_level),
                   config.out_dir / "band.csv");
  }

  write_json(summary, config.out_dir / "summary.json");
  write_json(diagnostics_to_json(table, config.priors),
             config.out_dir / "diagnostics.json");
}

void run_profile(const RunConfig& config) {
  const FrequencyTable table = ingest(config.data_path, config.format);
  // `both` profiles with the empirical phi; pass --mode constrained for the
  // continuity-constrained profile.
  const MixtureSpec spec{config.bulk, config.mode == ModelMode::constrained_only};
  const ProfileResult profile =
      profile_threshold(table, spec, config.priors.phi_lo, config.priors.phi_hi);
  std::filesystem::create_directories(config.out_dir);
  write_profile_csv(profile, config.out_dir / "profile.csv");
}

void run_ks(const RunConfig& config, const std::filesystem::path& trace_path) {
  const FrequencyTable table = ingest(config.data_path, config.format);
  const Trace trace = read_trace_csv(trace_path);
  if (trace.empty()) throw std::runtime_error("run_ks: empty trace");
  const auto [trace_m1, trace_m0] = split_by_model(trace);

  json out;
  out["trace"] = trace_path.string();
  if (!trace_m1.empty()) {
    const KsResult ks = ks_statistic(trace_m1, table, {config.bulk, true});
    out["models"]["constrained"] = {
        {"ks", ks.ks}, {"argmax_x", ks.argmax_x}, {"rows", trace_m1.size()}};
  }
  if (!trace_m0.empty()) {
    const KsResult ks = ks_statistic(trace_m0, table, {config.bulk, false});
    out["models"]["unconstrained"] = {
        {"ks", ks.ks}, {"argmax_x", ks.argmax_x}, {"rows", trace_m0.size()}};
  }
  if (!trace_m1.empty() && !trace_m0.empty()) {
    const BayesFactor bf = bayes_factor(trace, config.priors);
    out["bayes_factor"] = {{"b01", bf.b01},
                           {"rows_m0", bf.rows_m0},
                           {"rows_m1", bf.rows_m1},
                           {"degenerate", bf.degenerate}};
  }
  std::filesystem::create_directories(config.out_dir);
  write_json(out, config.out_dir / "ks.json");
}

void run_simulate(const SimulateConfig& config) {
  MixtureParams params = config.params;
  if (config.derive_phi) {
    params.phi_u = constrained_phi(config.bulk, params.xi1, params.xi2,
                                   params.sigma, params.u);
  }
  const MixtureSpec spec{config.bulk, config.derive_phi};
  const std::vector<std::int64_t> draws =
      sample_mixture(spec, params, config.n, config.seed);
  if (config.out.empty()) {
    for (const auto value : draws) std::cout << value << "\n";
  } else {
    std::ofstream out = open_output(config.out);
    for (const auto value : draws) out << value << "\n";
  }
}

}  // namespace tailmix
