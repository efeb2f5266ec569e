// Command-line front end: fit, profile, ks and simulate subcommands over the
// discrete extreme value mixture library.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tailmix/io.hpp"

namespace {

void add_prior_options(CLI::App* cmd, tailmix::PriorSpec& priors) {
  cmd->add_option("--prior.xi1_lo", priors.xi1_lo, "Uniform lower bound on xi1");
  cmd->add_option("--prior.xi1_hi", priors.xi1_hi, "Uniform upper bound on xi1");
  cmd->add_option("--prior.xi2_mean", priors.xi2_mean, "Gaussian mean of xi2");
  cmd->add_option("--prior.xi2_sd", priors.xi2_sd, "Gaussian sd of xi2");
  cmd->add_option("--prior.sigma_shape", priors.sigma_shape, "Gamma shape of sigma");
  cmd->add_option("--prior.sigma_scale", priors.sigma_scale,
                  "Gamma scale (or rate) of sigma");
  cmd->add_option("--prior.sigma_scale_is_rate", priors.sigma_scale_is_rate,
                  "Interpret sigma_scale as a rate (1/scale)");
  cmd->add_option("--prior.phi_lo", priors.phi_lo, "Uniform lower bound on phi_u");
  cmd->add_option("--prior.phi_hi", priors.phi_hi, "Uniform upper bound on phi_u");
  cmd->add_option("--prior.prior_m1", priors.prior_m1,
                  "Prior probability of the constrained model");
}

struct CommonDataFlags {
  std::string data;
  std::string format = "freq-csv";
  std::string bulk = "geometric";
};

void add_data_options(CLI::App* cmd, CommonDataFlags& flags) {
  cmd->add_option("--data", flags.data, "Input data file")->required();
  cmd->add_option("--format", flags.format, "Input format: freq-csv|raw|edges");
  cmd->add_option("--bulk", flags.bulk, "Bulk family: geometric|powerlaw");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Fits discrete extreme value mixture distributions (geometric or "
      "discrete-power-law bulk with an integer generalized Pareto tail) to "
      "heavy-tailed count data, treating the threshold as a parameter."};
  app.require_subcommand(1);

  // fit
  auto* fit = app.add_subcommand("fit", "Run the MCMC and write trace/summary/bands");
  CommonDataFlags fit_data;
  add_data_options(fit, fit_data);
  tailmix::RunConfig fit_config;
  std::string fit_mode = "both";
  std::optional<std::uint64_t> fit_seed;
  fit->add_option("--mode", fit_mode, "both|constrained|unconstrained");
  fit->add_option("--iters", fit_config.mcmc.iterations, "Total MCMC iterations");
  fit->add_option("--burnin", fit_config.mcmc.burn_in, "Burn-in iterations");
  fit->add_option("--thin", fit_config.mcmc.thin, "Thinning interval");
  fit->add_option("--seed", fit_seed, "RNG seed (TAILMIX_SEED as fallback)");
  fit->add_option("--chains", fit_config.chains, "Independent chains to merge");
  fit->add_option("--level", fit_config.band_level, "Credible band level");
  fit->add_option("--out", fit_config.out_dir, "Output directory");
  fit->add_option("--u-step", fit_config.mcmc.u_step,
                  "Max magnitude of the integer threshold proposal");
  fit->add_flag("--no-adapt", [&](std::int64_t) { fit_config.mcmc.adapt = false; },
                "Disable burn-in proposal adaptation");
  add_prior_options(fit, fit_config.priors);

  // profile
  auto* profile = app.add_subcommand(
      "profile", "Profile likelihood over the integer threshold");
  CommonDataFlags profile_data;
  add_data_options(profile, profile_data);
  tailmix::RunConfig profile_config;
  std::string profile_mode = "unconstrained";
  profile->add_option("--mode", profile_mode,
                      "constrained|unconstrained (phi plugged into the profile)");
  profile->add_option("--out", profile_config.out_dir, "Output directory");
  add_prior_options(profile, profile_config.priors);

  // ks
  auto* ks = app.add_subcommand(
      "ks", "Kolmogorov-Smirnov statistics from a stored trace");
  CommonDataFlags ks_data;
  add_data_options(ks, ks_data);
  tailmix::RunConfig ks_config;
  std::string ks_trace;
  ks->add_option("--trace", ks_trace, "trace.csv produced by fit")->required();
  ks->add_option("--out", ks_config.out_dir, "Output directory");
  add_prior_options(ks, ks_config.priors);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Draw from given parameters");
  tailmix::SimulateConfig sim_config;
  std::string sim_bulk = "geometric";
  std::optional<std::uint64_t> sim_seed;
  std::optional<double> sim_phi;
  bool sim_constrained = false;
  std::string sim_out;
  simulate->add_option("--bulk", sim_bulk, "geometric|powerlaw");
  simulate->add_option("--xi1", sim_config.params.xi1, "Bulk shape")->required();
  simulate->add_option("--xi2", sim_config.params.xi2, "Tail shape")->required();
  simulate->add_option("--sigma", sim_config.params.sigma, "Tail scale")->required();
  simulate->add_option("--u", sim_config.params.u, "Integer threshold")->required();
  simulate->add_option("--phi", sim_phi, "Exceedance probability");
  simulate->add_flag("--constrained", sim_constrained,
                     "Derive phi from the density continuity constraint");
  simulate->add_option("--n", sim_config.n, "Number of draws")->required();
  simulate->add_option("--seed", sim_seed, "RNG seed (TAILMIX_SEED as fallback)");
  simulate->add_option("--out", sim_out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed()) {
      fit_config.data_path = fit_data.data;
      fit_config.format = tailmix::parse_data_format(fit_data.format);
      fit_config.bulk = tailmix::parse_bulk_family(fit_data.bulk);
      fit_config.mode = tailmix::parse_model_mode(fit_mode);
      fit_config.mcmc.seed = tailmix::resolve_seed(fit_seed);
      tailmix::run_fit(fit_config);
    } else if (profile->parsed()) {
      profile_config.data_path = profile_data.data;
      profile_config.format = tailmix::parse_data_format(profile_data.format);
      profile_config.bulk = tailmix::parse_bulk_family(profile_data.bulk);
      profile_config.mode = tailmix::parse_model_mode(profile_mode);
      tailmix::run_profile(profile_config);
    } else if (ks->parsed()) {
      ks_config.data_path = ks_data.data;
      ks_config.format = tailmix::parse_data_format(ks_data.format);
      ks_config.bulk = tailmix::parse_bulk_family(ks_data.bulk);
      tailmix::run_ks(ks_config, ks_trace);
    } else if (simulate->parsed()) {
      sim_config.bulk = tailmix::parse_bulk_family(sim_bulk);
      sim_config.seed = tailmix::resolve_seed(sim_seed);
      if (sim_constrained == sim_phi.has_value()) {
        throw std::invalid_argument(
            "simulate: give exactly one of --phi and --constrained");
      }
      sim_config.derive_phi = sim_constrained;
      if (sim_phi) sim_config.params.phi_u = *sim_phi;
      sim_config.out = sim_out;
      tailmix::run_simulate(sim_config);
    }
  } catch (const std::exception& err) {
    std::cerr << "tailmix: error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
