#include <benchmark/benchmark.h>

#include "tailmix/likelihood.hpp"
#include "tailmix/sampler.hpp"

using namespace tailmix;

namespace {

void BM_GibbsSweep(benchmark::State& state) {
  MixtureParams truth;
  truth.xi1 = 1.8;
  truth.xi2 = 0.4;
  truth.sigma = 1.5;
  truth.u = 12;
  truth.phi_u = 0.1;
  const auto table = FrequencyTable::from_values(
      sample_mixture({BulkFamily::geometric, false}, truth,
                     static_cast<std::size_t>(state.range(0)), 7));
  PriorSpec priors;
  priors.phi_lo = 0.001;
  priors.sigma_scale_is_rate = true;
  const LogPosteriorFn posterior =
      make_log_posterior(table, BulkFamily::geometric, priors);

  ChainState chain;
  chain.m = 0;
  chain.xi1 = truth.xi1;
  chain.xi2 = truth.xi2;
  chain.sigma = truth.sigma;
  chain.u = truth.u;
  chain.log_post =
      posterior(0, chain.xi1, chain.xi2, chain.sigma, chain.u, chain.phi_u);

  Rng rng(1);
  const SweepScales scales{0.05, 0.1, 0.2, 2};
  for (auto _ : state) {
    chain = gibbs_sweep(chain, posterior, scales, true, 0.5, rng);
    benchmark::DoNotOptimize(chain.log_post);
  }
}
BENCHMARK(BM_GibbsSweep)->Arg(10000)->Arg(100000);

void BM_ProfileThreshold(benchmark::State& state) {
  MixtureParams truth;
  truth.xi1 = 1.8;
  truth.xi2 = 0.4;
  truth.sigma = 1.5;
  truth.u = 12;
  truth.phi_u = 0.1;
  const auto table = FrequencyTable::from_values(
      sample_mixture({BulkFamily::geometric, false}, truth, 20000, 13));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        profile_threshold(table, {BulkFamily::geometric, false}, 0.005, 0.4));
  }
}
BENCHMARK(BM_ProfileThreshold);

}  // namespace
