#include <benchmark/benchmark.h>

#include "tailmix/distributions.hpp"
#include "tailmix/likelihood.hpp"
#include "tailmix/special_functions.hpp"

using namespace tailmix;

namespace {

FrequencyTable synthetic_table(std::size_t n, std::uint64_t seed) {
  MixtureParams p;
  p.xi1 = 1.8;
  p.xi2 = 0.4;
  p.sigma = 1.5;
  p.u = 12;
  p.phi_u = 0.1;
  return FrequencyTable::from_values(
      sample_mixture({BulkFamily::geometric, false}, p, n, seed));
}

void BM_HurwitzZeta(benchmark::State& state) {
  double s = 1.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hurwitz_zeta(s, 1.0));
    s += 1e-9;  // defeat value caching by the optimizer
  }
}
BENCHMARK(BM_HurwitzZeta);

void BM_MixtureLogPmf(benchmark::State& state) {
  MixtureParams p;
  p.xi1 = 1.2;
  p.xi2 = 0.4;
  p.sigma = 1.5;
  p.u = state.range(0);
  p.phi_u = 0.1;
  const auto bulk = state.range(1) == 0 ? BulkFamily::geometric
                                        : BulkFamily::power_law;
  const MixtureDist dist({bulk, false}, p);
  std::int64_t x = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dist.log_pmf(x));
    x = x % (p.u + 50) + 1;
  }
}
BENCHMARK(BM_MixtureLogPmf)->Args({10, 0})->Args({10, 1})->Args({200, 0})->Args({200, 1});

void BM_MixtureDistConstruct(benchmark::State& state) {
  MixtureParams p;
  p.xi1 = 1.2;
  p.xi2 = 0.4;
  p.sigma = 1.5;
  p.u = state.range(0);
  p.phi_u = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(MixtureDist({BulkFamily::power_law, false}, p));
  }
}
BENCHMARK(BM_MixtureDistConstruct)->Arg(10)->Arg(200);

void BM_LogLikelihood(benchmark::State& state) {
  const FrequencyTable table =
      synthetic_table(static_cast<std::size_t>(state.range(0)), 99);
  MixtureParams p;
  p.xi1 = 1.8;
  p.xi2 = 0.4;
  p.sigma = 1.5;
  p.u = 12;
  p.phi_u = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_likelihood(table, {BulkFamily::geometric, false}, p));
  }
  state.SetLabel(std::to_string(table.unique_values()) + " unique values");
}
BENCHMARK(BM_LogLikelihood)->Arg(10000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
