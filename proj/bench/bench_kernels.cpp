// Serial reference vs OpenMP kernel for the three parallel hot spots.

#include <vector>

#include <benchmark/benchmark.h>

#include "magsim/propagation.hpp"
#include "magsim/sensitivity.hpp"
#include "magsim/stark_noise.hpp"

using namespace magsim;

namespace {

AtomicParams bench_params()
{
  AtomicParams p;
  p.gamma0 = 1e-4;
  p.delta_eff = 1e3;
  return p;
}

std::vector<double> detuning_grid(const AtomicParams& p, double i0, std::size_t n)
{
  const double lo = -i0 / p.delta_eff - 20.0 * p.gamma0;
  const double hi = -0.5 * i0 / p.delta_eff + 20.0 * p.gamma0;
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k)
    g[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  return g;
}

template <bool Parallel>
void BM_Lineshape(benchmark::State& state)
{
  const AtomicParams p = bench_params();
  AbsorptionModel m;
  const double i0 = 100.0 * p.delta_eff * p.gamma0;
  const auto grid = detuning_grid(p, i0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto v = Parallel ? broadened_lineshape(p, i0, grid, m)
                      : broadened_lineshape_serial(p, i0, grid, m);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_MonteCarlo(benchmark::State& state)
{
  const AtomicParams p = bench_params();
  const StarkModel m{p.delta_eff, 0.0};
  const double i0 = optimal_rabi_sq(p, 0.1);
  const auto prof = linear_profile(i0, 0.1, length_for_eta_linear(p, i0, 0.1), 64);
  McOptions opt;
  opt.samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto r = Parallel ? montecarlo_stark_oracle(m, p, prof, 1e10, opt)
                      : montecarlo_stark_oracle_serial(m, p, prof, 1e10, opt);
    benchmark::DoNotOptimize(r.phase.variance);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_Sweep(benchmark::State& state)
{
  const AtomicParams p = bench_params();
  const PowerMapping map;
  const auto grid = log_grid(1e-2, 1e7, static_cast<std::size_t>(state.range(0)));
  const std::vector<double> etas{0.8, 0.1, 0.06, 0.01};
  for (auto _ : state) {
    auto c = Parallel ? figure4_sweep(p, etas, grid, map) : figure4_sweep_serial(p, etas, grid, map);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 4);
}

} // namespace

BENCHMARK(BM_Lineshape<false>)->Name("lineshape/serial")->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Lineshape<true>)->Name("lineshape/omp")->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarlo<false>)->Name("montecarlo/serial")->Arg(65536)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarlo<true>)->Name("montecarlo/omp")->Arg(65536)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep<false>)->Name("sweep/serial")->Arg(10001)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep<true>)->Name("sweep/omp")->Arg(10001)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
