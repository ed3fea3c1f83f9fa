#include <benchmark/benchmark.h>

#include <vector>

#include "dfc/cycle.hpp"
#include "dfc/gains.hpp"
#include "dfc/map_spec.hpp"
#include "dfc/roots.hpp"
#include "dfc/simulator.hpp"
#include "dfc/spectrum.hpp"
#include "dfc/stability.hpp"

namespace {

void BM_PolyRoots(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto p = dfc::char_poly_closed(n, 3, dfc::gains_uniform(n), -2.0);
  for (auto _ : state) benchmark::DoNotOptimize(dfc::poly_roots(p));
  state.SetLabel("degree " + std::to_string(p.degree()));
}
BENCHMARK(BM_PolyRoots)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_Faddeev(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const std::vector<double> mu{1.3, -0.7, 2.1};
  const auto j = dfc::build_jacobian(n, 3, dfc::gains_dk2013(n), mu);
  for (auto _ : state) benchmark::DoNotOptimize(dfc::char_poly_faddeev(j));
  state.SetLabel("dimension " + std::to_string(j.rows()));
}
BENCHMARK(BM_Faddeev)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_FindCycles(benchmark::State& state) {
  const auto m = dfc::parse_map("logistic:r=4");
  const int period = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dfc::find_cycles(m, period, 20000));
}
BENCHMARK(BM_FindCycles)->Arg(1)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  const auto m = dfc::parse_map("logistic:r=4");
  const auto target = dfc::find_cycles(m, 1, 20000).back();
  const std::vector<double> history(3, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dfc::simulate(m, dfc::gains_uniform(3), 1, history, 5000, target));
  }
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMicrosecond);

void BM_StableInterval(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = dfc::gains_dk2013(n);
  for (auto _ : state) benchmark::DoNotOptimize(dfc::stable_mu_interval(n, 1, a));
}
BENCHMARK(BM_StableInterval)->Arg(3)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
