// Microbenchmarks for the window synthesis paths. The headline measurement is
// the per-unit cost of the distributed synthesis staying flat as the fleet
// grows, against the centralized oracle whose cost scales with the global
// state dimension.

#include "ddrhc/distributed.hpp"
#include "ddrhc/experiment.hpp"
#include "ddrhc/verification.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace ddrhc;

leo::ConstellationConfig ring_fleet(int total) {
  leo::ConstellationConfig c;
  c.inclination = 53.0 * M_PI / 180.0;
  c.total = total;
  c.planes = 1;
  c.phasing = 0;
  c.a_bar = 6921.0e3;
  const double chord2 = 2.0 * c.a_bar * std::sin(2.0 * M_PI / total);
  const double chord3 = 2.0 * c.a_bar * std::sin(3.0 * M_PI / total);
  c.tracking_range = 0.5 * (chord2 + chord3);
  c.max_in_neighborhood = 6;
  return c;
}

void BM_DistributedWindow(benchmark::State& state) {
  const int total = static_cast<int>(state.range(0));
  const leo::ConstellationConfig cfg = ring_fleet(total);
  for (auto _ : state) {
    const ComplexityProbe p = probe_window_complexity(cfg, 10.0, 10, 2, 0.0);
    benchmark::DoNotOptimize(p.max_unit_peak_bytes);
  }
  // Wall time divided by the fleet size: flat across fleets since each unit
  // does O(1) work per window.
  state.counters["units"] = static_cast<double>(total);
}
BENCHMARK(BM_DistributedWindow)->Arg(24)->Arg(96)->Arg(384)->Unit(benchmark::kMillisecond);

void BM_CentralizedWindow(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Network net = verify::random_network(verify::covered_chain(n), 11);
  for (auto _ : state) {
    const CentralizedResult res = synthesize_window(net, 0, 10);
    benchmark::DoNotOptimize(res.cost_to_go.P.back());
  }
}
BENCHMARK(BM_CentralizedWindow)->Arg(5)->Arg(15)->Arg(45)->Unit(benchmark::kMillisecond);

void BM_PsdRepair(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Mat G = verify::seeded_matrix(3, 5, n, n);
  const Mat M = 0.5 * (G + G.transpose());
  for (auto _ : state) benchmark::DoNotOptimize(psd_repair(M));
}
BENCHMARK(BM_PsdRepair)->Arg(12)->Arg(36)->Unit(benchmark::kMicrosecond);

void BM_TruthStep(benchmark::State& state) {
  const leo::ConstellationConfig cfg = ring_fleet(24);
  const leo::SatelliteState s0{leo::walker_nominal(cfg, {0, 0, 0}, 0.0, 3), 260.0};
  const Vec3 u(0.02, -0.01, 0.03);
  for (auto _ : state) {
    const leo::SatelliteState next = leo::truth_step(s0, u, 10.0, cfg);
    benchmark::DoNotOptimize(next.elements.a);
  }
}
BENCHMARK(BM_TruthStep)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
