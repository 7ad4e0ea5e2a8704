#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "ringlab/detect.hpp"
#include "ringlab/fhn.hpp"
#include "ringlab/integrate.hpp"
#include "ringlab/kinetics.hpp"
#include "ringlab/spectrum.hpp"
#include "ringlab/topology.hpp"

using namespace ringlab;

namespace {

static void bm_fhn_rhs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  net::CouplingConfig coupling{net::Topology::directed_ring(n), 0.75};
  net::FhnParams p;
  auto ic = net::sample_initial_conditions(n, 1, 7)[0].flat();
  std::vector<double> dxdt(ic.size());
  for (auto _ : state) {
    net::fhn_rhs(p, coupling, ic, dxdt);
    benchmark::DoNotOptimize(dxdt.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_fhn_rhs)->Arg(10)->Arg(100)->Arg(1000);

static void bm_ring_integration(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  net::CouplingConfig coupling{net::Topology::directed_ring(n), 0.75};
  auto field = net::make_fhn_field({}, coupling);
  auto ic = net::sample_initial_conditions(n, 1, 7)[0].flat();
  ode::IntegratorConfig cfg;
  cfg.dense_output_dt = 0.0;
  for (auto _ : state) {
    int steps = 0;
    ode::integrate_steps(field, ic, 0.0, 100.0, cfg,
                         [&](const ode::DenseSegment&) { ++steps; });
    benchmark::DoNotOptimize(steps);
  }
}
BENCHMARK(bm_ring_integration)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

static void bm_eigenvalues(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto k = spectral::random_kinetic(n, 0.6, 42);
  for (auto _ : state) {
    auto eigs = spectral::eigenvalues(k.matrix());
    benchmark::DoNotOptimize(eigs.data());
  }
}
BENCHMARK(bm_eigenvalues)->Arg(8)->Arg(32)->Arg(64);

static void bm_wave_detection(benchmark::State& state) {
  const int n = 6;
  const double period = 36.0;
  const double dt = 0.1;
  ode::Trajectory traj;
  traj.dim = 2 * n;
  std::vector<double> x(static_cast<std::size_t>(2 * n));
  for (int i = 0; i <= 40000; ++i) {
    const double t = i * dt;
    for (int j = 0; j < n; ++j) {
      const double ph = 2.0 * 3.14159265358979 / period *
                        (t - j * period / n);
      x[static_cast<std::size_t>(2 * j)] = 0.3 * std::sin(ph);
      x[static_cast<std::size_t>(2 * j + 1)] = std::sin(ph);
    }
    traj.push(t, x);
  }
  auto topo = net::Topology::directed_ring(n);
  const double t_end = traj.final_time;
  for (auto _ : state) {
    auto cls = detect::classify_at(traj, topo, t_end, t_end);
    benchmark::DoNotOptimize(&cls);
  }
  state.SetLabel("4000s tail, n=6");
}
BENCHMARK(bm_wave_detection)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
