// Serial reference paths against their OpenMP counterparts.
#include "elandau/kinetic.hpp"
#include "elandau/penrose.hpp"
#include "elandau/volterra.hpp"

#include <benchmark/benchmark.h>

using namespace elandau;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void label(benchmark::State& st) { st.SetLabel(st.range(0) == 0 ? "serial" : "parallel"); }

void BM_KineticRhs(benchmark::State& st) {
  SimConfig c;
  c.mode = SimMode::FullNonlinear;
  c.k_max = 4;
  c.n_xi = 2048;
  c.tau_end = 10.0;
  c.xi_max = c.required_xi_max();
  c.epsilon = 0.1;
  const SpectralState s = init_state(c, {});
  SpectralState out = s;
  for (auto _ : st) {
    rhs(s, 1.0, c, out, exec_of(st));
    benchmark::DoNotOptimize(out.data().data());
  }
  label(st);
}

void BM_ResolventTable(benchmark::State& st) {
  const auto K = mode_kernel(Equilibrium::poisson(1.0, 1), ScaleFactorModel::power_law(0.25, 1.0),
                             Interaction::Repulsive, 1.0);
  const TauGrid g(10.0, 400);
  for (auto _ : st) {
    auto t = resolvent_table(K, g, 1.0, exec_of(st));
    benchmark::DoNotOptimize(t.value(g.size() - 1, 0));
  }
  label(st);
}

void BM_PenroseScan(benchmark::State& st) {
  PenroseScanOptions o;
  o.k_max = 6;
  o.n_scan = 256;
  const auto eq = Equilibrium::maxwellian(1.0, 0.05, 1);
  for (auto _ : st) {
    auto r = penrose_margin(eq, Interaction::Repulsive, o, exec_of(st));
    benchmark::DoNotOptimize(r.kappa);
  }
  label(st);
}

}  // namespace

BENCHMARK(BM_KineticRhs)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResolventTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PenroseScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
