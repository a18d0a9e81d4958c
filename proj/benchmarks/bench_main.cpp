#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "slip/deadbeat.hpp"
#include "slip/kalman.hpp"
#include "slip/return_map.hpp"
#include "slip/stance_analytic.hpp"
#include "slip/stance_oracle.hpp"

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

slip::PolarStanceState nominal_touchdown() {
  const slip::SystemParams p = slip::SystemParams::reference();
  return {p.rho_0, 20.0 * kDeg, -1.2, -5.0};
}

void BM_OracleStance(benchmark::State& state) {
  const slip::SystemParams p = slip::SystemParams::reference();
  slip::OracleOptions opts;
  opts.step = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto traj = slip::integrate_stance(nominal_touchdown(), p, slip::RampTorque{5.0, 0.15}, opts);
    benchmark::DoNotOptimize(traj.t_liftoff_ext);
  }
}
BENCHMARK(BM_OracleStance)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_AnalyticStance(benchmark::State& state) {
  const slip::SystemParams p = slip::SystemParams::reference();
  for (auto _ : state) {
    auto st = slip::analytic_stance_map(nominal_touchdown(), p, slip::RampTorque{5.0, 0.15});
    benchmark::DoNotOptimize(st.t_lo);
  }
}
BENCHMARK(BM_AnalyticStance);

void BM_ReturnMap(benchmark::State& state) {
  const slip::SystemParams p = slip::SystemParams::reference();
  const auto backend = state.range(0) == 0 ? slip::StanceBackend::Analytic : slip::StanceBackend::Oracle;
  const slip::ApexState apex{0.35, 1.5, 0.0, 0.0};
  for (auto _ : state) {
    auto o = slip::apex_return_map(apex, 20.0 * kDeg, slip::TorqueCommand::ramp(5.0), p, backend);
    benchmark::DoNotOptimize(o.next_apex.z_a);
  }
  state.SetLabel(backend == slip::StanceBackend::Analytic ? "analytic" : "oracle");
}
BENCHMARK(BM_ReturnMap)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_DeadbeatStep(benchmark::State& state) {
  const slip::SystemParams p = slip::SystemParams::reference();
  const slip::ApexState apex{0.35, 1.5, 0.0, 0.0};
  const slip::ApexGoal goal{0.36, 1.6};
  for (auto _ : state) {
    auto r = slip::deadbeat_step(apex, goal, p);
    benchmark::DoNotOptimize(r.action.tau_0);
  }
}
BENCHMARK(BM_DeadbeatStep)->Unit(benchmark::kMillisecond);

void BM_KalmanRts(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 1e-3);
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(1e-3 * static_cast<double>(i)) + noise(rng);
  slip::KalmanConfig cfg;
  cfg.init_from_first = true;
  for (auto _ : state) {
    auto est = slip::kalman_rts_smooth(x, cfg);
    benchmark::DoNotOptimize(est.back().vel);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KalmanRts)->Arg(1000)->Arg(10000);

}  // namespace
BENCHMARK_MAIN();
