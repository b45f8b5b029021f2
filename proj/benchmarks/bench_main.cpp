#include <cmath>

#include <benchmark/benchmark.h>

#include "dampo/dampo.hpp"

using namespace dampo;

namespace {

const ParametricParams kFig3a{10.0, {0.75, 0.0}, {0.25, 0.0}};
const ParametricParams kFig3b{10.0, {0.5, 5.0}, {0.5, -5.0}};

SpectralDensity fig3a() { return make_parametric_density(kFig3a.Gamma, kFig3a.gamma_plus, kFig3a.gamma_minus); }

OhmicBath width_bath(double width) { return {width * std::exp(0.5), 2.0, 1.0}; }

void BM_ClosedFormMoments(benchmark::State& state) {
  const auto sd = fig3a();
  for (auto _ : state) benchmark::DoNotOptimize(closed_form_moments(sd));
}
BENCHMARK(BM_ClosedFormMoments);

void BM_WeightedAverage(benchmark::State& state) {
  const auto sd = fig3a();
  for (auto _ : state) benchmark::DoNotOptimize(weighted_average(sd, [](double w) { return 1.0 / w; }));
}
BENCHMARK(BM_WeightedAverage);

void BM_QuadratureKernels(benchmark::State& state) {
  const auto sd = make_parametric_density(kFig3b.Gamma, kFig3b.gamma_plus, kFig3b.gamma_minus);
  const auto t = linear_grid(0.0, 20.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels(sd, t));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_QuadratureKernels)->Arg(101)->Arg(401)->Unit(benchmark::kMillisecond);

void BM_ClosedFormKernels(benchmark::State& state) {
  const auto t = linear_grid(0.0, 20.0, 401);
  for (auto _ : state) benchmark::DoNotOptimize(closed_form_kernels(kFig3b, t));
}
BENCHMARK(BM_ClosedFormKernels);

void BM_ThermalState(benchmark::State& state) {
  const auto sd = fig3a();
  for (auto _ : state) benchmark::DoNotOptimize(thermal_state(sd, 1.0, 1.0));
}
BENCHMARK(BM_ThermalState)->Unit(benchmark::kMicrosecond);

void BM_DensityFromCoupling(benchmark::State& state) {
  const auto V = ohmic_coupling(width_bath(0.05), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(density_from_coupling(V, 1.0));
}
BENCHMARK(BM_DensityFromCoupling)->Unit(benchmark::kMillisecond);

void BM_OscillatorSpectrum(benchmark::State& state) {
  const auto db = discretize(width_bath(0.05), 1.0, static_cast<int>(state.range(0)), 20.0);
  for (auto _ : state) benchmark::DoNotOptimize(oscillator_spectrum(db));
}
BENCHMARK(BM_OscillatorSpectrum)->Arg(300)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_NormalModes(benchmark::State& state) {
  const auto db = discretize(width_bath(0.05), 1.0, static_cast<int>(state.range(0)), 20.0);
  for (auto _ : state) benchmark::DoNotOptimize(NormalModes(db));
}
BENCHMARK(BM_NormalModes)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_CovarianceTrajectory(benchmark::State& state) {
  const auto db = discretize(width_bath(0.4), 1.0, 300, 20.0);
  const auto t = linear_grid(0.0, 40.0, 41);
  const auto init = vacuum_state(1.0, 1.0);
  set_warning_sink([](std::string_view) {});
  for (auto _ : state) benchmark::DoNotOptimize(evolve_covariance_discrete(db, 1.0, init, t));
}
BENCHMARK(BM_CovarianceTrajectory)->Unit(benchmark::kMillisecond);

void BM_OhmicMarkovIntegral(benchmark::State& state) {
  const OhmicBath b{0.3, 25.0, 1.0};
  const auto k = ohmic_kernel(b, linear_grid(0.0, 100.0 / b.omega_c, 20001));
  for (auto _ : state) benchmark::DoNotOptimize(markov_damping(k));
}
BENCHMARK(BM_OhmicMarkovIntegral)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
