#include <benchmark/benchmark.h>

#include <cmath>

#include "phasespace/dynamics.hpp"
#include "phasespace/states.hpp"
#include "phasespace/tomography.hpp"
#include "phasespace/wigner.hpp"

using namespace phasespace;

namespace {

PhaseGrid grid_for(const benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  return make_grid(n, -16.0, 16.0);
}

void BM_WignerTransform(benchmark::State& state) {
  const auto psi = gaussian_packet(grid_for(state), 1.0, 0.5, std::sqrt(0.5));
  for (auto _ : state) benchmark::DoNotOptimize(wigner_transform(psi));
}
BENCHMARK(BM_WignerTransform)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Reconstruct(benchmark::State& state) {
  const auto w = wigner_transform(cat_state(grid_for(state), 3.0, std::sqrt(0.5)));
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_wavefunction(w));
}
BENCHMARK(BM_Reconstruct)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SchrodingerSteps(benchmark::State& state) {
  const auto g = grid_for(state);
  const SchrodingerPropagator propagator(g, Potential::quartic(0.1), 1e-3);
  auto psi = gaussian_packet(g, 1.0, 0.0, std::sqrt(0.5));
  for (auto _ : state) propagator.advance(psi.samples(), 100);
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_SchrodingerSteps)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);

void BM_MoyalExactSteps(benchmark::State& state) {
  const auto g = grid_for(state);
  const MoyalPropagator propagator(g, Potential::quartic(0.1), 1e-3);
  auto w = wigner_transform(gaussian_packet(g, 1.0, 0.0, std::sqrt(0.5)));
  for (auto _ : state) propagator.advance(w, 10);
  state.SetItemsProcessed(state.iterations() * 10);
}
BENCHMARK(BM_MoyalExactSteps)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_MoyalTruncatedSteps(benchmark::State& state) {
  const auto g = make_grid(static_cast<std::size_t>(state.range(0)), -10.0, 10.0);
  const TruncatedMoyalPropagator propagator(g, Potential::quartic(0.1), 1e-3, 1);
  auto w = wigner_transform(gaussian_packet(g, 1.0, 0.0, std::sqrt(0.5)));
  for (auto _ : state) propagator.advance(w, 10);
  state.SetItemsProcessed(state.iterations() * 10);
}
BENCHMARK(BM_MoyalTruncatedSteps)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_CharacteristicSteps(benchmark::State& state) {
  const auto g = grid_for(state);
  const auto z = to_characteristic(wigner_transform(gaussian_packet(g, 1.0, 0.0, std::sqrt(0.5))));
  for (auto _ : state) benchmark::DoNotOptimize(propagate_characteristic(z, Potential::quartic(0.1), 1e-3, 10));
  state.SetItemsProcessed(state.iterations() * 10);
}
BENCHMARK(BM_CharacteristicSteps)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Rotate(benchmark::State& state) {
  const auto g = make_square_grid(static_cast<std::size_t>(state.range(0)));
  const auto w = wigner_transform(cat_state(g, 3.0, std::sqrt(0.5)));
  for (auto _ : state) benchmark::DoNotOptimize(rotate_phase_space(w, 0.3));
}
BENCHMARK(BM_Rotate)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_TomographyRoundTrip(benchmark::State& state) {
  const auto g = make_square_grid(128);
  const auto w = wigner_transform(gaussian_packet(g, 1.0, -0.5, std::sqrt(0.5)));
  const auto angles = equispaced_angles(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(inverse_tomogram(forward_tomogram(w, angles), g));
}
BENCHMARK(BM_TomographyRoundTrip)->Arg(32)->Arg(180)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
