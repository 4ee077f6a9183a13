#include <benchmark/benchmark.h>

#include "nlspike/coefficients.hpp"
#include "nlspike/models.hpp"
#include "nlspike/spectral.hpp"

namespace {

using namespace nlspike;

SpikedModelConfig model_config(std::size_t n) {
  SpikedModelConfig c;
  c.n = n;
  c.f = Nonlinearity::abs();
  c.gamma = 1.2 * std::pow(static_cast<double>(n), 0.25);
  c.stream = {7, 1};
  return c;
}

void BM_BuildSpiked(benchmark::State& state) {
  const auto c = model_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_spiked(c).y.data());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildSpiked)->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMillisecond);

void BM_LeadingEigenpair(benchmark::State& state) {
  const auto model = build_spiked(model_config(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(leading_eigenpair(model.y).lambda1);
}
BENCHMARK(BM_LeadingEigenpair)->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMillisecond);

void BM_FullSpectrum(benchmark::State& state) {
  const auto model = build_spiked(model_config(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(full_spectrum(model.y).back());
}
BENCHMARK(BM_FullSpectrum)->RangeMultiplier(2)->Range(128, 1024)->Unit(benchmark::kMillisecond);

void BM_InfoIndex(benchmark::State& state) {
  const Nonlinearity fs[] = {Nonlinearity::abs(), Nonlinearity::tanh(), Nonlinearity::hermite(3)};
  const auto& f = fs[state.range(0)];
  for (auto _ : state) benchmark::DoNotOptimize(info_index(f, NoiseSpec{}).sigma);
  state.SetLabel(f.name());
}
BENCHMARK(BM_InfoIndex)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
