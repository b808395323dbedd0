#include <benchmark/benchmark.h>

#include <hpdwav/manifold.hpp>
#include <hpdwav/simulate.hpp>
#include <hpdwav/wavelet.hpp>

namespace hpdwav {
namespace {

HpdGrid noisy_tvar(int n, int d) {
  return apply_noise(test_surface(SurfaceSpec{"tvar", n, n, d}), NoiseSpec{NoiseSpec::Kind::IntrinsicNormal, 0.5, 4, 1});
}

void BM_Forward(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  const HpdGrid g = noisy_tvar(n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(forward_transform(g, Order{order, order}));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Forward)->ArgsProduct({{16, 32, 64}, {1, 3, 5}})->Unit(benchmark::kMillisecond);

void BM_Inverse(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  const WaveletDecomposition dec = forward_transform(noisy_tvar(n, 3), Order{order, order});
  for (auto _ : state) benchmark::DoNotOptimize(inverse_transform(dec));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Inverse)->ArgsProduct({{16, 32, 64}, {1, 3}})->Unit(benchmark::kMillisecond);

void BM_KarcherMean(benchmark::State& state) {
  const int count = static_cast<int>(state.range(0));
  Rng rng(5);
  std::vector<HpdMatrix> points;
  for (int i = 0; i < count; ++i) points.push_back(sample_rescaled_wishart(3, 4, rng));
  for (auto _ : state) benchmark::DoNotOptimize(karcher_mean(points));
}
BENCHMARK(BM_KarcherMean)->Arg(4)->Arg(25)->Arg(121);

}  // namespace
}  // namespace hpdwav
