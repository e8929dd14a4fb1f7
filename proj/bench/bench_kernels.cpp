// Parallel kernels against their serial references.
#include <benchmark/benchmark.h>

#include "qfunctor/corpus.hpp"
#include "qfunctor/kernels.hpp"

using namespace qf;

namespace {

const std::vector<BimodulePairCase>& tensor_cases() {
  static const auto cases = [] {
    auto c = kk_corpus(17, 12);
    for (const auto& x : c) interior_tensor_serial(x.e, x.f);
    return c;
  }();
  return cases;
}

template <bool Parallel>
void BM_InteriorTensor(benchmark::State& state) {
  const auto& cases = tensor_cases();
  for (auto _ : state)
    for (const auto& c : cases)
      benchmark::DoNotOptimize(Parallel ? interior_tensor(c.e, c.f) : interior_tensor_serial(c.e, c.f));
}

std::pair<FormalSeries, FormalSeries> series_pair(int K) {
  std::mt19937_64 rng(5);
  const auto f = random_poly(rng, 2, 4, 6), g = random_poly(rng, 2, 4, 6);
  return {star(f, g, K), star(g, f, K)};
}

template <bool Parallel>
void BM_SeriesStar(benchmark::State& state) {
  const auto [f, g] = series_pair(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Parallel ? star(f, g) : star_serial(f, g));
}

std::vector<int> qs(int hi) {
  std::vector<int> out;
  for (int q = 11; q <= hi; q += 4) out.push_back(q);
  return out;
}

template <bool Parallel>
void BM_DefectSweep(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto f = random_trig_poly(rng), g = random_trig_poly(rng);
  const auto q = qs(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Parallel ? defect_sweep(f, g, q) : defect_sweep_serial(f, g, q));
}

template <bool Parallel>
void BM_NormSection(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto f = random_trig_poly(rng);
  const auto q = qs(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Parallel ? norm_section(f, q) : norm_section_serial(f, q));
}

}  // namespace

BENCHMARK(BM_InteriorTensor<true>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InteriorTensor<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SeriesStar<true>)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SeriesStar<false>)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DefectSweep<true>)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DefectSweep<false>)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NormSection<true>)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NormSection<false>)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
