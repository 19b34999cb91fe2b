#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "khbn/brcover.hpp"
#include "khbn/homology.hpp"
#include "khbn/ringalg.hpp"
#include "khbn/sseq.hpp"

namespace {

const std::vector<khbn::TableEntry>& table() {
  static const auto t = khbn::load_link_table(std::string(KHBN_DATA_DIR) + "/links.tsv");
  return t;
}

const khbn::Diagram& named(const char* name) { return khbn::find_entry(table(), name)->diagram; }

const char* const kLinks[] = {"trefoil_L", "figure8", "6_2", "7_4", "8_19", "L8a21"};

void BM_BuildComplex(benchmark::State& state) {
  const auto& d = named(kLinks[state.range(0)]);
  khbn::BuildOptions o;
  o.k = 2;
  for (auto _ : state) benchmark::DoNotOptimize(khbn::build_complex(d, o));
  state.SetLabel(kLinks[state.range(0)]);
}
BENCHMARK(BM_BuildComplex)->DenseRange(0, 5)->Unit(benchmark::kMillisecond);

void BM_HomologyBN2(benchmark::State& state) {
  const auto& d = named(kLinks[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(khbn::homology_of(d, 2, false, std::nullopt));
  state.SetLabel(kLinks[state.range(0)]);
}
BENCHMARK(BM_HomologyBN2)->DenseRange(0, 5)->Unit(benchmark::kMillisecond);

void BM_HomologyBN3Reduced(benchmark::State& state) {
  const auto& d = named(kLinks[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(khbn::homology_of(d, 3, true, 1));
  state.SetLabel(kLinks[state.range(0)]);
}
BENCHMARK(BM_HomologyBN3Reduced)->DenseRange(0, 5)->Unit(benchmark::kMillisecond);

void BM_Triangle(benchmark::State& state) {
  const auto& d = named(kLinks[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(khbn::verify_triangle(d, true, std::nullopt));
  state.SetLabel(kLinks[state.range(0)]);
}
BENCHMARK(BM_Triangle)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_SpectralSequence(benchmark::State& state) {
  const auto& d = named(kLinks[state.range(0)]);
  khbn::BuildOptions o;
  o.k = 3;
  const auto c = khbn::build_complex(d, o);
  const auto f = khbn::u_adic_filtration(c.chains);
  for (auto _ : state) benchmark::DoNotOptimize(khbn::filtration_pages(f));
  state.SetLabel(kLinks[state.range(0)]);
}
BENCHMARK(BM_SpectralSequence)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_BranchedCover(benchmark::State& state) {
  const auto& d = named(kLinks[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(khbn::verify_theorem_main(d, 1));
  state.SetLabel(kLinks[state.range(0)]);
}
BENCHMARK(BM_BranchedCover)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_F2Rank(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 rng(1);
  std::bernoulli_distribution bit(0.1);
  khbn::F2Mat m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (bit(rng)) m.set(r, c);
  for (auto _ : state) benchmark::DoNotOptimize(khbn::f2_rank(m));
}
BENCHMARK(BM_F2Rank)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
