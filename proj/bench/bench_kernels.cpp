// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include "lbirch/birch.hpp"
#include "lbirch/measures.hpp"

using namespace lbirch;

namespace {

BlockSpec bench_block() {
  BlockSpec s;
  s.n = 2;
  s.m = 1;
  s.l = 4;
  s.e = {0, 0};
  s.omega = WeylElement::identity(2);
  return s;
}

void BM_BlockSumReference(benchmark::State& st) {
  const auto chi = enumerate_chars(3, 1).front();
  const auto spec = bench_block();
  for (auto _ : st) benchmark::DoNotOptimize(block_sum_reference(spec, chi));
}
BENCHMARK(BM_BlockSumReference)->Unit(benchmark::kMillisecond);

void BM_BlockSum(benchmark::State& st) {
  const auto chi = enumerate_chars(3, 1).front();
  const auto spec = bench_block();
  const int threads = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(block_sum(spec, chi, threads));
}
BENCHMARK(BM_BlockSum)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_FourierReference(benchmark::State& st) {
  const auto mu = random_distribution(3, static_cast<int>(st.range(0)), 1);
  for (auto _ : st) benchmark::DoNotOptimize(fourier_transform_reference(mu));
}
BENCHMARK(BM_FourierReference)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Fourier(benchmark::State& st) {
  const auto mu = random_distribution(3, static_cast<int>(st.range(0)), 1);
  for (auto _ : st) benchmark::DoNotOptimize(fourier_transform(mu));
}
BENCHMARK(BM_Fourier)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
