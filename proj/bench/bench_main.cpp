#include <benchmark/benchmark.h>

#include "regrobust/benchmarks.hpp"
#include "regrobust/localsearch.hpp"
#include "regrobust/metrics.hpp"
#include "regrobust/robustness.hpp"

using namespace regrobust;

namespace {

SampleSet dataset(BenchmarkId id, std::size_t per_class) {
  MarkovSampler s = build_sampler(id, 0.5, 20, 3);
  return generate(s, per_class, per_class).sample_set();
}

void BM_ScoreSerial(benchmark::State& st) {
  const SampleSet s = dataset(BenchmarkId::S9, static_cast<std::size_t>(st.range(0)));
  const Dra d = ground_truth(BenchmarkId::S9);
  for (auto _ : st) benchmark::DoNotOptimize(correct_serial(d, s));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(s.size()));
}
BENCHMARK(BM_ScoreSerial)->Arg(250)->Arg(2000);

void BM_ScoreParallel(benchmark::State& st) {
  const SampleSet s = dataset(BenchmarkId::S9, static_cast<std::size_t>(st.range(0)));
  const Dra d = ground_truth(BenchmarkId::S9);
  for (auto _ : st) benchmark::DoNotOptimize(correct_parallel(d, s));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(s.size()));
}
BENCHMARK(BM_ScoreParallel)->Arg(250)->Arg(2000);

void BM_Evaluate(benchmark::State& st) {
  const Raa m = build_metric(static_cast<MetricKind>(st.range(0)));
  MarkovSampler s = build_sampler(BenchmarkId::S1, 0.5, 12, 4);
  std::vector<std::pair<Sequence, Sequence>> pairs;
  for (int i = 0; i < 64; ++i) pairs.emplace_back(s.draw().seq, s.draw().seq);
  std::size_t i = 0;
  for (auto _ : st) {
    const auto& [v, w] = pairs[i++ % pairs.size()];
    benchmark::DoNotOptimize(evaluate(m, v, w));
  }
}
BENCHMARK(BM_Evaluate)
    ->Arg(static_cast<int>(MetricKind::Hamming))
    ->Arg(static_cast<int>(MetricKind::Edit))
    ->Arg(static_cast<int>(MetricKind::Dtw));

void BM_Robustness(benchmark::State& st) {
  const BenchmarkId id = st.range(0) == 0 ? BenchmarkId::S1 : BenchmarkId::S9;
  const Dra d = ground_truth(id);
  const Raa m = build_metric(MetricKind::LastLetter);
  MarkovSampler s = build_sampler(id, 0.5, 10, 5);
  std::vector<Sequence> vs;
  for (int i = 0; i < 16; ++i) vs.push_back(s.draw().seq);
  std::size_t i = 0;
  for (auto _ : st) {
    RobustnessQuery q{d, vs[i++ % vs.size()], m, Rational(1)};
    benchmark::DoNotOptimize(check_robustness(q));
  }
}
BENCHMARK(BM_Robustness)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
