#include <benchmark/benchmark.h>

#include "gccrr/datasets.hpp"
#include "gccrr/gcc_codec.hpp"
#include "gccrr/metrics.hpp"

namespace {

using namespace gccrr;

std::vector<WalkRecord> dataset() {
  SynthConfig cfg;
  cfg.num_subjects = 2;
  cfg.records_per_subject = 50;
  return generate_dataset(cfg);
}

void BM_EncodeGcc(benchmark::State& state) {
  const auto records = dataset();
  for (auto _ : state) {
    for (const auto& r : records) benchmark::DoNotOptimize(encode_gcc(r.events, r.length()));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(records.size()));
}
BENCHMARK(BM_EncodeGcc);

void BM_RestoreCycle(benchmark::State& state) {
  const auto records = dataset();
  std::vector<GccCurve> curves;
  for (const auto& r : records) curves.push_back(encode_gcc(r.events, r.length()));
  const PeakConfig peak;
  for (auto _ : state) {
    for (const auto& c : curves) benchmark::DoNotOptimize(restore_cycle(c, peak));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(curves.size()));
}
BENCHMARK(BM_RestoreCycle);

void BM_Evaluate(benchmark::State& state) {
  const auto records = dataset();
  std::vector<GccCurve> curves;
  for (const auto& r : records) curves.push_back(encode_gcc(r.events, r.length()));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(records, curves, PeakConfig{}, MatchConfig{}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(records.size()));
}
BENCHMARK(BM_Evaluate);

}  // namespace
