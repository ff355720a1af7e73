#include <benchmark/benchmark.h>

#include "gccrr/datasets.hpp"
#include "gccrr/network.hpp"
#include "gccrr/training.hpp"

namespace {

using namespace gccrr;

WalkRecord record_of_length(std::size_t min_length) {
  SynthConfig cfg;
  cfg.cycles_min = cfg.cycles_max = 3;
  const auto profile = make_subject(cfg, 0);
  for (std::uint64_t seed = 1;; ++seed) {
    auto r = generate_record(cfg, profile, seed);
    if (r.length() >= min_length) return r;
  }
}

ModelParams model(benchmark::State& state) {
  ModelConfig cfg;
  cfg.hidden_dim = static_cast<std::size_t>(state.range(0));
  cfg.num_layers = static_cast<std::size_t>(state.range(1));
  return init_params(cfg);
}

void BM_Forward(benchmark::State& state) {
  const auto params = model(state);
  const auto record = record_of_length(80);
  for (auto _ : state) benchmark::DoNotOptimize(forward(params, record.imu));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(record.length()));
}
BENCHMARK(BM_Forward)->Args({16, 2})->Args({32, 2})->Args({32, 3})->Args({64, 2});

void BM_ForwardBackward(benchmark::State& state) {
  const auto params = model(state);
  const auto record = record_of_length(80);
  const auto ex = make_examples(std::span(&record, 1), Head::GccRegression);
  for (auto _ : state) {
    auto f = forward(params, ex[0].input);
    benchmark::DoNotOptimize(backward(params, f.cache, ex[0].target));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(record.length()));
}
BENCHMARK(BM_ForwardBackward)->Args({16, 2})->Args({32, 2})->Args({32, 3})->Args({64, 2});

}  // namespace

BENCHMARK_MAIN();
