// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "streamtgn/incremental.hpp"
#include "streamtgn/oracle.hpp"
#include "streamtgn/synth.hpp"

namespace {

using namespace streamtgn;

constexpr std::size_t kNodes = 10'000;

const EdgeStream& stream() {
  static const EdgeStream s = [] {
    StreamSpec spec;
    spec.seed = 1;
    spec.nodes = kNodes;
    spec.edges = 60'000;
    spec.attachment = Attachment::kPreferential;
    return generate_stream(spec);
  }();
  return s;
}

// Warm an engine on the first 50k edges, then time batches from the tail.
void BM_ProcessBatch(benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  const auto mode = state.range(1) == 0 ? EngineMode::kExact : EngineMode::kDelta;
  ModelDims dims;
  dims.layers = 2;
  const auto params = init_params(1, dims);
  const auto& edges = stream().edges;
  const std::size_t warm = 50'000;
  std::size_t affected = 0;
  for (auto _ : state) {
    state.PauseTiming();
    IncrementalEngine engine(params, EngineOptions{PipelineConfig{}, mode, false}, kNodes);
    engine.process_batch(std::span(edges).first(warm));
    state.ResumeTiming();
    for (std::size_t i = warm; i + batch <= edges.size(); i += batch) {
      engine.process_batch(std::span(edges).subspan(i, batch));
      affected += engine.last_affected().all.size();
    }
  }
  state.counters["affected_per_batch"] = benchmark::Counter(
      static_cast<double>(affected) /
      static_cast<double>(state.iterations() * ((edges.size() - warm) / batch)));
}
BENCHMARK(BM_ProcessBatch)
    ->Args({200, 0})
    ->Args({200, 1})
    ->Args({1000, 0})
    ->Args({1000, 1})
    ->Unit(benchmark::kMillisecond);

void BM_FullRecompute(benchmark::State& state) {
  ModelDims dims;
  dims.layers = 2;
  const auto params = init_params(1, dims);
  OracleEngine oracle(params, PipelineConfig{}, kNodes);
  oracle.set_track_snapshot(false);
  oracle.apply_batch(stream().edges);
  const Timestamp t = oracle.store().latest_time().value();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        full_recompute(oracle.store(), oracle.memory(), params, PipelineConfig{}, t));
  }
}
BENCHMARK(BM_FullRecompute)->Unit(benchmark::kMillisecond);

// Sparse regime: 100k nodes, one layer, few interactions per node.
void BM_SparseBatch(benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  StreamSpec spec;
  spec.seed = 2;
  spec.nodes = 100'000;
  spec.edges = 20'000;
  static const EdgeStream sparse = generate_stream(spec);
  const auto params = init_params(1, ModelDims{});
  const std::size_t warm = 10'000;
  for (auto _ : state) {
    state.PauseTiming();
    IncrementalEngine engine(params, EngineOptions{}, spec.nodes);
    engine.process_batch(std::span(sparse.edges).first(warm));
    state.ResumeTiming();
    for (std::size_t i = warm; i + batch <= sparse.edges.size(); i += batch)
      engine.process_batch(std::span(sparse.edges).subspan(i, batch));
  }
}
BENCHMARK(BM_SparseBatch)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SparseFullRecompute(benchmark::State& state) {
  StreamSpec spec;
  spec.seed = 2;
  spec.nodes = 100'000;
  spec.edges = 20'000;
  const auto params = init_params(1, ModelDims{});
  OracleEngine oracle(params, PipelineConfig{}, spec.nodes);
  oracle.set_track_snapshot(false);
  oracle.apply_batch(generate_stream(spec).edges);
  const Timestamp t = oracle.store().latest_time().value();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        full_recompute(oracle.store(), oracle.memory(), params, PipelineConfig{}, t));
  }
}
BENCHMARK(BM_SparseFullRecompute)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
