// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>

#include "streamtgn/model.hpp"

namespace {

using namespace streamtgn;

Vector fill(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (double& x : v) x = u(rng);
  return v;
}

ModelDims dims_for(std::size_t d) {
  ModelDims dims;
  dims.d_s = dims.d_m = dims.d = dims.d_k = d;
  dims.d_t = 8;
  return dims;
}

void BM_TimeEncode(benchmark::State& state) {
  ModelDims dims;
  dims.d_t = static_cast<std::size_t>(state.range(0));
  const auto p = init_params(1, dims);
  double dt = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(time_encode(dt, p.omega));
    dt += 1.0;
  }
}
BENCHMARK(BM_TimeEncode)->Arg(8)->Arg(100);

void BM_GruUpdate(benchmark::State& state) {
  const auto dims = dims_for(static_cast<std::size_t>(state.range(0)));
  const auto p = init_params(1, dims);
  std::mt19937_64 rng(1);
  const Vector m = fill(dims.d_m, rng), s = fill(dims.d_s, rng);
  for (auto _ : state) benchmark::DoNotOptimize(gru_update(m, s, p));
}
BENCHMARK(BM_GruUpdate)->Arg(16)->Arg(64)->Arg(128);

void BM_Attention(benchmark::State& state) {
  const auto dims = dims_for(static_cast<std::size_t>(state.range(0)));
  const auto p = init_params(1, dims);
  std::mt19937_64 rng(2);
  const Vector self = fill(dims.layer_input_dim(0), rng);
  std::vector<NeighborInput> nbrs;
  for (int i = 0; i < state.range(1); ++i)
    nbrs.push_back({fill(dims.key_input_dim(0) - dims.d_t, rng), static_cast<double>(i)});
  for (auto _ : state) benchmark::DoNotOptimize(temporal_attention(self, nbrs, 100.0, 0, p));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_Attention)->Args({32, 10})->Args({64, 10})->Args({64, 30});

}  // namespace
