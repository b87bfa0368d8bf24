// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

// Batch formation and the sequential-vs-batched comparison harness.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "streamtgn/graph_store.hpp"
#include "streamtgn/model.hpp"
#include "streamtgn/pipeline.hpp"

namespace streamtgn {

struct Batch {
  std::vector<TemporalEdge> edges;
  Timestamp t_batch = 0.0;  // largest member timestamp
  Timestamp s_max = 0.0;    // t_batch minus smallest member timestamp

  std::size_t size() const noexcept { return edges.size(); }
};

/// Wraps edges (arrival order kept) and fills t_batch and s_max.
Batch make_batch(std::vector<TemporalEdge> edges);

/// Up to B oldest queued edges; nullopt when the queue is empty.
std::optional<Batch> form_batch(EdgeQueue& queue, std::size_t batch_size);

/// Up to B oldest queued edges with t <= horizon; nullopt when none qualify.
std::optional<Batch> form_batch_until(EdgeQueue& queue, std::size_t batch_size, Timestamp horizon);

/// Count-driven split of a stream, fed through an edge queue of capacity B.
std::vector<Batch> split_by_count(std::span<const TemporalEdge> stream, std::size_t batch_size,
                                  std::size_t edge_dim);

/// Tick-driven split: one batch per tick of length `tick`, holding the edges
/// with t in [start, end) of that tick (at most max_batch each, the rest carried over).
/// Empty ticks are skipped.
std::vector<Batch> split_by_tick(std::span<const TemporalEdge> stream, Timestamp tick,
                                 std::size_t max_batch, std::size_t edge_dim);

struct DeviationRow {
  std::size_t batch_size = 0;
  double max_deviation = 0.0;
  double mean_deviation = 0.0;
};

struct StalenessReport {
  std::vector<DeviationRow> rows;
  double slope = 0.0;  // least-squares slope of max deviation over B
};

/// Replays the stream one edge at a time once, then runs the exact
/// incremental engine for every B from the same initial state and pairs
/// the predictions edge by edge.
StalenessReport compare_sequential_vs_batched(std::span<const TemporalEdge> stream,
                                              std::span<const std::size_t> batch_sizes,
                                              const ModelParameters& params,
                                              const PipelineConfig& config,
                                              std::size_t nodes = 0,
                                              const Matrix& node_features = {});

}  // namespace streamtgn
