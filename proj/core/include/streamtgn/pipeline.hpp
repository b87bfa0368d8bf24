// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

// Pieces of the batch pipeline shared by the reference and incremental
// engines: memory updates (message -> aggregate -> GRU), neighbor sampling
// rules, and the per-node attention call.
//
// Sampling rule for node v: the L most recent committed entries of v, kept
// only if t >= t_ref(v) - T_w, where t_ref(v) is v's last interaction time.
// Attention for v uses t_ref(v) as the query time.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "streamtgn/graph_store.hpp"
#include "streamtgn/model.hpp"

namespace streamtgn {

struct PipelineConfig {
  std::size_t fanout = 10;      // L
  Timestamp window = kForever;  // T_w
  Aggregator aggregator = Aggregator::kMean;

  void validate() const;
};

/// Abstract work tallies. "Node pipelines" counts distinct nodes whose
/// embedding was (re)computed at any layer.
struct WorkCounters {
  std::uint64_t node_pipelines = 0;
  std::uint64_t layer_evals = 0;
  std::uint64_t edges_attended = 0;
  std::uint64_t attention_macs = 0;
  std::uint64_t messages = 0;
  std::uint64_t gru_steps = 0;
  std::uint64_t nodes_sampled = 0;
  std::uint64_t rows_gathered = 0;
  std::uint64_t detection_ops = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t cache_misses = 0;
  std::uint64_t delta_updates = 0;

  WorkCounters& operator+=(const WorkCounters& o);
  friend bool operator==(const WorkCounters&, const WorkCounters&) = default;
};

/// Throws InputError on a feature-length mismatch and MonotonicityError when
/// timestamps decrease within the batch or precede the committed history.
void validate_batch(std::span<const TemporalEdge> batch, const TemporalStore& store);

/// 1 + the largest endpoint id in the batch (0 for an empty batch).
std::size_t node_bound(std::span<const TemporalEdge> batch);

/// Multiply-accumulates spent by one attention evaluation over `neighbors`
/// entries at `layer` (queries, keys, values, logits and output folding).
std::uint64_t attention_macs(const ModelDims& dims, std::size_t layer, std::size_t neighbors);

struct MemoryUpdate {
  NodeId node = 0;
  Vector state;
  Timestamp last = 0.0;
};

/// Stage-5 memory math for one batch, from pre-batch memory. Every edge
/// yields a source message for src and a destination message for dst with
/// delta_t = t_edge - last_interaction(pre-batch). Messages are aggregated per
/// node (arrival order: src message before dst message within an edge) and
/// one GRU step is applied per touched node. Result is sorted by node id.
std::vector<MemoryUpdate> compute_memory_updates(std::span<const TemporalEdge> batch,
                                                 const NodeMemoryTable& memory,
                                                 const ModelParameters& params,
                                                 Aggregator aggregator,
                                                 WorkCounters* counters = nullptr);

void apply_memory_updates(std::span<const MemoryUpdate> updates, NodeMemoryTable& memory);

/// Drops entries older than t_ref - window from a most-recent-first list.
std::vector<NeighborEntry> apply_window(std::vector<NeighborEntry> list, Timestamp t_ref,
                                        Timestamp window);

/// The sampled list of v as defined above, read straight from the store and
/// restricted to entries with t < before.
std::vector<NeighborEntry> sample_neighbors(const TemporalStore& store,
                                            const NodeMemoryTable& memory, NodeId v,
                                            const PipelineConfig& config,
                                            Timestamp before = kForever);

/// Layer-0 representation [s_v || x_v]; rows of `features` past its end read as zero.
Vector layer0_input(const NodeMemoryTable& memory, const Matrix& features, NodeId v,
                    std::size_t d_x);

using RowLookup = std::function<std::span<const double>(NodeId)>;

/// Attention for node v at `layer` (0-based) over an explicit sampled list.
/// `prev` yields layer-input rows (layer0_input for layer 0, else the previous
/// layer's embedding).
AttentionResult attend_node(NodeId v, std::size_t layer, std::span<const NeighborEntry> sampled,
                            const RowLookup& prev, const TemporalStore& store,
                            const NodeMemoryTable& memory, const ModelParameters& params,
                            bool with_scores = false, WorkCounters* counters = nullptr);

}  // namespace streamtgn
