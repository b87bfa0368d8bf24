// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

// Reference engine: recomputes every embedding from scratch after each
// batch, plus strict one-edge-at-a-time replay. Slow on purpose.

#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "streamtgn/graph_store.hpp"
#include "streamtgn/model.hpp"
#include "streamtgn/pipeline.hpp"

namespace streamtgn {

struct EngineSnapshot {
  Matrix embeddings;  // n x d
  NodeMemoryTable memory{0};
  Timestamp timestamp = 0.0;
};

/// Embeddings for all nodes from the committed state, sampling only entries
/// with t <= t_now. Pure: inputs are not modified.
EngineSnapshot full_recompute(const TemporalStore& store, const NodeMemoryTable& memory,
                              const ModelParameters& params, const PipelineConfig& config,
                              Timestamp t_now, const Matrix& node_features = {},
                              WorkCounters* counters = nullptr);

/// The same value full_recompute produces for row v, computed on demand by
/// recursing only through v's sampled neighborhood. Bit-identical to the
/// full path.
Vector embed_node(const TemporalStore& store, const NodeMemoryTable& memory,
                  const ModelParameters& params, const PipelineConfig& config, Timestamp t_now,
                  NodeId v, const Matrix& node_features = {}, WorkCounters* counters = nullptr);

class OracleEngine {
 public:
  OracleEngine(ModelParameters params, PipelineConfig config, std::size_t nodes = 0,
               Matrix node_features = {});

  /// Predicts every batch edge from the current snapshot (pre-batch state),
  /// commits memory and edges, then recomputes the snapshot. Empty batch:
  /// no state change.
  std::vector<double> apply_batch(std::span<const TemporalEdge> batch);

  /// When disabled, apply_batch skips the post-batch recompute and the
  /// snapshot goes stale; refresh() brings it back.
  void set_track_snapshot(bool on) { track_snapshot_ = on; }
  void refresh();

  const EngineSnapshot& snapshot() const noexcept { return snapshot_; }
  const TemporalStore& store() const noexcept { return store_; }
  const NodeMemoryTable& memory() const noexcept { return memory_; }
  const ModelParameters& params() const noexcept { return params_; }
  const PipelineConfig& config() const noexcept { return config_; }
  const Matrix& node_features() const noexcept { return features_; }
  std::size_t node_count() const noexcept { return memory_.size(); }
  const WorkCounters& last_counters() const noexcept { return last_counters_; }

 private:
  void grow(std::size_t n);

  ModelParameters params_;
  PipelineConfig config_;
  Matrix features_;
  TemporalStore store_;
  NodeMemoryTable memory_;
  EngineSnapshot snapshot_;
  WorkCounters last_counters_;
  bool track_snapshot_ = true;
};

struct SequentialReplay {
  std::vector<double> predictions;
  NodeMemoryTable memory{0};
};

/// Strict sequential processing: each edge is its own batch. Predictions use
/// on-demand embeddings of the two endpoints.
SequentialReplay replay_sequential(std::span<const TemporalEdge> stream,
                                   const ModelParameters& params, const PipelineConfig& config,
                                   std::size_t nodes = 0, const Matrix& node_features = {});

/// Brute-force affected set: K-hop closure of the batch endpoints under the
/// "appears in the sampled list of" relation, with lists rebuilt from the
/// (post-batch) store and memory by scanning every node. Sorted.
std::vector<NodeId> bfs_affected(std::span<const TemporalEdge> batch, const TemporalStore& store,
                                 const NodeMemoryTable& memory, const PipelineConfig& config,
                                 std::size_t layers);

/// "# streamtgn-snapshot v1 n=<n> d=<d> t=<t>" then one "v,x1,...,xd" row per node.
void write_snapshot(const EngineSnapshot& snapshot, std::ostream& out);
EngineSnapshot read_snapshot(std::istream& in);

}  // namespace streamtgn
