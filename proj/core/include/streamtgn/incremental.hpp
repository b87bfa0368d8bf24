// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

// Incremental engine.
//
// Per batch:
//   1. predict every batch edge from cached (pre-batch) embeddings;
//   2. memory update for the batch endpoints, edges appended to the store;
//   3. neighbor-cache refresh for the endpoints and affected-set detection;
//   4. recomputation of the affected embeddings, layer by layer, over rows
//      fetched with a sorted gather.
// The embeddings produced in step 4 serve the predictions of the next batch.
//
// Affected set. h^(l)_v depends on v's own layer l-1 row and on the layer l-1
// rows of the nodes in v's sampled list. With D_0 the batch endpoints, the
// nodes whose layer-l row can change are
//   D_l = D_{l-1} ∪ { v : v's sampled list contains a node of D_{l-1} },
// so the affected set is D_K, found by BFS over a reverse index
// (u -> nodes that sample u) kept next to the neighbor cache.
//
// Exact mode recomputes every node of D_l at layer l. Delta mode recomputes
// the batch endpoints eagerly; every other affected (node, layer) is marked
// pending and refreshed on demand, either from its attention cache entry
// (only some neighbors changed) or from scratch (its own input changed).
// Cached rows of pending nodes lag behind until refreshed or rebuilt.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "streamtgn/graph_store.hpp"
#include "streamtgn/model.hpp"
#include "streamtgn/pipeline.hpp"

namespace streamtgn {

/// How one node's sampled list moved during a batch.
struct ChangeRecord {
  std::vector<NeighborEntry> added;    // new entries, most recent first
  std::vector<NeighborEntry> expired;  // evicted past L or aged out of the window
  std::vector<NodeId> updated;         // sorted neighbor ids of kept entries whose memory changed
  std::size_t updated_entries = 0;     // kept entries pointing at those ids
  std::size_t size_after = 0;          // |N_v| after the batch

  std::size_t delta_size() const noexcept {
    return added.size() + expired.size() + updated_entries;
  }
};

class NeighborCache {
 public:
  NeighborCache(std::size_t fanout, Timestamp window);

  void ensure_nodes(std::size_t n);
  std::size_t size() const noexcept { return lists_.size(); }
  std::size_t fanout() const noexcept { return fanout_; }
  Timestamp window() const noexcept { return window_; }

  /// Sampled list of v, most recent first, at most L entries.
  std::span<const NeighborEntry> list(NodeId v) const { return lists_.at(v); }
  /// Nodes whose sampled list contains u (one element per entry).
  std::span<const NodeId> samplers(NodeId u) const { return samplers_.at(u); }

  /// Prepends `fresh` (most recent first) to v's list, truncates to L and
  /// drops entries older than t_ref - T_w. Fills added/expired/size_after.
  ChangeRecord update(NodeId v, std::span<const NeighborEntry> fresh, Timestamp t_ref);

 private:
  std::size_t fanout_;
  Timestamp window_;
  std::vector<std::vector<NeighborEntry>> lists_;
  std::vector<std::vector<NodeId>> samplers_;
};

struct AffectedSet {
  std::vector<NodeId> direct;                // batch endpoints, sorted
  std::vector<NodeId> all;                   // D_K, sorted
  std::vector<std::uint32_t> hops;           // BFS distance of all[i] from direct
  std::map<NodeId, ChangeRecord> changes;    // nodes within one hop

  bool empty() const noexcept { return all.empty(); }
  /// D_l as a sorted list.
  std::vector<NodeId> within(std::size_t l) const;
};

/// Stage 1 plus detection. Expects the batch already appended to the store
/// with consecutive ids starting at first_edge, and memory already holding
/// the post-batch last-interaction times.
AffectedSet detect_affected(std::span<const TemporalEdge> batch, EdgeId first_edge,
                            NeighborCache& cache, const NodeMemoryTable& memory,
                            std::size_t layers, WorkCounters* counters = nullptr);

struct GatherResult {
  Matrix rows;                     // rows[i] = table[ids[i]]
  std::vector<std::size_t> order;  // order[k] = position in ids of the k-th smallest id
  std::vector<std::size_t> inverse;  // inverse[i] = k such that order[k] = i
};

/// Gathers table rows by id through a sorted pass. Throws InputError on an
/// out-of-range id.
GatherResult gather_sorted(std::span<const NodeId> ids, const Matrix& table);

/// One neighbor inside an attention cache entry.
struct CachedNeighbor {
  EdgeId edge = 0;
  NodeId neighbor = 0;
  Timestamp t = 0.0;
  NeighborScore score;
};

/// Cached attention state of one (node, layer): queries, per-neighbor logits
/// and output-space values, and per head the running normalizer kept as
/// (max logit m, z = sum exp(logit - m), s = sum exp(logit - m) * value).
struct AttentionCacheEntry {
  bool valid = false;
  Timestamp t_ref = 0.0;
  std::vector<Vector> queries;
  std::vector<CachedNeighbor> records;
  std::vector<double> max_logit;
  std::vector<double> z;
  std::vector<Vector> weighted;
  std::vector<double> z_peak;  // largest z since the last resum, same scale as z
  Vector output;  // embedding last produced for this entry

  /// Rebuilds the per-head sums from `records`.
  void resum(std::size_t heads, std::size_t d);
  /// sum over heads of s/z; zero when there are no records.
  Vector sum_embedding(std::size_t d) const;
  /// exp(m) * z for head h, as a value comparable across updates.
  double normalizer(std::size_t h) const;

  static AttentionCacheEntry from_scores(std::vector<Vector> queries,
                                         std::span<const NeighborEntry> sampled,
                                         std::vector<NeighborScore> scores, Timestamp t_ref,
                                         Vector output);
};

struct DeltaChange {
  std::vector<std::pair<NeighborEntry, NeighborInput>> added;  // most recent first
  std::vector<EdgeId> expired;
  std::vector<std::pair<EdgeId, NeighborInput>> updated;        // refreshed inputs

  bool empty() const noexcept { return added.empty() && expired.empty() && updated.empty(); }
};

/// Quantities of one delta step, enough to evaluate the error bound
///   (|dN| / |N|) * max ||value|| * sum_h |1 - Z_old,h / Z_new,h|.
struct DeltaReport {
  std::size_t changed = 0;
  std::size_t size_after = 0;
  double max_value_norm = 0.0;
  std::vector<double> z_old, z_new;
  bool resummed = false;

  double bound() const;
};

/// Applies added/expired/updated neighbors to a cached entry in place and
/// returns the new embedding. An empty change returns the cached output
/// untouched. Added and expired terms renormalize exactly;
/// updated entries are rescored from the inputs given. Returns nullopt when
/// the entry is invalid, which means the caller must take the exact path.
std::optional<Vector> delta_embed(AttentionCacheEntry& entry, const DeltaChange& change,
                                  std::size_t layer, const ModelParameters& params,
                                  DeltaReport* report = nullptr);

struct EngineOptions {
  PipelineConfig pipeline;
  EngineMode mode = EngineMode::kExact;
  /// Delta mode: check every delta step against a plain softmax over the
  /// refreshed neighbor set and count bound violations.
  bool audit_delta = false;
};

struct DeltaAudit {
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  double max_error = 0.0;
  double max_excess = 0.0;  // largest error - bound seen (may be negative)
};

/// (node, |dN_v|, |N_v|) for the drift estimator.
struct NodeChange {
  NodeId node = 0;
  std::size_t changed = 0;
  std::size_t size = 0;
};

class IncrementalEngine {
 public:
  IncrementalEngine(ModelParameters params, EngineOptions options, std::size_t nodes = 0,
                    Matrix node_features = {});

  /// One batch; returns one score per edge. Empty batch: nothing happens.
  std::vector<double> process_batch(std::span<const TemporalEdge> batch);

  /// Cached final-layer rows. In delta mode pending rows may be stale.
  const Matrix& embeddings() const noexcept { return reps_.back(); }
  /// Row of level l (0 = [memory || features], K = final embedding).
  const Matrix& level(std::size_t l) const { return reps_.at(l); }
  /// Brings v's final embedding up to date (delta mode) and returns it.
  std::span<const double> fresh_embedding(NodeId v);

  void rebuild_partial(std::span<const NodeId> nodes);
  void rebuild_full();

  const AffectedSet& last_affected() const noexcept { return affected_; }
  const WorkCounters& last_counters() const noexcept { return last_; }
  const WorkCounters& total_counters() const noexcept { return total_; }
  /// Work of the most recent rebuild.
  const WorkCounters& rebuild_counters() const noexcept { return rebuild_; }
  std::vector<NodeChange> last_changes() const;

  const TemporalStore& store() const noexcept { return store_; }
  const NodeMemoryTable& memory() const noexcept { return memory_; }
  const NeighborCache& neighbor_cache() const noexcept { return cache_; }
  const ModelParameters& params() const noexcept { return params_; }
  const EngineOptions& options() const noexcept { return options_; }
  const Matrix& node_features() const noexcept { return features_; }
  std::size_t node_count() const noexcept { return memory_.size(); }

  /// (node, level) pairs awaiting refresh (delta mode).
  std::size_t pending_count() const noexcept { return pending_total_; }
  /// Largest output-space value norm seen by any attention evaluation.
  double max_value_norm() const noexcept { return max_value_norm_; }
  const DeltaAudit& delta_audit() const noexcept { return audit_; }
  const AttentionCacheEntry& attention_entry(NodeId v, std::size_t l) const {
    return attn_.at(l - 1).at(v);
  }

 private:
  enum class Pending : std::uint8_t { kClean, kDelta, kFull };

  void grow(std::size_t n);
  void validate(std::span<const TemporalEdge> batch) const;
  void set_row(std::size_t l, NodeId v, std::span<const double> row);
  void refresh_level0(NodeId v);
  void compute_exact(NodeId v, std::size_t l);
  void generate_exact();
  void mark_pending();
  void ensure(NodeId v, std::size_t l);
  void audit_step(NodeId v, std::size_t l, const Vector& got, const DeltaReport& report);
  void clear_pending(NodeId v, std::size_t l);
  void note_scores(std::span<const NeighborScore> scores);
  void touch(NodeId v);

  ModelParameters params_;
  EngineOptions options_;
  Matrix features_;
  TemporalStore store_;
  NodeMemoryTable memory_;
  NeighborCache cache_;
  std::vector<Matrix> reps_;                            // levels 0..K
  std::vector<std::vector<AttentionCacheEntry>> attn_;  // delta mode, layers 1..K
  std::vector<std::vector<Pending>> pending_;           // layers 1..K
  std::vector<std::vector<std::vector<NodeId>>> stale_; // layers 1..K
  std::size_t pending_total_ = 0;
  std::vector<std::uint32_t> hop_;                      // scratch, kNoHop outside the batch
  std::vector<std::uint64_t> touched_;                  // batch stamp per node
  std::uint64_t stamp_ = 0;
  AffectedSet affected_;
  WorkCounters last_, total_, rebuild_;
  WorkCounters* sink_ = &last_;
  double max_value_norm_ = 0.0;
  DeltaAudit audit_;
};

}  // namespace streamtgn
