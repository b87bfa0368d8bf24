// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

// Edge queue and temporal adjacency list.
//
// The queue is a fixed-capacity ring that buffers arrivals between batch
// boundaries. The adjacency list is append-only: every edge is stored once
// (features included) and referenced from the lists of both endpoints.
// Per-node lists are kept in insertion order, which is also timestamp order
// because inserts must be monotone; queries walk them backwards so results
// come out most-recent-first with later insertions winning ties.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "streamtgn/types.hpp"

namespace streamtgn {

class EdgeQueue {
 public:
  EdgeQueue(std::size_t capacity, std::size_t edge_dim);

  /// False when the ring is full (state unchanged). Throws InputError when the
  /// feature length does not match the configured edge dimension.
  bool enqueue(TemporalEdge edge);

  /// Removes and returns up to max_count oldest edges in arrival order.
  std::vector<TemporalEdge> flush_batch(std::size_t max_count);

  /// Like flush_batch, but stops at the first edge with t > horizon. This is
  /// the optional time-window filter; it never reorders edges.
  std::vector<TemporalEdge> flush_until(std::size_t max_count, Timestamp horizon);

  std::size_t size() const noexcept { return size_; }
  std::size_t capacity() const noexcept { return ring_.size(); }
  std::size_t edge_dim() const noexcept { return edge_dim_; }
  bool empty() const noexcept { return size_ == 0; }
  bool full() const noexcept { return size_ == ring_.size(); }
  /// Timestamp of the oldest queued edge.
  std::optional<Timestamp> front_time() const;

 private:
  std::vector<TemporalEdge> ring_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
  std::size_t edge_dim_;
};

/// One entry of a per-node temporal neighbor list.
struct NeighborEntry {
  NodeId neighbor = 0;
  Timestamp t = 0.0;
  EdgeId edge = 0;  // index into the store's edge table (feature reference)

  friend bool operator==(const NeighborEntry&, const NeighborEntry&) = default;
};

class TemporalStore {
 public:
  explicit TemporalStore(std::size_t edge_dim);

  /// Appends the edge under both endpoints (once for a self-loop). Throws
  /// MonotonicityError if t is older than the newest stored timestamp and
  /// InputError on a feature-length mismatch.
  EdgeId insert_edge(const TemporalEdge& edge);

  /// Entries with t_start <= t <= t_end, most recent first.
  std::vector<NeighborEntry> temporal_neighbors(NodeId v, Timestamp t_start,
                                                Timestamp t_end) const;

  /// Up to `limit` most recent entries with t < before, most recent first.
  std::vector<NeighborEntry> recent_neighbors(NodeId v, std::size_t limit,
                                              Timestamp before) const;

  /// Full per-node list in insertion (ascending time) order.
  std::span<const NeighborEntry> history(NodeId v) const;

  std::span<const double> edge_feature(EdgeId e) const;
  const TemporalEdge& edge(EdgeId e) const { return edges_.at(e); }

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::size_t edge_dim() const noexcept { return edge_dim_; }
  std::size_t degree(NodeId v) const { return history(v).size(); }
  /// Newest committed timestamp, or nullopt for an empty store.
  std::optional<Timestamp> latest_time() const;

  /// Makes node ids [0, n) known without adding edges.
  void reserve_nodes(std::size_t n);

 private:
  std::size_t edge_dim_;
  std::vector<TemporalEdge> edges_;
  std::vector<std::vector<NeighborEntry>> adjacency_;
};

}  // namespace streamtgn
