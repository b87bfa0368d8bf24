// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

#include "streamtgn/graph_store.hpp"

#include <algorithm>
#include <string>

namespace streamtgn {

namespace {

void check_feature_dim(const TemporalEdge& edge, std::size_t edge_dim) {
  if (edge.feat.size() != edge_dim) {
    throw InputError("edge feature length " + std::to_string(edge.feat.size()) +
                     " does not match d_e=" + std::to_string(edge_dim));
  }
}

}  // namespace

EdgeQueue::EdgeQueue(std::size_t capacity, std::size_t edge_dim)
    : ring_(capacity), edge_dim_(edge_dim) {
  if (capacity == 0) throw InputError("edge queue capacity must be positive");
}

bool EdgeQueue::enqueue(TemporalEdge edge) {
  check_feature_dim(edge, edge_dim_);
  if (full()) return false;
  ring_[(head_ + size_) % ring_.size()] = std::move(edge);
  ++size_;
  return true;
}

std::vector<TemporalEdge> EdgeQueue::flush_batch(std::size_t max_count) {
  return flush_until(max_count, kForever);
}

std::vector<TemporalEdge> EdgeQueue::flush_until(std::size_t max_count, Timestamp horizon) {
  std::vector<TemporalEdge> out;
  out.reserve(std::min(max_count, size_));
  while (size_ > 0 && out.size() < max_count && ring_[head_].t <= horizon) {
    out.push_back(std::move(ring_[head_]));
    head_ = (head_ + 1) % ring_.size();
    --size_;
  }
  return out;
}

std::optional<Timestamp> EdgeQueue::front_time() const {
  if (size_ == 0) return std::nullopt;
  return ring_[head_].t;
}

TemporalStore::TemporalStore(std::size_t edge_dim) : edge_dim_(edge_dim) {}

void TemporalStore::reserve_nodes(std::size_t n) {
  if (adjacency_.size() < n) adjacency_.resize(n);
}

EdgeId TemporalStore::insert_edge(const TemporalEdge& edge) {
  check_feature_dim(edge, edge_dim_);
  if (!edges_.empty() && edge.t < edges_.back().t) {
    throw MonotonicityError("edge timestamp " + std::to_string(edge.t) +
                            " precedes committed history at " +
                            std::to_string(edges_.back().t));
  }
  const EdgeId id = edges_.size();
  edges_.push_back(edge);
  reserve_nodes(static_cast<std::size_t>(std::max(edge.src, edge.dst)) + 1);
  adjacency_[edge.src].push_back({edge.dst, edge.t, id});
  if (edge.dst != edge.src) adjacency_[edge.dst].push_back({edge.src, edge.t, id});
  return id;
}

std::span<const NeighborEntry> TemporalStore::history(NodeId v) const {
  if (v >= adjacency_.size()) return {};
  return adjacency_[v];
}

std::vector<NeighborEntry> TemporalStore::temporal_neighbors(NodeId v, Timestamp t_start,
                                                             Timestamp t_end) const {
  if (t_start > t_end) throw ContractError("temporal window has t_start > t_end");
  const auto list = history(v);
  auto end = std::upper_bound(list.begin(), list.end(), t_end,
                              [](Timestamp t, const NeighborEntry& e) { return t < e.t; });
  std::vector<NeighborEntry> out;
  for (auto it = end; it != list.begin();) {
    --it;
    if (it->t < t_start) break;
    out.push_back(*it);
  }
  return out;
}

std::vector<NeighborEntry> TemporalStore::recent_neighbors(NodeId v, std::size_t limit,
                                                           Timestamp before) const {
  const auto list = history(v);
  auto end = std::lower_bound(list.begin(), list.end(), before,
                              [](const NeighborEntry& e, Timestamp t) { return e.t < t; });
  std::vector<NeighborEntry> out;
  out.reserve(std::min<std::size_t>(limit, static_cast<std::size_t>(end - list.begin())));
  for (auto it = end; it != list.begin() && out.size() < limit;) {
    --it;
    out.push_back(*it);
  }
  return out;
}

std::span<const double> TemporalStore::edge_feature(EdgeId e) const { return edges_.at(e).feat; }

std::optional<Timestamp> TemporalStore::latest_time() const {
  if (edges_.empty()) return std::nullopt;
  return edges_.back().t;
}

}  // namespace streamtgn
