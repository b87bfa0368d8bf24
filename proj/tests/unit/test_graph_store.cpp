// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <random>

#include "doctest.h"
#include "reference.hpp"
#include "streamtgn/graph_store.hpp"

using namespace streamtgn;

namespace {

TemporalEdge edge(NodeId s, NodeId d, double t, std::size_t dim = 2) {
  return {s, d, t, std::vector<double>(dim, t)};
}

}  // namespace

TEST_CASE("edge queue is a bounded FIFO") {
  EdgeQueue q(3, 2);
  CHECK(q.empty());
  CHECK_FALSE(q.front_time().has_value());
  CHECK(q.enqueue(edge(0, 1, 1)));
  CHECK(q.enqueue(edge(1, 2, 2)));
  CHECK(q.enqueue(edge(2, 3, 3)));
  CHECK(q.full());
  CHECK_FALSE(q.enqueue(edge(3, 4, 4)));
  CHECK(q.size() == 3);
  CHECK(*q.front_time() == 1.0);

  auto first = q.flush_batch(2);
  REQUIRE(first.size() == 2);
  CHECK(first[0].t == 1.0);
  CHECK(first[1].t == 2.0);
  // Wrap around the ring.
  CHECK(q.enqueue(edge(4, 5, 5)));
  CHECK(q.enqueue(edge(5, 6, 6)));
  const auto rest = q.flush_batch(10);
  REQUIRE(rest.size() == 3);
  CHECK(rest[0].t == 3.0);
  CHECK(rest[2].t == 6.0);
  CHECK(q.flush_batch(4).empty());
}

TEST_CASE("edge queue rejects bad input") {
  CHECK_THROWS_AS(EdgeQueue(0, 2), InputError);
  EdgeQueue q(2, 2);
  CHECK_THROWS_AS(q.enqueue(edge(0, 1, 1, 3)), InputError);
}

TEST_CASE("flush_until stops at the horizon without reordering") {
  EdgeQueue q(8, 2);
  for (double t : {1.0, 2.0, 2.0, 5.0, 6.0}) q.enqueue(edge(0, 1, t));
  const auto a = q.flush_until(10, 2.0);
  CHECK(a.size() == 3);
  CHECK(q.flush_until(10, 4.0).empty());
  const auto b = q.flush_until(1, 9.0);
  REQUIRE(b.size() == 1);
  CHECK(b[0].t == 5.0);
  CHECK(q.size() == 1);
}

TEST_CASE("store keeps both endpoint lists and self-loops once") {
  TemporalStore s(2);
  s.insert_edge(edge(0, 1, 1));
  s.insert_edge(edge(2, 2, 2));
  s.insert_edge(edge(1, 2, 3));
  CHECK(s.edge_count() == 3);
  CHECK(s.node_count() == 3);
  CHECK(s.degree(0) == 1);
  CHECK(s.degree(1) == 2);
  CHECK(s.degree(2) == 2);
  CHECK(s.history(2)[0].neighbor == 2);
  CHECK(*s.latest_time() == 3.0);
  CHECK(s.edge_feature(1)[0] == 2.0);
}

TEST_CASE("store enforces time order and feature length") {
  TemporalStore s(2);
  s.insert_edge(edge(0, 1, 5));
  s.insert_edge(edge(0, 1, 5));
  CHECK_THROWS_AS(s.insert_edge(edge(0, 1, 4)), MonotonicityError);
  CHECK_THROWS_AS(s.insert_edge(edge(0, 1, 6, 3)), InputError);
  CHECK(s.edge_count() == 2);
}

TEST_CASE("recent and windowed neighbor queries agree with a linear scan") {
  std::mt19937_64 rng(5);
  TemporalStore s(1);
  std::vector<TemporalEdge> all;
  double t = 0.0;
  for (int i = 0; i < 400; ++i) {
    t += static_cast<double>(rng() % 3);  // repeated timestamps on purpose
    all.push_back({static_cast<NodeId>(rng() % 12), static_cast<NodeId>(rng() % 12), t, {0.0}});
    s.insert_edge(all.back());
  }
  for (int q = 0; q < 300; ++q) {
    const NodeId v = static_cast<NodeId>(rng() % 12);
    const std::size_t limit = 1 + rng() % 8;
    const double before = static_cast<double>(rng() % 300);
    std::vector<NeighborEntry> want;
    for (std::size_t i = all.size(); i-- > 0;) {
      const auto& e = all[i];
      if (e.t >= before || want.size() == limit) continue;
      if (e.src == v) want.push_back({e.dst, e.t, i});
      else if (e.dst == v) want.push_back({e.src, e.t, i});
    }
    CHECK(s.recent_neighbors(v, limit, before) == want);

    const double lo = before - 30.0;
    std::vector<NeighborEntry> window;
    for (std::size_t i = all.size(); i-- > 0;) {
      const auto& e = all[i];
      if (e.t < lo || e.t > before) continue;
      if (e.src == v) window.push_back({e.dst, e.t, i});
      else if (e.dst == v) window.push_back({e.src, e.t, i});
    }
    CHECK(s.temporal_neighbors(v, lo, before) == window);
  }
  CHECK_THROWS_AS(s.temporal_neighbors(0, 5.0, 1.0), ContractError);
}
