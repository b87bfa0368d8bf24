// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <random>

#include "doctest.h"
#include "reference.hpp"
#include "streamtgn/incremental.hpp"
#include "streamtgn/oracle.hpp"
#include "streamtgn/synth.hpp"

using namespace streamtgn;
using namespace streamtgn::testing;

namespace {

struct Slot {
  NeighborEntry entry;
  NeighborInput input;
};

Slot random_slot(std::mt19937_64& rng, EdgeId edge, std::size_t width, double t_ref) {
  return {{static_cast<NodeId>(rng() % 50), uniform(rng, 0.0, t_ref), edge},
          {random_vec(rng, width, 2.0), 0.0}};
}

AttentionCacheEntry make_entry(const Vec& self, const std::vector<Slot>& slots, double t_ref,
                               std::size_t layer, const ModelParameters& p) {
  std::vector<NeighborInput> inputs;
  std::vector<NeighborEntry> sampled;
  for (const auto& s : slots) {
    sampled.push_back(s.entry);
    inputs.push_back({s.input.features, s.entry.t});
  }
  auto r = temporal_attention(self, inputs, t_ref, layer, p, true);
  return AttentionCacheEntry::from_scores(std::move(r.queries), sampled, std::move(r.scores),
                                          t_ref, r.embedding);
}

Vec plain(const Vec& self, const std::vector<Slot>& slots, double t_ref, std::size_t layer,
          const ModelParameters& p) {
  std::vector<NeighborInput> inputs;
  for (const auto& s : slots) inputs.push_back({s.input.features, s.entry.t});
  return temporal_attention(self, inputs, t_ref, layer, p).embedding;
}

}  // namespace

TEST_CASE("delta updates track a plain softmax within the bound") {
  std::mt19937_64 rng(21);
  ModelDims dims;
  dims.layers = 2;
  dims.heads = 3;
  const auto p = random_params(rng, dims, 0.8);
  std::size_t violations = 0, checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t layer = rng() % 2;
    const std::size_t width = dims.layer_input_dim(layer) + dims.d_e;
    const double t_ref = 100.0;
    const Vec self = random_vec(rng, dims.layer_input_dim(layer));
    EdgeId next_edge = 0;
    std::vector<Slot> slots;
    for (std::size_t i = 0, n = 1 + rng() % 8; i < n; ++i)
      slots.push_back(random_slot(rng, next_edge++, width, t_ref));
    auto entry = make_entry(self, slots, t_ref, layer, p);

    for (int step = 0; step < 10; ++step) {
      DeltaChange change;
      for (auto it = slots.begin(); it != slots.end();) {
        const auto roll = rng() % 4;
        if (roll == 0) {
          change.expired.push_back(it->entry.edge);
          it = slots.erase(it);
          continue;
        }
        if (roll == 1) {
          it->input.features = random_vec(rng, width, 2.0);
          change.updated.push_back({it->entry.edge, {it->input.features, it->entry.t}});
        }
        ++it;
      }
      for (std::size_t i = 0, n = rng() % 3; i < n; ++i) {
        auto s = random_slot(rng, next_edge++, width, t_ref);
        change.added.push_back({s.entry, {s.input.features, s.entry.t}});
        slots.insert(slots.begin(), s);
      }
      DeltaReport report;
      const auto got = delta_embed(entry, change, layer, p, &report);
      REQUIRE(got.has_value());
      const Vec want = plain(self, slots, t_ref, layer, p);
      Vec diff(want.size());
      for (std::size_t c = 0; c < want.size(); ++c) diff[c] = (*got)[c] - want[c];
      const double err = l2_norm(diff);
      ++checked;
      if (err > report.bound() + 1e-12) ++violations;
      CHECK(err <= 1e-9);
      CHECK(report.size_after == slots.size());
    }
  }
  CHECK(checked == 3000);
  CHECK(violations == 0);
}

TEST_CASE("an empty change returns the cached output unchanged") {
  std::mt19937_64 rng(22);
  const ModelDims dims;
  const auto p = random_params(rng, dims);
  std::vector<Slot> slots{random_slot(rng, 0, dims.d_s + dims.d_e, 10.0),
                          random_slot(rng, 1, dims.d_s + dims.d_e, 10.0)};
  auto entry = make_entry(random_vec(rng, dims.d_s), slots, 10.0, 0, p);
  const Vector before = entry.output;
  DeltaReport report;
  const auto got = delta_embed(entry, DeltaChange{}, 0, p, &report);
  CHECK(*got == before);
  CHECK(report.bound() == 0.0);

  AttentionCacheEntry invalid;
  CHECK_FALSE(delta_embed(invalid, DeltaChange{}, 0, p).has_value());
}

TEST_CASE("delta engine predictions match exact mode and rebuilds restore rows") {
  ModelDims dims;
  dims.layers = 2;
  const auto params = init_params(5, dims);
  StreamSpec spec;
  spec.nodes = 60;
  spec.edges = 900;
  spec.attachment = Attachment::kPreferential;
  const auto stream = generate_stream(spec);
  PipelineConfig pc;
  pc.fanout = 4;
  EngineOptions exact_opts, delta_opts;
  exact_opts.pipeline = delta_opts.pipeline = pc;
  delta_opts.mode = EngineMode::kDelta;
  delta_opts.audit_delta = true;
  IncrementalEngine exact(params, exact_opts, spec.nodes);
  IncrementalEngine delta(params, delta_opts, spec.nodes);
  OracleEngine oracle(params, pc, spec.nodes);

  double worst = 0.0;
  for (std::size_t i = 0; i < stream.edges.size(); i += 30) {
    std::span<const TemporalEdge> b(stream.edges.data() + i, 30);
    const auto a = exact.process_batch(b);
    const auto d = delta.process_batch(b);
    oracle.apply_batch(b);
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - d[k]));
  }
  CHECK(worst <= 1e-9);
  CHECK(delta.delta_audit().checked > 0);
  CHECK(delta.delta_audit().violations == 0);

  // On-demand refresh of a single node is exact.
  for (NodeId v = 0; v < 10; ++v) {
    const auto row = delta.fresh_embedding(v);
    const auto want = oracle.snapshot().embeddings.row(v);
    CHECK(max_abs_diff(row, want) <= 1e-9);
  }

  const std::vector<NodeId> some{3, 7, 11};
  const Matrix before = delta.embeddings();
  delta.rebuild_partial(some);
  for (NodeId v = 0; v < spec.nodes; ++v) {
    const bool rebuilt = std::find(some.begin(), some.end(), v) != some.end();
    if (rebuilt) {
      CHECK(max_abs_diff(delta.embeddings().row(v), oracle.snapshot().embeddings.row(v)) <= 1e-9);
    } else {
      CHECK(std::equal(before.row(v).begin(), before.row(v).end(),
                       delta.embeddings().row(v).begin()));
    }
  }

  delta.rebuild_full();
  CHECK(delta.pending_count() == 0);
  CHECK(max_matrix_diff(delta.embeddings(), oracle.snapshot().embeddings) <= 1e-9);
}
