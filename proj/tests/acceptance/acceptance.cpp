// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance checks. Each check prints one line:
//   C<k> PASS|FAIL <name>: <measurements>
// The process exits 0 once every check has run; a FAIL line is a measured
// outcome, not a crash.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "reference.hpp"
#include "streamtgn/batcher.hpp"
#include "streamtgn/drift.hpp"
#include "streamtgn/incremental.hpp"
#include "streamtgn/oracle.hpp"
#include "streamtgn/speedup.hpp"
#include "streamtgn/synth.hpp"

using namespace streamtgn;
using namespace streamtgn::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void report(int id, const char* name, const std::function<Outcome()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("C%d %s %s: %s (%.1fs)\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), s);
  std::fflush(stdout);
}

std::span<const TemporalEdge> slice(const std::vector<TemporalEdge>& s, std::size_t i,
                                    std::size_t b) {
  return {s.data() + i, std::min(b, s.size() - i)};
}

// ---- C1 ----------------------------------------------------------------------

struct StreamCase {
  std::size_t n, m, batch, layers, fanout;
  Aggregator agg;
  Attachment attach;
};

Outcome exact_equivalence() {
  using A = Aggregator;
  constexpr auto U = Attachment::kUniform;
  constexpr auto P = Attachment::kPreferential;
  const std::vector<StreamCase> cases{
      {100, 2000, 1, 1, 2, A::kMean, U},       {100, 2000, 1, 2, 5, A::kLast, P},
      {100, 5000, 10, 2, 10, A::kSum, U},      {100, 5000, 10, 1, 5, A::kMean, P},
      {100, 10000, 200, 2, 10, A::kLast, U},   {100, 10000, 600, 1, 2, A::kSum, P},
      {1000, 3000, 1, 1, 5, A::kMean, P},      {1000, 5000, 10, 1, 10, A::kLast, U},
      {1000, 5000, 10, 2, 2, A::kSum, P},      {1000, 20000, 200, 1, 5, A::kMean, U},
      {1000, 20000, 200, 2, 10, A::kLast, P},  {1000, 50000, 600, 2, 5, A::kSum, U},
      {1000, 50000, 600, 1, 2, A::kMean, P},   {10000, 2000, 10, 1, 5, A::kSum, U},
      {10000, 20000, 200, 2, 10, A::kMean, P}, {10000, 30000, 200, 1, 2, A::kLast, U},
      {10000, 50000, 600, 1, 10, A::kMean, U}, {10000, 50000, 600, 2, 5, A::kSum, P},
      {10000, 50000, 600, 2, 2, A::kLast, U},  {10000, 50000, 200, 1, 5, A::kSum, P},
  };
  double max_embed = 0.0, max_pred = 0.0;
  std::size_t batches = 0;
  std::uint64_t seed = 100;
  for (const auto& c : cases) {
    ModelDims dims;
    dims.layers = c.layers;
    dims.d_x = 2;
    const auto params = init_params(seed, dims);
    StreamSpec spec;
    spec.seed = seed;
    spec.nodes = c.n;
    spec.edges = c.m;
    spec.attachment = c.attach;
    spec.burstiness = 2.0;
    const auto stream = generate_stream(spec).edges;
    const auto features = generate_node_features(c.n, dims.d_x, seed + 1);
    PipelineConfig pc;
    pc.fanout = c.fanout;
    pc.aggregator = c.agg;
    OracleEngine oracle(params, pc, c.n, features);
    IncrementalEngine inc(params, EngineOptions{pc, EngineMode::kExact, false}, c.n, features);
    for (std::size_t i = 0; i < stream.size(); i += c.batch, ++batches) {
      const auto b = slice(stream, i, c.batch);
      const auto want = oracle.apply_batch(b);
      const auto got = inc.process_batch(b);
      for (std::size_t k = 0; k < got.size(); ++k)
        max_pred = std::max(max_pred, std::abs(got[k] - want[k]));
      max_embed = std::max(max_embed, max_matrix_diff(inc.embeddings(), oracle.snapshot().embeddings));
    }
    ++seed;
  }
  return {max_embed <= 1e-9 && max_pred <= 1e-9,
          fmt("streams=%zu batches=%zu max_embed_dev=%.3g max_pred_dev=%.3g", cases.size(),
              batches, max_embed, max_pred)};
}

// ---- C2 ----------------------------------------------------------------------

Outcome affected_equivalence() {
  std::mt19937_64 rng(2024);
  std::size_t equal = 0, within_bound = 0, worst_ratio_num = 0, worst_ratio_den = 1;
  const std::size_t instances = 1000;
  for (std::size_t trial = 0; trial < instances; ++trial) {
    const std::size_t n = 5 + rng() % 60;
    const std::size_t history = rng() % 300;
    const std::size_t batch = 1 + rng() % 12;
    const std::size_t layers = 1 + rng() % 2;
    const std::size_t fanout = 1 + rng() % 6;
    ModelDims dims;
    dims.layers = layers;
    dims.d_s = dims.d_m = dims.d = dims.d_k = 4;
    dims.heads = 1;
    dims.d_e = 1;
    dims.d_t = 2;
    PipelineConfig pc;
    pc.fanout = fanout;
    pc.window = rng() % 3 == 0 ? uniform(rng, 5.0, 50.0) : kForever;
    IncrementalEngine inc(init_params(trial, dims), EngineOptions{pc, EngineMode::kExact, false}, n);
    std::vector<TemporalEdge> edges;
    double t = 0.0;
    for (std::size_t i = 0; i < history + batch; ++i) {
      t += static_cast<double>(rng() % 2);
      edges.push_back({static_cast<NodeId>(rng() % n), static_cast<NodeId>(rng() % n), t, {0.1}});
    }
    const std::size_t chunk = 1 + rng() % 20;
    for (std::size_t i = 0; i < history; i += chunk)
      inc.process_batch(slice(edges, i, std::min(chunk, history - i)));
    const std::span<const TemporalEdge> last(edges.data() + history, batch);
    inc.process_batch(last);
    const auto want = bfs_affected(last, inc.store(), inc.memory(), pc, layers);
    const auto& got = inc.last_affected().all;
    if (got == want) ++equal;
    const std::size_t bound = 2 * batch * fanout_power(fanout, layers);
    if (got.size() <= bound) {
      ++within_bound;
    } else if (got.size() * worst_ratio_den > worst_ratio_num * bound) {
      worst_ratio_num = got.size();
      worst_ratio_den = bound;
    }
  }
  const bool pass = equal == instances && within_bound == instances;
  auto detail = fmt("bfs_equal=%zu/%zu within_2BL^K=%zu/%zu", equal, instances, within_bound,
                    instances);
  if (within_bound < instances) {
    detail += fmt(" worst=|A| %zu vs bound %zu (hubs sampled by many nodes)", worst_ratio_num,
                  worst_ratio_den);
  }
  return {pass, detail};
}

// ---- C3 ----------------------------------------------------------------------

Outcome counter_speedup() {
  const std::size_t n = 100'000, batch = 200;
  ModelDims dims;
  const auto params = init_params(3, dims);
  StreamSpec spec;
  spec.seed = 3;
  spec.nodes = n;
  spec.edges = 10'000;
  const auto stream = generate_stream(spec).edges;
  PipelineConfig pc;
  pc.fanout = 10;
  OracleEngine oracle(params, pc, n);
  IncrementalEngine inc(params, EngineOptions{pc, EngineMode::kExact, false}, n);
  std::size_t identity_ok = 0, batches = 0;
  std::uint64_t oracle_nodes = 0, inc_nodes = 0;
  double max_dev = 0.0;
  for (std::size_t i = 0; i < stream.size(); i += batch, ++batches) {
    const auto b = slice(stream, i, batch);
    oracle.apply_batch(b);
    inc.process_batch(b);
    const auto o = oracle.last_counters().node_pipelines;
    const auto a = inc.last_counters().node_pipelines;
    const auto affected = inc.last_affected().all.size();
    // o / a == n / |A| as exact rationals.
    if (o * affected == n * a && a == affected) ++identity_ok;
    oracle_nodes += o;
    inc_nodes += a;
    max_dev = std::max(max_dev, max_matrix_diff(inc.embeddings(), oracle.snapshot().embeddings));
  }
  const double speedup = static_cast<double>(oracle_nodes) / static_cast<double>(inc_nodes);
  return {identity_ok == batches && speedup > 25.0 && max_dev <= 1e-9,
          fmt("n=%zu B=%zu L=10 K=1 batches=%zu identity=%zu/%zu counter_speedup=%.1f "
              "max_embed_dev=%.3g",
              n, batch, batches, identity_ok, batches, speedup, max_dev)};
}

// ---- C4 ----------------------------------------------------------------------

Outcome theoretical_table() {
  const auto rows = default_speedup_rows();
  const std::uint64_t bound[] = {4'000, 40'000, 8'000, 4'000};
  const double speed[] = {250.0, 25.0, 125.0, 2'500.0};
  bool ok = rows.size() == 4;
  for (std::size_t i = 0; ok && i < 4; ++i)
    ok = rows[i].affected_bound == bound[i] && rows[i].speedup == speed[i];
  const auto user = theoretical_speedup(1'000'000, 200, 20, 1);
  ok = ok && user.speedup == 125.0;
  std::string detail;
  for (const auto& r : rows) detail += fmt("%llu/%g ", static_cast<unsigned long long>(r.affected_bound), r.speedup);
  return {ok, detail + fmt("user_row=%g", user.speedup)};
}

// ---- C5 ----------------------------------------------------------------------

struct Slot {
  NeighborEntry entry;
  Vec features;
};

Outcome delta_bound() {
  std::mt19937_64 rng(55);
  ModelDims dims;
  dims.layers = 2;
  dims.heads = 2;
  std::size_t checked = 0, violations = 0;
  double max_err = 0.0, max_excess = -1.0;
  while (checked < 10'000) {
    const auto p = random_params(rng, dims, 0.8);
    const std::size_t layer = rng() % 2;
    const std::size_t width = dims.layer_input_dim(layer) + dims.d_e;
    const double t_ref = 100.0;
    const Vec self = random_vec(rng, dims.layer_input_dim(layer));
    EdgeId next = 0;
    auto fresh = [&] {
      return Slot{{static_cast<NodeId>(rng() % 100), uniform(rng, 0.0, t_ref), next++},
                  random_vec(rng, width, 2.0)};
    };
    std::vector<Slot> slots;
    for (std::size_t i = 0, k = 1 + rng() % 10; i < k; ++i) slots.push_back(fresh());
    auto inputs_of = [&] {
      std::vector<NeighborInput> in;
      for (const auto& s : slots) in.push_back({s.features, s.entry.t});
      return in;
    };
    std::vector<NeighborEntry> sampled;
    for (const auto& s : slots) sampled.push_back(s.entry);
    auto first = temporal_attention(self, inputs_of(), t_ref, layer, p, true);
    auto entry = AttentionCacheEntry::from_scores(std::move(first.queries), sampled,
                                                  std::move(first.scores), t_ref, first.embedding);
    for (int step = 0; step < 20; ++step) {
      DeltaChange change;
      for (auto it = slots.begin(); it != slots.end();) {
        const auto roll = rng() % 5;
        if (roll == 0) {
          change.expired.push_back(it->entry.edge);
          it = slots.erase(it);
          continue;
        }
        if (roll == 1) {
          it->features = random_vec(rng, width, 2.0);
          change.updated.push_back({it->entry.edge, {it->features, it->entry.t}});
        }
        ++it;
      }
      for (std::size_t i = 0, k = rng() % 4; i < k; ++i) {
        const auto s = fresh();
        change.added.push_back({s.entry, {s.features, s.entry.t}});
        slots.insert(slots.begin(), s);
      }
      DeltaReport rep;
      const auto got = delta_embed(entry, change, layer, p, &rep);
      if (!got) return {false, "cache entry unexpectedly invalid"};
      const auto want = temporal_attention(self, inputs_of(), t_ref, layer, p).embedding;
      Vec diff(want.size());
      for (std::size_t c = 0; c < want.size(); ++c) diff[c] = (*got)[c] - want[c];
      const double err = l2_norm(diff);
      const double excess = err - rep.bound();
      ++checked;
      max_err = std::max(max_err, err);
      max_excess = std::max(max_excess, excess);
      if (excess > 1e-12) ++violations;
    }
  }

  // Engine-level audit on a live delta-mode stream as a second source.
  ModelDims edims;
  edims.layers = 2;
  StreamSpec spec;
  spec.seed = 5;
  spec.nodes = 300;
  spec.edges = 6000;
  spec.attachment = Attachment::kPreferential;
  const auto stream = generate_stream(spec).edges;
  PipelineConfig pc;
  pc.fanout = 5;
  IncrementalEngine eng(init_params(5, edims), EngineOptions{pc, EngineMode::kDelta, true}, spec.nodes);
  for (std::size_t i = 0; i < stream.size(); i += 50) {
    eng.process_batch(slice(stream, i, 50));
    for (NodeId v = 0; v < spec.nodes; v += 7) eng.fresh_embedding(v);
  }
  const auto& audit = eng.delta_audit();
  return {violations == 0 && audit.violations == 0 && audit.checked > 0,
          fmt("random_updates=%zu violations=%zu max_err=%.3g | engine_updates=%llu "
              "violations=%llu max_err=%.3g",
              checked, violations, max_err, static_cast<unsigned long long>(audit.checked),
              static_cast<unsigned long long>(audit.violations), audit.max_error)};
}

// ---- C6 ----------------------------------------------------------------------

Outcome drift_bound() {
  ModelDims dims;
  dims.layers = 2;
  const auto params = init_params(6, dims);
  StreamSpec spec;
  spec.seed = 6;
  spec.nodes = 500;
  spec.edges = 20'000;
  spec.burstiness = 3.0;
  const auto stream = generate_stream(spec).edges;
  PipelineConfig pc;
  pc.fanout = 5;
  const DriftConfig cfg{0.9, 0.5, 0.1};
  IncrementalEngine eng(params, EngineOptions{pc, EngineMode::kDelta, false}, spec.nodes);
  DriftState state(cfg);
  const std::size_t batch = stream.size() / 2000;
  std::size_t batches = 0, snapshots = 0, violations = 0, rebuilds = 0, bad_resets = 0;
  double max_drift = 0.0, bound_at_max = 0.0;
  for (std::size_t i = 0; i < stream.size(); i += batch) {
    eng.process_batch(slice(stream, i, batch));
    ++batches;
    state.record_batch_changes(eng.last_changes());
    if (batches % 50 == 0) {
      ++snapshots;
      const auto snap = full_recompute(eng.store(), eng.memory(), params, pc,
                                       eng.store().latest_time().value());
      double drift = 0.0;
      for (NodeId v = 0; v < spec.nodes; ++v) {
        Vec d(dims.d);
        for (std::size_t c = 0; c < dims.d; ++c)
          d[c] = eng.embeddings()(v, c) - snap.embeddings(v, c);
        drift = std::max(drift, l2_norm(d));
      }
      const double bound = cfg.delta_max / (1.0 - cfg.gamma) * eng.max_value_norm();
      if (drift > bound + 1e-12) ++violations;
      if (drift >= max_drift) {
        max_drift = drift;
        bound_at_max = bound;
      }
    }
    const auto decision = state.decide_rebuild(spec.nodes);
    if (decision.kind != RebuildDecision::Kind::kNone) {
      execute_rebuild(decision, eng, state);
      ++rebuilds;
      if (state.global_drift() != 0.0 || state.tracked_nodes() != 0 ||
          state.batches_since_rebuild() != 0)
        ++bad_resets;
    }
  }
  return {batches == 2000 && violations == 0 && bad_resets == 0,
          fmt("batches=%zu snapshots=%zu rebuilds=%zu max_drift=%.4g bound=%.4g violations=%zu "
              "bad_resets=%zu",
              batches, snapshots, rebuilds, max_drift, bound_at_max, violations, bad_resets)};
}

// ---- C7 ----------------------------------------------------------------------

Outcome staleness() {
  ModelDims dims;
  const auto params = init_params(1, dims);
  PipelineConfig pc;
  pc.fanout = 10;

  const auto shared = shared_node_stream(10, 3000, dims.d_e, 7);
  const std::vector<std::size_t> one{1};
  const bool unit_batch =
      compare_sequential_vs_batched(shared, one, params, pc).rows[0].max_deviation == 0.0;

  const std::vector<std::size_t> sizes{10, 100, 1000};
  const auto pairs = disjoint_pair_stream(1000, 3000, dims.d_e);
  double pair_dev = 0.0;
  for (const auto& r : compare_sequential_vs_batched(pairs, sizes, params, pc).rows)
    pair_dev = std::max(pair_dev, r.max_deviation);

  // Adversarial: every edge hits node 0, cycling through ten partners.
  std::vector<TemporalEdge> adversarial;
  for (std::size_t i = 0; i < 3000; ++i)
    adversarial.push_back({0, static_cast<NodeId>(1 + i % 10), static_cast<double>(i),
                           Vec(dims.d_e, 0.5)});
  const auto rep = compare_sequential_vs_batched(adversarial, sizes, params, pc);
  bool monotone = true;
  std::string rows;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    rows += fmt(" B=%zu:%.4g", rep.rows[i].batch_size, rep.rows[i].max_deviation);
    if (i > 0 && rep.rows[i].max_deviation < rep.rows[i - 1].max_deviation) monotone = false;
  }
  return {unit_batch && pair_dev == 0.0 && monotone,
          fmt("B1_bitwise=%s disjoint_max_dev=%.3g adversarial", unit_batch ? "yes" : "no",
              pair_dev) +
              rows};
}

// ---- C8 ----------------------------------------------------------------------

Outcome adaptive_vs_fixed() {
  ModelDims dims;
  const auto params = init_params(7, dims);
  StreamSpec spec;
  spec.seed = 5;
  spec.nodes = 1000;
  spec.edges = 20'000;
  spec.burstiness = 3.0;
  spec.epochs = 10;
  spec.epoch_length = 100.0;
  const auto stream = generate_stream(spec).edges;
  PipelineConfig pc;
  pc.fanout = 10;
  IncrementalEngine eng(params, EngineOptions{pc, EngineMode::kExact, false}, spec.nodes);
  ChangeLog log;
  for (const auto& b : split_by_tick(stream, 1.0, stream.size(), dims.d_e)) {
    eng.process_batch(b.edges);
    // The first epoch is warm-up: every node is new there and saturates at ratio 1.
    if (b.t_batch >= spec.epoch_length) log.push_back(eng.last_changes());
  }
  const DriftConfig cfg{0.9, 0.5, 0.1};
  const auto adaptive = simulate_adaptive(log, cfg, spec.nodes);
  const auto interval = tune_fixed_interval(log, cfg, adaptive.worst_drift);
  if (!interval) return {false, "no fixed interval reaches the adaptive worst drift"};
  const auto fixed = simulate_fixed(log, cfg, interval);
  const double ratio = static_cast<double>(adaptive.rebuilds) / static_cast<double>(fixed.rebuilds);
  return {3 * adaptive.rebuilds <= 2 * fixed.rebuilds,
          fmt("batches=%zu adaptive=%zu (partial %zu, full %zu) worst=%.3f | fixed R=%zu "
              "rebuilds=%zu worst=%.3f | ratio=%.3f",
              log.size(), adaptive.rebuilds, adaptive.partial, adaptive.full,
              adaptive.worst_drift, *interval, fixed.rebuilds, fixed.worst_drift, ratio)};
}

// ---- C9 ----------------------------------------------------------------------

double vec_diff(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Outcome kernel_oracles() {
  std::mt19937_64 rng(9);
  ModelDims dims;
  dims.d_x = 3;
  dims.layers = 2;
  dims.heads = 3;
  const auto p = random_params(rng, dims);
  constexpr int kInputs = 1000;
  double enc = 0, norm = 0, msg = 0, agg = 0, gru = 0, att = 0, soft = 0, pred = 0;
  for (int i = 0; i < kInputs; ++i) {
    const double dt = uniform(rng, -10.0, 1e4);
    const Vec phi = time_encode(dt, p.omega);
    enc = std::max(enc, vec_diff(phi, ref_time_encode(dt, p.omega)));
    double sq = 0.0;
    for (double x : phi) sq += x * x;
    norm = std::max(norm, std::abs(sq - 0.5));

    const Vec a = random_vec(rng, dims.d_s), b = random_vec(rng, dims.d_s);
    const Vec e = random_vec(rng, dims.d_e);
    const bool src = i % 2 == 0;
    msg = std::max(msg, vec_diff(compute_message(a, b, e, dt, src ? MessageSide::kSource
                                                                   : MessageSide::kDestination, p),
                                 ref_message(a, b, e, dt, src, p)));

    const auto mode = static_cast<Aggregator>(i % 3);
    std::vector<Vec> ms;
    std::vector<double> ts;
    std::vector<TimedMessage> timed;
    for (std::size_t k = 0, c = 1 + rng() % 6; k < c; ++k) {
      ms.push_back(random_vec(rng, dims.d_m));
      ts.push_back(static_cast<double>(rng() % 4));
      timed.push_back({ms.back(), ts.back()});
    }
    agg = std::max(agg, vec_diff(aggregate_messages(timed, mode), ref_aggregate(ms, ts, mode)));

    const Vec m = random_vec(rng, dims.d_m, 2.0);
    gru = std::max(gru, vec_diff(gru_update(m, a, p), ref_gru(m, a, p)));

    const std::size_t layer = i % 2;
    const std::size_t width = dims.layer_input_dim(layer);
    const Vec self = random_vec(rng, width);
    std::vector<RefNeighbor> ref;
    std::vector<NeighborInput> in;
    for (std::size_t k = 0, c = rng() % 9; k < c; ++k) {
      RefNeighbor nb{random_vec(rng, width), random_vec(rng, dims.d_e), uniform(rng, 0.0, 50.0)};
      Vec joined = nb.prev;
      joined.insert(joined.end(), nb.feat.begin(), nb.feat.end());
      in.push_back({joined, nb.t});
      ref.push_back(std::move(nb));
    }
    const auto r = temporal_attention(self, in, 50.0, layer, p);
    att = std::max(att, vec_diff(r.embedding, ref_attention(self, ref, 50.0, layer, p)));
    if (!in.empty()) {
      for (const auto& w : r.weights) {
        double s = 0.0;
        for (double x : w) s += x;
        soft = std::max(soft, std::abs(s - 1.0));
      }
    }

    const Vec hu = random_vec(rng, dims.d), hv = random_vec(rng, dims.d);
    pred = std::max(pred, std::abs(predict_link(hu, hv, p) - ref_predict(hu, hv, p)));
  }
  const bool ok = std::max({enc, msg, agg, gru, att, pred}) <= 1e-10 && norm <= 1e-12 &&
                  soft <= 1e-12;
  return {ok, fmt("inputs=%d time=%.2g msg=%.2g agg=%.2g gru=%.2g attn=%.2g pred=%.2g "
                  "|phi|^2-1/2=%.2g softmax_sum-1=%.2g",
                  kInputs, enc, msg, agg, gru, att, pred, norm, soft)};
}

// ---- C10 ---------------------------------------------------------------------

double mean_affected_ratio(const std::vector<TemporalEdge>& stream, std::size_t n,
                           std::size_t batch, std::size_t fanout, const ModelParameters& params) {
  PipelineConfig pc;
  pc.fanout = fanout;
  IncrementalEngine eng(params, EngineOptions{pc, EngineMode::kExact, false}, n);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < stream.size(); i += batch, ++count) {
    eng.process_batch(slice(stream, i, batch));
    sum += static_cast<double>(eng.last_affected().all.size()) / static_cast<double>(n);
  }
  return sum / static_cast<double>(count);
}

Outcome ablation_trends() {
  ModelDims dims;
  const auto params = init_params(10, dims);
  StreamSpec spec;
  spec.seed = 10;
  spec.nodes = 20'000;
  spec.edges = 30'000;
  spec.attachment = Attachment::kPreferential;
  const auto stream = generate_stream(spec).edges;

  std::string detail = "B:";
  bool ok = true;
  double prev = -1.0;
  for (std::size_t b : {200, 400, 600, 800, 1000}) {
    const double r = mean_affected_ratio(stream, spec.nodes, b, 10, params);
    ok = ok && r >= prev;
    prev = r;
    detail += fmt(" %zu=%.4f", b, r);
  }
  detail += " L:";
  prev = -1.0;
  for (std::size_t l : {5, 10, 15, 20, 25, 30}) {
    const double r = mean_affected_ratio(stream, spec.nodes, 200, l, params);
    ok = ok && r >= prev;
    prev = r;
    detail += fmt(" %zu=%.4f", l, r);
  }
  return {ok, detail};
}

}  // namespace

int main() {
  report(1, "exact-mode oracle equivalence", exact_equivalence);
  report(2, "affected-set brute-force equivalence and 2BL^K bound", affected_equivalence);
  report(3, "counter-based speedup law", counter_speedup);
  report(4, "theoretical speedup table", theoretical_table);
  report(5, "delta-mode error bound", delta_bound);
  report(6, "drift bound under the adaptive policy", drift_bound);
  report(7, "staleness behavior", staleness);
  report(8, "adaptive vs fixed rebuilds", adaptive_vs_fixed);
  report(9, "kernel oracle suite", kernel_oracles);
  report(10, "monotone ablation trends", ablation_trends);
  return 0;
}
