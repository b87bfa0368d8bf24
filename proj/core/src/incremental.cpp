// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

#include "streamtgn/incremental.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

namespace streamtgn {

namespace {

constexpr std::uint32_t kNoHop = std::numeric_limits<std::uint32_t>::max();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Below this fraction of the largest normalizer seen since the last resum,
// the running sums are rebuilt from the records to shed cancellation error.
constexpr double kResumFraction = 1e-2;
// Absolute slack for floating-point rounding when checking the delta bound.
constexpr double kRoundingSlack = 1e-12;

void erase_one(std::vector<NodeId>& v, NodeId x) {
  auto it = std::find(v.begin(), v.end(), x);
  if (it != v.end()) {
    *it = v.back();
    v.pop_back();
  }
}

}  // namespace

// ---- neighbor cache ---------------------------------------------------------

NeighborCache::NeighborCache(std::size_t fanout, Timestamp window)
    : fanout_(fanout), window_(window) {
  if (fanout == 0) throw InputError("fanout L must be at least 1");
}

void NeighborCache::ensure_nodes(std::size_t n) {
  if (lists_.size() >= n) return;
  lists_.resize(n);
  samplers_.resize(n);
}

ChangeRecord NeighborCache::update(NodeId v, std::span<const NeighborEntry> fresh,
                                   Timestamp t_ref) {
  ensure_nodes(static_cast<std::size_t>(v) + 1);
  for (const auto& e : fresh) ensure_nodes(static_cast<std::size_t>(e.neighbor) + 1);
  auto& current = lists_[v];
  std::vector<NeighborEntry> next;
  next.reserve(std::min(fanout_, fresh.size() + current.size()));
  for (const auto& e : fresh) {
    if (next.size() == fanout_) break;
    next.push_back(e);
  }
  for (const auto& e : current) {
    if (next.size() == fanout_) break;
    next.push_back(e);
  }
  if (window_ != kForever) {
    const Timestamp cutoff = t_ref - window_;
    while (!next.empty() && next.back().t < cutoff) next.pop_back();
  }

  ChangeRecord rec;
  const std::size_t added = std::min(fresh.size(), next.size());
  const std::size_t kept = next.size() - added;
  rec.added.assign(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(added));
  rec.expired.assign(current.begin() + static_cast<std::ptrdiff_t>(kept), current.end());
  rec.size_after = next.size();

  for (const auto& e : rec.expired) erase_one(samplers_[e.neighbor], v);
  for (const auto& e : rec.added) samplers_[e.neighbor].push_back(v);
  current = std::move(next);
  return rec;
}

// ---- detection ------------------------------------------------------------

std::vector<NodeId> AffectedSet::within(std::size_t l) const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (hops[i] <= l) out.push_back(all[i]);
  }
  return out;
}

AffectedSet detect_affected(std::span<const TemporalEdge> batch, EdgeId first_edge,
                            NeighborCache& cache, const NodeMemoryTable& memory,
                            std::size_t layers, WorkCounters* counters) {
  AffectedSet out;
  if (batch.empty()) return out;

  // Fresh entries per endpoint, most recent first (later arrivals win ties).
  std::map<NodeId, std::vector<NeighborEntry>> fresh;
  for (std::size_t i = batch.size(); i-- > 0;) {
    const auto& e = batch[i];
    const EdgeId id = first_edge + i;
    fresh[e.src].push_back({e.dst, e.t, id});
    if (e.dst != e.src) fresh[e.dst].push_back({e.src, e.t, id});
  }
  out.direct.reserve(fresh.size());
  for (auto& [v, entries] : fresh) {
    out.direct.push_back(v);
    out.changes.emplace(v, cache.update(v, entries, memory.last_interaction(v)));
    if (counters) counters->nodes_sampled += 1;
  }

  std::unordered_map<NodeId, std::uint32_t> dist;
  dist.reserve(out.direct.size() * 4);
  for (NodeId v : out.direct) dist.emplace(v, 0);
  std::vector<NodeId> frontier = out.direct;
  for (std::uint32_t hop = 1; hop <= layers && !frontier.empty(); ++hop) {
    std::vector<NodeId> next;
    for (NodeId u : frontier) {
      for (NodeId w : cache.samplers(u)) {
        if (counters) counters->detection_ops += 1;
        if (dist.emplace(w, hop).second) next.push_back(w);
      }
    }
    frontier = std::move(next);
  }

  out.all.reserve(dist.size());
  for (const auto& kv : dist) out.all.push_back(kv.first);
  std::sort(out.all.begin(), out.all.end());
  out.hops.reserve(out.all.size());
  for (NodeId v : out.all) out.hops.push_back(dist.at(v));

  // Kept entries that point at an endpoint saw that neighbor's memory move.
  auto is_direct = [&](NodeId u) {
    return std::binary_search(out.direct.begin(), out.direct.end(), u);
  };
  for (std::size_t i = 0; i < out.all.size(); ++i) {
    if (out.hops[i] > 1) continue;
    const NodeId v = out.all[i];
    auto [it, inserted] = out.changes.try_emplace(v);
    ChangeRecord& rec = it->second;
    const auto list = cache.list(v);
    if (inserted) rec.size_after = list.size();
    for (std::size_t k = rec.added.size(); k < list.size(); ++k) {
      if (is_direct(list[k].neighbor)) {
        rec.updated.push_back(list[k].neighbor);
        rec.updated_entries += 1;
      }
    }
    std::sort(rec.updated.begin(), rec.updated.end());
    rec.updated.erase(std::unique(rec.updated.begin(), rec.updated.end()), rec.updated.end());
  }
  return out;
}

GatherResult gather_sorted(std::span<const NodeId> ids, const Matrix& table) {
  for (NodeId id : ids) {
    if (id >= table.rows()) {
      throw InputError("gather id " + std::to_string(id) + " out of range for " +
                       std::to_string(table.rows()) + " rows");
    }
  }
  GatherResult g;
  g.order.resize(ids.size());
  std::iota(g.order.begin(), g.order.end(), std::size_t{0});
  std::stable_sort(g.order.begin(), g.order.end(),
                   [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
  Matrix sorted(ids.size(), table.cols());
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const auto src = table.row(ids[g.order[k]]);
    std::copy(src.begin(), src.end(), sorted.row(k).begin());
  }
  g.inverse.resize(ids.size());
  for (std::size_t k = 0; k < ids.size(); ++k) g.inverse[g.order[k]] = k;
  g.rows = Matrix(ids.size(), table.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto src = sorted.row(g.inverse[i]);
    std::copy(src.begin(), src.end(), g.rows.row(i).begin());
  }
  return g;
}

// ---- attention cache and delta step -------------------------------------

void AttentionCacheEntry::resum(std::size_t heads, std::size_t d) {
  max_logit.assign(heads, kNegInf);
  z.assign(heads, 0.0);
  weighted.assign(heads, Vector(d, 0.0));
  for (std::size_t h = 0; h < heads; ++h) {
    for (const auto& r : records) max_logit[h] = std::max(max_logit[h], r.score.logits[h]);
    for (const auto& r : records) {
      const double w = std::exp(r.score.logits[h] - max_logit[h]);
      z[h] += w;
      for (std::size_t c = 0; c < d; ++c) weighted[h][c] += w * r.score.values[h][c];
    }
  }
  z_peak = z;
}

Vector AttentionCacheEntry::sum_embedding(std::size_t d) const {
  Vector out(d, 0.0);
  if (records.empty()) return out;
  for (std::size_t h = 0; h < z.size(); ++h) {
    for (std::size_t c = 0; c < d; ++c) out[c] += weighted[h][c] / z[h];
  }
  return out;
}

double AttentionCacheEntry::normalizer(std::size_t h) const {
  return records.empty() ? 0.0 : std::exp(max_logit[h]) * z[h];
}

AttentionCacheEntry AttentionCacheEntry::from_scores(std::vector<Vector> queries,
                                                     std::span<const NeighborEntry> sampled,
                                                     std::vector<NeighborScore> scores,
                                                     Timestamp t_ref, Vector output) {
  AttentionCacheEntry entry;
  entry.valid = true;
  entry.t_ref = t_ref;
  entry.queries = std::move(queries);
  entry.records.reserve(sampled.size());
  for (std::size_t i = 0; i < sampled.size(); ++i) {
    entry.records.push_back(
        {sampled[i].edge, sampled[i].neighbor, sampled[i].t, std::move(scores[i])});
  }
  entry.resum(entry.queries.size(), output.size());
  entry.output = std::move(output);
  return entry;
}

double DeltaReport::bound() const {
  if (size_after == 0 || changed == 0) return 0.0;
  double zsum = 0.0;
  for (std::size_t h = 0; h < z_old.size(); ++h) {
    if (z_new[h] > 0.0) zsum += std::abs(1.0 - z_old[h] / z_new[h]);
  }
  return static_cast<double>(changed) / static_cast<double>(size_after) * max_value_norm * zsum;
}

std::optional<Vector> delta_embed(AttentionCacheEntry& entry, const DeltaChange& change,
                                  std::size_t layer, const ModelParameters& params,
                                  DeltaReport* report) {
  if (!entry.valid) return std::nullopt;
  const std::size_t heads = params.dims.heads;
  const std::size_t d = params.dims.d;
  if (change.empty()) {
    if (report) {
      *report = {};
      report->size_after = entry.records.size();
      for (std::size_t h = 0; h < heads; ++h) {
        report->z_old.push_back(entry.normalizer(h));
        report->z_new.push_back(entry.normalizer(h));
      }
    }
    return entry.output;
  }

  const std::vector<double> m_old = entry.max_logit;
  const std::vector<double> z_old = entry.z;
  std::vector<double>& z_peak = entry.z_peak;
  if (z_peak.size() != heads) z_peak = entry.z;
  double max_norm = 0.0;
  auto track_norm = [&](const NeighborScore& s) {
    for (const auto& v : s.values) max_norm = std::max(max_norm, l2_norm(v));
  };
  for (const auto& r : entry.records) track_norm(r.score);

  auto add_term = [&](const NeighborScore& s) {
    for (std::size_t h = 0; h < heads; ++h) {
      const double logit = s.logits[h];
      if (logit > entry.max_logit[h]) {
        const double scale =
            entry.max_logit[h] == kNegInf ? 0.0 : std::exp(entry.max_logit[h] - logit);
        entry.z[h] *= scale;
        z_peak[h] *= scale;
        for (double& x : entry.weighted[h]) x *= scale;
        entry.max_logit[h] = logit;
      }
      const double w = std::exp(logit - entry.max_logit[h]);
      entry.z[h] += w;
      z_peak[h] = std::max(z_peak[h], entry.z[h]);
      for (std::size_t c = 0; c < d; ++c) entry.weighted[h][c] += w * s.values[h][c];
    }
  };
  bool removed = false;
  auto remove_term = [&](const NeighborScore& s) {
    removed = true;
    for (std::size_t h = 0; h < heads; ++h) {
      const double w = std::exp(s.logits[h] - entry.max_logit[h]);
      entry.z[h] -= w;
      for (std::size_t c = 0; c < d; ++c) entry.weighted[h][c] -= w * s.values[h][c];
    }
  };
  auto find = [&](EdgeId edge) {
    return std::find_if(entry.records.begin(), entry.records.end(),
                        [&](const CachedNeighbor& r) { return r.edge == edge; });
  };

  std::size_t changed = 0;
  for (EdgeId edge : change.expired) {
    auto it = find(edge);
    if (it == entry.records.end()) continue;
    remove_term(it->score);
    entry.records.erase(it);
    ++changed;
  }
  for (const auto& [edge, input] : change.updated) {
    auto it = find(edge);
    if (it == entry.records.end()) continue;
    NeighborScore fresh = score_neighbor(entry.queries, input, entry.t_ref, layer, params);
    track_norm(fresh);
    remove_term(it->score);
    add_term(fresh);
    it->score = std::move(fresh);
    ++changed;
  }
  std::vector<CachedNeighbor> front;
  front.reserve(change.added.size());
  for (const auto& [nb, input] : change.added) {
    NeighborScore fresh = score_neighbor(entry.queries, input, entry.t_ref, layer, params);
    track_norm(fresh);
    add_term(fresh);
    front.push_back({nb.edge, nb.neighbor, nb.t, std::move(fresh)});
    ++changed;
  }
  entry.records.insert(entry.records.begin(), std::make_move_iterator(front.begin()),
                       std::make_move_iterator(front.end()));

  bool resummed = false;
  if (entry.records.empty()) {
    entry.resum(heads, d);
  } else if (removed) {
    for (std::size_t h = 0; h < heads; ++h) {
      if (!(entry.z[h] > kResumFraction * z_peak[h])) {
        entry.resum(heads, d);
        resummed = true;
        break;
      }
    }
  }

  entry.output = entry.sum_embedding(d);
  if (report) {
    *report = {};
    report->changed = changed;
    report->size_after = entry.records.size();
    report->max_value_norm = max_norm;
    report->resummed = resummed;
    for (std::size_t h = 0; h < heads; ++h) {
      const double old_rel =
          m_old[h] == kNegInf ? 0.0 : z_old[h] * std::exp(m_old[h] - entry.max_logit[h]);
      report->z_old.push_back(old_rel);
      report->z_new.push_back(entry.z[h]);
    }
  }
  return entry.output;
}

// ---- engine ------------------------------------------------------------------

IncrementalEngine::IncrementalEngine(ModelParameters params, EngineOptions options,
                                     std::size_t nodes, Matrix node_features)
    : params_(std::move(params)),
      options_(options),
      features_(std::move(node_features)),
      store_(params_.dims.d_e),
      memory_(params_.dims.d_s),
      cache_(options_.pipeline.fanout, options_.pipeline.window) {
  params_.dims.validate();
  options_.pipeline.validate();
  if (!features_.empty() && features_.cols() != params_.dims.d_x) {
    throw InputError("node feature width does not match d_x");
  }
  const std::size_t layers = params_.dims.layers;
  reps_.emplace_back(0, params_.dims.layer_input_dim(0));
  for (std::size_t l = 1; l <= layers; ++l) reps_.emplace_back(0, params_.dims.d);
  if (options_.mode == EngineMode::kDelta) {
    attn_.resize(layers);
    pending_.resize(layers);
    stale_.resize(layers);
  }
  grow(nodes);
}

void IncrementalEngine::grow(std::size_t n) {
  const std::size_t old = memory_.size();
  if (n <= old) return;
  store_.reserve_nodes(n);
  memory_.ensure_nodes(n);
  cache_.ensure_nodes(n);
  for (auto& m : reps_) m.resize_rows(n);
  for (auto& a : attn_) a.resize(n);
  for (auto& p : pending_) p.resize(n, Pending::kClean);
  for (auto& s : stale_) s.resize(n);
  hop_.resize(n, kNoHop);
  touched_.resize(n, 0);
  for (std::size_t v = old; v < n; ++v) refresh_level0(static_cast<NodeId>(v));
}

void IncrementalEngine::set_row(std::size_t l, NodeId v, std::span<const double> row) {
  std::copy(row.begin(), row.end(), reps_[l].row(v).begin());
}

void IncrementalEngine::refresh_level0(NodeId v) {
  set_row(0, v, layer0_input(memory_, features_, v, params_.dims.d_x));
}

void IncrementalEngine::touch(NodeId v) {
  if (touched_[v] == stamp_) return;
  touched_[v] = stamp_;
  sink_->node_pipelines += 1;
}

void IncrementalEngine::note_scores(std::span<const NeighborScore> scores) {
  for (const auto& s : scores) {
    for (const auto& v : s.values) max_value_norm_ = std::max(max_value_norm_, l2_norm(v));
  }
}

void IncrementalEngine::compute_exact(NodeId v, std::size_t l) {
  const auto sampled = cache_.list(v);
  std::vector<NeighborInput> inputs;
  inputs.reserve(sampled.size());
  for (const auto& e : sampled) {
    inputs.push_back({concat({reps_[l - 1].row(e.neighbor), store_.edge_feature(e.edge)}), e.t});
  }
  sink_->rows_gathered += sampled.size() + 1;
  const bool delta = options_.mode == EngineMode::kDelta;
  const Timestamp t_ref = memory_.last_interaction(v);
  auto result =
      temporal_attention(reps_[l - 1].row(v), inputs, t_ref, l - 1, params_, delta);
  sink_->layer_evals += 1;
  sink_->edges_attended += sampled.size();
  sink_->attention_macs += attention_macs(params_.dims, l - 1, sampled.size());
  if (delta) {
    note_scores(result.scores);
    attn_[l - 1][v] = AttentionCacheEntry::from_scores(
        std::move(result.queries), sampled, std::move(result.scores), t_ref, result.embedding);
  }
  set_row(l, v, result.embedding);
}

void IncrementalEngine::validate(std::span<const TemporalEdge> batch) const {
  validate_batch(batch, store_);
}

std::span<const double> IncrementalEngine::fresh_embedding(NodeId v) {
  if (v >= node_count()) throw InputError("node " + std::to_string(v) + " is unknown");
  const std::size_t k = params_.dims.layers;
  if (options_.mode == EngineMode::kDelta && pending_[k - 1][v] != Pending::kClean) {
    sink_->cache_misses += 1;
    ensure(v, k);
  } else {
    sink_->cache_hits += 1;
  }
  return reps_[k].row(v);
}

std::vector<double> IncrementalEngine::process_batch(std::span<const TemporalEdge> batch) {
  last_ = {};
  sink_ = &last_;
  affected_ = {};
  if (batch.empty()) return {};
  validate(batch);
  grow(node_bound(batch));
  ++stamp_;

  std::vector<double> predictions;
  predictions.reserve(batch.size());
  for (const auto& e : batch) {
    const auto hs = fresh_embedding(e.src);
    const Vector hu(hs.begin(), hs.end());
    predictions.push_back(predict_link(hu, fresh_embedding(e.dst), params_));
  }

  const EdgeId first = store_.edge_count();
  const auto updates =
      compute_memory_updates(batch, memory_, params_, options_.pipeline.aggregator, sink_);
  apply_memory_updates(updates, memory_);
  for (const auto& e : batch) store_.insert_edge(e);
  for (const auto& u : updates) refresh_level0(u.node);

  affected_ = detect_affected(batch, first, cache_, memory_, params_.dims.layers, sink_);
  for (std::size_t i = 0; i < affected_.all.size(); ++i) hop_[affected_.all[i]] = affected_.hops[i];

  if (options_.mode == EngineMode::kExact) {
    generate_exact();
  } else {
    mark_pending();
    for (NodeId v : affected_.direct) ensure(v, params_.dims.layers);
  }

  for (NodeId v : affected_.all) hop_[v] = kNoHop;
  total_ += last_;
  return predictions;
}

void IncrementalEngine::generate_exact() {
  const auto& dims = params_.dims;
  for (std::size_t l = 1; l <= dims.layers; ++l) {
    const auto nodes = affected_.within(l);
    std::vector<NodeId> ids;
    std::vector<std::size_t> offsets;
    offsets.reserve(nodes.size() + 1);
    for (NodeId v : nodes) {
      offsets.push_back(ids.size());
      ids.push_back(v);
      for (const auto& e : cache_.list(v)) ids.push_back(e.neighbor);
    }
    offsets.push_back(ids.size());
    const GatherResult g = gather_sorted(ids, reps_[l - 1]);
    sink_->rows_gathered += ids.size();

    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const NodeId v = nodes[i];
      const auto sampled = cache_.list(v);
      std::vector<NeighborInput> inputs;
      inputs.reserve(sampled.size());
      for (std::size_t k = 0; k < sampled.size(); ++k) {
        inputs.push_back(
            {concat({g.rows.row(offsets[i] + 1 + k), store_.edge_feature(sampled[k].edge)}),
             sampled[k].t});
      }
      const auto result = temporal_attention(g.rows.row(offsets[i]), inputs,
                                             memory_.last_interaction(v), l - 1, params_);
      set_row(l, v, result.embedding);
      sink_->layer_evals += 1;
      sink_->edges_attended += sampled.size();
      sink_->attention_macs += attention_macs(dims, l - 1, sampled.size());
      touch(v);
    }
  }
}

void IncrementalEngine::mark_pending() {
  const std::size_t layers = params_.dims.layers;
  for (std::size_t i = 0; i < affected_.all.size(); ++i) {
    const NodeId v = affected_.all[i];
    const std::uint32_t hop = affected_.hops[i];
    for (std::size_t l = std::max<std::size_t>(hop, 1); l <= layers; ++l) {
      Pending& st = pending_[l - 1][v];
      if (st == Pending::kClean) ++pending_total_;
      if (hop == 0 || hop < l) {
        st = Pending::kFull;
        stale_[l - 1][v].clear();
        continue;
      }
      if (st == Pending::kFull) continue;
      st = Pending::kDelta;
      auto& stale = stale_[l - 1][v];
      for (const auto& e : cache_.list(v)) {
        if (hop_[e.neighbor] < l) stale.push_back(e.neighbor);
      }
      std::sort(stale.begin(), stale.end());
      stale.erase(std::unique(stale.begin(), stale.end()), stale.end());
    }
  }
}

void IncrementalEngine::clear_pending(NodeId v, std::size_t l) {
  Pending& st = pending_[l - 1][v];
  if (st != Pending::kClean) --pending_total_;
  st = Pending::kClean;
  stale_[l - 1][v].clear();
}

void IncrementalEngine::ensure(NodeId v, std::size_t l) {
  Pending& st = pending_[l - 1][v];
  if (st == Pending::kClean) return;
  AttentionCacheEntry& entry = attn_[l - 1][v];
  if (st == Pending::kFull || !entry.valid) {
    if (l >= 2) {
      ensure(v, l - 1);
      for (const auto& e : cache_.list(v)) ensure(e.neighbor, l - 1);
    }
    compute_exact(v, l);
  } else {
    const std::vector<NodeId> stale = stale_[l - 1][v];
    if (l >= 2) {
      for (NodeId u : stale) ensure(u, l - 1);
    }
    DeltaChange change;
    for (const auto& r : entry.records) {
      if (std::binary_search(stale.begin(), stale.end(), r.neighbor)) {
        change.updated.push_back(
            {r.edge,
             NeighborInput{concat({reps_[l - 1].row(r.neighbor), store_.edge_feature(r.edge)}),
                           r.t}});
      }
    }
    sink_->rows_gathered += change.updated.size();
    DeltaReport report;
    const auto h = delta_embed(entry, change, l - 1, params_, &report);
    max_value_norm_ = std::max(max_value_norm_, report.max_value_norm);
    set_row(l, v, *h);
    sink_->delta_updates += 1;
    sink_->layer_evals += 1;
    sink_->edges_attended += change.updated.size();
    sink_->attention_macs += attention_macs(params_.dims, l - 1, change.updated.size());
    if (options_.audit_delta) audit_step(v, l, *h, report);
  }
  clear_pending(v, l);
  touch(v);
}

void IncrementalEngine::audit_step(NodeId v, std::size_t l, const Vector& got,
                                   const DeltaReport& report) {
  // Reference: plain normalized softmax over the refreshed record set.
  const auto& entry = attn_[l - 1][v];
  const std::size_t d = params_.dims.d;
  Vector want(d, 0.0);
  if (!entry.records.empty()) {
    for (std::size_t h = 0; h < params_.dims.heads; ++h) {
      double m = kNegInf;
      for (const auto& r : entry.records) m = std::max(m, r.score.logits[h]);
      double z = 0.0;
      for (const auto& r : entry.records) z += std::exp(r.score.logits[h] - m);
      for (const auto& r : entry.records) {
        const double a = std::exp(r.score.logits[h] - m) / z;
        for (std::size_t c = 0; c < d; ++c) want[c] += a * r.score.values[h][c];
      }
    }
  }
  Vector diff(d);
  for (std::size_t c = 0; c < d; ++c) diff[c] = got[c] - want[c];
  const double err = l2_norm(diff);
  const double excess = err - report.bound();
  audit_.checked += 1;
  audit_.max_error = std::max(audit_.max_error, err);
  audit_.max_excess = audit_.checked == 1 ? excess : std::max(audit_.max_excess, excess);
  if (excess > kRoundingSlack) audit_.violations += 1;
}

std::vector<NodeChange> IncrementalEngine::last_changes() const {
  std::vector<NodeChange> out;
  out.reserve(affected_.changes.size());
  for (const auto& [v, rec] : affected_.changes) {
    if (rec.size_after > 0) out.push_back({v, rec.delta_size(), rec.size_after});
  }
  return out;
}

void IncrementalEngine::rebuild_partial(std::span<const NodeId> nodes) {
  rebuild_ = {};
  sink_ = &rebuild_;
  ++stamp_;
  const std::size_t layers = params_.dims.layers;
  const std::size_t d = params_.dims.d;
  std::vector<NodeId> targets(nodes.begin(), nodes.end());
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  for (NodeId v : targets) {
    if (v >= node_count()) throw InputError("rebuild node " + std::to_string(v) + " is unknown");
  }
  const bool delta = options_.mode == EngineMode::kDelta;
  // Exact rows evaluated from scratch; only the requested nodes are written.
  std::vector<std::unordered_map<NodeId, Vector>> memo(layers + 1);
  std::function<std::span<const double>(NodeId, std::size_t)> exact =
      [&](NodeId u, std::size_t l) -> std::span<const double> {
    if (l == 0) return reps_[0].row(u);
    auto it = memo[l].find(u);
    if (it != memo[l].end()) return it->second;
    const auto sampled = cache_.list(u);
    std::vector<NeighborInput> inputs;
    inputs.reserve(sampled.size());
    for (const auto& e : sampled) {
      inputs.push_back({concat({exact(e.neighbor, l - 1), store_.edge_feature(e.edge)}), e.t});
    }
    const Vector query(exact(u, l - 1).begin(), exact(u, l - 1).end());
    auto result =
        temporal_attention(query, inputs, memory_.last_interaction(u), l - 1, params_, delta);
    sink_->layer_evals += 1;
    sink_->edges_attended += sampled.size();
    sink_->attention_macs += attention_macs(params_.dims, l - 1, sampled.size());
    if (delta && std::binary_search(targets.begin(), targets.end(), u)) {
      note_scores(result.scores);
      attn_[l - 1][u] = AttentionCacheEntry::from_scores(std::move(result.queries), sampled,
                                                          std::move(result.scores),
                                                          memory_.last_interaction(u),
                                                          result.embedding);
    }
    return memo[l].emplace(u, std::move(result.embedding)).first->second;
  };

  for (NodeId v : targets) {
    for (std::size_t l = 1; l <= layers; ++l) {
      const auto row = exact(v, l);
      Vector copy(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(d));
      set_row(l, v, copy);
      if (delta) clear_pending(v, l);
    }
    touch(v);
  }
  total_ += rebuild_;
  sink_ = &last_;
}

void IncrementalEngine::rebuild_full() {
  rebuild_ = {};
  sink_ = &rebuild_;
  ++stamp_;
  const std::size_t n = node_count();
  for (std::size_t l = 1; l <= params_.dims.layers; ++l) {
    for (NodeId v = 0; v < n; ++v) {
      compute_exact(v, l);
      if (options_.mode == EngineMode::kDelta) clear_pending(v, l);
      touch(v);
    }
  }
  total_ += rebuild_;
  sink_ = &last_;
}

}  // namespace streamtgn
