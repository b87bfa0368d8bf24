// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

#include "streamtgn/pipeline.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace streamtgn {

void PipelineConfig::validate() const {
  if (fanout == 0) throw InputError("fanout L must be at least 1");
  if (!(window > 0.0)) throw InputError("time window must be positive");
}

WorkCounters& WorkCounters::operator+=(const WorkCounters& o) {
  node_pipelines += o.node_pipelines;
  layer_evals += o.layer_evals;
  edges_attended += o.edges_attended;
  attention_macs += o.attention_macs;
  messages += o.messages;
  gru_steps += o.gru_steps;
  nodes_sampled += o.nodes_sampled;
  rows_gathered += o.rows_gathered;
  detection_ops += o.detection_ops;
  cache_hits += o.cache_hits;
  cache_misses += o.cache_misses;
  delta_updates += o.delta_updates;
  return *this;
}

void validate_batch(std::span<const TemporalEdge> batch, const TemporalStore& store) {
  Timestamp floor = store.latest_time().value_or(-kForever);
  for (const auto& e : batch) {
    if (e.feat.size() != store.edge_dim()) {
      throw InputError("edge feature length " + std::to_string(e.feat.size()) +
                       " does not match d_e=" + std::to_string(store.edge_dim()));
    }
    if (e.t < floor) {
      throw MonotonicityError("edge timestamp " + std::to_string(e.t) +
                              " precedes committed history at " + std::to_string(floor));
    }
    floor = e.t;
  }
}

std::size_t node_bound(std::span<const TemporalEdge> batch) {
  std::size_t n = 0;
  for (const auto& e : batch) n = std::max<std::size_t>(n, std::max(e.src, e.dst) + std::size_t{1});
  return n;
}

std::uint64_t attention_macs(const ModelDims& dims, std::size_t layer, std::size_t neighbors) {
  const std::uint64_t h = dims.heads;
  const std::uint64_t query = h * dims.query_input_dim(layer) * dims.d_k;
  const std::uint64_t per_neighbor =
      h * (2 * dims.key_input_dim(layer) * dims.d_k + dims.d_k + dims.d_k * dims.d + dims.d);
  return query + per_neighbor * neighbors;
}

std::vector<MemoryUpdate> compute_memory_updates(std::span<const TemporalEdge> batch,
                                                 const NodeMemoryTable& memory,
                                                 const ModelParameters& params,
                                                 Aggregator aggregator,
                                                 WorkCounters* counters) {
  const std::size_t d_s = params.dims.d_s;
  const Vector zero(d_s, 0.0);
  auto state = [&](NodeId v) -> std::span<const double> {
    return v < memory.size() ? memory.state(v) : std::span<const double>(zero);
  };
  auto last = [&](NodeId v) { return v < memory.size() ? memory.last_interaction(v) : 0.0; };

  std::map<NodeId, std::vector<TimedMessage>> inbox;
  std::map<NodeId, Timestamp> newest;
  for (const auto& e : batch) {
    inbox[e.src].push_back({compute_message(state(e.src), state(e.dst), e.feat, e.t - last(e.src),
                                            MessageSide::kSource, params),
                            e.t});
    inbox[e.dst].push_back({compute_message(state(e.dst), state(e.src), e.feat, e.t - last(e.dst),
                                            MessageSide::kDestination, params),
                            e.t});
    for (NodeId v : {e.src, e.dst}) {
      auto [it, fresh] = newest.emplace(v, e.t);
      if (!fresh) it->second = std::max(it->second, e.t);
    }
  }

  std::vector<MemoryUpdate> out;
  out.reserve(inbox.size());
  for (const auto& [v, msgs] : inbox) {
    const Vector agg = aggregate_messages(msgs, aggregator);
    out.push_back({v, gru_update(agg, state(v), params), std::max(last(v), newest.at(v))});
    if (counters) counters->messages += msgs.size();
  }
  if (counters) counters->gru_steps += out.size();
  return out;
}

void apply_memory_updates(std::span<const MemoryUpdate> updates, NodeMemoryTable& memory) {
  for (const auto& u : updates) {
    memory.ensure_nodes(static_cast<std::size_t>(u.node) + 1);
    memory.set_state(u.node, u.state);
    memory.set_last_interaction(u.node, u.last);
  }
}

std::vector<NeighborEntry> apply_window(std::vector<NeighborEntry> list, Timestamp t_ref,
                                        Timestamp window) {
  if (window == kForever) return list;
  const Timestamp cutoff = t_ref - window;
  while (!list.empty() && list.back().t < cutoff) list.pop_back();
  return list;
}

std::vector<NeighborEntry> sample_neighbors(const TemporalStore& store,
                                            const NodeMemoryTable& memory, NodeId v,
                                            const PipelineConfig& config, Timestamp before) {
  auto list = store.recent_neighbors(v, config.fanout, before);
  const Timestamp t_ref = v < memory.size() ? memory.last_interaction(v) : 0.0;
  return apply_window(std::move(list), t_ref, config.window);
}

Vector layer0_input(const NodeMemoryTable& memory, const Matrix& features, NodeId v,
                    std::size_t d_x) {
  Vector out(memory.dim() + d_x, 0.0);
  if (v < memory.size()) {
    const auto s = memory.state(v);
    std::copy(s.begin(), s.end(), out.begin());
  }
  if (d_x > 0 && v < features.rows()) {
    const auto x = features.row(v);
    std::copy(x.begin(), x.end(), out.begin() + static_cast<std::ptrdiff_t>(memory.dim()));
  }
  return out;
}

AttentionResult attend_node(NodeId v, std::size_t layer, std::span<const NeighborEntry> sampled,
                            const RowLookup& prev, const TemporalStore& store,
                            const NodeMemoryTable& memory, const ModelParameters& params,
                            bool with_scores, WorkCounters* counters) {
  std::vector<NeighborInput> inputs;
  inputs.reserve(sampled.size());
  for (const auto& entry : sampled) {
    inputs.push_back({concat({prev(entry.neighbor), store.edge_feature(entry.edge)}), entry.t});
  }
  const Timestamp t_ref = v < memory.size() ? memory.last_interaction(v) : 0.0;
  if (counters) {
    counters->layer_evals += 1;
    counters->edges_attended += sampled.size();
    counters->attention_macs += attention_macs(params.dims, layer, sampled.size());
  }
  return temporal_attention(prev(v), inputs, t_ref, layer, params, with_scores);
}

}  // namespace streamtgn
