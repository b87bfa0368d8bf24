// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

#include "streamtgn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "text_util.hpp"

namespace streamtgn {

namespace {

Timestamp inclusive_bound(Timestamp t_now) {
  return std::nextafter(t_now, std::numeric_limits<double>::infinity());
}

Vector embed_recursive(const TemporalStore& store, const NodeMemoryTable& memory,
                       const ModelParameters& params, const PipelineConfig& config,
                       Timestamp before, NodeId v, std::size_t level, const Matrix& features,
                       WorkCounters* counters) {
  if (level == 0) return layer0_input(memory, features, v, params.dims.d_x);
  const auto sampled = sample_neighbors(store, memory, v, config, before);
  std::map<NodeId, Vector> prev;
  prev.emplace(v, embed_recursive(store, memory, params, config, before, v, level - 1, features,
                                  counters));
  for (const auto& entry : sampled) {
    if (!prev.count(entry.neighbor)) {
      prev.emplace(entry.neighbor, embed_recursive(store, memory, params, config, before,
                                                   entry.neighbor, level - 1, features, counters));
    }
  }
  const RowLookup lookup = [&](NodeId u) -> std::span<const double> { return prev.at(u); };
  return attend_node(v, level - 1, sampled, lookup, store, memory, params, false, counters)
      .embedding;
}

}  // namespace

EngineSnapshot full_recompute(const TemporalStore& store, const NodeMemoryTable& memory,
                              const ModelParameters& params, const PipelineConfig& config,
                              Timestamp t_now, const Matrix& node_features,
                              WorkCounters* counters) {
  const auto& dims = params.dims;
  const std::size_t n = std::max(store.node_count(), memory.size());
  const Timestamp before = inclusive_bound(t_now);

  std::vector<std::vector<NeighborEntry>> sampled(n);
  for (NodeId v = 0; v < n; ++v) sampled[v] = sample_neighbors(store, memory, v, config, before);

  Matrix prev(n, dims.layer_input_dim(0));
  for (NodeId v = 0; v < n; ++v) {
    const Vector row = layer0_input(memory, node_features, v, dims.d_x);
    std::copy(row.begin(), row.end(), prev.row(v).begin());
  }
  for (std::size_t layer = 0; layer < dims.layers; ++layer) {
    Matrix next(n, dims.d);
    const RowLookup lookup = [&](NodeId u) { return prev.row(u); };
    for (NodeId v = 0; v < n; ++v) {
      const auto result =
          attend_node(v, layer, sampled[v], lookup, store, memory, params, false, counters);
      std::copy(result.embedding.begin(), result.embedding.end(), next.row(v).begin());
    }
    prev = std::move(next);
  }
  if (counters) {
    counters->node_pipelines += n;
    counters->nodes_sampled += n;
  }

  EngineSnapshot snap;
  snap.embeddings = std::move(prev);
  snap.memory = memory;
  snap.memory.ensure_nodes(n);
  snap.timestamp = t_now;
  return snap;
}

Vector embed_node(const TemporalStore& store, const NodeMemoryTable& memory,
                  const ModelParameters& params, const PipelineConfig& config, Timestamp t_now,
                  NodeId v, const Matrix& node_features, WorkCounters* counters) {
  return embed_recursive(store, memory, params, config, inclusive_bound(t_now), v,
                         params.dims.layers, node_features, counters);
}

OracleEngine::OracleEngine(ModelParameters params, PipelineConfig config, std::size_t nodes,
                           Matrix node_features)
    : params_(std::move(params)),
      config_(config),
      features_(std::move(node_features)),
      store_(params_.dims.d_e),
      memory_(params_.dims.d_s) {
  params_.dims.validate();
  config_.validate();
  if (!features_.empty() && features_.cols() != params_.dims.d_x) {
    throw InputError("node feature width does not match d_x");
  }
  snapshot_.embeddings = Matrix(0, params_.dims.d);
  snapshot_.memory = NodeMemoryTable(params_.dims.d_s);
  grow(nodes);
}

void OracleEngine::grow(std::size_t n) {
  if (n <= memory_.size()) return;
  store_.reserve_nodes(n);
  memory_.ensure_nodes(n);
  snapshot_.embeddings.resize_rows(n);
  snapshot_.memory.ensure_nodes(n);
}

std::vector<double> OracleEngine::apply_batch(std::span<const TemporalEdge> batch) {
  last_counters_ = {};
  if (batch.empty()) return {};
  validate_batch(batch, store_);
  grow(node_bound(batch));

  std::vector<double> predictions;
  predictions.reserve(batch.size());
  for (const auto& e : batch) {
    predictions.push_back(predict_link(snapshot_.embeddings.row(e.src),
                                       snapshot_.embeddings.row(e.dst), params_));
  }

  const auto updates =
      compute_memory_updates(batch, memory_, params_, config_.aggregator, &last_counters_);
  apply_memory_updates(updates, memory_);
  for (const auto& e : batch) store_.insert_edge(e);

  if (track_snapshot_) refresh();
  return predictions;
}

void OracleEngine::refresh() {
  snapshot_ = full_recompute(store_, memory_, params_, config_, store_.latest_time().value_or(0.0),
                             features_, &last_counters_);
}

SequentialReplay replay_sequential(std::span<const TemporalEdge> stream,
                                   const ModelParameters& params, const PipelineConfig& config,
                                   std::size_t nodes, const Matrix& node_features) {
  config.validate();
  TemporalStore store(params.dims.d_e);
  NodeMemoryTable memory(params.dims.d_s);
  store.reserve_nodes(nodes);
  memory.ensure_nodes(nodes);
  SequentialReplay out;
  out.predictions.reserve(stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto one = stream.subspan(i, 1);
    validate_batch(one, store);
    const Timestamp t_now = store.latest_time().value_or(0.0);
    const Vector hu =
        embed_node(store, memory, params, config, t_now, one[0].src, node_features);
    const Vector hv =
        embed_node(store, memory, params, config, t_now, one[0].dst, node_features);
    out.predictions.push_back(predict_link(hu, hv, params));
    const auto updates = compute_memory_updates(one, memory, params, config.aggregator);
    apply_memory_updates(updates, memory);
    store.insert_edge(one[0]);
  }
  memory.ensure_nodes(std::max(nodes, store.node_count()));
  out.memory = std::move(memory);
  return out;
}

std::vector<NodeId> bfs_affected(std::span<const TemporalEdge> batch, const TemporalStore& store,
                                 const NodeMemoryTable& memory, const PipelineConfig& config,
                                 std::size_t layers) {
  const std::size_t n = std::max({store.node_count(), memory.size(), node_bound(batch)});
  std::vector<std::vector<NodeId>> samplers(n);
  for (NodeId v = 0; v < n; ++v) {
    for (const auto& entry : sample_neighbors(store, memory, v, config)) {
      samplers[entry.neighbor].push_back(v);
    }
  }
  std::vector<char> seen(n, 0);
  std::vector<NodeId> frontier;
  for (const auto& e : batch) {
    for (NodeId v : {e.src, e.dst}) {
      if (!seen[v]) {
        seen[v] = 1;
        frontier.push_back(v);
      }
    }
  }
  std::vector<NodeId> all = frontier;
  for (std::size_t hop = 0; hop < layers; ++hop) {
    std::vector<NodeId> next;
    for (NodeId u : frontier) {
      for (NodeId v : samplers[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          next.push_back(v);
        }
      }
    }
    all.insert(all.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  std::sort(all.begin(), all.end());
  return all;
}

void write_snapshot(const EngineSnapshot& snapshot, std::ostream& out) {
  const auto& m = snapshot.embeddings;
  out << "# streamtgn-snapshot v1 n=" << m.rows() << " d=" << m.cols()
      << " t=" << detail::format_shortest(snapshot.timestamp) << '\n';
  for (std::size_t v = 0; v < m.rows(); ++v) {
    out << v;
    for (double x : m.row(v)) out << ',' << detail::format_shortest(x);
    out << '\n';
  }
}

EngineSnapshot read_snapshot(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError(lineno, "missing snapshot header");
  const auto tokens = detail::split_ws(line);
  if (tokens.size() != 6 || tokens[0] != "#" || tokens[1] != "streamtgn-snapshot" ||
      tokens[2] != "v1") {
    throw ParseError(lineno, "bad snapshot header");
  }
  auto field = [&](std::string_view tok, std::string_view key) {
    if (tok.substr(0, key.size()) != key) throw ParseError(lineno, "bad snapshot header");
    return tok.substr(key.size());
  };
  const auto n = detail::parse_int_at<std::size_t>(field(tokens[3], "n="), lineno, "n");
  const auto d = detail::parse_int_at<std::size_t>(field(tokens[4], "d="), lineno, "d");
  EngineSnapshot snap;
  snap.timestamp = detail::parse_double_at(field(tokens[5], "t="), lineno, "t");
  snap.embeddings = Matrix(n, d);
  for (std::size_t v = 0; v < n; ++v) {
    ++lineno;
    if (!std::getline(in, line)) throw ParseError(lineno, "truncated snapshot");
    const auto cells = detail::split(line, ',');
    if (cells.size() != d + 1) throw ParseError(lineno, "wrong column count");
    if (detail::parse_int_at<std::size_t>(cells[0], lineno, "node id") != v) {
      throw ParseError(lineno, "rows out of order");
    }
    for (std::size_t j = 0; j < d; ++j) {
      snap.embeddings(v, j) = detail::parse_double_at(cells[j + 1], lineno, "value");
    }
  }
  return snap;
}

}  // namespace streamtgn
