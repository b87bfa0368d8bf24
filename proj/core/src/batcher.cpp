// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

#include "streamtgn/batcher.hpp"

#include <algorithm>
#include <cmath>

#include "streamtgn/incremental.hpp"
#include "streamtgn/oracle.hpp"

namespace streamtgn {

Batch make_batch(std::vector<TemporalEdge> edges) {
  Batch b;
  b.edges = std::move(edges);
  if (b.edges.empty()) return b;
  auto [lo, hi] = std::minmax_element(b.edges.begin(), b.edges.end(),
                                      [](const auto& x, const auto& y) { return x.t < y.t; });
  b.t_batch = hi->t;
  b.s_max = hi->t - lo->t;
  return b;
}

std::optional<Batch> form_batch(EdgeQueue& queue, std::size_t batch_size) {
  if (batch_size == 0) throw InputError("batch size must be at least 1");
  if (queue.empty()) return std::nullopt;
  return make_batch(queue.flush_batch(batch_size));
}

std::optional<Batch> form_batch_until(EdgeQueue& queue, std::size_t batch_size,
                                      Timestamp horizon) {
  if (batch_size == 0) throw InputError("batch size must be at least 1");
  auto edges = queue.flush_until(batch_size, horizon);
  if (edges.empty()) return std::nullopt;
  return make_batch(std::move(edges));
}

std::vector<Batch> split_by_count(std::span<const TemporalEdge> stream, std::size_t batch_size,
                                  std::size_t edge_dim) {
  if (batch_size == 0) throw InputError("batch size must be at least 1");
  EdgeQueue queue(batch_size, edge_dim);
  std::vector<Batch> out;
  for (const auto& e : stream) {
    queue.enqueue(e);
    if (queue.full()) out.push_back(*form_batch(queue, batch_size));
  }
  if (auto tail = form_batch(queue, batch_size)) out.push_back(std::move(*tail));
  return out;
}

std::vector<Batch> split_by_tick(std::span<const TemporalEdge> stream, Timestamp tick,
                                 std::size_t max_batch, std::size_t edge_dim) {
  if (!(tick > 0.0)) throw InputError("tick must be positive");
  if (max_batch == 0) throw InputError("batch size must be at least 1");
  std::vector<Batch> out;
  if (stream.empty()) return out;
  EdgeQueue queue(stream.size(), edge_dim);
  for (const auto& e : stream) queue.enqueue(e);
  const Timestamp origin = stream.front().t;
  std::size_t k = 0;
  while (!queue.empty()) {
    const Timestamp front = *queue.front_time();
    k = std::max(k, static_cast<std::size_t>(std::floor((front - origin) / tick)));
    // Half-open tick [origin + k tick, origin + (k+1) tick).
    const Timestamp end = origin + static_cast<double>(k + 1) * tick;
    const Timestamp horizon = std::nextafter(end, -kForever);
    if (auto b = form_batch_until(queue, max_batch, horizon)) {
      out.push_back(std::move(*b));
    } else {
      ++k;  // rounding put the front just past the tick end
    }
  }
  return out;
}

StalenessReport compare_sequential_vs_batched(std::span<const TemporalEdge> stream,
                                              std::span<const std::size_t> batch_sizes,
                                              const ModelParameters& params,
                                              const PipelineConfig& config, std::size_t nodes,
                                              const Matrix& node_features) {
  const auto reference = replay_sequential(stream, params, config, nodes, node_features);
  StalenessReport report;
  for (std::size_t b : batch_sizes) {
    if (b == 0) throw InputError("batch size must be at least 1");
    IncrementalEngine engine(params, EngineOptions{config, EngineMode::kExact, false}, nodes,
                             node_features);
    DeviationRow row;
    row.batch_size = b;
    double sum = 0.0;
    for (std::size_t i = 0; i < stream.size(); i += b) {
      const auto chunk = stream.subspan(i, std::min(b, stream.size() - i));
      const auto preds = engine.process_batch(chunk);
      for (std::size_t j = 0; j < preds.size(); ++j) {
        const double dev = std::abs(preds[j] - reference.predictions[i + j]);
        row.max_deviation = std::max(row.max_deviation, dev);
        sum += dev;
      }
    }
    row.mean_deviation = stream.empty() ? 0.0 : sum / static_cast<double>(stream.size());
    report.rows.push_back(row);
  }

  const double count = static_cast<double>(report.rows.size());
  if (count >= 2) {
    double mx = 0, my = 0;
    for (const auto& r : report.rows) {
      mx += static_cast<double>(r.batch_size);
      my += r.max_deviation;
    }
    mx /= count;
    my /= count;
    double sxy = 0, sxx = 0;
    for (const auto& r : report.rows) {
      const double dx = static_cast<double>(r.batch_size) - mx;
      sxy += dx * (r.max_deviation - my);
      sxx += dx * dx;
    }
    report.slope = sxx > 0 ? sxy / sxx : 0.0;
  }
  return report;
}

}  // namespace streamtgn
