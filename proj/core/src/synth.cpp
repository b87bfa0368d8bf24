// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

#include "streamtgn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace streamtgn {

const char* to_string(Attachment a) noexcept {
  return a == Attachment::kUniform ? "uniform" : "preferential";
}

Attachment parse_attachment(const std::string& s) {
  if (s == "uniform") return Attachment::kUniform;
  if (s == "preferential") return Attachment::kPreferential;
  throw InputError("unknown attachment '" + s + "' (expected uniform|preferential)");
}

void StreamSpec::validate() const {
  if (nodes < 2) throw InputError("stream needs at least 2 nodes");
  if (edges < 1) throw InputError("stream needs at least 1 edge");
  if (!(burstiness >= 1.0)) throw InputError("burstiness must be >= 1");
  if (epochs < 1) throw InputError("epochs must be >= 1");
  if (!(epoch_length > 0.0)) throw InputError("epoch length must be positive");
}

std::vector<std::size_t> epoch_counts(const StreamSpec& spec) {
  spec.validate();
  std::vector<double> weight(spec.epochs);
  for (std::size_t e = 0; e < spec.epochs; ++e) weight[e] = e % 2 == 1 ? spec.burstiness : 1.0;
  const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
  // Largest-remainder apportionment so the counts sum to exactly m.
  std::vector<std::size_t> counts(spec.epochs);
  std::vector<std::pair<double, std::size_t>> remainder;
  std::size_t assigned = 0;
  for (std::size_t e = 0; e < spec.epochs; ++e) {
    const double share = static_cast<double>(spec.edges) * weight[e] / total;
    counts[e] = static_cast<std::size_t>(std::floor(share));
    assigned += counts[e];
    remainder.emplace_back(share - std::floor(share), e);
  }
  std::stable_sort(remainder.begin(), remainder.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < spec.edges; ++i, ++assigned) {
    counts[remainder[i % remainder.size()].second] += 1;
  }
  return counts;
}

EdgeStream generate_stream(const StreamSpec& spec) {
  const auto counts = epoch_counts(spec);
  std::mt19937_64 rng(spec.seed);
  auto uniform_node = [&](std::size_t n) {
    return static_cast<NodeId>(std::min<std::size_t>(
        n - 1, static_cast<std::size_t>(unit_uniform(rng()) * static_cast<double>(n))));
  };

  std::vector<NodeId> urn;
  if (spec.attachment == Attachment::kPreferential) {
    urn.resize(spec.nodes);
    std::iota(urn.begin(), urn.end(), NodeId{0});
  }
  auto pick = [&]() {
    if (spec.attachment == Attachment::kUniform) return uniform_node(spec.nodes);
    return urn[uniform_node(urn.size())];
  };

  EdgeStream stream;
  stream.edge_dim = spec.edge_dim;
  stream.edges.reserve(spec.edges);
  for (std::size_t epoch = 0; epoch < counts.size(); ++epoch) {
    const double start = static_cast<double>(epoch) * spec.epoch_length;
    const double step = spec.epoch_length / static_cast<double>(std::max<std::size_t>(counts[epoch], 1));
    for (std::size_t i = 0; i < counts[epoch]; ++i) {
      TemporalEdge e;
      e.t = start + static_cast<double>(i) * step;
      e.src = pick();
      do {
        e.dst = pick();
      } while (e.dst == e.src);
      e.feat.resize(spec.edge_dim);
      for (double& f : e.feat) f = 2.0 * unit_uniform(rng()) - 1.0;
      if (spec.attachment == Attachment::kPreferential) {
        urn.push_back(e.src);
        urn.push_back(e.dst);
      }
      stream.edges.push_back(std::move(e));
    }
  }
  return stream;
}

Matrix generate_node_features(std::size_t n, std::size_t d_x, std::uint64_t seed) {
  if (d_x == 0) return {};
  Matrix out(n, d_x);
  std::mt19937_64 rng(seed);
  for (double& x : out.data()) x = 2.0 * unit_uniform(rng()) - 1.0;
  return out;
}

}  // namespace streamtgn
