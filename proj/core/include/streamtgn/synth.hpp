// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

// Seeded synthetic edge streams.
//
// Time is split into `epochs` windows of equal length. With burstiness
// rho > 1, odd epochs carry rho times the edges of even ones; inside an
// epoch edges are evenly spaced. Endpoints are uniform (dst != src) or
// preferential (probability proportional to degree + 1). Features are
// uniform in [-1, 1].

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "streamtgn/stream_io.hpp"
#include "streamtgn/tensor.hpp"

namespace streamtgn {

enum class Attachment { kUniform, kPreferential };

const char* to_string(Attachment a) noexcept;
Attachment parse_attachment(const std::string& s);

struct StreamSpec {
  std::uint64_t seed = 1;
  std::size_t nodes = 100;
  std::size_t edges = 1000;
  Attachment attachment = Attachment::kUniform;
  double burstiness = 1.0;
  std::size_t edge_dim = 4;
  std::size_t epochs = 10;
  double epoch_length = 100.0;

  void validate() const;
};

EdgeStream generate_stream(const StreamSpec& spec);

/// Edge count of each epoch for a stream spec (what generate_stream uses).
std::vector<std::size_t> epoch_counts(const StreamSpec& spec);

/// n x d_x static node features, uniform in [-1, 1]. Empty when d_x is 0.
Matrix generate_node_features(std::size_t n, std::size_t d_x, std::uint64_t seed);

/// Uniform double in [0, 1) from a 64-bit engine output.
inline double unit_uniform(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace streamtgn
