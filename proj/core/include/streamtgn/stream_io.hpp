// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

// Edge-stream files:
//
//   # streamtgn-edges v1 d_e=<k>
//   src,dst,timestamp,f1,...,fk
//
// Numbers are written in shortest round-trip form, so parse -> write
// reproduces a generated file byte for byte.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "streamtgn/types.hpp"

namespace streamtgn {

struct EdgeStream {
  std::size_t edge_dim = 0;
  std::vector<TemporalEdge> edges;

  /// 1 + largest endpoint id.
  std::size_t node_count() const;
};

void write_stream(const EdgeStream& stream, std::ostream& out);
void write_stream_file(const EdgeStream& stream, const std::string& path);

/// Throws ParseError naming the line on malformed input. Decreasing
/// timestamps are an error unless `sort` is set, in which case rows are
/// stably sorted by timestamp.
EdgeStream read_stream(std::istream& in, bool sort = false);
EdgeStream read_stream_file(const std::string& path, bool sort = false);

}  // namespace streamtgn
