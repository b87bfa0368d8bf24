// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

#include "streamtgn/stream_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "text_util.hpp"

namespace streamtgn {

namespace {
constexpr std::string_view kMagic = "# streamtgn-edges v1 d_e=";
}

std::size_t EdgeStream::node_count() const {
  std::size_t n = 0;
  for (const auto& e : edges) n = std::max<std::size_t>(n, std::max(e.src, e.dst) + std::size_t{1});
  return n;
}

void write_stream(const EdgeStream& stream, std::ostream& out) {
  out << kMagic << stream.edge_dim << '\n';
  std::string line;
  for (const auto& e : stream.edges) {
    line.clear();
    line += std::to_string(e.src);
    line += ',';
    line += std::to_string(e.dst);
    line += ',';
    line += detail::format_shortest(e.t);
    for (double f : e.feat) {
      line += ',';
      line += detail::format_shortest(f);
    }
    line += '\n';
    out << line;
  }
}

void write_stream_file(const EdgeStream& stream, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_stream(stream, out);
  if (!out) throw InputError("write failed for '" + path + "'");
}

EdgeStream read_stream(std::istream& in, bool sort) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError(lineno, "empty stream file");
  const std::string_view header = detail::trim(line);
  if (header.substr(0, kMagic.size()) != kMagic) {
    throw ParseError(lineno, "expected header '# streamtgn-edges v1 d_e=<k>'");
  }
  EdgeStream stream;
  stream.edge_dim =
      detail::parse_int_at<std::size_t>(header.substr(kMagic.size()), lineno, "d_e");

  bool ordered = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view row = detail::trim(line);
    if (row.empty() || row.front() == '#') continue;
    const auto cells = detail::split(row, ',');
    if (cells.size() != 3 + stream.edge_dim) {
      throw ParseError(lineno, "expected " + std::to_string(3 + stream.edge_dim) +
                                   " columns, found " + std::to_string(cells.size()));
    }
    TemporalEdge e;
    e.src = detail::parse_int_at<NodeId>(cells[0], lineno, "src");
    e.dst = detail::parse_int_at<NodeId>(cells[1], lineno, "dst");
    e.t = detail::parse_double_at(cells[2], lineno, "timestamp");
    if (!std::isfinite(e.t)) throw ParseError(lineno, "timestamp must be finite");
    e.feat.reserve(stream.edge_dim);
    for (std::size_t k = 0; k < stream.edge_dim; ++k) {
      e.feat.push_back(detail::parse_double_at(cells[3 + k], lineno, "feature"));
    }
    if (!stream.edges.empty() && e.t < stream.edges.back().t) {
      if (!sort) throw ParseError(lineno, "timestamp decreases (use --sort to reorder)");
      ordered = false;
    }
    stream.edges.push_back(std::move(e));
  }
  if (!ordered) {
    std::stable_sort(stream.edges.begin(), stream.edges.end(),
                     [](const TemporalEdge& a, const TemporalEdge& b) { return a.t < b.t; });
  }
  return stream;
}

EdgeStream read_stream_file(const std::string& path, bool sort) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_stream(in, sort);
}

}  // namespace streamtgn
