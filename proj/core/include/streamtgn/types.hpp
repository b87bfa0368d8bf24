// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace streamtgn {

using NodeId = std::uint32_t;
using EdgeId = std::uint64_t;
using Timestamp = double;

inline constexpr Timestamp kForever = std::numeric_limits<Timestamp>::infinity();

/// One time-stamped interaction. Direction is kept for the message functions;
/// adjacency treats the edge as undirected.
struct TemporalEdge {
  NodeId src = 0;
  NodeId dst = 0;
  Timestamp t = 0.0;
  std::vector<double> feat;

  friend bool operator==(const TemporalEdge&, const TemporalEdge&) = default;
};

// Error taxonomy. Everything derives from Error so callers can catch broadly.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or dimensionally inconsistent input.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An edge arrived with a timestamp older than the committed history.
class MonotonicityError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Text input could not be parsed; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class Aggregator { kMean, kLast, kSum };
enum class EngineMode { kExact, kDelta };

const char* to_string(Aggregator agg) noexcept;
const char* to_string(EngineMode mode) noexcept;
Aggregator parse_aggregator(const std::string& s);
EngineMode parse_mode(const std::string& s);

}  // namespace streamtgn
