// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

#include "streamtgn/types.hpp"

namespace streamtgn {

const char* to_string(Aggregator agg) noexcept {
  switch (agg) {
    case Aggregator::kMean: return "mean";
    case Aggregator::kLast: return "last";
    case Aggregator::kSum: return "sum";
  }
  return "?";
}

const char* to_string(EngineMode mode) noexcept {
  return mode == EngineMode::kExact ? "exact" : "delta";
}

Aggregator parse_aggregator(const std::string& s) {
  if (s == "mean") return Aggregator::kMean;
  if (s == "last") return Aggregator::kLast;
  if (s == "sum") return Aggregator::kSum;
  throw InputError("unknown aggregator '" + s + "' (expected mean|last|sum)");
}

EngineMode parse_mode(const std::string& s) {
  if (s == "exact") return EngineMode::kExact;
  if (s == "delta") return EngineMode::kDelta;
  throw InputError("unknown mode '" + s + "' (expected exact|delta)");
}

}  // namespace streamtgn
