// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

// Drift estimator and rebuild policy.
//
// Each node keeps a decayed accumulator d_v <- gamma * d_v + |dN_v| / |N_v|,
// stored lazily as (value, batch of last touch) and decayed on read. The
// global drift is the mean of d_v over the nodes touched since the last
// rebuild; a running sum makes it O(1) to read.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "streamtgn/incremental.hpp"

namespace streamtgn {

struct DriftConfig {
  double gamma = 0.9;      // decay in [0, 1)
  double delta_max = 0.5;  // trigger threshold
  double alpha = 0.1;      // partial-rebuild size limit as a fraction of n

  void validate() const;
};

struct RebuildDecision {
  enum class Kind { kNone, kPartial, kFull };
  Kind kind = Kind::kNone;
  std::vector<NodeId> nodes;  // V_drift for a partial rebuild, sorted
};

const char* to_string(RebuildDecision::Kind kind) noexcept;

class DriftState {
 public:
  explicit DriftState(DriftConfig config = {});

  /// Folds one batch of (node, |dN|, |N|) into the accumulators and advances
  /// the batch counter. Throws ContractError when |N| is zero.
  void record_batch_changes(std::span<const NodeChange> changes);

  /// d_v decayed to the current batch; 0 for nodes never touched.
  double estimate(NodeId v) const;
  double global_drift() const;
  RebuildDecision decide_rebuild(std::size_t n) const;
  /// Zeroes every accumulator and the batch counter.
  void reset();

  std::size_t batches_since_rebuild() const noexcept { return tau_; }
  std::size_t tracked_nodes() const noexcept { return nodes_.size(); }
  const DriftConfig& config() const noexcept { return config_; }

 private:
  struct Slot {
    double value = 0.0;
    std::size_t tau = 0;
  };

  DriftConfig config_;
  std::unordered_map<NodeId, Slot> nodes_;
  std::size_t tau_ = 0;
  double sum_ = 0.0;
};

/// Fixed baseline: Full on every batch whose 1-based index is a multiple of
/// `interval`; nullopt interval means never.
RebuildDecision fixed_schedule_decide(std::size_t batch_index,
                                      std::optional<std::size_t> interval);

/// Runs the rebuild on the engine and resets the estimator.
void execute_rebuild(const RebuildDecision& decision, IncrementalEngine& engine,
                     DriftState& state);

// Offline policy replay over a recorded change log. The estimator depends
// only on the per-batch change records, which do not depend on rebuilds, so
// both policies can be compared on one recorded run.

using ChangeLog = std::vector<std::vector<NodeChange>>;

struct PolicyOutcome {
  std::size_t rebuilds = 0;
  std::size_t partial = 0;
  std::size_t full = 0;
  double worst_drift = 0.0;  // largest global drift seen before any rebuild
};

PolicyOutcome simulate_adaptive(const ChangeLog& log, const DriftConfig& config, std::size_t n);
PolicyOutcome simulate_fixed(const ChangeLog& log, const DriftConfig& config,
                             std::optional<std::size_t> interval);

/// Largest interval whose worst drift stays at or below `target`, or nullopt
/// when no interval reaches it (interval 1 still exceeds the target).
std::optional<std::size_t> tune_fixed_interval(const ChangeLog& log, const DriftConfig& config,
                                               double target);

}  // namespace streamtgn
