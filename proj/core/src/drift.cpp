// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

#include "streamtgn/drift.hpp"

#include <algorithm>
#include <cmath>

namespace streamtgn {

void DriftConfig::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw InputError("gamma must be in [0, 1)");
  if (!(delta_max > 0.0)) throw InputError("delta_max must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InputError("alpha must be in (0, 1]");
}

const char* to_string(RebuildDecision::Kind kind) noexcept {
  switch (kind) {
    case RebuildDecision::Kind::kNone: return "none";
    case RebuildDecision::Kind::kPartial: return "partial";
    case RebuildDecision::Kind::kFull: return "full";
  }
  return "?";
}

DriftState::DriftState(DriftConfig config) : config_(config) { config_.validate(); }

void DriftState::record_batch_changes(std::span<const NodeChange> changes) {
  for (const auto& c : changes) {
    if (c.size == 0) throw ContractError("drift change reported with |N_v| = 0");
  }
  ++tau_;
  sum_ *= config_.gamma;
  for (const auto& c : changes) {
    const double ratio = static_cast<double>(c.changed) / static_cast<double>(c.size);
    auto [it, fresh] = nodes_.try_emplace(c.node);
    Slot& slot = it->second;
    if (!fresh) slot.value *= std::pow(config_.gamma, static_cast<double>(tau_ - slot.tau));
    slot.value += ratio;
    slot.tau = tau_;
    sum_ += ratio;
  }
}

double DriftState::estimate(NodeId v) const {
  auto it = nodes_.find(v);
  if (it == nodes_.end()) return 0.0;
  return it->second.value * std::pow(config_.gamma, static_cast<double>(tau_ - it->second.tau));
}

double DriftState::global_drift() const {
  if (nodes_.empty()) return 0.0;
  return std::max(0.0, sum_) / static_cast<double>(nodes_.size());
}

RebuildDecision DriftState::decide_rebuild(std::size_t n) const {
  RebuildDecision out;
  if (!(global_drift() > config_.delta_max)) return out;
  for (const auto& [v, slot] : nodes_) {
    (void)slot;
    if (estimate(v) > config_.delta_max) out.nodes.push_back(v);
  }
  std::sort(out.nodes.begin(), out.nodes.end());
  if (static_cast<double>(out.nodes.size()) < config_.alpha * static_cast<double>(n)) {
    out.kind = RebuildDecision::Kind::kPartial;
  } else {
    out.kind = RebuildDecision::Kind::kFull;
    out.nodes.clear();
  }
  return out;
}

void DriftState::reset() {
  nodes_.clear();
  tau_ = 0;
  sum_ = 0.0;
}

RebuildDecision fixed_schedule_decide(std::size_t batch_index,
                                      std::optional<std::size_t> interval) {
  RebuildDecision out;
  if (interval && *interval == 0) throw InputError("rebuild interval must be >= 1");
  if (interval && batch_index > 0 && batch_index % *interval == 0) {
    out.kind = RebuildDecision::Kind::kFull;
  }
  return out;
}

void execute_rebuild(const RebuildDecision& decision, IncrementalEngine& engine,
                     DriftState& state) {
  switch (decision.kind) {
    case RebuildDecision::Kind::kNone: return;
    case RebuildDecision::Kind::kPartial: engine.rebuild_partial(decision.nodes); break;
    case RebuildDecision::Kind::kFull: engine.rebuild_full(); break;
  }
  state.reset();
}

PolicyOutcome simulate_adaptive(const ChangeLog& log, const DriftConfig& config, std::size_t n) {
  PolicyOutcome out;
  DriftState state(config);
  for (const auto& batch : log) {
    state.record_batch_changes(batch);
    out.worst_drift = std::max(out.worst_drift, state.global_drift());
    const auto decision = state.decide_rebuild(n);
    if (decision.kind == RebuildDecision::Kind::kNone) continue;
    ++out.rebuilds;
    (decision.kind == RebuildDecision::Kind::kPartial ? out.partial : out.full) += 1;
    state.reset();
  }
  return out;
}

PolicyOutcome simulate_fixed(const ChangeLog& log, const DriftConfig& config,
                             std::optional<std::size_t> interval) {
  PolicyOutcome out;
  DriftState state(config);
  for (std::size_t i = 0; i < log.size(); ++i) {
    state.record_batch_changes(log[i]);
    out.worst_drift = std::max(out.worst_drift, state.global_drift());
    if (fixed_schedule_decide(i + 1, interval).kind == RebuildDecision::Kind::kFull) {
      ++out.rebuilds;
      ++out.full;
      state.reset();
    }
  }
  return out;
}

std::optional<std::size_t> tune_fixed_interval(const ChangeLog& log, const DriftConfig& config,
                                               double target) {
  std::optional<std::size_t> best;
  for (std::size_t r = 1; r <= std::max<std::size_t>(log.size(), 1); ++r) {
    if (simulate_fixed(log, config, r).worst_drift <= target) best = r;
  }
  return best;
}

}  // namespace streamtgn
