// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

// Closed-form cost model. Costs are abstract operation counts, not time.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace streamtgn {

struct CostModel {
  std::uint64_t n = 1;
  std::uint64_t batch = 1;   // B
  std::uint64_t fanout = 1;  // L
  std::uint64_t layers = 1;  // K
  std::uint64_t d = 1;
  std::uint64_t d_m = 1;
  double mean_degree = 1.0;  // average temporal degree
  double r_overhead = 1.0;   // c_kernel / c_batch

  void validate() const;
};

/// L^K, rejecting overflow.
std::uint64_t fanout_power(std::uint64_t fanout, std::uint64_t layers);

/// n L K d^2 + n d_m^2
double full_cost(const CostModel& m);
/// |A| L K d^2 + |A| d_m^2 + B L^K. Throws InputError when |A| > n.
double incremental_cost(const CostModel& m, std::uint64_t affected);

struct SpeedupRow {
  std::uint64_t n = 0, batch = 0, fanout = 0, layers = 0;
  std::uint64_t affected_bound = 0;  // 2 B L^K
  double speedup = 0.0;              // n / affected_bound
};

/// Throws InputError on zero inputs (including K = 0).
SpeedupRow theoretical_speedup(std::uint64_t n, std::uint64_t batch, std::uint64_t fanout,
                               std::uint64_t layers);

/// n/|A| scaled down by the detection overhead relative to the embedding work.
double end_to_end_speedup(const CostModel& m, std::uint64_t affected, double c_detect);

/// Affected-ratio threshold below which incremental work is cheaper. The
/// large-n form is 1 / r_overhead; the finite-n form subtracts
/// c_detect / (n d_bar K d^2 c_kernel) with c_batch = 1.
double optimality_threshold(const CostModel& m);
double optimality_threshold(const CostModel& m, double c_detect);

/// |E_aff| K d
std::uint64_t lower_bound_ops(std::uint64_t affected_edges, std::uint64_t layers, std::uint64_t d);

/// The four reference regimes.
std::vector<SpeedupRow> default_speedup_rows();
/// One "speedup n=.. B=.. L=.. K=.. affected_bound=.. speedup=.." line per row.
std::string format_speedup_table(const std::vector<SpeedupRow>& rows);

}  // namespace streamtgn
