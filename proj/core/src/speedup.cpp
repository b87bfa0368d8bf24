// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

#include "streamtgn/speedup.hpp"

#include <limits>
#include <sstream>

#include "streamtgn/types.hpp"
#include "text_util.hpp"

namespace streamtgn {

void CostModel::validate() const {
  if (n == 0 || batch == 0 || fanout == 0 || layers == 0 || d == 0 || d_m == 0) {
    throw InputError("cost model sizes must be positive");
  }
  if (!(mean_degree > 0.0)) throw InputError("mean degree must be positive");
  if (!(r_overhead > 0.0)) throw InputError("r_overhead must be positive");
}

std::uint64_t fanout_power(std::uint64_t fanout, std::uint64_t layers) {
  std::uint64_t out = 1;
  for (std::uint64_t k = 0; k < layers; ++k) {
    if (fanout != 0 && out > std::numeric_limits<std::uint64_t>::max() / fanout) {
      throw InputError("L^K overflows");
    }
    out *= fanout;
  }
  return out;
}

double full_cost(const CostModel& m) {
  m.validate();
  const double n = static_cast<double>(m.n);
  const double d = static_cast<double>(m.d);
  const double dm = static_cast<double>(m.d_m);
  return n * static_cast<double>(m.fanout) * static_cast<double>(m.layers) * d * d + n * dm * dm;
}

double incremental_cost(const CostModel& m, std::uint64_t affected) {
  m.validate();
  if (affected > m.n) throw InputError("affected set larger than n");
  const double a = static_cast<double>(affected);
  const double d = static_cast<double>(m.d);
  const double dm = static_cast<double>(m.d_m);
  const double detect =
      static_cast<double>(m.batch) * static_cast<double>(fanout_power(m.fanout, m.layers));
  return a * static_cast<double>(m.fanout) * static_cast<double>(m.layers) * d * d + a * dm * dm +
         detect;
}

SpeedupRow theoretical_speedup(std::uint64_t n, std::uint64_t batch, std::uint64_t fanout,
                               std::uint64_t layers) {
  if (n == 0 || batch == 0 || fanout == 0) throw InputError("n, B and L must be positive");
  if (layers == 0) throw InputError("K must be at least 1");
  SpeedupRow row{n, batch, fanout, layers, 0, 0.0};
  const std::uint64_t power = fanout_power(fanout, layers);
  if (power > std::numeric_limits<std::uint64_t>::max() / (2 * batch)) {
    throw InputError("2 B L^K overflows");
  }
  row.affected_bound = 2 * batch * power;
  row.speedup = static_cast<double>(n) / static_cast<double>(row.affected_bound);
  return row;
}

double end_to_end_speedup(const CostModel& m, std::uint64_t affected, double c_detect) {
  m.validate();
  if (affected == 0 || affected > m.n) throw InputError("affected size must be in [1, n]");
  const double a = static_cast<double>(affected);
  const double work = a * static_cast<double>(m.fanout) * static_cast<double>(m.layers) *
                      static_cast<double>(m.d) * static_cast<double>(m.d);
  return static_cast<double>(m.n) / a / (1.0 + c_detect / work);
}

double optimality_threshold(const CostModel& m) {
  m.validate();
  return 1.0 / m.r_overhead;
}

double optimality_threshold(const CostModel& m, double c_detect) {
  m.validate();
  const double c_kernel = m.r_overhead;  // with c_batch = 1
  const double scale = static_cast<double>(m.n) * m.mean_degree * static_cast<double>(m.layers) *
                       static_cast<double>(m.d) * static_cast<double>(m.d) * c_kernel;
  return 1.0 / m.r_overhead - c_detect / scale;
}

std::uint64_t lower_bound_ops(std::uint64_t affected_edges, std::uint64_t layers,
                              std::uint64_t d) {
  return affected_edges * layers * d;
}

std::vector<SpeedupRow> default_speedup_rows() {
  return {theoretical_speedup(1'000'000, 200, 10, 1), theoretical_speedup(1'000'000, 200, 10, 2),
          theoretical_speedup(1'000'000, 200, 20, 1),
          theoretical_speedup(10'000'000, 200, 10, 1)};
}

std::string format_speedup_table(const std::vector<SpeedupRow>& rows) {
  std::ostringstream out;
  for (const auto& r : rows) {
    out << "speedup n=" << r.n << " B=" << r.batch << " L=" << r.fanout << " K=" << r.layers
        << " affected_bound=" << r.affected_bound
        << " speedup=" << detail::format_shortest(r.speedup) << '\n';
  }
  return out.str();
}

}  // namespace streamtgn
