// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

#include "streamtgn/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace streamtgn {

Vector row_times(std::span<const double> x, const Matrix& m) {
  Vector y(m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double xr = x[r];
    const auto mr = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) y[c] += xr * mr[c];
  }
  return y;
}

Vector mat_vec_bias(const Matrix& m, std::span<const double> x, std::span<const double> b) {
  Vector y(m.rows(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto mr = m.row(r);
    double acc = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) acc += mr[c] * x[c];
    y[r] = acc + b[r];
  }
  return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double l2_norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

Vector concat(std::initializer_list<std::span<const double>> parts) {
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  Vector out;
  out.reserve(total);
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace streamtgn
