// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "doctest.h"
#include "reference.hpp"
#include "streamtgn/model.hpp"

using namespace streamtgn;
using namespace streamtgn::testing;

namespace {

double max_diff(const Vec& a, const Vec& b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

ModelDims small_dims(std::size_t layers = 1) {
  ModelDims d;
  d.d_x = 3;
  d.layers = layers;
  return d;
}

}  // namespace

TEST_CASE("time encoding matches scalar loop and has squared norm one half") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t pairs = 1 + rng() % 6;
    const Vec omega = random_vec(rng, pairs, 3.0);
    const double dt = uniform(rng, -50.0, 500.0);
    const Vec got = time_encode(dt, omega);
    CHECK(max_diff(got, ref_time_encode(dt, omega)) <= 1e-12);
    double sq = 0.0;
    for (double x : got) sq += x * x;
    CHECK(std::abs(sq - 0.5) <= 1e-12);
  }
}

TEST_CASE("time encoding at zero is cos 1, sin 0 scaled") {
  const Vec phi = time_encode(0.0, Vec{1.0, 0.1});
  CHECK(phi[0] == doctest::Approx(0.5));
  CHECK(phi[1] == 0.0);
  CHECK(phi[2] == doctest::Approx(0.5));
  CHECK(phi[3] == 0.0);
}

TEST_CASE("messages match scalar loop on both sides") {
  std::mt19937_64 rng(12);
  const auto dims = small_dims();
  const auto p = random_params(rng, dims);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec a = random_vec(rng, dims.d_s), b = random_vec(rng, dims.d_s);
    const Vec e = random_vec(rng, dims.d_e);
    const double dt = uniform(rng, 0.0, 100.0);
    CHECK(max_diff(compute_message(a, b, e, dt, MessageSide::kSource, p),
                   ref_message(a, b, e, dt, true, p)) <= 1e-12);
    CHECK(max_diff(compute_message(a, b, e, dt, MessageSide::kDestination, p),
                   ref_message(a, b, e, dt, false, p)) <= 1e-12);
  }
}

TEST_CASE("aggregators match scalar loop") {
  std::mt19937_64 rng(13);
  for (auto mode : {Aggregator::kMean, Aggregator::kLast, Aggregator::kSum}) {
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t count = 1 + rng() % 5;
      std::vector<Vec> msgs;
      std::vector<double> times;
      std::vector<TimedMessage> timed;
      for (std::size_t i = 0; i < count; ++i) {
        msgs.push_back(random_vec(rng, 6));
        times.push_back(static_cast<double>(rng() % 3));  // ties are common
        timed.push_back({msgs.back(), times.back()});
      }
      CHECK(max_diff(aggregate_messages(timed, mode), ref_aggregate(msgs, times, mode)) <= 1e-12);
    }
  }
}

TEST_CASE("last aggregator prefers the later arrival on equal timestamps") {
  std::vector<TimedMessage> msgs{{Vec{1.0}, 5.0}, {Vec{2.0}, 5.0}, {Vec{3.0}, 4.0}};
  CHECK(aggregate_messages(msgs, Aggregator::kLast)[0] == 2.0);
}

TEST_CASE("aggregating nothing is a contract error") {
  CHECK_THROWS_AS(aggregate_messages({}, Aggregator::kMean), ContractError);
}

TEST_CASE("GRU matches scalar loop") {
  std::mt19937_64 rng(14);
  const auto dims = small_dims();
  const auto p = random_params(rng, dims, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec m = random_vec(rng, dims.d_m, 2.0), s = random_vec(rng, dims.d_s);
    CHECK(max_diff(gru_update(m, s, p), ref_gru(m, s, p)) <= 1e-12);
  }
}

TEST_CASE("attention matches per-head softmax with concatenated heads") {
  std::mt19937_64 rng(15);
  const auto dims = small_dims(2);
  const auto p = random_params(rng, dims);
  for (std::size_t layer = 0; layer < 2; ++layer) {
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t width = dims.layer_input_dim(layer);
      const Vec self = random_vec(rng, width);
      std::vector<RefNeighbor> ref;
      std::vector<NeighborInput> inputs;
      const std::size_t count = rng() % 7;
      const double t_ref = 100.0;
      for (std::size_t u = 0; u < count; ++u) {
        RefNeighbor nb{random_vec(rng, width), random_vec(rng, dims.d_e), uniform(rng, 0.0, t_ref)};
        Vec joined = nb.prev;
        joined.insert(joined.end(), nb.feat.begin(), nb.feat.end());
        inputs.push_back({joined, nb.t});
        ref.push_back(std::move(nb));
      }
      const auto got = temporal_attention(self, inputs, t_ref, layer, p);
      CHECK(max_diff(got.embedding, ref_attention(self, ref, t_ref, layer, p)) <= 1e-10);
      for (const auto& w : got.weights) {
        if (count == 0) continue;
        double sum = 0.0;
        for (double a : w) sum += a;
        CHECK(std::abs(sum - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("attention over no neighbors is the zero vector") {
  const auto dims = small_dims();
  const auto p = init_params(3, dims);
  const auto r = temporal_attention(Vec(dims.layer_input_dim(0), 1.0), {}, 0.0, 0, p);
  CHECK(r.embedding == Vec(dims.d, 0.0));
}

TEST_CASE("predictor matches scalar loop") {
  std::mt19937_64 rng(16);
  const auto dims = small_dims();
  const auto p = random_params(rng, dims);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec a = random_vec(rng, dims.d), b = random_vec(rng, dims.d);
    CHECK(std::abs(predict_link(a, b, p) - ref_predict(a, b, p)) <= 1e-12);
  }
}

TEST_CASE("init is deterministic and spreads frequencies over four decades") {
  ModelDims dims;
  dims.d_t = 10;
  const auto a = init_params(9, dims), b = init_params(9, dims);
  CHECK(a == b);
  CHECK_FALSE(a == init_params(10, dims));
  CHECK(a.omega.front() == 1.0);
  CHECK(a.omega.back() == doctest::Approx(1e-4));
  CHECK(a.pred_b == 0.0);
}

TEST_CASE("dimension validation") {
  ModelDims d;
  d.d_t = 3;
  CHECK_THROWS_AS(d.validate(), InputError);
  d.d_t = 4;
  d.heads = 0;
  CHECK_THROWS_AS(d.validate(), InputError);
  const auto p = init_params(1, ModelDims{});
  CHECK_THROWS_AS(gru_update(Vec(3), Vec(8), p), InputError);
  CHECK_THROWS_AS(predict_link(Vec(8), Vec(7), p), InputError);
}
