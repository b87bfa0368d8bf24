// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

#include "streamtgn/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace streamtgn {

namespace {

void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw InputError(std::string(what) + " has length " + std::to_string(got) + ", expected " +
                     std::to_string(want));
  }
}

// Element-wise visit shared by the mutable and const overloads.
template <class Params, class Fn>
void visit_tensors(Params& p, Fn&& fn) {
  auto mat = [&](const std::string& name, auto& m) { fn(name, m.rows(), m.cols(), m.data()); };
  auto vec = [&](const std::string& name, auto& v) {
    fn(name, std::size_t{1}, v.size(), std::span(v.data(), v.size()));
  };
  vec("omega", p.omega);
  mat("msg_src_w", p.msg_src_w);
  vec("msg_src_b", p.msg_src_b);
  mat("msg_dst_w", p.msg_dst_w);
  vec("msg_dst_b", p.msg_dst_b);
  mat("gru_wz", p.gru_wz);
  mat("gru_uz", p.gru_uz);
  vec("gru_bz", p.gru_bz);
  mat("gru_wr", p.gru_wr);
  mat("gru_ur", p.gru_ur);
  vec("gru_br", p.gru_br);
  mat("gru_wh", p.gru_wh);
  mat("gru_uh", p.gru_uh);
  vec("gru_bh", p.gru_bh);
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    auto& layer = p.layers[l];
    const std::string prefix = "attn" + std::to_string(l) + ".";
    for (std::size_t h = 0; h < layer.heads.size(); ++h) {
      const std::string hp = prefix + "head" + std::to_string(h) + ".";
      mat(hp + "w_q", layer.heads[h].w_q);
      mat(hp + "w_k", layer.heads[h].w_k);
      mat(hp + "w_v", layer.heads[h].w_v);
    }
    mat(prefix + "w_o", layer.w_o);
  }
  vec("pred_w", p.pred_w);
  fn(std::string("pred_b"), std::size_t{1}, std::size_t{1}, std::span(&p.pred_b, 1));
}

}  // namespace

void ModelDims::validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw InputError(std::string(name) + " must be positive");
  };
  positive(d_s, "d_s");
  positive(d_t, "d_t");
  positive(d_m, "d_m");
  positive(d_k, "d_k");
  positive(heads, "heads");
  positive(d, "d");
  positive(layers, "layers");
  if (d_t % 2 != 0) throw InputError("d_t must be even");
}

ModelParameters ModelParameters::zeros(const ModelDims& dims) {
  dims.validate();
  ModelParameters p;
  p.dims = dims;
  p.omega.assign(dims.d_t / 2, 0.0);
  p.msg_src_w = Matrix(dims.d_m, dims.message_input_dim());
  p.msg_dst_w = Matrix(dims.d_m, dims.message_input_dim());
  p.msg_src_b.assign(dims.d_m, 0.0);
  p.msg_dst_b.assign(dims.d_m, 0.0);
  for (Matrix* w : {&p.gru_wz, &p.gru_wr, &p.gru_wh}) *w = Matrix(dims.d_s, dims.d_m);
  for (Matrix* u : {&p.gru_uz, &p.gru_ur, &p.gru_uh}) *u = Matrix(dims.d_s, dims.d_s);
  for (Vector* b : {&p.gru_bz, &p.gru_br, &p.gru_bh}) b->assign(dims.d_s, 0.0);
  p.layers.resize(dims.layers);
  for (std::size_t l = 0; l < dims.layers; ++l) {
    auto& layer = p.layers[l];
    layer.heads.resize(dims.heads);
    for (auto& head : layer.heads) {
      head.w_q = Matrix(dims.query_input_dim(l), dims.d_k);
      head.w_k = Matrix(dims.key_input_dim(l), dims.d_k);
      head.w_v = Matrix(dims.key_input_dim(l), dims.d_k);
    }
    layer.w_o = Matrix(dims.heads * dims.d_k, dims.d);
  }
  p.pred_w.assign(2 * dims.d, 0.0);
  p.pred_b = 0.0;
  return p;
}

void ModelParameters::visit(const std::function<void(const std::string&, std::size_t,
                                                     std::size_t, std::span<double>)>& fn) {
  visit_tensors(*this, fn);
}

void ModelParameters::visit(
    const std::function<void(const std::string&, std::size_t, std::size_t,
                             std::span<const double>)>& fn) const {
  visit_tensors(*this, fn);
}

void NodeMemoryTable::ensure_nodes(std::size_t n) {
  if (n <= size()) return;
  states_.resize_rows(n);
  last_.resize(n, 0.0);
}

void NodeMemoryTable::set_state(NodeId v, std::span<const double> s) {
  require_dim(s.size(), dim(), "memory state");
  std::copy(s.begin(), s.end(), states_.row(v).begin());
}

Vector time_encode(double delta_t, std::span<const double> omega) {
  const double scale = std::sqrt(1.0 / static_cast<double>(2 * omega.size()));
  Vector out(2 * omega.size());
  for (std::size_t i = 0; i < omega.size(); ++i) {
    out[2 * i] = scale * std::cos(omega[i] * delta_t);
    out[2 * i + 1] = scale * std::sin(omega[i] * delta_t);
  }
  return out;
}

Vector compute_message(std::span<const double> s_self, std::span<const double> s_other,
                       std::span<const double> feat, double delta_t, MessageSide side,
                       const ModelParameters& params) {
  const auto& dims = params.dims;
  require_dim(s_self.size(), dims.d_s, "s_self");
  require_dim(s_other.size(), dims.d_s, "s_other");
  require_dim(feat.size(), dims.d_e, "edge feature");
  const Vector phi = time_encode(delta_t, params.omega);
  const Vector input = concat({s_self, s_other, feat, phi});
  if (side == MessageSide::kSource) return mat_vec_bias(params.msg_src_w, input, params.msg_src_b);
  return mat_vec_bias(params.msg_dst_w, input, params.msg_dst_b);
}

Vector aggregate_messages(std::span<const TimedMessage> msgs, Aggregator mode) {
  if (msgs.empty()) throw ContractError("aggregate_messages called with no messages");
  const std::size_t dim = msgs.front().msg.size();
  switch (mode) {
    case Aggregator::kLast: {
      std::size_t best = 0;
      for (std::size_t i = 1; i < msgs.size(); ++i) {
        if (msgs[i].t >= msgs[best].t) best = i;
      }
      return msgs[best].msg;
    }
    case Aggregator::kSum:
    case Aggregator::kMean: {
      Vector acc(dim, 0.0);
      for (const auto& m : msgs) {
        require_dim(m.msg.size(), dim, "message");
        for (std::size_t j = 0; j < dim; ++j) acc[j] += m.msg[j];
      }
      if (mode == Aggregator::kMean) {
        const double count = static_cast<double>(msgs.size());
        for (double& x : acc) x /= count;
      }
      return acc;
    }
  }
  throw ContractError("unknown aggregator");
}

Vector gru_update(std::span<const double> msg, std::span<const double> s_prev,
                  const ModelParameters& params) {
  const auto& dims = params.dims;
  require_dim(msg.size(), dims.d_m, "message");
  require_dim(s_prev.size(), dims.d_s, "memory state");
  const Vector zero(dims.d_s, 0.0);
  auto gate = [&](const Matrix& w, const Matrix& u, const Vector& b, std::span<const double> s) {
    Vector a = mat_vec_bias(w, msg, b);
    const Vector us = mat_vec_bias(u, s, zero);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += us[i];
    return a;
  };
  Vector z = gate(params.gru_wz, params.gru_uz, params.gru_bz, s_prev);
  Vector r = gate(params.gru_wr, params.gru_ur, params.gru_br, s_prev);
  for (auto& x : z) x = sigmoid(x);
  for (auto& x : r) x = sigmoid(x);
  Vector rs(dims.d_s);
  for (std::size_t i = 0; i < dims.d_s; ++i) rs[i] = r[i] * s_prev[i];
  Vector h = gate(params.gru_wh, params.gru_uh, params.gru_bh, rs);
  Vector out(dims.d_s);
  for (std::size_t i = 0; i < dims.d_s; ++i) {
    out[i] = (1.0 - z[i]) * std::tanh(h[i]) + z[i] * s_prev[i];
  }
  return out;
}

std::vector<Vector> attention_queries(std::span<const double> query_input, std::size_t layer,
                                      const ModelParameters& params) {
  const auto& dims = params.dims;
  require_dim(query_input.size(), dims.layer_input_dim(layer), "query input");
  const Vector phi0 = time_encode(0.0, params.omega);
  const Vector q_in = concat({query_input, phi0});
  std::vector<Vector> queries;
  queries.reserve(dims.heads);
  for (const auto& head : params.layers.at(layer).heads) queries.push_back(row_times(q_in, head.w_q));
  return queries;
}

NeighborScore score_neighbor(std::span<const Vector> queries, const NeighborInput& neighbor,
                             Timestamp t_query, std::size_t layer,
                             const ModelParameters& params) {
  const auto& dims = params.dims;
  const auto& lp = params.layers.at(layer);
  require_dim(neighbor.features.size(), dims.layer_input_dim(layer) + dims.d_e, "neighbor input");
  const Vector phi = time_encode(t_query - neighbor.t, params.omega);
  const Vector kv_in = concat({neighbor.features, phi});
  const double inv_sqrt_dk = 1.0 / std::sqrt(static_cast<double>(dims.d_k));
  NeighborScore score;
  score.logits.resize(dims.heads);
  score.values.resize(dims.heads);
  for (std::size_t h = 0; h < dims.heads; ++h) {
    const Vector k = row_times(kv_in, lp.heads[h].w_k);
    const Vector v = row_times(kv_in, lp.heads[h].w_v);
    score.logits[h] = dot(queries[h], k) * inv_sqrt_dk;
    Vector folded(dims.d, 0.0);
    for (std::size_t j = 0; j < dims.d_k; ++j) {
      const auto wo = lp.w_o.row(h * dims.d_k + j);
      for (std::size_t c = 0; c < dims.d; ++c) folded[c] += v[j] * wo[c];
    }
    score.values[h] = std::move(folded);
  }
  return score;
}

AttentionResult temporal_attention(std::span<const double> query_input,
                                   std::span<const NeighborInput> neighbors, Timestamp t_query,
                                   std::size_t layer, const ModelParameters& params,
                                   bool with_scores) {
  const auto& dims = params.dims;
  AttentionResult result;
  result.queries = attention_queries(query_input, layer, params);
  result.embedding.assign(dims.d, 0.0);
  result.weights.assign(dims.heads, {});
  if (neighbors.empty()) return result;

  std::vector<NeighborScore> scores;
  scores.reserve(neighbors.size());
  for (const auto& nb : neighbors) {
    scores.push_back(score_neighbor(result.queries, nb, t_query, layer, params));
  }
  for (std::size_t h = 0; h < dims.heads; ++h) {
    double max_logit = -std::numeric_limits<double>::infinity();
    for (const auto& s : scores) max_logit = std::max(max_logit, s.logits[h]);
    auto& w = result.weights[h];
    w.resize(scores.size());
    double z = 0.0;
    for (std::size_t u = 0; u < scores.size(); ++u) {
      w[u] = std::exp(scores[u].logits[h] - max_logit);
      z += w[u];
    }
    for (auto& x : w) x /= z;
    for (std::size_t u = 0; u < scores.size(); ++u) {
      for (std::size_t c = 0; c < dims.d; ++c) result.embedding[c] += w[u] * scores[u].values[h][c];
    }
  }
  if (with_scores) result.scores = std::move(scores);
  return result;
}

double predict_link(std::span<const double> h_u, std::span<const double> h_v,
                    const ModelParameters& params) {
  require_dim(h_u.size(), params.dims.d, "h_u");
  require_dim(h_v.size(), params.dims.d, "h_v");
  const std::span<const double> w = params.pred_w;
  return sigmoid(dot(w.first(h_u.size()), h_u) + dot(w.subspan(h_u.size()), h_v) +
                 params.pred_b);
}

ModelParameters init_params(std::uint64_t seed, const ModelDims& dims) {
  ModelParameters p = ModelParameters::zeros(dims);
  const std::size_t pairs = dims.d_t / 2;
  for (std::size_t i = 0; i < pairs; ++i) {
    p.omega[i] = pairs == 1 ? 1.0
                            : std::pow(10.0, -static_cast<double>(i) * 4.0 /
                                                 static_cast<double>(pairs - 1));
  }
  std::mt19937_64 rng(seed);
  auto fill = [&](Matrix& m) {
    const double a = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
    for (double& x : m.data()) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      x = (2.0 * u - 1.0) * a;
    }
  };
  fill(p.msg_src_w);
  fill(p.msg_dst_w);
  for (Matrix* m : {&p.gru_wz, &p.gru_uz, &p.gru_wr, &p.gru_ur, &p.gru_wh, &p.gru_uh}) fill(*m);
  for (auto& layer : p.layers) {
    for (auto& head : layer.heads) {
      fill(head.w_q);
      fill(head.w_k);
      fill(head.w_v);
    }
    fill(layer.w_o);
  }
  const double a = std::sqrt(6.0 / static_cast<double>(2 * dims.d + 1));
  for (double& x : p.pred_w) x = (2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0) * a;
  return p;
}

}  // namespace streamtgn
