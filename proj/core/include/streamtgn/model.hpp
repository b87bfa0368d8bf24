// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

// Model parameters and the pure numeric kernels of the TGN pipeline:
// time encoding, message functions, aggregation, GRU memory update,
// multi-head temporal attention and the link predictor.
//
// Conventions:
//   * the time encoding interleaves (cos, sin) pairs scaled by sqrt(1/d_t);
//   * message and GRU weights act on column vectors (W x + b);
//   * attention projections act on row vectors (x W), so W_Q/W_K/W_V are
//     (input x d_k) and W_O is (heads*d_k x d);
//   * layer 0 consumes [memory || node features], deeper layers consume the
//     previous layer's d-dimensional embedding.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "streamtgn/tensor.hpp"
#include "streamtgn/types.hpp"

namespace streamtgn {

struct ModelDims {
  std::size_t d_s = 8;    // node memory
  std::size_t d_e = 4;    // edge features
  std::size_t d_t = 4;    // time encoding (even)
  std::size_t d_x = 0;    // static node features
  std::size_t d_m = 8;    // message
  std::size_t d_k = 8;    // per-head key/query/value
  std::size_t heads = 2;  // attention heads
  std::size_t d = 8;      // embedding
  std::size_t layers = 1; // attention layers K

  /// Throws InputError when a dimension is zero where it must not be, or d_t is odd.
  void validate() const;

  std::size_t message_input_dim() const { return 2 * d_s + d_e + d_t; }
  /// Width of the per-node representation fed into attention layer `layer`.
  std::size_t layer_input_dim(std::size_t layer) const { return layer == 0 ? d_s + d_x : d; }
  std::size_t query_input_dim(std::size_t layer) const { return layer_input_dim(layer) + d_t; }
  std::size_t key_input_dim(std::size_t layer) const {
    return layer_input_dim(layer) + d_e + d_t;
  }

  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

struct AttentionHeadParams {
  Matrix w_q;  // query_input_dim x d_k
  Matrix w_k;  // key_input_dim x d_k
  Matrix w_v;  // key_input_dim x d_k

  friend bool operator==(const AttentionHeadParams&, const AttentionHeadParams&) = default;
};

struct AttentionLayerParams {
  std::vector<AttentionHeadParams> heads;
  Matrix w_o;  // (heads * d_k) x d

  friend bool operator==(const AttentionLayerParams&, const AttentionLayerParams&) = default;
};

struct ModelParameters {
  ModelDims dims;
  Vector omega;  // d_t / 2 frequencies

  Matrix msg_src_w, msg_dst_w;  // d_m x message_input_dim
  Vector msg_src_b, msg_dst_b;

  Matrix gru_wz, gru_wr, gru_wh;  // d_s x d_m
  Matrix gru_uz, gru_ur, gru_uh;  // d_s x d_s
  Vector gru_bz, gru_br, gru_bh;

  std::vector<AttentionLayerParams> layers;

  Vector pred_w;  // 2d
  double pred_b = 0.0;

  /// All tensors shaped for `dims` and filled with zeros.
  static ModelParameters zeros(const ModelDims& dims);

  /// Visits every tensor as (name, rows, cols, row-major storage). Vectors are
  /// reported as 1 x n, the predictor bias as 1 x 1. Order is stable.
  void visit(const std::function<void(const std::string&, std::size_t, std::size_t,
                                      std::span<double>)>& fn);
  void visit(const std::function<void(const std::string&, std::size_t, std::size_t,
                                      std::span<const double>)>& fn) const;

  friend bool operator==(const ModelParameters&, const ModelParameters&) = default;
};

/// Per-node memory s_v and last-interaction time. Rows default to zero.
class NodeMemoryTable {
 public:
  explicit NodeMemoryTable(std::size_t d_s) : states_(0, d_s) {}

  void ensure_nodes(std::size_t n);
  std::size_t size() const noexcept { return states_.rows(); }
  std::size_t dim() const noexcept { return states_.cols(); }

  std::span<const double> state(NodeId v) const { return states_.row(v); }
  void set_state(NodeId v, std::span<const double> s);
  Timestamp last_interaction(NodeId v) const { return last_[v]; }
  void set_last_interaction(NodeId v, Timestamp t) { last_[v] = t; }

  const Matrix& states() const noexcept { return states_; }

  friend bool operator==(const NodeMemoryTable&, const NodeMemoryTable&) = default;

 private:
  Matrix states_;
  std::vector<Timestamp> last_;
};

// ---- kernels ---------------------------------------------------------------

Vector time_encode(double delta_t, std::span<const double> omega);

enum class MessageSide { kSource, kDestination };

Vector compute_message(std::span<const double> s_self, std::span<const double> s_other,
                       std::span<const double> feat, double delta_t, MessageSide side,
                       const ModelParameters& params);

struct TimedMessage {
  Vector msg;
  Timestamp t = 0.0;
};

/// Throws ContractError on an empty list.
Vector aggregate_messages(std::span<const TimedMessage> msgs, Aggregator mode);

Vector gru_update(std::span<const double> msg, std::span<const double> s_prev,
                  const ModelParameters& params);

/// Neighbor-side input to attention: [representation || edge features] plus
/// the edge timestamp. The time encoding is appended by the kernel.
struct NeighborInput {
  Vector features;
  Timestamp t = 0.0;
};

/// One neighbor's contribution to one layer, for all heads: the raw logit
/// q.k/sqrt(d_k) and the value already mapped into output space through the
/// head's slice of W_O, so that embedding = sum_h sum_u alpha_hu * value_hu.
struct NeighborScore {
  std::vector<double> logits;  // heads
  std::vector<Vector> values;  // heads x d
};

struct AttentionResult {
  Vector embedding;                          // d
  std::vector<Vector> queries;               // heads x d_k
  std::vector<std::vector<double>> weights;  // heads x neighbors, softmax weights
  std::vector<NeighborScore> scores;         // filled only when requested
};

/// Multi-head temporal attention for one node at one layer. The query input
/// gets phi(0) appended; neighbor u gets phi(t_query - t_u). Heads are
/// concatenated and projected by W_O. An empty neighborhood yields zeros.
AttentionResult temporal_attention(std::span<const double> query_input,
                                   std::span<const NeighborInput> neighbors, Timestamp t_query,
                                   std::size_t layer, const ModelParameters& params,
                                   bool with_scores = false);

/// Per-head queries for a layer (what the attention cache keeps).
std::vector<Vector> attention_queries(std::span<const double> query_input, std::size_t layer,
                                      const ModelParameters& params);

/// Logits and output-space values of a single neighbor against cached queries.
NeighborScore score_neighbor(std::span<const Vector> queries, const NeighborInput& neighbor,
                             Timestamp t_query, std::size_t layer,
                             const ModelParameters& params);

double predict_link(std::span<const double> h_u, std::span<const double> h_v,
                    const ModelParameters& params);

/// Deterministic Glorot-uniform initialization; biases zero; omega is the
/// geometric ladder 10^{-4 i/(d_t/2-1)} (omega = [1] when d_t = 2).
ModelParameters init_params(std::uint64_t seed, const ModelDims& dims);

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace streamtgn
