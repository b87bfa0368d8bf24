// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "streamtgn/batcher.hpp"
#include "streamtgn/drift.hpp"
#include "streamtgn/incremental.hpp"
#include "streamtgn/oracle.hpp"
#include "streamtgn/params_io.hpp"
#include "streamtgn/speedup.hpp"
#include "streamtgn/stream_io.hpp"
#include "streamtgn/synth.hpp"

namespace streamtgn::cli {

namespace {

constexpr double kExactTolerance = 1e-9;
constexpr double kBoundSlack = 1e-12;

std::string num(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// One report record: a tag followed by space-separated key=value pairs.
class Record {
 public:
  explicit Record(std::string_view tag) : text_(tag) {}

  Record& kv(std::string_view key, double v) { return put(key, num(v)); }
  Record& kv(std::string_view key, std::uint64_t v) { return put(key, std::to_string(v)); }
  Record& kv(std::string_view key, std::string_view v) { return put(key, std::string(v)); }
  Record& kv(std::string_view key, const char* v) { return put(key, v); }
  Record& kv(std::string_view key, bool v) { return put(key, v ? "1" : "0"); }

  friend std::ostream& operator<<(std::ostream& out, const Record& r) {
    return out << r.text_ << '\n';
  }

 private:
  Record& put(std::string_view key, const std::string& value) {
    text_ += ' ';
    text_ += key;
    text_ += '=';
    text_ += value;
    return *this;
  }

  std::string text_;
};

std::uint64_t u64(std::size_t v) { return static_cast<std::uint64_t>(v); }

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

// Destination for report records: a file when configured, else stdout.
class ReportSink {
 public:
  ReportSink(const std::string& flag_path, std::ostream& fallback) : out_(&fallback) {
    std::string path = flag_path;
    if (const char* env = std::getenv("STREAMTGN_REPORT"); env && *env) path = env;
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InputError("cannot open report file '" + path + "'");
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

struct RunConfig {
  std::string input;
  bool sort = false;
  StreamSpec synth;
  std::size_t batch = 600;
  std::size_t queue_capacity = 0;  // 0 means equal to the batch size
  double tick = 0.0;               // > 0 switches to one batch per time tick
  ModelDims dims;
  PipelineConfig pipeline;
  std::string aggregator = "mean";
  std::string mode = "exact";
  std::string params_path;
  std::uint64_t param_seed = 1;
  std::string policy = "adaptive";
  DriftConfig drift;
  std::string interval = "never";
  std::string report;
  double window = 0.0;  // 0 means unbounded
};

void add_stream_options(CLI::App& app, StreamSpec& s) {
  app.add_option("--seed", s.seed, "Stream seed");
  app.add_option("--nodes", s.nodes, "Node count")->check(CLI::PositiveNumber);
  app.add_option("--edges", s.edges, "Edge count")->check(CLI::PositiveNumber);
  app.add_option("--attachment", s.attachment, "uniform|preferential")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Attachment>{{"uniform", Attachment::kUniform},
                                            {"preferential", Attachment::kPreferential}}));
  app.add_option("--burstiness", s.burstiness, "Arrival-rate ratio between epochs (>= 1)");
  app.add_option("--epochs", s.epochs, "Number of epochs");
  app.add_option("--epoch-length", s.epoch_length, "Time span of one epoch");
}

void add_dims_options(CLI::App& app, ModelDims& d) {
  app.add_option("--d-s", d.d_s, "Memory width");
  app.add_option("--d-e", d.d_e, "Edge feature width");
  app.add_option("--d-t", d.d_t, "Time encoding width (even)");
  app.add_option("--d-x", d.d_x, "Static node feature width");
  app.add_option("--d-m", d.d_m, "Message width");
  app.add_option("--d-k", d.d_k, "Per-head key width");
  app.add_option("--heads", d.heads, "Attention heads");
  app.add_option("--d", d.d, "Embedding width");
  app.add_option("--layers", d.layers, "Attention layers K")->check(CLI::PositiveNumber);
}

void add_run_options(CLI::App& app, RunConfig& c) {
  app.add_option("--input", c.input, "Edge stream file (synthetic stream when omitted)");
  app.add_flag("--sort", c.sort, "Sort the input by timestamp instead of rejecting it");
  add_stream_options(app, c.synth);
  add_dims_options(app, c.dims);
  app.add_option("--batch", c.batch, "Batch size B")->check(CLI::PositiveNumber);
  app.add_option("--queue-capacity", c.queue_capacity, "Edge queue capacity (>= B)");
  app.add_option("--tick", c.tick, "Form one batch per time tick of this length");
  app.add_option("--fanout", c.pipeline.fanout, "Sampled neighbors L")
      ->check(CLI::PositiveNumber);
  app.add_option("--window", c.window, "Neighbor time window (0 = unbounded)");
  app.add_option("--aggregator", c.aggregator, "mean|last|sum");
  app.add_option("--mode", c.mode, "exact|delta");
  app.add_option("--params", c.params_path, "Parameter file (seeded init when omitted)");
  app.add_option("--param-seed", c.param_seed, "Seed for parameter init");
  app.add_option("--policy", c.policy, "adaptive|fixed|never");
  app.add_option("--gamma", c.drift.gamma, "Drift decay");
  app.add_option("--delta-max", c.drift.delta_max, "Drift threshold");
  app.add_option("--alpha", c.drift.alpha, "Partial-rebuild fraction of n");
  app.add_option("--interval", c.interval, "Fixed rebuild interval in batches, or never");
  app.add_option("--report", c.report, "Report file (STREAMTGN_REPORT overrides)");
}

struct Prepared {
  EdgeStream stream;
  ModelParameters params;
  PipelineConfig pipeline;
  EngineMode mode = EngineMode::kExact;
  std::size_t nodes = 0;
  Matrix features;
  std::optional<std::size_t> interval;
};

Prepared prepare(RunConfig& c) {
  Prepared p;
  p.pipeline = c.pipeline;
  p.pipeline.aggregator = parse_aggregator(c.aggregator);
  p.pipeline.window = c.window > 0.0 ? c.window : kForever;
  if (c.window < 0.0) throw InputError("window must be >= 0");
  p.pipeline.validate();
  p.mode = parse_mode(c.mode);
  if (c.policy != "adaptive" && c.policy != "fixed" && c.policy != "never") {
    throw InputError("unknown policy '" + c.policy + "' (expected adaptive|fixed|never)");
  }
  c.drift.validate();
  if (c.interval != "never") {
    std::size_t r = 0;
    const auto res = std::from_chars(c.interval.data(), c.interval.data() + c.interval.size(), r);
    if (res.ec != std::errc() || res.ptr != c.interval.data() + c.interval.size() || r == 0) {
      throw InputError("interval must be a positive integer or 'never'");
    }
    p.interval = r;
  }
  if (c.policy == "fixed" && !p.interval) throw InputError("fixed policy needs --interval");

  p.params = c.params_path.empty() ? init_params(c.param_seed, c.dims)
                                   : load_params_file(c.params_path);
  p.params.dims.validate();
  if (c.input.empty()) {
    c.synth.edge_dim = p.params.dims.d_e;
    p.stream = generate_stream(c.synth);
    p.nodes = c.synth.nodes;
  } else {
    p.stream = read_stream_file(c.input, c.sort);
    p.nodes = p.stream.node_count();
  }
  if (p.stream.edge_dim != p.params.dims.d_e) {
    throw InputError("stream has d_e=" + std::to_string(p.stream.edge_dim) + " but the model expects " +
                     std::to_string(p.params.dims.d_e));
  }
  p.features = generate_node_features(p.nodes, p.params.dims.d_x, c.param_seed + 1);
  if (c.queue_capacity != 0 && c.queue_capacity < c.batch) {
    throw InputError("queue capacity must be at least the batch size");
  }
  if (c.tick < 0.0) throw InputError("tick must be >= 0");
  return p;
}

// Batches through a bounded edge queue: fill to capacity, flush B, repeat.
std::vector<Batch> form_batches(const EdgeStream& s, const RunConfig& c) {
  if (c.tick > 0.0) return split_by_tick(s.edges, c.tick, c.batch, s.edge_dim);
  EdgeQueue queue(std::max(c.queue_capacity, c.batch), s.edge_dim);
  std::vector<Batch> out;
  std::size_t i = 0;
  while (i < s.edges.size() || !queue.empty()) {
    while (i < s.edges.size() && queue.enqueue(s.edges[i])) ++i;
    out.push_back(*form_batch(queue, c.batch));
  }
  return out;
}

RebuildDecision decide(const RunConfig& c, const Prepared& p, std::size_t index,
                       const IncrementalEngine& engine, DriftState& drift) {
  if (c.policy == "never") return {};
  if (c.policy == "fixed") return fixed_schedule_decide(index, p.interval);
  drift.record_batch_changes(engine.last_changes());
  return drift.decide_rebuild(engine.node_count());
}

void write_rebuild(std::ostream& out, std::size_t index, const RebuildDecision& d,
                   const IncrementalEngine& engine) {
  Record r("rebuild");
  r.kv("index", u64(index)).kv("kind", to_string(d.kind)).kv("nodes", u64(d.nodes.size()));
  r.kv("node_pipelines", engine.rebuild_counters().node_pipelines)
      .kv("layer_evals", engine.rebuild_counters().layer_evals);
  out << r;
}

void write_run_header(std::ostream& out, const std::string& command, const Prepared& p,
                      const RunConfig& c) {
  Record r(command);
  r.kv("nodes", u64(p.nodes)).kv("edges", u64(p.stream.edges.size()));
  r.kv("batch", u64(c.batch)).kv("fanout", u64(p.pipeline.fanout));
  r.kv("layers", u64(p.params.dims.layers)).kv("mode", to_string(p.mode));
  r.kv("aggregator", to_string(p.pipeline.aggregator)).kv("policy", c.policy);
  out << r;
  out << "model " << format_dims(p.params.dims) << '\n';
}

int cmd_verify(RunConfig& c, std::ostream& stdout_stream) {
  Prepared p = prepare(c);
  ReportSink sink(c.report, stdout_stream);
  std::ostream& out = sink.stream();
  write_run_header(out, "verify", p, c);
  const auto start = std::chrono::steady_clock::now();

  OracleEngine oracle(p.params, p.pipeline, p.nodes, p.features);
  IncrementalEngine engine(p.params, EngineOptions{p.pipeline, p.mode, p.mode == EngineMode::kDelta},
                           p.nodes, p.features);
  DriftState drift(c.drift);
  const std::size_t k = p.params.dims.layers;
  const double drift_factor = c.drift.delta_max / (1.0 - c.drift.gamma);

  double max_embed = 0.0, max_pred = 0.0, max_drift = 0.0;
  std::uint64_t mismatches = 0, bound_exceeded = 0, drift_violations = 0, rebuilds = 0;
  const auto batches = form_batches(p.stream, c);
  for (std::size_t b = 0; b < batches.size(); ++b) {
    const auto& batch = batches[b];
    const auto t0 = std::chrono::steady_clock::now();
    const auto want = oracle.apply_batch(batch.edges);
    const auto got = engine.process_batch(batch.edges);
    double pred_dev = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) {
      pred_dev = std::max(pred_dev, std::abs(want[i] - got[i]));
    }
    const auto& affected = engine.last_affected();
    const auto brute = bfs_affected(batch.edges, engine.store(), engine.memory(), p.pipeline, k);
    const bool mismatch = brute != affected.all;
    const std::uint64_t bound = theoretical_speedup(1, batch.size(), p.pipeline.fanout, k).affected_bound;
    const bool exceeded = affected.all.size() > bound;

    const Matrix& ref = oracle.snapshot().embeddings;
    const Matrix& mine = engine.embeddings();
    double embed_dev = 0.0, node_drift = 0.0;
    for (std::size_t v = 0; v < ref.rows(); ++v) {
      double sq = 0.0;
      for (std::size_t j = 0; j < ref.cols(); ++j) {
        const double diff = ref(v, j) - mine(v, j);
        embed_dev = std::max(embed_dev, std::abs(diff));
        sq += diff * diff;
      }
      node_drift = std::max(node_drift, std::sqrt(sq));
    }
    max_embed = std::max(max_embed, embed_dev);
    max_pred = std::max(max_pred, pred_dev);
    max_drift = std::max(max_drift, node_drift);
    mismatches += mismatch;
    bound_exceeded += exceeded;

    Record r("batch");
    r.kv("index", u64(b + 1)).kv("edges", u64(batch.size()));
    r.kv("t_batch", batch.t_batch).kv("s_max", batch.s_max);
    r.kv("direct", u64(affected.direct.size())).kv("affected", u64(affected.all.size()));
    r.kv("affected_bound", bound).kv("bfs_mismatch", mismatch);
    r.kv("embed_dev", embed_dev).kv("pred_dev", pred_dev);
    if (p.mode == EngineMode::kDelta) {
      const double limit = drift_factor * engine.max_value_norm();
      const bool violated = node_drift > limit + kBoundSlack;
      drift_violations += violated;
      r.kv("drift", node_drift).kv("drift_bound", limit).kv("drift_violation", violated);
      r.kv("pending", u64(engine.pending_count()));
    }
    out << r;

    const auto decision = decide(c, p, b + 1, engine, drift);
    if (decision.kind != RebuildDecision::Kind::kNone) {
      execute_rebuild(decision, engine, drift);
      ++rebuilds;
      write_rebuild(out, b + 1, decision, engine);
    }
    out << Record("time.batch").kv("index", u64(b + 1)).kv("ms", elapsed_ms(t0));
  }

  const auto& audit = engine.delta_audit();
  bool pass = mismatches == 0 && max_pred <= kExactTolerance;
  if (p.mode == EngineMode::kExact) {
    pass = pass && max_embed <= kExactTolerance;
  } else {
    pass = pass && audit.violations == 0 && drift_violations == 0;
  }
  Record s("summary");
  s.kv("batches", u64(batches.size())).kv("edges", u64(p.stream.edges.size()));
  s.kv("max_embed_dev", max_embed).kv("max_pred_dev", max_pred).kv("max_drift", max_drift);
  s.kv("bfs_mismatches", mismatches).kv("affected_bound_exceeded", bound_exceeded);
  s.kv("delta_checked", audit.checked).kv("delta_violations", audit.violations);
  s.kv("delta_max_error", audit.max_error).kv("drift_violations", drift_violations);
  s.kv("rebuilds", rebuilds).kv("status", pass ? "pass" : "fail");
  out << s;
  out << Record("time.total").kv("ms", elapsed_ms(start));
  return pass ? kExitOk : kExitVerifyFailed;
}

struct BenchTotals {
  double mean_ratio = 0.0;
  double counter_speedup = 0.0;
  std::uint64_t max_affected = 0;
  std::uint64_t rebuilds = 0;
  double final_embed_dev = 0.0;
};

BenchTotals run_bench(RunConfig& c, const Prepared& p, std::ostream* out) {
  IncrementalEngine engine(p.params, EngineOptions{p.pipeline, p.mode, false}, p.nodes,
                           p.features);
  DriftState drift(c.drift);
  const auto batches = form_batches(p.stream, c);
  BenchTotals t;
  double ratio_sum = 0.0;
  std::uint64_t pipelines = 0;
  for (std::size_t b = 0; b < batches.size(); ++b) {
    const auto t0 = std::chrono::steady_clock::now();
    engine.process_batch(batches[b].edges);
    const double ms = elapsed_ms(t0);
    const auto& a = engine.last_affected();
    const auto& w = engine.last_counters();
    const double n = static_cast<double>(engine.node_count());
    const double ratio = static_cast<double>(a.all.size()) / n;
    ratio_sum += ratio;
    pipelines += w.node_pipelines;
    t.max_affected = std::max<std::uint64_t>(t.max_affected, a.all.size());
    if (out) {
      const double lookups = static_cast<double>(w.cache_hits + w.cache_misses);
      Record r("batch");
      r.kv("index", u64(b + 1)).kv("edges", u64(batches[b].size()));
      r.kv("direct", u64(a.direct.size())).kv("affected", u64(a.all.size()));
      r.kv("affected_ratio", ratio);
      r.kv("hit_rate", lookups > 0 ? static_cast<double>(w.cache_hits) / lookups : 1.0);
      r.kv("node_pipelines", w.node_pipelines).kv("layer_evals", w.layer_evals);
      r.kv("edges_attended", w.edges_attended).kv("attention_macs", w.attention_macs);
      r.kv("messages", w.messages).kv("gru_steps", w.gru_steps);
      r.kv("detection_ops", w.detection_ops).kv("delta_updates", w.delta_updates);
      r.kv("counter_speedup", w.node_pipelines > 0 ? n / static_cast<double>(w.node_pipelines) : 0.0);
      *out << r;
    }
    const auto decision = decide(c, p, b + 1, engine, drift);
    if (decision.kind != RebuildDecision::Kind::kNone) {
      execute_rebuild(decision, engine, drift);
      ++t.rebuilds;
      if (out) write_rebuild(*out, b + 1, decision, engine);
    }
    if (out) *out << Record("time.batch").kv("index", u64(b + 1)).kv("ms", ms);
  }
  const double count = static_cast<double>(batches.size());
  t.mean_ratio = batches.empty() ? 0.0 : ratio_sum / count;
  t.counter_speedup =
      pipelines > 0 ? count * static_cast<double>(engine.node_count()) / static_cast<double>(pipelines)
                    : 0.0;
  const auto snap = full_recompute(engine.store(), engine.memory(), p.params, p.pipeline,
                                   engine.store().latest_time().value_or(0.0), p.features);
  const Matrix& mine = engine.embeddings();
  for (std::size_t v = 0; v < snap.embeddings.rows(); ++v) {
    for (std::size_t j = 0; j < snap.embeddings.cols(); ++j) {
      t.final_embed_dev = std::max(t.final_embed_dev, std::abs(snap.embeddings(v, j) - mine(v, j)));
    }
  }
  return t;
}

std::vector<std::size_t> parse_list(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t v = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size() || v == 0) {
      throw InputError(std::string("bad ") + what + " list entry '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw InputError(std::string("empty ") + what + " list");
  return out;
}

int cmd_bench(RunConfig& c, const std::string& sweep_batch, const std::string& sweep_fanout,
              std::ostream& stdout_stream) {
  Prepared p = prepare(c);
  ReportSink sink(c.report, stdout_stream);
  std::ostream& out = sink.stream();
  write_run_header(out, "bench", p, c);
  const auto start = std::chrono::steady_clock::now();

  auto sweep = [&](const char* name, const std::vector<std::size_t>& values, auto apply) {
    for (std::size_t v : values) {
      RunConfig cv = c;
      Prepared pv = p;
      apply(cv, pv, v);
      pv.pipeline.validate();
      const auto t0 = std::chrono::steady_clock::now();
      const auto t = run_bench(cv, pv, nullptr);
      Record r("sweep");
      r.kv("param", name).kv("value", u64(v));
      r.kv("mean_affected_ratio", t.mean_ratio).kv("counter_speedup", t.counter_speedup);
      r.kv("max_affected", t.max_affected).kv("rebuilds", t.rebuilds);
      out << r;
      out << Record("time.sweep").kv("param", name).kv("value", u64(v)).kv("ms", elapsed_ms(t0));
    }
  };

  if (!sweep_batch.empty() || !sweep_fanout.empty()) {
    if (!sweep_batch.empty()) {
      sweep("B", parse_list(sweep_batch, "batch"),
            [](RunConfig& cv, Prepared&, std::size_t v) { cv.batch = v; });
    }
    if (!sweep_fanout.empty()) {
      sweep("L", parse_list(sweep_fanout, "fanout"),
            [](RunConfig&, Prepared& pv, std::size_t v) { pv.pipeline.fanout = v; });
    }
  } else {
    const auto t = run_bench(c, p, &out);
    Record s("summary");
    s.kv("mean_affected_ratio", t.mean_ratio).kv("counter_speedup", t.counter_speedup);
    s.kv("max_affected", t.max_affected).kv("rebuilds", t.rebuilds);
    s.kv("final_embed_dev", t.final_embed_dev);
    out << s;
  }
  out << Record("time.total").kv("ms", elapsed_ms(start));
  return kExitOk;
}

int cmd_speedup_table(const std::vector<std::string>& rows, std::ostream& out) {
  auto table = default_speedup_rows();
  for (const auto& text : rows) {
    std::vector<std::uint64_t> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::uint64_t x = 0;
      const auto res = std::from_chars(item.data(), item.data() + item.size(), x);
      if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
        throw InputError("bad row entry '" + item + "'");
      }
      v.push_back(x);
    }
    if (v.size() != 4) throw InputError("row must be n,B,L,K");
    table.push_back(theoretical_speedup(v[0], v[1], v[2], v[3]));
  }
  out << format_speedup_table(table);
  return kExitOk;
}

void with_output(const std::string& path, std::ostream& fallback,
                 const std::function<void(std::ostream&)>& fn) {
  if (path.empty() || path == "-") {
    fn(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw InputError("cannot open '" + path + "' for writing");
  fn(file);
}

// Expands "--config <file>" into flags. File lines are "key=value" or
// "key value"; '#' starts a comment. Keys already given on the command line
// win over the file.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw InputError("--config needs a file");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      kept.push_back(args[i]);
    }
  }
  if (path.empty()) return kept;
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  auto given = [&](const std::string& flag) {
    return std::any_of(kept.begin(), kept.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> extra;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    const auto sep = line.find_first_of("= \t");
    if (sep == std::string::npos) throw ParseError(lineno, "expected key=value");
    std::string key = line.substr(0, sep);
    std::string value = line.substr(sep + 1);
    value.erase(0, value.find_first_not_of(" \t="));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    const std::string flag = "--" + key;
    if (given(flag)) continue;
    if (value == "true") {
      extra.push_back(flag);
    } else if (value != "false") {
      extra.push_back(flag);
      extra.push_back(value);
    }
  }
  kept.insert(kept.end(), extra.begin(), extra.end());
  return kept;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Streaming temporal GNN inference: generation, verification and benchmarks"};
  app.require_subcommand(1);

  StreamSpec gen_spec;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Write a seeded synthetic edge stream");
  add_stream_options(*gen, gen_spec);
  gen->add_option("--edge-dim", gen_spec.edge_dim, "Edge feature width");
  gen->add_option("--out", gen_out, "Output file (stdout when omitted)");

  RunConfig verify_cfg;
  auto* verify = app.add_subcommand("verify", "Run incremental and oracle engines in lockstep");
  add_run_options(*verify, verify_cfg);

  RunConfig bench_cfg;
  std::string sweep_batch, sweep_fanout;
  auto* bench = app.add_subcommand("bench", "Per-batch work counters and parameter sweeps");
  add_run_options(*bench, bench_cfg);
  bench->add_option("--sweep-batch", sweep_batch, "Comma-separated batch sizes");
  bench->add_option("--sweep-fanout", sweep_fanout, "Comma-separated fanouts");

  std::vector<std::string> rows;
  auto* table = app.add_subcommand("speedup-table", "Theoretical speedup rows");
  table->add_option("--row", rows, "Extra row n,B,L,K (repeatable)");

  auto* params = app.add_subcommand("params", "Parameter files");
  params->require_subcommand(1);
  std::uint64_t init_seed = 1;
  ModelDims init_dims;
  std::string init_out;
  auto* init = params->add_subcommand("init", "Write seeded initial parameters");
  init->add_option("--seed", init_seed, "Parameter seed");
  add_dims_options(*init, init_dims);
  init->add_option("--out", init_out, "Output file (stdout when omitted)");
  std::string dump_path;
  auto* dump = params->add_subcommand("dump", "Summarize a parameter file");
  dump->add_option("--params", dump_path, "Parameter file")->required();

  for (auto* sub : {gen, verify, bench, init}) {
    sub->add_option("--config", "key=value file with option defaults (flags win)");
  }

  try {
    std::vector<std::string> expanded;
    try {
      expanded = expand_config(args);
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return kExitInputError;
    }
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    if (*gen) {
      const auto stream = generate_stream(gen_spec);
      with_output(gen_out, out, [&](std::ostream& o) { write_stream(stream, o); });
      return kExitOk;
    }
    if (*verify) return cmd_verify(verify_cfg, out);
    if (*bench) return cmd_bench(bench_cfg, sweep_batch, sweep_fanout, out);
    if (*table) return cmd_speedup_table(rows, out);
    if (*init) {
      const auto p = init_params(init_seed, init_dims);
      with_output(init_out, out, [&](std::ostream& o) { save_params(p, o); });
      return kExitOk;
    }
    if (*dump) {
      const auto p = load_params_file(dump_path);
      out << "model " << format_dims(p.dims) << '\n';
      p.visit([&](const std::string& name, std::size_t r, std::size_t cols,
                  std::span<const double> data) {
        double sq = 0.0;
        for (double x : data) sq += x * x;
        out << Record("tensor").kv("name", name).kv("rows", u64(r)).kv("cols", u64(cols))
                   .kv("norm", std::sqrt(sq));
      });
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace streamtgn::cli
