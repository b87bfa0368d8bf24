// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

#include "streamtgn/params_io.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "text_util.hpp"

namespace streamtgn {

namespace {

constexpr std::string_view kHeader = "# streamtgn-params v1";

struct DimField {
  const char* name;
  std::size_t ModelDims::*member;
};

constexpr DimField kDimFields[] = {
    {"d_s", &ModelDims::d_s}, {"d_e", &ModelDims::d_e},     {"d_t", &ModelDims::d_t},
    {"d_x", &ModelDims::d_x}, {"d_m", &ModelDims::d_m},     {"d_k", &ModelDims::d_k},
    {"heads", &ModelDims::heads}, {"d", &ModelDims::d}, {"layers", &ModelDims::layers},
};

bool next_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (!detail::trim(line).empty()) return true;
  }
  return false;
}

}  // namespace

std::string format_dims(const ModelDims& dims) {
  std::string out;
  for (const auto& f : kDimFields) {
    if (!out.empty()) out += ' ';
    out += f.name;
    out += '=';
    out += std::to_string(dims.*f.member);
  }
  return out;
}

void save_params(const ModelParameters& params, std::ostream& out) {
  out << kHeader << '\n' << "dims " << format_dims(params.dims) << '\n';
  params.visit([&](const std::string& name, std::size_t rows, std::size_t cols,
                   std::span<const double> data) {
    out << "tensor " << name << ' ' << rows << ' ' << cols << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (i) out << ' ';
      out << detail::format_17g(data[i]);
    }
    out << '\n';
  });
}

ModelParameters load_params(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!next_line(in, line, lineno) || detail::trim(line) != kHeader) {
    throw ParseError(lineno, "missing params header");
  }
  if (!next_line(in, line, lineno)) throw ParseError(lineno, "missing dims line");
  auto tokens = detail::split_ws(line);
  if (tokens.empty() || tokens[0] != "dims") throw ParseError(lineno, "expected dims line");
  ModelDims dims;
  std::set<std::string> seen_dims;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const auto eq = tokens[i].find('=');
    if (eq == std::string_view::npos) throw ParseError(lineno, "bad dims token");
    const auto key = tokens[i].substr(0, eq);
    bool known = false;
    for (const auto& f : kDimFields) {
      if (key == f.name) {
        dims.*f.member = detail::parse_int_at<std::size_t>(tokens[i].substr(eq + 1), lineno, f.name);
        seen_dims.insert(f.name);
        known = true;
      }
    }
    if (!known) throw ParseError(lineno, "unknown dimension '" + std::string(key) + "'");
  }
  if (seen_dims.size() != std::size(kDimFields)) throw ParseError(lineno, "incomplete dims line");

  ModelParameters params;
  try {
    params = ModelParameters::zeros(dims);
  } catch (const InputError& e) {
    throw ParseError(lineno, e.what());
  }

  struct Slot {
    std::size_t rows, cols;
    std::span<double> data;
  };
  std::map<std::string, Slot> slots;
  params.visit([&](const std::string& name, std::size_t rows, std::size_t cols,
                   std::span<double> data) { slots.emplace(name, Slot{rows, cols, data}); });

  std::set<std::string> loaded;
  while (next_line(in, line, lineno)) {
    tokens = detail::split_ws(line);
    if (tokens.size() != 4 || tokens[0] != "tensor") throw ParseError(lineno, "expected tensor line");
    const std::string name(tokens[1]);
    auto it = slots.find(name);
    if (it == slots.end()) throw ParseError(lineno, "unknown tensor '" + name + "'");
    if (!loaded.insert(name).second) throw ParseError(lineno, "duplicate tensor '" + name + "'");
    const auto rows = detail::parse_int_at<std::size_t>(tokens[2], lineno, "rows");
    const auto cols = detail::parse_int_at<std::size_t>(tokens[3], lineno, "cols");
    if (rows != it->second.rows || cols != it->second.cols) {
      throw ParseError(lineno, "tensor '" + name + "' has wrong shape");
    }
    if (!next_line(in, line, lineno)) throw ParseError(lineno, "missing values for " + name);
    const auto values = detail::split_ws(line);
    if (values.size() != rows * cols) throw ParseError(lineno, "wrong value count for " + name);
    for (std::size_t i = 0; i < values.size(); ++i) {
      it->second.data[i] = detail::parse_double_at(values[i], lineno, "value");
    }
  }
  if (loaded.size() != slots.size()) throw ParseError(lineno, "params file is missing tensors");
  return params;
}

void save_params_file(const ModelParameters& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  save_params(params, out);
  if (!out) throw InputError("write failed for '" + path + "'");
}

ModelParameters load_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return load_params(in);
}

}  // namespace streamtgn
