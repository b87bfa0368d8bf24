// SPDX-FileCopyrightText: Copyright (c) 2026 The streamtgn Authors
// SPDX-License-Identifier: Apache-2.0

// Text serialization of ModelParameters.
//
//   # streamtgn-params v1
//   dims d_s=8 d_e=4 d_t=4 d_x=0 d_m=8 d_k=8 heads=2 d=8 layers=1
//   tensor <name> <rows> <cols>
//   <rows*cols values, row-major, %.17g>
//
// Loading is strict: every tensor must appear once with the expected shape.

#pragma once

#include <iosfwd>
#include <string>

#include "streamtgn/model.hpp"

namespace streamtgn {

void save_params(const ModelParameters& params, std::ostream& out);
ModelParameters load_params(std::istream& in);

void save_params_file(const ModelParameters& params, const std::string& path);
ModelParameters load_params_file(const std::string& path);

/// "d_s=8 d_e=4 ..." in the order used by the params header.
std::string format_dims(const ModelDims& dims);

}  // namespace streamtgn
