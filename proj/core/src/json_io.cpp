// Copyright 2026 The Choical Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "choical/json_io.hpp"

#include <cmath>
#include <fstream>

namespace choical {

Json matrix_to_json(const ComplexMatrix& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      data.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
    }
  }
  j["data"] = std::move(data);
  return j;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("data")) {
    throw ParseError("matrix: expected object with rows, cols, data");
  }
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer()) {
    throw ParseError("matrix: rows and cols must be integers");
  }
  const long long rows = j["rows"].get<long long>();
  const long long cols = j["cols"].get<long long>();
  if (rows < 1 || cols < 1 || rows > 4096 || cols > 4096) {
    throw ParseError("matrix: rows and cols must be positive and moderate");
  }
  const Json& data = j["data"];
  if (!data.is_array() ||
      static_cast<long long>(data.size()) != rows * cols) {
    throw ParseError("matrix: data length does not equal rows * cols");
  }
  ComplexMatrix m(rows, cols);
  long long idx = 0;
  for (long long i = 0; i < rows; ++i) {
    for (long long k = 0; k < cols; ++k, ++idx) {
      const Json& entry = data[static_cast<size_t>(idx)];
      if (!entry.is_array() || entry.size() != 2 ||
          !entry[0].is_number() || !entry[1].is_number()) {
        throw ParseError("matrix: each entry must be a [re, im] pair");
      }
      const double re = entry[0].get<double>();
      const double im = entry[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im)) {
        throw ParseError("matrix: entries must be finite");
      }
      m(i, k) = Complex(re, im);
    }
  }
  return m;
}

Json choi_to_json(const ChoiMatrix& m) {
  Json j;
  j["matrix"] = matrix_to_json(m.matrix);
  j["out_dims"] = m.out_dims.dims;
  j["in_dims"] = m.in_dims.dims;
  j["normalized"] = m.normalized;
  return j;
}

ChoiMatrix choi_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("matrix") || !j.contains("out_dims") ||
      !j.contains("in_dims") || !j.contains("normalized")) {
    throw ParseError(
        "choi: expected object with matrix, out_dims, in_dims, normalized");
  }
  ComplexMatrix m = matrix_from_json(j["matrix"]);
  if (!j["out_dims"].is_array() || !j["in_dims"].is_array() ||
      !j["normalized"].is_boolean()) {
    throw ParseError("choi: malformed metadata fields");
  }
  std::vector<int> out_dims, in_dims;
  for (const auto& d : j["out_dims"]) {
    if (!d.is_number_integer()) throw ParseError("choi: out_dims must be ints");
    out_dims.push_back(d.get<int>());
  }
  for (const auto& d : j["in_dims"]) {
    if (!d.is_number_integer()) throw ParseError("choi: in_dims must be ints");
    in_dims.push_back(d.get<int>());
  }
  try {
    return ChoiMatrix(std::move(m), DimVector(out_dims), DimVector(in_dims),
                      j["normalized"].get<bool>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("choi: ") + e.what());
  }
}

namespace {

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open file: " + path);
  }
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace

ComplexMatrix read_matrix_file(const std::string& path) {
  return matrix_from_json(read_json_file(path));
}

ChoiMatrix read_choi_file(const std::string& path) {
  return choi_from_json(read_json_file(path));
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write file: " + path);
  }
  out << j.dump(2) << "\n";
}

}  // namespace choical
