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

#pragma once

#include <string>

#include <json.hpp>

#include "choical/choi.hpp"
#include "choical/linalg.hpp"

namespace choical {

using Json = nlohmann::ordered_json;

/// Thrown on malformed input files; the CLI maps it to exit code 2.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Matrix wire format:
//   {"rows": n, "cols": m, "data": [[re, im], ...]}  (row-major)
// Parsers reject wrong-length data and non-finite entries.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

// Choi wire format always embeds the system metadata:
//   {"matrix": <matrix>, "out_dims": [..], "in_dims": [..], "normalized": b}
Json choi_to_json(const ChoiMatrix& m);
ChoiMatrix choi_from_json(const Json& j);

ComplexMatrix read_matrix_file(const std::string& path);
ChoiMatrix read_choi_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace choical
