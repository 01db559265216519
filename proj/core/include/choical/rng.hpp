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

#include <cstdint>
#include <random>

#include "choical/linalg.hpp"

namespace choical {

/// Seeded generator with self-contained distributions.
///
/// std::normal_distribution is implementation-defined, so drawing through it
/// would make seeded runs differ between standard libraries. All mapping from
/// raw mt19937_64 output to doubles happens here, which keeps sampler output a
/// pure function of the seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double uniform();

  /// Uniform integer in [0, n).
  int uniform_int(int n);

  /// Standard normal via Box-Muller.
  double normal();

  /// Complex standard normal (unit total variance).
  Complex complex_normal();

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// d x k matrix of i.i.d. complex normals.
ComplexMatrix random_ginibre(int rows, int cols, Rng& rng);

/// Random full-rank density matrix (Ginibre construction).
ComplexMatrix random_density_matrix(int d, Rng& rng);

/// Random density matrix with real entries only.
ComplexMatrix random_real_density_matrix(int d, Rng& rng);

/// Haar-ish random unitary via QR of a Ginibre matrix with phase fixing.
ComplexMatrix random_unitary(int d, Rng& rng);

/// Random pure-state projector.
ComplexMatrix random_pure_state(int d, Rng& rng);

}  // namespace choical
