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

#include "choical/rng.hpp"

#include <cmath>
#include <numbers>

namespace choical {

double Rng::uniform() {
  // 53 random bits into [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

int Rng::uniform_int(int n) {
  // Modulo bias is negligible for the small n used here (enumeration sizes,
  // gate counts), and this keeps the draw sequence stable across platforms.
  return static_cast<int>(engine_() % static_cast<std::uint64_t>(n));
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  double u2 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

Complex Rng::complex_normal() {
  return Complex(normal(), normal()) / std::sqrt(2.0);
}

ComplexMatrix random_ginibre(int rows, int cols, Rng& rng) {
  ComplexMatrix g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      g(i, j) = rng.complex_normal();
    }
  }
  return g;
}

ComplexMatrix random_density_matrix(int d, Rng& rng) {
  ComplexMatrix g = random_ginibre(d, d, rng);
  ComplexMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

ComplexMatrix random_real_density_matrix(int d, Rng& rng) {
  ComplexMatrix g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      g(i, j) = Complex(rng.normal(), 0.0);
    }
  }
  ComplexMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

ComplexMatrix random_unitary(int d, Rng& rng) {
  ComplexMatrix g = random_ginibre(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase gauge so the distribution does not depend on QR internals.
  for (int j = 0; j < d; ++j) {
    Complex diag = r(j, j);
    if (std::abs(diag) > 0) {
      q.col(j) *= diag / std::abs(diag);
    }
  }
  return q;
}

ComplexMatrix random_pure_state(int d, Rng& rng) {
  ComplexVector psi(d);
  for (int i = 0; i < d; ++i) psi(i) = rng.complex_normal();
  psi.normalize();
  return psi * psi.adjoint();
}

}  // namespace choical
