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

#include <doctest.h>

#include "choical/json_io.hpp"
#include "choical/linalg.hpp"
#include "choical/rng.hpp"

using namespace choical;

namespace {

// The 4x4 matrix whose channel reading is ambiguous: Hermitian, PSD, trace 2,
// and both marginals are the identity.
ComplexMatrix ambiguous_matrix() {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = 1;
  m(0, 1) = 2;
  m(1, 0) = 2;
  m(1, 1) = 4;
  m(2, 2) = 4;
  m(2, 3) = -2;
  m(3, 2) = -2;
  m(3, 3) = 1;
  return m / 5.0;
}

ComplexMatrix bell_projector() {
  ComplexMatrix phi = ComplexMatrix::Zero(4, 4);
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      phi(x * 2 + x, y * 2 + y) = 1.0;
    }
  }
  return phi / 2.0;
}

ComplexMatrix random_hermitian(int d, Rng& rng) {
  ComplexMatrix g = random_ginibre(d, d, rng);
  return hermitize(g);
}

}  // namespace

TEST_CASE("tensor: identity and basis placement") {
  CHECK(max_abs(tensor(identity_matrix(2), identity_matrix(2)) -
                identity_matrix(4)) == 0.0);

  ComplexMatrix t = tensor(basis_projector(2, 0), basis_projector(2, 1));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(t(i, j) == (i == 1 && j == 1 ? Complex(1, 0) : Complex(0, 0)));
    }
  }
}

TEST_CASE("tensor: associative and bilinear on random triples") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix a = random_ginibre(2, 2, rng);
    ComplexMatrix b = random_ginibre(3, 3, rng);
    ComplexMatrix c = random_ginibre(2, 2, rng);
    CHECK(max_abs(tensor(tensor(a, b), c) - tensor(a, tensor(b, c))) <= 1e-12);
    const Complex alpha(0.3, -1.2);
    CHECK(max_abs(tensor(alpha * a + c, b) -
                  (alpha * tensor(a, b) + tensor(c, b))) <= 1e-12);
  }
}

TEST_CASE("partial_trace: Choi-state marginals are the identity") {
  for (int d : {2, 3}) {
    ComplexMatrix phi = ComplexMatrix::Zero(d * d, d * d);
    for (int x = 0; x < d; ++x) {
      for (int y = 0; y < d; ++y) {
        phi(x * d + x, y * d + y) = 1.0;
      }
    }
    CHECK(max_abs(partial_trace(phi, DimVector{d, d}, {0}) -
                  identity_matrix(d)) <= 1e-14);
    CHECK(max_abs(partial_trace(phi, DimVector{d, d}, {1}) -
                  identity_matrix(d)) <= 1e-14);
  }
}

TEST_CASE("partial_trace: both marginals of the ambiguous matrix are id") {
  ComplexMatrix m = ambiguous_matrix();
  CHECK(max_abs(partial_trace(m, DimVector{2, 2}, {0}) - identity_matrix(2)) <=
        1e-14);
  CHECK(max_abs(partial_trace(m, DimVector{2, 2}, {1}) - identity_matrix(2)) <=
        1e-14);
  CHECK(m.trace().real() == doctest::Approx(2.0));
}

TEST_CASE("partial_trace: product states reduce exactly") {
  Rng rng(5);
  ComplexMatrix rho = random_density_matrix(2, rng);
  ComplexMatrix sigma = random_ginibre(3, 3, rng);
  ComplexMatrix joint = tensor(rho, sigma);
  CHECK(max_abs(partial_trace(joint, DimVector{2, 3}, {1}) -
                sigma.trace() * rho) <= 1e-13);
  // trace preservation
  CHECK(std::abs(partial_trace(joint, DimVector{2, 3}, {0}).trace() -
                 joint.trace()) <= 1e-13);
}

TEST_CASE("partial_transpose: product factorization and involution") {
  Rng rng(7);
  ComplexMatrix a = random_ginibre(2, 2, rng);
  ComplexMatrix b = random_ginibre(3, 3, rng);
  CHECK(max_abs(partial_transpose(tensor(a, b), DimVector{2, 3}, {1}) -
                tensor(a, b.transpose())) <= 1e-13);

  ComplexMatrix x = random_ginibre(6, 6, rng);
  CHECK(max_abs(partial_transpose(
                    partial_transpose(x, DimVector{2, 3}, {1}), DimVector{2, 3},
                    {1}) -
                x) == 0.0);
}

TEST_CASE("partial_transpose: Bell-state spectrum from the eigen oracle") {
  ComplexMatrix pt = partial_transpose(bell_projector(), DimVector{2, 2}, {1});
  RealVector eig = hermitian_eigenvalues(pt);
  // Oracle: eigendecomposition of the 4x4 result. The spectrum is
  // {-1/2, 1/2, 1/2, 1/2}.
  CHECK(eig(0) == doctest::Approx(-0.5).epsilon(1e-12));
  for (int i = 1; i < 4; ++i) {
    CHECK(eig(i) == doctest::Approx(0.5).epsilon(1e-12));
  }
  CHECK(psd_margin(pt) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("partial ops commute on disjoint subsystems") {
  Rng rng(13);
  ComplexMatrix x = hermitize(random_ginibre(8, 8, rng));
  DimVector dims{2, 2, 2};
  ComplexMatrix a = partial_trace(partial_transpose(x, dims, {1}), dims, {0});
  ComplexMatrix b = partial_transpose(partial_trace(x, dims, {0}),
                                      DimVector{2, 2}, {0});
  CHECK(max_abs(a - b) <= 1e-13);
}

TEST_CASE("psd_margin: explicit eigenvalues") {
  CHECK(psd_margin(identity_matrix(4)) == doctest::Approx(1.0));
  ComplexMatrix z = basis_projector(2, 0) - basis_projector(2, 1);
  CHECK(psd_margin(z) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(psd_margin(ComplexMatrix::Zero(2, 3)), std::invalid_argument);
  ComplexMatrix non_herm = ComplexMatrix::Zero(2, 2);
  non_herm(0, 1) = 1.0;
  CHECK_THROWS_AS(psd_margin(non_herm), std::invalid_argument);
}

TEST_CASE("psd_margin matches min eigenvalue of U D U^dag") {
  Rng rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = 2 + rng.uniform_int(4);
    ComplexMatrix u = random_unitary(d, rng);
    RealVector diag(d);
    for (int i = 0; i < d; ++i) diag(i) = 4.0 * rng.uniform() - 2.0;
    ComplexMatrix m = u * diag.cast<Complex>().asDiagonal() * u.adjoint();
    CHECK(psd_margin(m) == doctest::Approx(diag.minCoeff()).epsilon(1e-10));
  }
}

TEST_CASE("trace_norm: densities, differences, eigenvalue cross-check") {
  Rng rng(19);
  CHECK(trace_norm(random_density_matrix(4, rng)) == doctest::Approx(1.0));
  ComplexMatrix z = basis_projector(2, 0) - basis_projector(2, 1);
  CHECK(trace_norm(z) == doctest::Approx(2.0));

  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix h = random_hermitian(4, rng);
    RealVector eig = hermitian_eigenvalues(h);
    CHECK(trace_norm(h) ==
          doctest::Approx(eig.cwiseAbs().sum()).epsilon(1e-10));
  }
}

TEST_CASE("trace_norm: triangle inequality on random pairs") {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    ComplexMatrix a = random_ginibre(3, 3, rng);
    ComplexMatrix b = random_ginibre(3, 3, rng);
    CHECK(trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-10);
  }
}

TEST_CASE("reorder_systems: identity, inverse, and product swap") {
  Rng rng(29);
  ComplexMatrix x = random_ginibre(12, 12, rng);
  DimVector dims{2, 3, 2};
  CHECK(max_abs(reorder_systems(x, dims, {0, 1, 2}) - x) == 0.0);

  std::vector<int> perm{2, 0, 1};
  ComplexMatrix moved = reorder_systems(x, dims, perm);
  // Applying the inverse permutation restores the input.
  ComplexMatrix back =
      reorder_systems(moved, DimVector{2, 2, 3}, {1, 2, 0});
  CHECK(max_abs(back - x) == 0.0);

  ComplexMatrix a = random_ginibre(2, 2, rng);
  ComplexMatrix b = random_ginibre(3, 3, rng);
  CHECK(max_abs(reorder_systems(tensor(a, b), DimVector{2, 3}, {1, 0}) -
                tensor(b, a)) <= 1e-13);
}

TEST_CASE("matrix JSON round trip and validation") {
  Rng rng(31);
  ComplexMatrix m = random_ginibre(3, 2, rng);
  ComplexMatrix back = matrix_from_json(matrix_to_json(m));
  CHECK(max_abs(back - m) == 0.0);

  Json bad = matrix_to_json(m);
  bad["data"].erase(0);
  CHECK_THROWS_AS(matrix_from_json(bad), ParseError);

  Json bad_entry = matrix_to_json(m);
  bad_entry["data"][0] = Json::array({"x", 0.0});
  CHECK_THROWS_AS(matrix_from_json(bad_entry), ParseError);

  CHECK_THROWS_AS(matrix_from_json(Json::object()), ParseError);
}
