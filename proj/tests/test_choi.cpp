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

#include "choical/choi.hpp"
#include "choical/json_io.hpp"

using namespace choical;

namespace {

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

ChoiMatrix random_channel_choi(const DimVector& in, const DimVector& out,
                               int kraus, Rng& rng) {
  return kraus_to_choi(random_channel(in, out, kraus, rng));
}

}  // namespace

TEST_CASE("choi_state: definition unrolled for d=2 and traces") {
  ChoiMatrix phi = choi_state(2);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const bool hit = (i == 0 || i == 3) && (j == 0 || j == 3);
      CHECK(phi.matrix(i, j) == (hit ? Complex(1, 0) : Complex(0, 0)));
    }
  }
  for (int d : {2, 3, 4}) {
    CHECK(choi_state(d).matrix.trace().real() == doctest::Approx(d));
    CHECK(renormalized_choi_state(d).matrix.trace().real() ==
          doctest::Approx(1.0));
  }
}

TEST_CASE("choi_state: composite regroups into a product of Choi states") {
  // Phi on a 2x2 composite equals the middle-swap of Phi (x) Phi.
  ComplexMatrix lhs = renormalized_choi_state(4).matrix;
  ComplexMatrix product = tensor(renormalized_choi_state(2).matrix,
                                 renormalized_choi_state(2).matrix);
  // product order is (A, A', B, B'); regroup to (A, B, A', B').
  ComplexMatrix rhs =
      reorder_systems(product, DimVector{2, 2, 2, 2}, {0, 2, 1, 3});
  CHECK(max_abs(lhs - rhs) <= 1e-14);
}

TEST_CASE("kraus_to_choi: identity channel gives the Choi state") {
  for (int d : {2, 3}) {
    ChoiMatrix m = kraus_to_choi(identity_channel(DimVector{d}));
    CHECK(max_abs(m.matrix - choi_state(d).matrix) <= 1e-14);
  }
}

TEST_CASE("kraus_to_choi: unitary conjugation and replace channel") {
  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 1) = 1;
  x(1, 0) = 1;
  ChoiMatrix m = kraus_to_choi(unitary_channel(x, DimVector{2}));
  ComplexMatrix expected = tensor(x, identity_matrix(2)) *
                           choi_state(2).matrix *
                           tensor(x, identity_matrix(2)).adjoint();
  CHECK(max_abs(m.matrix - expected) <= 1e-14);

  // rho -> tr(rho)|0><0| has Kraus {|0><j|}; its Choi is |0><0| (x) id.
  std::vector<ComplexMatrix> kraus;
  for (int j = 0; j < 2; ++j) {
    ComplexMatrix k = ComplexMatrix::Zero(2, 2);
    k(0, j) = 1;
    kraus.push_back(k);
  }
  ChoiMatrix replace =
      kraus_to_choi(KrausChannel(kraus, DimVector{2}, DimVector{2}));
  CHECK(max_abs(replace.matrix -
                tensor(basis_projector(2, 0), identity_matrix(2))) <= 1e-14);
}

TEST_CASE("kraus channel validation rejects non-trace-preserving sets") {
  std::vector<ComplexMatrix> kraus{0.5 * identity_matrix(2)};
  CHECK_THROWS_AS(KrausChannel(kraus, DimVector{2}, DimVector{2}),
                  std::invalid_argument);
}

TEST_CASE("apply_channel: both readings of the ambiguous matrix") {
  ComplexMatrix m = ambiguous_matrix();

  // Stored convention: first factor is the output.
  ChoiMatrix first_out(m, DimVector{2}, DimVector{2}, false);
  ComplexMatrix image1 = apply_channel(first_out, basis_projector(2, 0));
  ComplexMatrix expected1 = ComplexMatrix::Zero(2, 2);
  expected1(0, 0) = 0.2;
  expected1(1, 1) = 0.8;
  CHECK(max_abs(image1 - expected1) <= 1e-12);

  // Alternative convention reached by explicit reordering.
  ComplexMatrix swapped = reorder_systems(m, DimVector{2, 2}, {1, 0});
  ChoiMatrix second_out(swapped, DimVector{2}, DimVector{2}, false);
  ComplexMatrix image2 = apply_channel(second_out, basis_projector(2, 0));
  ComplexMatrix expected2(2, 2);
  expected2 << 0.2, 0.4, 0.4, 0.8;
  CHECK(max_abs(image2 - expected2) <= 1e-12);
}

TEST_CASE("apply_channel: identity Choi acts as the identity (snake)") {
  Rng rng(41);
  for (int d : {2, 3, 4}) {
    ComplexMatrix rho = random_density_matrix(d, rng);
    CHECK(max_abs(apply_channel(choi_state(d), rho) - rho) <= 1e-12);
    CHECK(max_abs(apply_channel(renormalized_choi_state(d), rho) - rho) <=
          1e-12);
  }
}

TEST_CASE("apply_channel matches the Kraus action exactly") {
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    KrausChannel ch = random_channel(DimVector{2}, DimVector{3}, 3, rng);
    ComplexMatrix rho = random_density_matrix(2, rng);
    CHECK(max_abs(apply_channel(kraus_to_choi(ch), rho) - ch.apply(rho)) <=
          1e-12);
  }
}

TEST_CASE("apply_channel rejects non-channel Chois") {
  ComplexMatrix bad = ComplexMatrix::Zero(4, 4);
  bad(0, 0) = 2.0;  // marginal far from identity
  ChoiMatrix not_channel(bad, DimVector{2}, DimVector{2}, false);
  CHECK_THROWS_AS(apply_channel(not_channel, identity_matrix(2) / 2.0),
                  std::invalid_argument);
}

TEST_CASE("link_product: snake identities for d in {2,3,4}") {
  Rng rng(47);
  for (int d : {2, 3, 4}) {
    ChoiMatrix m = random_channel_choi(DimVector{d}, DimVector{d}, 2, rng);
    ChoiMatrix left = link_product(choi_state(d), m);
    CHECK(max_abs(left.matrix - m.matrix) <= 1e-12);
    ChoiMatrix right = link_product(m, choi_state(d));
    CHECK(max_abs(right.matrix - m.matrix) <= 1e-12);
  }
}

TEST_CASE("transpose identity: contracting a state through the Choi state") {
  Rng rng(53);
  for (int d : {2, 3, 4}) {
    ComplexMatrix rho = random_density_matrix(d, rng);
    ComplexMatrix contracted = partial_trace(
        choi_state(d).matrix * tensor(rho, identity_matrix(d)),
        DimVector{d, d}, {0});
    CHECK(max_abs(contracted - rho.transpose()) <= 1e-12);
  }
}

TEST_CASE("link_product: state input reproduces the channel action") {
  Rng rng(59);
  KrausChannel ch = random_channel(DimVector{3}, DimVector{2}, 2, rng);
  ComplexMatrix rho = random_density_matrix(3, rng);
  ChoiMatrix m = kraus_to_choi(ch);
  CHECK(max_abs(link_product_state(m, rho) - ch.apply(rho)) <= 1e-12);
}

TEST_CASE("link_product equals Kraus composition on 50 random pairs") {
  Rng rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const int da = 2 + (trial % 2);  // qubit and qutrit inputs
    const int db = 2;
    const int dc = 2 + ((trial / 2) % 2);
    KrausChannel first = random_channel(DimVector{da}, DimVector{db}, 2, rng);
    KrausChannel second = random_channel(DimVector{db}, DimVector{dc}, 2, rng);
    ChoiMatrix linked = link_product(kraus_to_choi(second), kraus_to_choi(first));
    ChoiMatrix composed = kraus_to_choi(second.compose_after(first));
    CHECK(max_abs(linked.matrix - composed.matrix) <= 1e-10);
    CHECK(linked.out_dims == composed.out_dims);
    CHECK(linked.in_dims == composed.in_dims);
  }
}

TEST_CASE("link_product rejects mismatched middle systems") {
  Rng rng(67);
  ChoiMatrix n = random_channel_choi(DimVector{3}, DimVector{2}, 2, rng);
  ChoiMatrix m = random_channel_choi(DimVector{2}, DimVector{2}, 2, rng);
  // n expects a 3-dimensional middle system; m outputs dimension 2.
  CHECK_THROWS_AS(link_product(n, m), std::invalid_argument);
}

TEST_CASE("link_product of channel Chois is a channel Choi (200 pairs)") {
  Rng rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    ChoiMatrix first = random_channel_choi(DimVector{2}, DimVector{2}, 2, rng);
    ChoiMatrix second = random_channel_choi(DimVector{2}, DimVector{2}, 2, rng);
    ChoiCheck check = is_channel_choi(link_product(second, first));
    CHECK(check.ok);
    CHECK(check.residual <= 1e-9);
  }
}

TEST_CASE("swap_tensor_product: identity channels compose to the Choi state") {
  ChoiMatrix a = kraus_to_choi(identity_channel(DimVector{2}));
  ChoiMatrix c = kraus_to_choi(identity_channel(DimVector{3}));
  ChoiMatrix joint = swap_tensor_product(a, c);
  CHECK(max_abs(joint.matrix - choi_state(6).matrix) <= 1e-13);
  CHECK(joint.out_dims == DimVector{2, 3});
  CHECK(joint.in_dims == DimVector{2, 3});
}

TEST_CASE("swap_tensor_product: scalar factor reduces to plain tensor") {
  Rng rng(73);
  ChoiMatrix m = random_channel_choi(DimVector{2}, DimVector{2}, 2, rng);
  ComplexMatrix scalar = ComplexMatrix::Identity(1, 1);
  ChoiMatrix trivial(scalar, DimVector{1}, DimVector{1}, false);
  ChoiMatrix joint = swap_tensor_product(m, trivial);
  CHECK(max_abs(joint.matrix - tensor(m.matrix, scalar)) <= 1e-15);
}

TEST_CASE("swap_tensor_product: preparation factor matches the Kraus route") {
  // A state is a channel from a scalar system; tensoring with it must agree
  // with the Kraus-level parallel composition (the middle swap is real here).
  Rng rng(74);
  KrausChannel ch = random_channel(DimVector{2}, DimVector{2}, 2, rng);
  ComplexMatrix sigma = random_density_matrix(3, rng);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(sigma);
  std::vector<ComplexMatrix> prep_kraus;
  for (int i = 0; i < 3; ++i) {
    ComplexMatrix k = std::sqrt(std::max(0.0, eig.eigenvalues()(i))) *
                      eig.eigenvectors().col(i);
    prep_kraus.push_back(k);
  }
  KrausChannel prep(prep_kraus, DimVector{1}, DimVector{3});

  ChoiMatrix lhs =
      swap_tensor_product(kraus_to_choi(ch), state_as_choi(sigma, DimVector{3}));
  ChoiMatrix rhs = kraus_to_choi(ch.tensor_with(prep));
  CHECK(max_abs(lhs.matrix - rhs.matrix) <= 1e-12);
}

TEST_CASE("swap_tensor_product equals the Kraus-level tensor (50 pairs)") {
  Rng rng(79);
  for (int trial = 0; trial < 50; ++trial) {
    KrausChannel a = random_channel(DimVector{2}, DimVector{2}, 2, rng);
    KrausChannel b = random_channel(DimVector{2}, DimVector{3}, 2, rng);
    ChoiMatrix swapped = swap_tensor_product(kraus_to_choi(a), kraus_to_choi(b));
    ChoiMatrix direct = kraus_to_choi(a.tensor_with(b));
    CHECK(max_abs(swapped.matrix - direct.matrix) <= 1e-10);
  }
}

TEST_CASE("sequential and parallel composition interchange") {
  Rng rng(83);
  for (int trial = 0; trial < 10; ++trial) {
    KrausChannel m1 = random_channel(DimVector{2}, DimVector{2}, 2, rng);
    KrausChannel n1 = random_channel(DimVector{2}, DimVector{2}, 2, rng);
    KrausChannel m2 = random_channel(DimVector{2}, DimVector{2}, 2, rng);
    KrausChannel n2 = random_channel(DimVector{2}, DimVector{2}, 2, rng);

    ChoiMatrix lhs = swap_tensor_product(
        link_product(kraus_to_choi(n1), kraus_to_choi(m1)),
        link_product(kraus_to_choi(n2), kraus_to_choi(m2)));
    ChoiMatrix rhs = link_product(
        swap_tensor_product(kraus_to_choi(n1), kraus_to_choi(n2)),
        swap_tensor_product(kraus_to_choi(m1), kraus_to_choi(m2)));
    CHECK(max_abs(lhs.matrix - rhs.matrix) <= 1e-10);
  }
}

TEST_CASE("is_renormalized_choi: accepted and rejected examples") {
  CHECK(is_renormalized_choi(renormalized_choi_state(3)).ok);

  // id/(d_B d_A) is the renormalized Choi of the completely depolarizing
  // channel.
  ChoiMatrix depolarized(identity_matrix(6) / 6.0, DimVector{3}, DimVector{2},
                         true);
  CHECK(is_renormalized_choi(depolarized).ok);
  ChoiMatrix from_kraus =
      kraus_to_choi(completely_depolarizing_channel(DimVector{2}, DimVector{3}))
          .renormalized();
  CHECK(max_abs(from_kraus.matrix - depolarized.matrix) <= 1e-13);

  Rng rng(89);
  ComplexMatrix rho = random_density_matrix(2, rng);
  ComplexMatrix sigma = random_density_matrix(2, rng);
  ChoiMatrix product(tensor(rho, sigma), DimVector{2}, DimVector{2}, true);
  ChoiCheck check = is_renormalized_choi(product);
  CHECK_FALSE(check.ok);  // generic sigma is far from id/2
  CHECK(check.residual > 1e-3);
}

TEST_CASE("normalization flag conversions are exact") {
  Rng rng(97);
  ChoiMatrix m = random_channel_choi(DimVector{3}, DimVector{2}, 2, rng);
  ChoiMatrix round = m.renormalized().unnormalized();
  CHECK(max_abs(round.matrix - m.matrix) <= 1e-15);
  CHECK(m.renormalized().matrix.trace().real() == doctest::Approx(1.0));
}

TEST_CASE("choi JSON embeds metadata and round-trips") {
  Rng rng(101);
  ChoiMatrix m =
      random_channel_choi(DimVector{2}, DimVector{3}, 2, rng).renormalized();
  ChoiMatrix back = choi_from_json(choi_to_json(m));
  CHECK(max_abs(back.matrix - m.matrix) == 0.0);
  CHECK(back.out_dims == m.out_dims);
  CHECK(back.in_dims == m.in_dims);
  CHECK(back.normalized == m.normalized);

  Json bare = matrix_to_json(m.matrix);
  CHECK_THROWS_AS(choi_from_json(bare), ParseError);
}
