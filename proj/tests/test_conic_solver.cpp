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

#include <cmath>

#include "choical/conic/builders.hpp"
#include "choical/conic/program.hpp"
#include "choical/conic/solver.hpp"
#include "choical/rng.hpp"

using namespace choical;
using namespace choical::conic;

namespace {

// min c'x s.t. A x >= b plus the box |x_i| <= box. Always feasible (x = 0
// works when b <= 0) and bounded.
ConicProgram make_lp(const RealMatrix& a, const RealVector& b,
                     const RealVector& c, double box) {
  const int n = static_cast<int>(c.size());
  ProgramBuilder builder("lp");
  builder.add_vector("x", n, Cone::Free);

  builder.add_constraint("ineq", ConstraintBlock::Kind::Vector,
                         static_cast<int>(a.rows()), Cone::NonNeg, a, b);
  RealMatrix upper = -RealMatrix::Identity(n, n);
  builder.add_constraint("box-upper", ConstraintBlock::Kind::Vector, n,
                         Cone::NonNeg, upper,
                         RealVector::Constant(n, -box));
  RealMatrix lower = RealMatrix::Identity(n, n);
  builder.add_constraint("box-lower", ConstraintBlock::Kind::Vector, n,
                         Cone::NonNeg, lower, RealVector::Constant(n, -box));
  builder.set_cost(c);
  return builder.take();
}

// Brute-force LP oracle by vertex enumeration over all n-subsets of the
// stacked constraint rows (inequalities + box).
double lp_vertex_oracle(const RealMatrix& a, const RealVector& b,
                        const RealVector& c, double box) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(a.rows());
  RealMatrix rows(m + 2 * n, n);
  RealVector rhs(m + 2 * n);
  rows.topRows(m) = a;
  rhs.head(m) = b;
  rows.block(m, 0, n, n) = -RealMatrix::Identity(n, n);
  rhs.segment(m, n) = RealVector::Constant(n, -box);
  rows.block(m + n, 0, n, n) = RealMatrix::Identity(n, n);
  rhs.segment(m + n, n) = RealVector::Constant(n, -box);

  const int total = m + 2 * n;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(static_cast<size_t>(n));
  std::function<void(int, int)> recurse = [&](int start, int chosen) {
    if (chosen == n) {
      RealMatrix sub(n, n);
      RealVector sub_rhs(n);
      for (int i = 0; i < n; ++i) {
        sub.row(i) = rows.row(pick[static_cast<size_t>(i)]);
        sub_rhs(i) = rhs(pick[static_cast<size_t>(i)]);
      }
      Eigen::FullPivLU<RealMatrix> lu(sub);
      if (!lu.isInvertible()) return;
      RealVector x = lu.solve(sub_rhs);
      if (((rows * x - rhs).array() >= -1e-9).all()) {
        best = std::min(best, c.dot(x));
      }
      return;
    }
    for (int i = start; i < total; ++i) {
      pick[static_cast<size_t>(chosen)] = i;
      recurse(i + 1, chosen + 1);
    }
  };
  recurse(0, 0);
  return best;
}

}  // namespace

TEST_CASE("herm coordinates are an isometry") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    ComplexMatrix a = hermitize(random_ginibre(4, 4, rng));
    ComplexMatrix b = hermitize(random_ginibre(4, 4, rng));
    const double hs = (a * b).trace().real();
    CHECK(herm_to_coords(a).dot(herm_to_coords(b)) ==
          doctest::Approx(hs).epsilon(1e-12));
    CHECK(max_abs(coords_to_herm(herm_to_coords(a), 4) - a) <= 1e-14);
  }
}

TEST_CASE("real embedding preserves PSD margins") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    ComplexMatrix h = hermitize(random_ginibre(3, 3, rng));
    RealMatrix e = herm_embedding(h);
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(e, Eigen::EigenvaluesOnly);
    CHECK(eig.eigenvalues().minCoeff() ==
          doctest::Approx(psd_margin(h)).epsilon(1e-10));
  }
}

TEST_CASE("scalar LP: min x subject to x >= 3") {
  ProgramBuilder b("min-x");
  b.add_scalar("x");
  RealMatrix map(1, 1);
  map(0, 0) = 1.0;
  RealVector rhs(1);
  rhs(0) = 3.0;
  b.add_constraint("x-ge-3", ConstraintBlock::Kind::Vector, 1, Cone::NonNeg,
                   map, rhs);
  RealVector cost(1);
  cost(0) = 1.0;
  b.set_cost(cost);

  Solution sol = solve(b.take());
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.primal_value == doctest::Approx(3.0).epsilon(1e-7));
  CHECK(sol.dual_value == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(sol.primal_value >= sol.dual_value - 1e-7);
}

TEST_CASE("infeasible LP is certified") {
  // x >= 1 and -x >= 0 cannot hold together.
  ProgramBuilder b("infeasible");
  b.add_scalar("x");
  RealMatrix map(2, 1);
  map << 1.0, -1.0;
  RealVector rhs(2);
  rhs << 1.0, 0.0;
  b.add_constraint("clash", ConstraintBlock::Kind::Vector, 2, Cone::NonNeg,
                   map, rhs);
  RealVector cost(1);
  cost(0) = 1.0;
  b.set_cost(cost);

  Solution sol = solve(b.take());
  CHECK(sol.status == SolveStatus::Infeasible);
  CHECK(std::isinf(sol.primal_value));
}

TEST_CASE("unbounded LP is certified as dual infeasible") {
  // min x subject to x <= 0.
  ProgramBuilder b("unbounded");
  b.add_scalar("x");
  RealMatrix map(1, 1);
  map(0, 0) = -1.0;
  b.add_constraint("x-le-0", ConstraintBlock::Kind::Vector, 1, Cone::NonNeg,
                   map, RealVector::Zero(1));
  RealVector cost(1);
  cost(0) = 1.0;
  b.set_cost(cost);

  Solution sol = solve(b.take());
  CHECK(sol.status == SolveStatus::Unbounded);
}

TEST_CASE("equality-infeasible program short-circuits") {
  ProgramBuilder b("eq-clash");
  b.add_scalar("x", Cone::NonNeg);
  RealMatrix map(2, 1);
  map << 1.0, 1.0;
  RealVector rhs(2);
  rhs << 1.0, 2.0;  // x = 1 and x = 2
  b.add_constraint("pin", ConstraintBlock::Kind::Vector, 2, Cone::Zero, map,
                   rhs);
  RealVector cost(1);
  cost(0) = 1.0;
  b.set_cost(cost);
  Solution sol = solve(b.take());
  CHECK(sol.status == SolveStatus::Infeasible);
}

TEST_CASE("redundant equality rows are tolerated") {
  ProgramBuilder b("redundant");
  b.add_scalar("x", Cone::NonNeg);
  b.add_scalar("y", Cone::NonNeg);
  RealMatrix map(3, 2);
  map << 1.0, 1.0, 2.0, 2.0, 1.0, 1.0;  // three copies of x + y = 1
  RealVector rhs(3);
  rhs << 1.0, 2.0, 1.0;
  b.add_constraint("sum", ConstraintBlock::Kind::Vector, 3, Cone::Zero, map,
                   rhs);
  RealVector cost(2);
  cost << 1.0, 2.0;
  b.set_cost(cost);
  Solution sol = solve(b.take());
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.primal_value == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("diagonal SDP: min tr X with X >= rho, X >= 0") {
  // For diagonal rho the optimum is the sum of positive eigenvalues.
  RealVector diag(3);
  diag << 0.7, -0.4, 1.5;
  ComplexMatrix rho = diag.cast<Complex>().asDiagonal();

  ProgramBuilder b("pos-part");
  const int x = b.add_herm("X", 3, Cone::Psd);
  RealMatrix map = RealMatrix::Identity(9, 9);
  b.add_constraint("dominates", ConstraintBlock::Kind::Herm, 3, Cone::Psd, map,
                   herm_to_coords(rho));
  b.set_cost(herm_to_coords(identity_matrix(3)));
  ConicProgram program = b.take();

  Solution sol = solve(program);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.primal_value == doctest::Approx(2.2).epsilon(1e-6));
  CHECK(sol.primal_value >= sol.dual_value - 1e-7);
  ComplexMatrix x_opt = sol.primal_herm(program, x);
  CHECK(psd_margin(x_opt) >= -1e-7);
}

TEST_CASE("complex Hermitian SDP via the embedding") {
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    ComplexMatrix h = hermitize(random_ginibre(3, 3, rng));
    ProgramBuilder b("pos-part-complex");
    b.add_herm("X", 3, Cone::Psd);
    b.add_constraint("dominates", ConstraintBlock::Kind::Herm, 3, Cone::Psd,
                     RealMatrix::Identity(9, 9), herm_to_coords(h));
    b.set_cost(herm_to_coords(identity_matrix(3)));
    Solution sol = solve(b.take());
    REQUIRE(sol.status == SolveStatus::Optimal);
    RealVector eig = hermitian_eigenvalues(h);
    const double expected = eig.cwiseMax(0.0).sum();
    CHECK(sol.primal_value == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("one-variable SDP reproduces the closed-form max relative entropy") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    ComplexMatrix rho = random_density_matrix(3, rng);
    ComplexMatrix sigma = random_density_matrix(3, rng);

    // min x s.t. x sigma - rho >= 0
    ProgramBuilder b("pairwise");
    b.add_scalar("x", Cone::NonNeg);
    RealMatrix map(9, 1);
    map.col(0) = herm_to_coords(sigma);
    b.add_constraint("dominates", ConstraintBlock::Kind::Herm, 3, Cone::Psd,
                     map, herm_to_coords(rho));
    RealVector cost(1);
    cost(0) = 1.0;
    b.set_cost(cost);
    Solution sol = solve(b.take());
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(std::log2(sol.primal_value) ==
          doctest::Approx(dmax_pair(rho, sigma)).epsilon(1e-5));
  }
}

TEST_CASE("dmax_pair: identical states and diagonal additivity") {
  Rng rng(13);
  ComplexMatrix rho = random_density_matrix(3, rng);
  CHECK(dmax_pair(rho, rho) == doctest::Approx(0.0).epsilon(1e-10));

  // Diagonal instances have the closed form max log-ratio of eigenvalues,
  // which is additive under tensoring.
  RealVector p(2), q(2), r(3), s(3);
  p << 0.3, 0.7;
  q << 0.5, 0.5;
  r << 0.2, 0.5, 0.3;
  s << 0.4, 0.4, 0.2;
  ComplexMatrix rho1 = p.cast<Complex>().asDiagonal();
  ComplexMatrix sig1 = q.cast<Complex>().asDiagonal();
  ComplexMatrix rho2 = r.cast<Complex>().asDiagonal();
  ComplexMatrix sig2 = s.cast<Complex>().asDiagonal();

  const double d1 = dmax_pair(rho1, sig1);
  const double d2 = dmax_pair(rho2, sig2);
  CHECK(d1 == doctest::Approx(std::log2(0.7 / 0.5)).epsilon(1e-12));
  CHECK(dmax_pair(tensor(rho1, rho2), tensor(sig1, sig2)) ==
        doctest::Approx(d1 + d2).epsilon(1e-10));

  // Support violation gives +inf.
  ComplexMatrix proj0 = basis_projector(2, 0);
  ComplexMatrix proj1 = basis_projector(2, 1);
  CHECK(std::isinf(dmax_pair(proj0, proj1)));
}

TEST_CASE("random LPs agree with the vertex oracle; double dual matches") {
  Rng rng(17);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + trial % 2;
    const int m = 3 + trial % 3;
    RealMatrix a(m, n);
    RealVector bvec(m);
    RealVector c(n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = 2.0 * rng.uniform() - 1.0;
      bvec(i) = -rng.uniform();  // keeps x = 0 feasible
    }
    for (int j = 0; j < n; ++j) c(j) = 2.0 * rng.uniform() - 1.0;

    ConicProgram lp = make_lp(a, bvec, c, 2.0);
    Solution sol = solve(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);

    const double oracle = lp_vertex_oracle(a, bvec, c, 2.0);
    CHECK(sol.primal_value == doctest::Approx(oracle).epsilon(1e-6));
    CHECK(sol.primal_value >= sol.dual_value - 1e-7);
    CHECK(std::abs(sol.primal_value - sol.dual_value) <= 1e-6);

    ConicProgram dual = dualize(lp);
    Solution dual_sol = solve(dual);
    REQUIRE(dual_sol.status == SolveStatus::Optimal);
    CHECK(dual_sol.primal_value == doctest::Approx(oracle).epsilon(1e-6));

    ConicProgram double_dual = dualize(dual);
    Solution dd_sol = solve(double_dual);
    REQUIRE(dd_sol.status == SolveStatus::Optimal);
    CHECK(dd_sol.primal_value == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("two-parameter SDPs agree with a refining grid oracle") {
  Rng rng(19);
  for (int trial = 0; trial < 6; ++trial) {
    ComplexMatrix f1 = hermitize(random_ginibre(3, 3, rng));
    ComplexMatrix f2 = hermitize(random_ginibre(3, 3, rng));
    RealVector c(2);
    c << 2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0;

    // min c1 t1 + c2 t2  s.t.  I + t1 F1 + t2 F2 >= 0, |t_i| <= 2
    ProgramBuilder b("two-param");
    b.add_vector("t", 2, Cone::Free);
    RealMatrix map(9, 2);
    map.col(0) = herm_to_coords(f1);
    map.col(1) = herm_to_coords(f2);
    b.add_constraint("lmi", ConstraintBlock::Kind::Herm, 3, Cone::Psd, map,
                     herm_to_coords(-identity_matrix(3)));
    RealMatrix box_u = -RealMatrix::Identity(2, 2);
    b.add_constraint("box-u", ConstraintBlock::Kind::Vector, 2, Cone::NonNeg,
                     box_u, RealVector::Constant(2, -2.0));
    b.add_constraint("box-l", ConstraintBlock::Kind::Vector, 2, Cone::NonNeg,
                     RealMatrix::Identity(2, 2), RealVector::Constant(2, -2.0));
    b.set_cost(c);
    Solution sol = solve(b.take());
    REQUIRE(sol.status == SolveStatus::Optimal);

    // Boundary oracle: the feasible set is convex with 0 in its interior, so
    // every boundary point is radius(theta) * direction(theta) with the
    // radius found by bisection, and the linear objective is unimodal along
    // the boundary. Coarse sweep, then golden-section refinement.
    auto feasible = [&](double t1, double t2) {
      ComplexMatrix m = identity_matrix(3) + t1 * f1 + t2 * f2;
      if (std::abs(t1) > 2.0 || std::abs(t2) > 2.0) return false;
      return psd_margin(m) >= -1e-12;
    };
    auto boundary_value = [&](double theta) {
      const double dx = std::cos(theta), dy = std::sin(theta);
      double lo = 0.0, hi = 4.0;  // box diameter bound
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid * dx, mid * dy) ? lo : hi) = mid;
      }
      return c(0) * lo * dx + c(1) * lo * dy;
    };
    double best = 0.0;  // t = 0 is feasible
    double best_theta = 0.0;
    const int sweeps = 720;
    for (int i = 0; i < sweeps; ++i) {
      const double theta = 2.0 * M_PI * i / sweeps;
      const double value = boundary_value(theta);
      if (value < best) {
        best = value;
        best_theta = theta;
      }
    }
    {
      const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
      double lo = best_theta - 2.0 * M_PI / sweeps;
      double hi = best_theta + 2.0 * M_PI / sweeps;
      double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
      double v1 = boundary_value(x1), v2 = boundary_value(x2);
      for (int it = 0; it < 60; ++it) {
        if (v1 < v2) {
          hi = x2;
          x2 = x1;
          v2 = v1;
          x1 = hi - golden * (hi - lo);
          v1 = boundary_value(x1);
        } else {
          lo = x1;
          x1 = x2;
          v1 = v2;
          x2 = lo + golden * (hi - lo);
          v2 = boundary_value(x2);
        }
      }
      best = std::min({best, v1, v2});
    }
    CHECK(std::abs(sol.primal_value - best) <= 1e-4);
  }
}

TEST_CASE("dualize: adjoint identity on random probes") {
  Rng rng(23);
  ComplexMatrix f1 = hermitize(random_ginibre(3, 3, rng));
  ProgramBuilder b("probe");
  b.add_scalar("x");
  b.add_herm("X", 3, Cone::Psd);
  RealMatrix map = RealMatrix::Zero(9, 10);
  map.col(0) = herm_to_coords(f1);
  map.block(0, 1, 9, 9) = RealMatrix::Identity(9, 9);
  b.add_constraint("lmi", ConstraintBlock::Kind::Herm, 3, Cone::Psd, map,
                   RealVector::Zero(9));
  RealVector cost = RealVector::Zero(10);
  cost(0) = 1.0;
  b.set_cost(cost);
  ConicProgram p = b.take();
  ConicProgram d = dualize(p);

  // <N(x), y> == <x, N^dag(y)>: the dual's constraint maps are the negated
  // transposes of the primal's, block by block.
  const ConstraintBlock& primal_block = p.constraints[0];
  const ConstraintBlock& dual_block = d.constraints[0];  // for var "x"
  for (int probe = 0; probe < 100; ++probe) {
    RealVector x(10), y(9);
    for (int i = 0; i < 10; ++i) x(i) = rng.normal();
    for (int i = 0; i < 9; ++i) y(i) = rng.normal();
    const double lhs = (primal_block.map * x).dot(y);
    double rhs = 0.0;
    // N^dag(y) per variable block, read from the dual program rows.
    for (size_t vb = 0; vb < p.vars.size(); ++vb) {
      const int off = p.var_offset(static_cast<int>(vb));
      const RealMatrix& dmap = d.constraints[vb].map;
      rhs -= (dmap * y).dot(x.segment(off, p.vars[vb].dim()));
    }
    (void)dual_block;
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("solver determinism: identical inputs give identical outputs") {
  Rng rng(29);
  ComplexMatrix rho = random_density_matrix(4, rng);
  ProgramBuilder build1("det");
  build1.add_herm("X", 4, Cone::Psd);
  build1.add_constraint("dominates", ConstraintBlock::Kind::Herm, 4, Cone::Psd,
                        RealMatrix::Identity(16, 16), herm_to_coords(rho));
  build1.set_cost(herm_to_coords(identity_matrix(4)));
  ConicProgram p1 = build1.take();

  Solution a = solve(p1);
  Solution b2 = solve(p1);
  CHECK(a.status == b2.status);
  CHECK(a.primal_value == b2.primal_value);  // bit identical
  CHECK(a.dual_value == b2.dual_value);
  CHECK(a.iterations == b2.iterations);
}
