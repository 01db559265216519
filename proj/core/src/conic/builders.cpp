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

#include "choical/conic/builders.hpp"

#include <cmath>
#include <numeric>
#include <optional>

namespace choical::conic {

namespace {

struct FreeConeLift {
  int x_block = -1;  // scalar lambda
  int X_block = -1;  // Hermitian variable
  int w_block = -1;  // V-representation weights
};

// Materialize a linear matrix map on X as a real-coordinate matrix
// (image herm coords) x (X herm coords).
RealMatrix materialize_matrix_map(
    const std::function<ComplexMatrix(const ComplexMatrix&)>& f, int side,
    int image_side) {
  const int in_dim = herm_coord_dim(side);
  const int out_dim = herm_coord_dim(image_side);
  RealMatrix map(out_dim, in_dim);
  RealVector basis = RealVector::Zero(in_dim);
  for (int k = 0; k < in_dim; ++k) {
    basis(k) = 1.0;
    map.col(k) = herm_to_coords(hermitize(f(coords_to_herm(basis, side))));
    basis(k) = 0.0;
  }
  return map;
}

RealMatrix materialize_vector_map(
    const std::function<RealVector(const ComplexMatrix&)>& f, int side,
    int image_length) {
  const int in_dim = herm_coord_dim(side);
  RealMatrix map(image_length, in_dim);
  RealVector basis = RealVector::Zero(in_dim);
  for (int k = 0; k < in_dim; ++k) {
    basis(k) = 1.0;
    map.col(k) = f(coords_to_herm(basis, side));
    basis(k) = 0.0;
  }
  return map;
}

// Trace functional of an X block as a row over the (current) variable space.
RealVector trace_row(const ProgramBuilder& b, int total_dim, int x_offset,
                     int side) {
  RealVector row = RealVector::Zero(total_dim);
  for (int j = 0; j < side; ++j) row(x_offset + j) = 1.0;  // diag coords first
  return row;
}

// Declare the Hermitian variable X (and optionally the scalar lambda) for a
// free-cone lift. Atom constraints are added later by add_free_cone_rows,
// once every variable block exists.
FreeConeLift declare_free_cone(ProgramBuilder& b, const ConeDescription& cone,
                               const std::string& prefix, bool with_scalar) {
  FreeConeLift lift;
  if (with_scalar) {
    lift.x_block = b.add_scalar(prefix + ".lambda");
  }
  bool var_psd = false;
  if (!cone.is_vrep) {
    for (const ConeAtom& atom : cone.atoms) {
      if (atom.kind == ConeAtom::Kind::Psd && !atom.matrix_map) {
        var_psd = true;  // identity-map PSD atom goes on the variable itself
      }
    }
  }
  lift.X_block = b.add_herm(prefix + ".X", cone.side,
                            var_psd ? Cone::Psd : Cone::Free);
  if (cone.is_vrep) {
    lift.w_block = b.add_vector(
        prefix + ".w", static_cast<int>(cone.extreme_points.size()),
        Cone::NonNeg);
  }
  return lift;
}

// Emit the cone rows for a declared lift. Call after all variables exist so
// constraint maps span the final variable space.
void add_free_cone_rows(ProgramBuilder& b, const ConeDescription& cone,
                        const FreeConeLift& lift, const std::string& prefix) {
  const int total = b.var_dim();
  const int x_off = b.var_offset(lift.X_block);
  const int side = cone.side;
  const int xdim = herm_coord_dim(side);

  if (cone.is_vrep) {
    // X = sum_i w_i S_i
    const int w_off = b.var_offset(lift.w_block);
    const int count = static_cast<int>(cone.extreme_points.size());
    RealMatrix map = RealMatrix::Zero(xdim, total);
    map.block(0, x_off, xdim, xdim) = RealMatrix::Identity(xdim, xdim);
    for (int i = 0; i < count; ++i) {
      map.col(w_off + i) =
          -herm_to_coords(cone.extreme_points[static_cast<size_t>(i)]);
    }
    b.add_constraint(prefix + ".vrep", ConstraintBlock::Kind::Herm, side,
                     Cone::Zero, std::move(map), RealVector::Zero(xdim));
  } else {
    for (size_t a = 0; a < cone.atoms.size(); ++a) {
      const ConeAtom& atom = cone.atoms[a];
      const std::string label = prefix + ".atom" + std::to_string(a);
      switch (atom.kind) {
        case ConeAtom::Kind::Psd: {
          if (!atom.matrix_map) break;  // identity case lives on the variable
          RealMatrix local =
              materialize_matrix_map(atom.matrix_map, side, atom.image_side);
          RealMatrix map = RealMatrix::Zero(local.rows(), total);
          map.block(0, x_off, local.rows(), xdim) = local;
          b.add_constraint(label, ConstraintBlock::Kind::Herm, atom.image_side,
                           Cone::Psd, std::move(map),
                           RealVector::Zero(local.rows()));
          break;
        }
        case ConeAtom::Kind::NonNeg:
        case ConeAtom::Kind::Zero: {
          RealMatrix local =
              materialize_vector_map(atom.vector_map, side, atom.image_length);
          RealMatrix map = RealMatrix::Zero(local.rows(), total);
          map.block(0, x_off, local.rows(), xdim) = local;
          b.add_constraint(label, ConstraintBlock::Kind::Vector,
                           atom.image_length,
                           atom.kind == ConeAtom::Kind::Zero ? Cone::Zero
                                                             : Cone::NonNeg,
                           std::move(map), RealVector::Zero(local.rows()));
          break;
        }
      }
    }
  }

  // Trace linkage tr X = lambda.
  if (lift.x_block >= 0) {
    RealVector row = trace_row(b, total, x_off, side);
    row(b.var_offset(lift.x_block)) = -1.0;
    RealMatrix map(1, total);
    map.row(0) = row;
    b.add_constraint(prefix + ".trace-link", ConstraintBlock::Kind::Vector, 1,
                     Cone::Zero, std::move(map), RealVector::Zero(1));
  }
}

// Rows of the map X -> d_in * tr_out(X) - x * id_in over the variable space.
void add_channel_marginal_rows(ProgramBuilder& b, const DimVector& out_dims,
                               const DimVector& in_dims, int X_block,
                               std::optional<int> x_block,
                               const RealVector& fixed_rhs,
                               const std::string& label) {
  const int total = b.var_dim();
  const int x_off = b.var_offset(X_block);
  const DimVector flat = out_dims.concat(in_dims);
  const int side = flat.total();
  const int din = in_dims.total();
  std::vector<int> out_indices(static_cast<size_t>(out_dims.count()));
  std::iota(out_indices.begin(), out_indices.end(), 0);

  auto marginal_map = [&](const ComplexMatrix& x) {
    return ComplexMatrix(static_cast<double>(din) *
                         partial_trace(x, flat, out_indices));
  };
  RealMatrix local = materialize_matrix_map(marginal_map, side, din);
  RealMatrix map = RealMatrix::Zero(local.rows(), total);
  map.block(0, x_off, local.rows(), herm_coord_dim(side)) = local;
  RealVector rhs;
  if (x_block.has_value()) {
    map.col(b.var_offset(*x_block)) -= herm_to_coords(identity_matrix(din));
    rhs = RealVector::Zero(local.rows());
  } else {
    rhs = fixed_rhs;
  }
  b.add_constraint(label, ConstraintBlock::Kind::Herm, din, Cone::Zero,
                   std::move(map), std::move(rhs));
}

ConeDescription cone_or_throw(const FreeStateSet& theory,
                              const DimVector& dims) {
  if (!theory.supports(dims)) {
    throw UnsupportedDimension("theory " + theory.name() +
                               " does not support dims " + dims.to_string());
  }
  return theory.cone(dims);
}

Solution solve_expect_optimal(const ConicProgram& p, const SolveOptions& opts,
                              const std::string& what) {
  Solution sol = solve(p, opts);
  if (sol.status != SolveStatus::Optimal) {
    throw SolverError(what + ": solver returned " + to_string(sol.status));
  }
  return sol;
}

double log2_clamped(double v) {
  if (v <= 0.0) return 0.0;
  return std::max(0.0, std::log2(v));
}

}  // namespace

ConicProgram build_dmax_state(const FreeStateSet& theory,
                              const ComplexMatrix& rho, const DimVector& dims) {
  ConeDescription cone = cone_or_throw(theory, dims);
  const int side = cone.side;
  if (rho.rows() != side || rho.cols() != side) {
    throw std::invalid_argument("build_dmax_state: state dimension mismatch");
  }

  ProgramBuilder b("dmax-state[" + theory.name() + "]");
  FreeConeLift lift = declare_free_cone(b, cone, "free", /*with_scalar=*/true);

  add_free_cone_rows(b, cone, lift, "free");

  // X - rho >= 0
  const int total = b.var_dim();
  const int xdim = herm_coord_dim(side);
  RealMatrix map = RealMatrix::Zero(xdim, total);
  map.block(0, b.var_offset(lift.X_block), xdim, xdim) =
      RealMatrix::Identity(xdim, xdim);
  b.add_constraint("dominates-rho", ConstraintBlock::Kind::Herm, side,
                   Cone::Psd, std::move(map), herm_to_coords(hermitize(rho)));

  RealVector cost = RealVector::Zero(total);
  cost(b.var_offset(lift.x_block)) = 1.0;
  b.set_cost(std::move(cost));
  b.set_sense(ConicProgram::Sense::Min);
  return b.take();
}

ConicProgram build_dmax_channel(const FreeStateSet& theory,
                                const ChoiMatrix& mu) {
  ChoiCheck check = is_renormalized_choi(mu, 1e-6);
  if (!mu.normalized || !check.ok) {
    throw std::invalid_argument(
        "build_dmax_channel: input is not a renormalized channel Choi "
        "(residual " +
        std::to_string(check.residual) + ")");
  }
  const DimVector flat = mu.flat_dims();
  ConeDescription cone = cone_or_throw(theory, flat);

  ProgramBuilder b("dmax-channel[" + theory.name() + "]");
  FreeConeLift lift = declare_free_cone(b, cone, "free", /*with_scalar=*/true);

  add_free_cone_rows(b, cone, lift, "free");
  add_channel_marginal_rows(b, mu.out_dims, mu.in_dims, lift.X_block,
                            lift.x_block, RealVector(), "choi-marginal");

  const int total = b.var_dim();
  const int xdim = herm_coord_dim(cone.side);
  RealMatrix map = RealMatrix::Zero(xdim, total);
  map.block(0, b.var_offset(lift.X_block), xdim, xdim) =
      RealMatrix::Identity(xdim, xdim);
  b.add_constraint("dominates-mu", ConstraintBlock::Kind::Herm, cone.side,
                   Cone::Psd, std::move(map),
                   herm_to_coords(hermitize(mu.matrix)));

  RealVector cost = RealVector::Zero(total);
  cost(b.var_offset(lift.x_block)) = 1.0;
  b.set_cost(std::move(cost));
  b.set_sense(ConicProgram::Sense::Min);
  return b.take();
}

namespace {

ConicProgram build_monotone_impl(const FreeStateSet& theory,
                                 const ComplexMatrix& tau,
                                 const DimVector& dims_b,
                                 const ComplexMatrix& rho,
                                 const DimVector& dims_a, bool pin_unit) {
  const DimVector flat = dims_b.concat(dims_a);
  ConeDescription cone = cone_or_throw(theory, flat);
  if (tau.rows() != dims_b.total() || rho.rows() != dims_a.total()) {
    throw std::invalid_argument("build_monotone: dimension mismatch");
  }

  ProgramBuilder b("monotone[" + theory.name() + "]");
  FreeConeLift lift = declare_free_cone(b, cone, "free", /*with_scalar=*/true);

  add_free_cone_rows(b, cone, lift, "free");
  add_channel_marginal_rows(b, dims_b, dims_a, lift.X_block, lift.x_block,
                            RealVector(), "marginal");

  const int total = b.var_dim();
  if (pin_unit) {
    RealMatrix map = RealMatrix::Zero(1, total);
    map(0, b.var_offset(lift.x_block)) = 1.0;
    RealVector rhs(1);
    rhs(0) = 1.0;
    b.add_constraint("unit-slice", ConstraintBlock::Kind::Vector, 1, Cone::Zero,
                     std::move(map), std::move(rhs));
  }

  // cost <(x, X), (0, -tau (x) rho^T)>
  ComplexMatrix overlap = tensor(hermitize(tau), hermitize(rho).transpose());
  RealVector cost = RealVector::Zero(total);
  cost.segment(b.var_offset(lift.X_block), herm_coord_dim(cone.side)) =
      -herm_to_coords(hermitize(overlap));
  b.set_cost(std::move(cost));
  b.set_sense(ConicProgram::Sense::Min);
  return b.take();
}

}  // namespace

ConicProgram build_monotone(const FreeStateSet& theory,
                            const ComplexMatrix& tau, const DimVector& dims_b,
                            const ComplexMatrix& rho, const DimVector& dims_a) {
  return build_monotone_impl(theory, tau, dims_b, rho, dims_a,
                             /*pin_unit=*/false);
}

QuantifierResult dmax_state(const FreeStateSet& theory,
                            const ComplexMatrix& rho, const DimVector& dims,
                            const SolveOptions& opts) {
  ConicProgram p = build_dmax_state(theory, rho, dims);
  QuantifierResult out;
  out.solution = solve_expect_optimal(p, opts, "dmax_state");
  out.value = log2_clamped(out.solution.primal_value);
  return out;
}

QuantifierResult dmax_channel(const FreeStateSet& theory, const ChoiMatrix& mu,
                              const SolveOptions& opts) {
  ConicProgram p = build_dmax_channel(theory, mu);
  QuantifierResult out;
  out.solution = solve_expect_optimal(p, opts, "dmax_channel");
  out.value = log2_clamped(out.solution.primal_value);
  return out;
}

double dmax_pair(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                 double support_tol) {
  if (rho.rows() != sigma.rows() || rho.rows() != rho.cols() ||
      sigma.rows() != sigma.cols()) {
    throw std::invalid_argument("dmax_pair: shape mismatch");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hermitize(sigma));
  const RealVector d = eig.eigenvalues();
  const double dmax_eig = d.maxCoeff();
  ComplexMatrix inv_sqrt = ComplexMatrix::Zero(sigma.rows(), sigma.cols());
  ComplexMatrix kernel_proj = ComplexMatrix::Zero(sigma.rows(), sigma.cols());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const ComplexVector v = eig.eigenvectors().col(i);
    if (d(i) > support_tol * std::max(1.0, dmax_eig)) {
      inv_sqrt += (1.0 / std::sqrt(d(i))) * v * v.adjoint();
    } else {
      kernel_proj += v * v.adjoint();
    }
  }
  const ComplexMatrix rho_h = hermitize(rho);
  if (max_abs(kernel_proj * rho_h * kernel_proj) > support_tol) {
    return std::numeric_limits<double>::infinity();
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> scaled(
      hermitize(inv_sqrt * rho_h * inv_sqrt), Eigen::EigenvaluesOnly);
  return log2_clamped(scaled.eigenvalues().maxCoeff());
}

QuantifierResult monotone_value(const FreeStateSet& theory,
                                const ComplexMatrix& tau,
                                const DimVector& dims_b,
                                const ComplexMatrix& rho,
                                const DimVector& dims_a,
                                const SolveOptions& opts) {
  ConicProgram p =
      build_monotone_impl(theory, tau, dims_b, rho, dims_a, /*pin_unit=*/true);
  QuantifierResult out;
  out.solution = solve_expect_optimal(p, opts, "monotone_value");
  out.value = -out.solution.primal_value;
  return out;
}

ConversionResult conversion_distance(const FreeStateSet& theory,
                                     const ComplexMatrix& rho,
                                     const DimVector& dims_a,
                                     const ComplexMatrix& sigma,
                                     const DimVector& dims_b,
                                     const SolveOptions& opts) {
  const DimVector flat = dims_b.concat(dims_a);
  ConeDescription cone = cone_or_throw(theory, flat);
  const int da = dims_a.total();
  const int db = dims_b.total();
  if (rho.rows() != da || sigma.rows() != db) {
    throw std::invalid_argument("conversion_distance: dimension mismatch");
  }

  ProgramBuilder b("convert-distance[" + theory.name() + "]");
  FreeConeLift lift = declare_free_cone(b, cone, "free", /*with_scalar=*/false);
  const int p_block = b.add_herm("P", db, Cone::Psd);
  const int q_block = b.add_herm("Q", db, Cone::Psd);

  add_free_cone_rows(b, cone, lift, "free");
  // Renormalized-Choi marginal: d_A tr_B X = id_A (pins tr X = 1 too).
  add_channel_marginal_rows(b, dims_b, dims_a, lift.X_block, std::nullopt,
                            herm_to_coords(identity_matrix(da)),
                            "choi-marginal");

  // P - Q + d_A (X * rho) = sigma, so P - Q = sigma - d_A (mu * rho).
  const int total = b.var_dim();
  const ComplexMatrix rho_h = hermitize(rho);
  auto link_map = [&](const ComplexMatrix& x) {
    ComplexMatrix out = ComplexMatrix::Zero(db, db);
    for (int bi = 0; bi < db; ++bi) {
      for (int bj = 0; bj < db; ++bj) {
        Complex acc(0, 0);
        for (int ai = 0; ai < da; ++ai) {
          for (int aj = 0; aj < da; ++aj) {
            acc += x(bi * da + ai, bj * da + aj) * rho_h(ai, aj);
          }
        }
        out(bi, bj) = static_cast<double>(da) * acc;
      }
    }
    return out;
  };
  RealMatrix local = materialize_matrix_map(link_map, cone.side, db);
  const int image_dim = herm_coord_dim(db);
  RealMatrix map = RealMatrix::Zero(image_dim, total);
  map.block(0, b.var_offset(lift.X_block), image_dim,
            herm_coord_dim(cone.side)) = local;
  map.block(0, b.var_offset(p_block), image_dim, image_dim) =
      RealMatrix::Identity(image_dim, image_dim);
  map.block(0, b.var_offset(q_block), image_dim, image_dim) =
      -RealMatrix::Identity(image_dim, image_dim);
  b.add_constraint("split", ConstraintBlock::Kind::Herm, db, Cone::Zero,
                   std::move(map), herm_to_coords(hermitize(sigma)));

  RealVector cost = RealVector::Zero(total);
  cost.segment(b.var_offset(p_block), image_dim) =
      0.5 * herm_to_coords(identity_matrix(db));
  cost.segment(b.var_offset(q_block), image_dim) =
      0.5 * herm_to_coords(identity_matrix(db));
  b.set_cost(std::move(cost));
  b.set_sense(ConicProgram::Sense::Min);

  ConicProgram program = b.take();
  ConversionResult out{
      0.0,
      ChoiMatrix(identity_matrix(db * da) / (db * da), dims_b, dims_a, true),
      {}};
  out.solution = solve_expect_optimal(program, opts, "conversion_distance");
  out.distance = std::max(0.0, out.solution.primal_value);
  out.witness = ChoiMatrix(hermitize(out.solution.primal_herm(program, lift.X_block)),
                           dims_b, dims_a, true);
  return out;
}

ConvertibleResult convertible(const FreeStateSet& theory,
                              const ComplexMatrix& rho, const DimVector& dims_a,
                              const ComplexMatrix& sigma,
                              const DimVector& dims_b, double tol,
                              const SolveOptions& opts) {
  const DimVector flat = dims_b.concat(dims_a);
  ConeDescription cone = cone_or_throw(theory, flat);
  const int da = dims_a.total();
  const int db = dims_b.total();
  if (rho.rows() != da || sigma.rows() != db) {
    throw std::invalid_argument("convertible: dimension mismatch");
  }

  ProgramBuilder b("convertible[" + theory.name() + "]");
  FreeConeLift lift = declare_free_cone(b, cone, "free", /*with_scalar=*/false);
  const int t_block = b.add_scalar("t");

  add_free_cone_rows(b, cone, lift, "free");
  add_channel_marginal_rows(b, dims_b, dims_a, lift.X_block, std::nullopt,
                            herm_to_coords(identity_matrix(da)),
                            "choi-marginal");

  const int total = b.var_dim();
  const ComplexMatrix rho_h = hermitize(rho);
  auto link_map = [&](const ComplexMatrix& x) {
    ComplexMatrix out = ComplexMatrix::Zero(db, db);
    for (int bi = 0; bi < db; ++bi) {
      for (int bj = 0; bj < db; ++bj) {
        Complex acc(0, 0);
        for (int ai = 0; ai < da; ++ai) {
          for (int aj = 0; aj < da; ++aj) {
            acc += x(bi * da + ai, bj * da + aj) * rho_h(ai, aj);
          }
        }
        out(bi, bj) = static_cast<double>(da) * acc;
      }
    }
    return out;
  };
  RealMatrix local = materialize_matrix_map(link_map, cone.side, db);
  const int image_dim = herm_coord_dim(db);
  const RealVector target = herm_to_coords(hermitize(sigma));

  // t +/- (coords(d_A mu * rho) - coords(sigma)) >= 0
  RealMatrix upper = RealMatrix::Zero(image_dim, total);
  upper.block(0, b.var_offset(lift.X_block), image_dim,
              herm_coord_dim(cone.side)) = -local;
  upper.col(b.var_offset(t_block)).setOnes();
  b.add_constraint("residual-upper", ConstraintBlock::Kind::Vector, image_dim,
                   Cone::NonNeg, std::move(upper), RealVector(-target));

  RealMatrix lower = RealMatrix::Zero(image_dim, total);
  lower.block(0, b.var_offset(lift.X_block), image_dim,
              herm_coord_dim(cone.side)) = local;
  lower.col(b.var_offset(t_block)).setOnes();
  b.add_constraint("residual-lower", ConstraintBlock::Kind::Vector, image_dim,
                   Cone::NonNeg, std::move(lower), RealVector(target));

  RealVector cost = RealVector::Zero(total);
  cost(b.var_offset(t_block)) = 1.0;
  b.set_cost(std::move(cost));
  b.set_sense(ConicProgram::Sense::Min);

  ConicProgram program = b.take();
  ConvertibleResult out{
      false, 0.0,
      ChoiMatrix(identity_matrix(db * da) / (db * da), dims_b, dims_a, true)};
  Solution sol = solve_expect_optimal(program, opts, "convertible");
  out.residual = std::max(0.0, sol.primal_value);
  out.convertible = out.residual <= tol;
  out.witness = ChoiMatrix(hermitize(sol.primal_herm(program, lift.X_block)),
                           dims_b, dims_a, true);
  return out;
}

ChainRuleResult check_chain_rule(const FreeStateSet& theory,
                                 const ComplexMatrix& rho,
                                 const DimVector& dims_a,
                                 const KrausChannel& channel, double tol,
                                 const SolveOptions& opts) {
  if (channel.in_dims.total() != dims_a.total()) {
    throw std::invalid_argument("check_chain_rule: dimension mismatch");
  }
  const ComplexMatrix output = channel.apply(hermitize(rho));
  ChainRuleResult out;
  out.output_dmax = dmax_state(theory, output, channel.out_dims, opts).value;
  out.state_dmax = dmax_state(theory, rho, dims_a, opts).value;
  out.channel_dmax =
      dmax_channel(theory, kraus_to_choi(channel).renormalized(), opts).value;
  out.slack = out.output_dmax - out.state_dmax - out.channel_dmax;
  out.holds = out.slack <= tol;
  return out;
}

}  // namespace choical::conic
