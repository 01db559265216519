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

#include "choical/conic/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace choical::conic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The program is lowered to the standard pair
//
//   (P) min c'x  s.t.  A x = b,  G x + s = h,  s in K
//   (D) max -b'y - h'z  s.t.  A'y + G'z + c = 0,  z in K*
//
// where K is a product of nonnegative-orthant and real-symmetric PSD blocks.
// Zero-cone constraint blocks become rows of A; every other cone requirement
// (variable cones included) becomes rows of G with its own slack. Hermitian
// images pass through the real symmetric embedding.
//
// The pair is then solved on the homogeneous self-dual model
//
//   A'y + G'z + c tau = 0
//   A x - b tau = 0
//   G x + s - h tau = 0
//   c'x + b'y + h'z + kappa = 0
//
// with Nesterov-Todd scaling and a Mehrotra corrector. tau dominating kappa
// at convergence yields an optimal pair; kappa dominating tau yields an
// infeasibility certificate.

struct BarrierBlock {
  bool psd = false;
  int side = 0;    // psd: symmetric side; nonneg: vector length
  int offset = 0;  // position in s/z

  int dim() const { return psd ? svec_dim(side) : side; }
  int degree() const { return side; }
};

struct EqRow {
  int block = 0;  // constraint block index in the source program
  int row = 0;    // row within that block
};

struct Compiled {
  int n = 0;  // variables
  int p = 0;  // equality rows (after pruning)
  int m = 0;  // cone rows
  RealVector c;
  RealMatrix A;
  RealVector b;
  RealMatrix G;
  RealVector h;
  std::vector<BarrierBlock> blocks;
  std::vector<EqRow> eq_rows;  // provenance of kept equality rows

  // Cone-row provenance: for each constraint block with a non-Zero cone, the
  // barrier block index; -1 otherwise.
  std::vector<int> constraint_barrier;

  double data_norm = 1.0;
  double obj_sign = 1.0;  // -1 when the source program maximizes

  // Set when the equality system is already inconsistent; y_cert is the
  // Farkas certificate (A'y = 0, b'y < 0).
  bool eq_infeasible = false;
  RealVector eq_certificate;
};

struct BlockScaling {
  // NonNeg
  RealVector w;         // sqrt(s/z)
  // PSD
  RealMatrix r;         // s = r diag(lambda) r'
  RealMatrix rti;       // z = rti diag(lambda) rti',  rti = r^-T
  RealVector lambda;    // scaled point (diagonal / entrywise)
};

double safe_norm(const RealVector& v) { return v.size() == 0 ? 0.0 : v.norm(); }

double max_abs_or_zero(const RealVector& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

Compiled compile(const ConicProgram& p, const SolveOptions& opts) {
  p.validate();

  Compiled out;
  out.n = p.var_dim();
  if (out.n > opts.max_total_vars) {
    throw std::invalid_argument(
        "solve: program exceeds the variable-count cap (" +
        std::to_string(out.n) + " > " + std::to_string(opts.max_total_vars) +
        ")");
  }
  for (const VarBlock& vb : p.vars) {
    if (vb.kind == VarBlock::Kind::Herm && vb.size > opts.max_herm_side) {
      throw std::invalid_argument("solve: Hermitian block side " +
                                  std::to_string(vb.size) +
                                  " exceeds the configured cap");
    }
  }

  out.obj_sign = (p.sense == ConicProgram::Sense::Max) ? -1.0 : 1.0;
  out.c = out.obj_sign * p.cost;

  // Count rows.
  int eq_dim = 0;
  int cone_dim = 0;
  for (const ConstraintBlock& cb : p.constraints) {
    if (cb.cone == Cone::Zero) {
      eq_dim += cb.dim();
    } else if (cb.cone == Cone::NonNeg) {
      cone_dim += cb.dim();
    } else {
      cone_dim += svec_dim(2 * cb.size);
    }
  }
  for (const VarBlock& vb : p.vars) {
    if (vb.cone == Cone::NonNeg) {
      cone_dim += vb.dim();
    } else if (vb.cone == Cone::Psd) {
      cone_dim += svec_dim(2 * vb.size);
    }
  }

  RealMatrix a_full = RealMatrix::Zero(eq_dim, out.n);
  RealVector b_full = RealVector::Zero(eq_dim);
  std::vector<EqRow> eq_rows_full;
  eq_rows_full.reserve(static_cast<size_t>(eq_dim));

  out.G = RealMatrix::Zero(cone_dim, out.n);
  out.h = RealVector::Zero(cone_dim);
  out.constraint_barrier.assign(p.constraints.size(), -1);

  int eq_at = 0;
  int cone_at = 0;

  auto push_barrier = [&](bool psd, int side) {
    BarrierBlock blk;
    blk.psd = psd;
    blk.side = side;
    blk.offset = cone_at;
    out.blocks.push_back(blk);
    cone_at += blk.dim();
    return static_cast<int>(out.blocks.size()) - 1;
  };

  // Variable cones first.
  for (size_t i = 0; i < p.vars.size(); ++i) {
    const VarBlock& vb = p.vars[i];
    const int off = p.var_offset(static_cast<int>(i));
    if (vb.cone == Cone::NonNeg) {
      const int idx = push_barrier(false, vb.dim());
      out.G.block(out.blocks[static_cast<size_t>(idx)].offset, off, vb.dim(),
                  vb.dim()) = -RealMatrix::Identity(vb.dim(), vb.dim());
    } else if (vb.cone == Cone::Psd) {
      const int idx = push_barrier(true, 2 * vb.size);
      out.G.block(out.blocks[static_cast<size_t>(idx)].offset, off,
                  svec_dim(2 * vb.size), vb.dim()) =
          -herm_embedding_map(vb.size);
    }
  }

  // Constraint blocks.
  for (size_t j = 0; j < p.constraints.size(); ++j) {
    const ConstraintBlock& cb = p.constraints[j];
    if (cb.cone == Cone::Zero) {
      a_full.block(eq_at, 0, cb.dim(), out.n) = cb.map;
      b_full.segment(eq_at, cb.dim()) = cb.offset;
      for (int r = 0; r < cb.dim(); ++r) {
        eq_rows_full.push_back({static_cast<int>(j), r});
      }
      eq_at += cb.dim();
    } else if (cb.cone == Cone::NonNeg) {
      const int idx = push_barrier(false, cb.dim());
      out.constraint_barrier[j] = idx;
      out.G.block(out.blocks[static_cast<size_t>(idx)].offset, 0, cb.dim(),
                  out.n) = -cb.map;
      out.h.segment(out.blocks[static_cast<size_t>(idx)].offset, cb.dim()) =
          -cb.offset;
    } else {
      const int idx = push_barrier(true, 2 * cb.size);
      out.constraint_barrier[j] = idx;
      const RealMatrix embed = herm_embedding_map(cb.size);
      out.G.block(out.blocks[static_cast<size_t>(idx)].offset, 0,
                  svec_dim(2 * cb.size), out.n) = -(embed * cb.map);
      out.h.segment(out.blocks[static_cast<size_t>(idx)].offset,
                    svec_dim(2 * cb.size)) = -(embed * cb.offset);
    }
  }
  out.m = cone_dim;

  // Equality rows coming from different blocks routinely overlap (an
  // identity marginal implies the trace row; invariance projectors are rank
  // deficient), which would make the KKT matrix singular. Keep a maximal
  // independent row subset; dropped rows get zero multipliers, which leaves
  // A'y unchanged.
  if (eq_dim > 0) {
    Eigen::ColPivHouseholderQR<RealMatrix> least_squares(a_full);
    RealVector x_ls = least_squares.solve(b_full);
    RealVector residual = b_full - a_full * x_ls;
    const double scale = std::max(1.0, max_abs_or_zero(b_full));
    if (max_abs_or_zero(residual) > 1e-9 * scale) {
      out.eq_infeasible = true;
      out.eq_certificate = -residual;  // A'res = 0, b'(-res) = -|res|^2 < 0
    }

    Eigen::ColPivHouseholderQR<RealMatrix> qr(a_full.transpose());
    qr.setThreshold(1e-11);
    const int rank = static_cast<int>(qr.rank());
    std::vector<int> keep(qr.colsPermutation().indices().data(),
                          qr.colsPermutation().indices().data() + rank);
    std::sort(keep.begin(), keep.end());

    out.p = rank;
    out.A = RealMatrix::Zero(rank, out.n);
    out.b = RealVector::Zero(rank);
    out.eq_rows.reserve(static_cast<size_t>(rank));
    for (int r = 0; r < rank; ++r) {
      out.A.row(r) = a_full.row(keep[static_cast<size_t>(r)]);
      out.b(r) = b_full(keep[static_cast<size_t>(r)]);
      out.eq_rows.push_back(eq_rows_full[static_cast<size_t>(keep[static_cast<size_t>(r)])]);
    }
  } else {
    out.p = 0;
    out.A = RealMatrix::Zero(0, out.n);
    out.b = RealVector::Zero(0);
  }

  out.data_norm = std::max(
      {1.0, out.c.size() ? out.c.cwiseAbs().maxCoeff() : 0.0,
       out.b.size() ? out.b.cwiseAbs().maxCoeff() : 0.0,
       out.h.size() ? out.h.cwiseAbs().maxCoeff() : 0.0,
       out.A.size() ? out.A.cwiseAbs().maxCoeff() : 0.0,
       out.G.size() ? out.G.cwiseAbs().maxCoeff() : 0.0});
  return out;
}

// --- cone block helpers ---

RealVector identity_element(const std::vector<BarrierBlock>& blocks, int m) {
  RealVector e = RealVector::Zero(m);
  for (const BarrierBlock& blk : blocks) {
    if (blk.psd) {
      e.segment(blk.offset, blk.dim()) =
          sym_to_svec(RealMatrix::Identity(blk.side, blk.side));
    } else {
      e.segment(blk.offset, blk.dim()).setOnes();
    }
  }
  return e;
}

int total_degree(const std::vector<BarrierBlock>& blocks) {
  int nu = 0;
  for (const BarrierBlock& blk : blocks) nu += blk.degree();
  return nu;
}

double min_eig_block(const BarrierBlock& blk, const RealVector& v) {
  if (!blk.psd) {
    return v.segment(blk.offset, blk.dim()).minCoeff();
  }
  RealMatrix s = svec_to_sym(v.segment(blk.offset, blk.dim()), blk.side);
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(s, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

double min_eig(const std::vector<BarrierBlock>& blocks, const RealVector& v) {
  double m = kInf;
  for (const BarrierBlock& blk : blocks) {
    m = std::min(m, min_eig_block(blk, v));
  }
  return m;
}

std::vector<BlockScaling> compute_scaling(
    const std::vector<BarrierBlock>& blocks, const RealVector& s,
    const RealVector& z) {
  std::vector<BlockScaling> scalings(blocks.size());
  for (size_t i = 0; i < blocks.size(); ++i) {
    const BarrierBlock& blk = blocks[i];
    BlockScaling& sc = scalings[i];
    if (!blk.psd) {
      RealVector sb = s.segment(blk.offset, blk.dim());
      RealVector zb = z.segment(blk.offset, blk.dim());
      sc.w = (sb.array() / zb.array()).sqrt();
      sc.lambda = (sb.array() * zb.array()).sqrt();
      continue;
    }
    RealMatrix sm = svec_to_sym(s.segment(blk.offset, blk.dim()), blk.side);
    RealMatrix zm = svec_to_sym(z.segment(blk.offset, blk.dim()), blk.side);

    Eigen::SelfAdjointEigenSolver<RealMatrix> es(sm);
    Eigen::SelfAdjointEigenSolver<RealMatrix> ez(zm);
    if (es.info() != Eigen::Success || ez.info() != Eigen::Success) {
      throw SolverError("scaling: eigendecomposition failed");
    }
    const double floor_s = std::max(1e-14, 1e-14 * es.eigenvalues().maxCoeff());
    const double floor_z = std::max(1e-14, 1e-14 * ez.eigenvalues().maxCoeff());
    RealVector ds = es.eigenvalues().cwiseMax(floor_s).cwiseSqrt();
    RealVector dz = ez.eigenvalues().cwiseMax(floor_z).cwiseSqrt();
    RealMatrix ls = es.eigenvectors() * ds.asDiagonal();
    RealMatrix lz = ez.eigenvectors() * dz.asDiagonal();

    Eigen::JacobiSVD<RealMatrix> svd(lz.transpose() * ls,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
    RealVector sigma = svd.singularValues().cwiseMax(1e-150);
    RealVector inv_sqrt = sigma.cwiseSqrt().cwiseInverse();
    sc.r = ls * svd.matrixV() * inv_sqrt.asDiagonal();
    sc.rti = lz * svd.matrixU() * inv_sqrt.asDiagonal();
    sc.lambda = sigma;
  }
  return scalings;
}

// W z-like scaling: u -> svec(r' U r); s-like inverse-transpose: rti' U rti.
RealVector scale_z_like(const BarrierBlock& blk, const BlockScaling& sc,
                        const RealVector& u) {
  if (!blk.psd) return sc.w.asDiagonal() * u;
  RealMatrix um = svec_to_sym(u, blk.side);
  return sym_to_svec(sc.r.transpose() * um * sc.r);
}

RealVector scale_s_like(const BarrierBlock& blk, const BlockScaling& sc,
                        const RealVector& u) {
  if (!blk.psd) return u.array() / sc.w.array();
  RealMatrix um = svec_to_sym(u, blk.side);
  return sym_to_svec(sc.rti.transpose() * um * sc.rti);
}

// Adjoint of the z-like scaling: u -> svec(r U r').
RealVector scale_adjoint(const BarrierBlock& blk, const BlockScaling& sc,
                         const RealVector& u) {
  if (!blk.psd) return sc.w.asDiagonal() * u;
  RealMatrix um = svec_to_sym(u, blk.side);
  return sym_to_svec(sc.r * um * sc.r.transpose());
}

RealMatrix wtw_matrix(const BarrierBlock& blk, const BlockScaling& sc) {
  if (!blk.psd) {
    return RealVector(sc.w.array().square()).asDiagonal();
  }
  const RealMatrix q = sc.r * sc.r.transpose();
  const int d = blk.dim();
  RealMatrix wtw(d, d);
  RealVector basis = RealVector::Zero(d);
  for (int k = 0; k < d; ++k) {
    basis(k) = 1.0;
    wtw.col(k) = sym_to_svec(q * svec_to_sym(basis, blk.side) * q);
    basis(k) = 0.0;
  }
  return wtw;
}

// Jordan product u o v in scaled coordinates (lambda is diagonal there).
RealVector jordan_product(const BarrierBlock& blk, const RealVector& u,
                          const RealVector& v) {
  if (!blk.psd) return u.cwiseProduct(v);
  RealMatrix um = svec_to_sym(u, blk.side);
  RealMatrix vm = svec_to_sym(v, blk.side);
  return sym_to_svec(0.5 * (um * vm + vm * um));
}

// Solve lambda o x = rhs for x, with lambda the diagonal scaled point.
RealVector jordan_div_lambda(const BarrierBlock& blk, const RealVector& lambda,
                             const RealVector& rhs) {
  if (!blk.psd) return rhs.array() / lambda.array();
  RealMatrix rm = svec_to_sym(rhs, blk.side);
  RealMatrix x(blk.side, blk.side);
  for (int i = 0; i < blk.side; ++i) {
    for (int j = 0; j < blk.side; ++j) {
      x(i, j) = 2.0 * rm(i, j) / (lambda(i) + lambda(j));
    }
  }
  return sym_to_svec(x);
}

// Largest step alpha with v + alpha dv staying in the cone.
double max_step_block(const BarrierBlock& blk, const RealVector& v,
                      const RealVector& dv) {
  if (!blk.psd) {
    double alpha = kInf;
    for (int i = 0; i < blk.dim(); ++i) {
      if (dv(i) < 0) alpha = std::min(alpha, -v(i) / dv(i));
    }
    return alpha;
  }
  RealMatrix vm = svec_to_sym(v, blk.side);
  RealMatrix dm = svec_to_sym(dv, blk.side);
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(vm);
  RealVector d = eig.eigenvalues().cwiseMax(1e-150);
  RealMatrix inv_sqrt = eig.eigenvectors() * d.cwiseSqrt().cwiseInverse().asDiagonal() *
                        eig.eigenvectors().transpose();
  Eigen::SelfAdjointEigenSolver<RealMatrix> scaled(inv_sqrt * dm * inv_sqrt,
                                                   Eigen::EigenvaluesOnly);
  const double lam_min = scaled.eigenvalues().minCoeff();
  return lam_min >= 0 ? kInf : -1.0 / lam_min;
}

struct KktSolver {
  const Compiled& prob;
  Eigen::PartialPivLU<RealMatrix> lu;
  RealMatrix kkt;

  KktSolver(const Compiled& c, const std::vector<BarrierBlock>& blocks,
            const std::vector<BlockScaling>& scalings)
      : prob(c) {
    const int n = c.n, p = c.p, m = c.m;
    kkt = RealMatrix::Zero(n + p + m, n + p + m);
    kkt.block(0, n, n, p) = c.A.transpose();
    kkt.block(0, n + p, n, m) = c.G.transpose();
    kkt.block(n, 0, p, n) = c.A;
    kkt.block(n + p, 0, m, n) = c.G;
    for (size_t i = 0; i < blocks.size(); ++i) {
      const BarrierBlock& blk = blocks[i];
      kkt.block(n + p + blk.offset, n + p + blk.offset, blk.dim(), blk.dim()) =
          -wtw_matrix(blk, scalings[i]);
    }
    lu.compute(kkt);
  }

  // Solves K (dx, dy, dz) = (r1, r2, r3) with one refinement pass.
  void solve(const RealVector& r1, const RealVector& r2, const RealVector& r3,
             RealVector& dx, RealVector& dy, RealVector& dz) const {
    const int n = prob.n, p = prob.p, m = prob.m;
    RealVector rhs(n + p + m);
    rhs.segment(0, n) = r1;
    rhs.segment(n, p) = r2;
    rhs.segment(n + p, m) = r3;

    RealVector sol = lu.solve(rhs);
    RealVector resid = rhs - kkt * sol;
    sol += lu.solve(resid);

    resid = rhs - kkt * sol;
    // Scale the residual by the size of the terms that were summed: near
    // convergence the scaling blocks are huge and roundoff grows with them.
    const double term_scale = std::max(
        {1.0, max_abs_or_zero(rhs),
         (kkt.cwiseAbs() * sol.cwiseAbs()).maxCoeff()});
    if (!sol.allFinite() || max_abs_or_zero(resid) > 1e-6 * term_scale) {
      throw SolverError("KKT system is numerically singular");
    }

    dx = sol.segment(0, n);
    dy = sol.segment(n, p);
    dz = sol.segment(n + p, m);
  }
};

struct Certificates {
  double pinf_res = kInf;  // quality of (y, z) as primal-infeasibility proof
  double dinf_res = kInf;  // quality of (x, s) as dual-infeasibility proof
  bool pinf_sign = false;  // b'y + h'z < 0
  bool dinf_sign = false;  // c'x < 0
};

}  // namespace

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::Unbounded:
      return "unbounded";
    case SolveStatus::MaxIterations:
      return "max-iterations";
  }
  return "unknown";
}

ComplexMatrix Solution::primal_herm(const ConicProgram& p, int block) const {
  const VarBlock& vb = p.vars[static_cast<size_t>(block)];
  if (vb.kind != VarBlock::Kind::Herm) {
    throw std::invalid_argument("primal_herm: block is not Hermitian");
  }
  return coords_to_herm(primal_blocks[static_cast<size_t>(block)], vb.size);
}

ComplexMatrix Solution::dual_herm(const ConicProgram& p, int block) const {
  const ConstraintBlock& cb = p.constraints[static_cast<size_t>(block)];
  if (cb.kind != ConstraintBlock::Kind::Herm) {
    throw std::invalid_argument("dual_herm: block is not Hermitian");
  }
  return coords_to_herm(dual_blocks[static_cast<size_t>(block)], cb.size);
}

namespace {

// Multiplier of an embedded Hermitian block, pulled back to Hermitian
// coordinates: tr[Z_emb E(X)] == <pullback(Z_emb), X>_HS.
RealVector pull_back_herm_dual(const RealVector& z_svec, int herm_side) {
  RealMatrix z = svec_to_sym(z_svec, 2 * herm_side);
  const int s = herm_side;
  RealMatrix re = z.block(0, 0, s, s) + z.block(s, s, s, s);
  RealMatrix im = z.block(s, 0, s, s) - z.block(0, s, s, s);
  ComplexMatrix pulled =
      (re.cast<Complex>() + Complex(0, 1) * im.cast<Complex>());
  return herm_to_coords(hermitize(pulled));
}

void extract_blocks(const ConicProgram& p, const Compiled& c,
                    const RealVector& x, const RealVector& y,
                    const RealVector& z, Solution& sol) {
  sol.primal_blocks.clear();
  for (size_t i = 0; i < p.vars.size(); ++i) {
    const int off = p.var_offset(static_cast<int>(i));
    sol.primal_blocks.push_back(
        x.segment(off, p.vars[i].dim()));
  }

  sol.dual_blocks.clear();
  for (size_t j = 0; j < p.constraints.size(); ++j) {
    const ConstraintBlock& cb = p.constraints[j];
    if (cb.cone == Cone::Zero) {
      RealVector mult = RealVector::Zero(cb.dim());
      for (int r = 0; r < c.p; ++r) {
        if (c.eq_rows[static_cast<size_t>(r)].block == static_cast<int>(j)) {
          // Sign: compiled equalities enter the Lagrangian as +y'(Ax - b),
          // the program convention pairs the multiplier with H2 - N(x).
          mult(c.eq_rows[static_cast<size_t>(r)].row) = -y(r);
        }
      }
      sol.dual_blocks.push_back(std::move(mult));
      continue;
    }
    const int barrier = c.constraint_barrier[j];
    const BarrierBlock& blk = c.blocks[static_cast<size_t>(barrier)];
    RealVector zb = z.segment(blk.offset, blk.dim());
    if (cb.cone == Cone::NonNeg) {
      sol.dual_blocks.push_back(std::move(zb));
    } else {
      sol.dual_blocks.push_back(pull_back_herm_dual(zb, cb.size));
    }
  }
}

}  // namespace

Solution solve(const ConicProgram& p, const SolveOptions& opts) {
  Compiled c = compile(p, opts);
  Solution sol;

  if (c.eq_infeasible) {
    sol.status = SolveStatus::Infeasible;
    sol.primal_value = (c.obj_sign > 0) ? kInf : -kInf;
    sol.dual_value = sol.primal_value;
    sol.iterations = 0;
    return sol;
  }

  const int n = c.n, pe = c.p, m = c.m;
  if (m == 0) {
    throw SolverError("solve: program has no cone constraints");
  }

  const RealVector e = identity_element(c.blocks, m);
  const int nu = total_degree(c.blocks) + 1;

  RealVector x = RealVector::Zero(n);
  RealVector y = RealVector::Zero(pe);
  RealVector s = e, z = e;
  double tau = 1.0, kappa = 1.0;

  // Initial point from two least-squares-style KKT solves with W = I
  // (interior shifts applied if the candidates leave the cone).
  {
    std::vector<BlockScaling> unit(c.blocks.size());
    for (size_t i = 0; i < c.blocks.size(); ++i) {
      const BarrierBlock& blk = c.blocks[i];
      if (blk.psd) {
        unit[i].r = RealMatrix::Identity(blk.side, blk.side);
        unit[i].rti = unit[i].r;
        unit[i].lambda = RealVector::Ones(blk.side);
      } else {
        unit[i].w = RealVector::Ones(blk.dim());
        unit[i].lambda = unit[i].w;
      }
    }
    KktSolver kkt(c, c.blocks, unit);

    RealVector dx, dy, dz;
    kkt.solve(RealVector::Zero(n), c.b, c.h, dx, dy, dz);
    x = dx;
    RealVector s_hat = -dz;
    const double ms = min_eig(c.blocks, s_hat);
    s = (ms > 0) ? s_hat : RealVector(s_hat + (1.0 - ms) * e);

    kkt.solve(-c.c, RealVector::Zero(pe), RealVector::Zero(m), dx, dy, dz);
    y = dy;
    RealVector z_hat = dz;
    const double mz = min_eig(c.blocks, z_hat);
    z = (mz > 0) ? z_hat : RealVector(z_hat + (1.0 - mz) * e);
  }

  auto certificates = [&](const RealVector& xx, const RealVector& yy,
                          const RealVector& zz, const RealVector& ss) {
    Certificates cert;
    const double denom_p = -(c.b.dot(yy) + c.h.dot(zz));
    if (denom_p > 0) {
      cert.pinf_sign = true;
      RealVector res = c.A.transpose() * yy + c.G.transpose() * zz;
      cert.pinf_res = max_abs_or_zero(res) / denom_p / c.data_norm;
    }
    const double denom_d = -c.c.dot(xx);
    if (denom_d > 0) {
      cert.dinf_sign = true;
      const double r1 = max_abs_or_zero(c.A * xx);
      const double r2 = max_abs_or_zero(c.G * xx + ss);
      cert.dinf_res = std::max(r1, r2) / denom_d / c.data_norm;
    }
    return cert;
  };

  auto finish_optimal = [&](int iters) {
    RealVector xs = x / tau, ys = y / tau, zs = z / tau, ss = s / tau;
    sol.status = SolveStatus::Optimal;
    sol.iterations = iters;
    const double pcost = c.c.dot(xs);
    const double dcost = -(c.b.dot(ys) + c.h.dot(zs));
    sol.primal_value = c.obj_sign * pcost;
    sol.dual_value = c.obj_sign * dcost;
    sol.gap = ss.dot(zs);
    sol.primal_residual =
        std::max(safe_norm(c.A * xs - c.b) / std::max(1.0, safe_norm(c.b)),
                 safe_norm(c.G * xs + ss - c.h) / std::max(1.0, safe_norm(c.h)));
    sol.dual_residual =
        safe_norm(c.A.transpose() * ys + c.G.transpose() * zs + c.c) /
        std::max(1.0, safe_norm(c.c));
    extract_blocks(p, c, xs, ys, zs, sol);
  };

  auto finish_infeasible = [&](bool primal_inf, int iters) {
    sol.iterations = iters;
    if (primal_inf) {
      sol.status = SolveStatus::Infeasible;
      sol.primal_value = (c.obj_sign > 0) ? kInf : -kInf;
      sol.dual_value = sol.primal_value;
      const double denom = -(c.b.dot(y) + c.h.dot(z));
      extract_blocks(p, c, RealVector::Zero(n), y / denom, z / denom, sol);
      sol.primal_blocks.clear();
    } else {
      sol.status = SolveStatus::Unbounded;
      sol.primal_value = (c.obj_sign > 0) ? -kInf : kInf;
      sol.dual_value = sol.primal_value;
      const double denom = -c.c.dot(x);
      extract_blocks(p, c, x / denom, RealVector::Zero(pe),
                     RealVector::Zero(m), sol);
      sol.dual_blocks.clear();
    }
  };

  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    // Residuals of the homogeneous model.
    RealVector rx = c.A.transpose() * y + c.G.transpose() * z + c.c * tau;
    RealVector ry = c.A * x - c.b * tau;
    RealVector rz = c.G * x + s - c.h * tau;
    const double rtau = kappa + c.c.dot(x) + c.b.dot(y) + c.h.dot(z);

    // Convergence of the scaled iterate.
    const double pcost = c.c.dot(x) / tau;
    const double gap = s.dot(z) / (tau * tau);
    const double pres = std::max(safe_norm(ry) / std::max(1.0, safe_norm(c.b)),
                                 safe_norm(rz) / std::max(1.0, safe_norm(c.h))) /
                        tau;
    const double dres = safe_norm(rx) / std::max(1.0, safe_norm(c.c)) / tau;
    if (pres <= opts.feas_tol && dres <= opts.feas_tol &&
        gap <= opts.gap_tol * std::max(1.0, std::abs(pcost))) {
      finish_optimal(iter);
      return sol;
    }

    Certificates cert = certificates(x, y, z, s);
    const bool ratio_infeasible = tau <= opts.infeas_ratio * kappa;
    if (cert.pinf_sign && cert.pinf_res <= opts.feas_tol &&
        (ratio_infeasible || cert.pinf_res <= 1e-2 * opts.feas_tol)) {
      finish_infeasible(true, iter);
      return sol;
    }
    if (cert.dinf_sign && cert.dinf_res <= opts.feas_tol &&
        (ratio_infeasible || cert.dinf_res <= 1e-2 * opts.feas_tol)) {
      finish_infeasible(false, iter);
      return sol;
    }
    if (ratio_infeasible) {
      // The embedding has collapsed; classify by the better certificate.
      if (cert.pinf_sign || cert.dinf_sign) {
        finish_infeasible(cert.pinf_res <= cert.dinf_res, iter);
        return sol;
      }
    }

    const double mu = (s.dot(z) + tau * kappa) / static_cast<double>(nu);

    std::vector<BlockScaling> scalings = compute_scaling(c.blocks, s, z);
    KktSolver kkt(c, c.blocks, scalings);

    RealVector x1, y1, z1;
    kkt.solve(-c.c, c.b, c.h, x1, y1, z1);

    RealVector lambda_full = RealVector::Zero(m);
    for (size_t i = 0; i < c.blocks.size(); ++i) {
      const BarrierBlock& blk = c.blocks[i];
      if (blk.psd) {
        lambda_full.segment(blk.offset, blk.dim()) = sym_to_svec(
            RealMatrix(scalings[i].lambda.asDiagonal()));
      } else {
        lambda_full.segment(blk.offset, blk.dim()) = scalings[i].lambda;
      }
    }

    // One Newton solve for a given centering gamma and correction terms;
    // returns the direction.
    auto newton = [&](double gamma, const RealVector* corr,  // scaled space
                      double corr_tk, RealVector& dx, RealVector& dy,
                      RealVector& dz, RealVector& ds, double& dtau,
                      double& dkappa) {
      RealVector v = RealVector::Zero(m);
      for (size_t i = 0; i < c.blocks.size(); ++i) {
        const BarrierBlock& blk = c.blocks[i];
        RealVector lam = lambda_full.segment(blk.offset, blk.dim());
        RealVector rhs_cc =
            gamma * mu * e.segment(blk.offset, blk.dim()) -
            jordan_product(blk, lam, lam);
        if (corr != nullptr) {
          rhs_cc -= corr->segment(blk.offset, blk.dim());
        }
        v.segment(blk.offset, blk.dim()) =
            jordan_div_lambda(blk, scalings[i].lambda, rhs_cc);
      }

      RealVector wtv = RealVector::Zero(m);
      for (size_t i = 0; i < c.blocks.size(); ++i) {
        const BarrierBlock& blk = c.blocks[i];
        wtv.segment(blk.offset, blk.dim()) = scale_adjoint(
            blk, scalings[i], v.segment(blk.offset, blk.dim()));
      }

      const double one_minus = 1.0 - gamma;
      RealVector x2, y2, z2;
      kkt.solve(-one_minus * rx, -one_minus * ry,
                RealVector(-one_minus * rz - wtv), x2, y2, z2);

      const double tk_rhs = gamma * mu - tau * kappa - corr_tk;
      const double denom =
          c.c.dot(x1) + c.b.dot(y1) + c.h.dot(z1) - kappa / tau;
      const double numer = -one_minus * rtau - c.c.dot(x2) - c.b.dot(y2) -
                           c.h.dot(z2) - tk_rhs / tau;
      dtau = numer / denom;
      dkappa = (tk_rhs - kappa * dtau) / tau;

      dx = x2 + dtau * x1;
      dy = y2 + dtau * y1;
      dz = z2 + dtau * z1;

      ds = RealVector::Zero(m);
      for (size_t i = 0; i < c.blocks.size(); ++i) {
        const BarrierBlock& blk = c.blocks[i];
        RealVector wdz = scale_z_like(blk, scalings[i],
                                      dz.segment(blk.offset, blk.dim()));
        RealVector scaled = v.segment(blk.offset, blk.dim()) - wdz;
        ds.segment(blk.offset, blk.dim()) =
            scale_adjoint(blk, scalings[i], scaled);
      }
    };

    auto max_step = [&](const RealVector& ds, const RealVector& dz,
                        double dtau, double dkappa) {
      double alpha = kInf;
      for (const BarrierBlock& blk : c.blocks) {
        alpha = std::min(alpha,
                         max_step_block(blk, s.segment(blk.offset, blk.dim()),
                                        ds.segment(blk.offset, blk.dim())));
        alpha = std::min(alpha,
                         max_step_block(blk, z.segment(blk.offset, blk.dim()),
                                        dz.segment(blk.offset, blk.dim())));
      }
      if (dtau < 0) alpha = std::min(alpha, -tau / dtau);
      if (dkappa < 0) alpha = std::min(alpha, -kappa / dkappa);
      return alpha;
    };

    // Affine (predictor) direction.
    RealVector dxa, dya, dza, dsa;
    double dtaua, dkappaa;
    newton(0.0, nullptr, 0.0, dxa, dya, dza, dsa, dtaua, dkappaa);
    const double alpha_aff = std::min(1.0, max_step(dsa, dza, dtaua, dkappaa));
    const double sigma_base = 1.0 - alpha_aff;
    const double sigma =
        std::clamp(sigma_base * sigma_base * sigma_base, 0.0, 1.0);

    // Mehrotra correction in scaled space.
    RealVector corr = RealVector::Zero(m);
    for (size_t i = 0; i < c.blocks.size(); ++i) {
      const BarrierBlock& blk = c.blocks[i];
      RealVector ds_scaled = scale_s_like(blk, scalings[i],
                                          dsa.segment(blk.offset, blk.dim()));
      RealVector dz_scaled = scale_z_like(blk, scalings[i],
                                          dza.segment(blk.offset, blk.dim()));
      corr.segment(blk.offset, blk.dim()) =
          jordan_product(blk, ds_scaled, dz_scaled);
    }
    const double corr_tk = dtaua * dkappaa;

    RealVector dx, dy, dz, ds;
    double dtau, dkappa;
    newton(sigma, &corr, corr_tk, dx, dy, dz, ds, dtau, dkappa);

    const double alpha = std::min(1.0, 0.99 * max_step(ds, dz, dtau, dkappa));
    if (!std::isfinite(alpha) || alpha <= 1e-14) {
      break;  // no progress possible; classify below
    }

    x += alpha * dx;
    y += alpha * dy;
    z += alpha * dz;
    s += alpha * ds;
    tau += alpha * dtau;
    kappa += alpha * dkappa;
  }

  // Iteration budget exhausted or stalled: report the most defensible verdict.
  {
    Certificates cert = certificates(x, y, z, s);
    if (cert.pinf_sign && cert.pinf_res <= opts.feas_tol) {
      finish_infeasible(true, iter);
      return sol;
    }
    if (cert.dinf_sign && cert.dinf_res <= opts.feas_tol) {
      finish_infeasible(false, iter);
      return sol;
    }
    RealVector xs = x / tau, ys = y / tau, zs = z / tau, ss = s / tau;
    sol.status = SolveStatus::MaxIterations;
    sol.iterations = iter;
    sol.primal_value = c.obj_sign * c.c.dot(xs);
    sol.dual_value = c.obj_sign * -(c.b.dot(ys) + c.h.dot(zs));
    sol.gap = ss.dot(zs);
    sol.primal_residual =
        std::max(safe_norm(c.A * xs - c.b) / std::max(1.0, safe_norm(c.b)),
                 safe_norm(c.G * xs + ss - c.h) / std::max(1.0, safe_norm(c.h)));
    sol.dual_residual =
        safe_norm(c.A.transpose() * ys + c.G.transpose() * zs + c.c) /
        std::max(1.0, safe_norm(c.c));
    extract_blocks(p, c, xs, ys, zs, sol);
  }
  return sol;
}

}  // namespace choical::conic
