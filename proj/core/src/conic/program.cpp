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

#include "choical/conic/program.hpp"

#include <cmath>

namespace choical::conic {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

Cone dual_cone(Cone c) {
  switch (c) {
    case Cone::Free:
      return Cone::Zero;
    case Cone::Zero:
      return Cone::Free;
    case Cone::NonNeg:
      return Cone::NonNeg;
    case Cone::Psd:
      return Cone::Psd;
  }
  throw std::logic_error("dual_cone: unhandled cone");
}

int herm_coord_dim(int side) { return side * side; }

RealVector herm_to_coords(const ComplexMatrix& h) {
  const int s = static_cast<int>(h.rows());
  RealVector v(herm_coord_dim(s));
  int idx = 0;
  for (int j = 0; j < s; ++j) v(idx++) = h(j, j).real();
  for (int j = 0; j < s; ++j) {
    for (int k = j + 1; k < s; ++k) {
      v(idx++) = kSqrt2 * h(j, k).real();
      v(idx++) = kSqrt2 * h(j, k).imag();
    }
  }
  return v;
}

ComplexMatrix coords_to_herm(const RealVector& v, int side) {
  ComplexMatrix h = ComplexMatrix::Zero(side, side);
  int idx = 0;
  for (int j = 0; j < side; ++j) h(j, j) = Complex(v(idx++), 0.0);
  for (int j = 0; j < side; ++j) {
    for (int k = j + 1; k < side; ++k) {
      const double re = v(idx++) / kSqrt2;
      const double im = v(idx++) / kSqrt2;
      h(j, k) = Complex(re, im);
      h(k, j) = Complex(re, -im);
    }
  }
  return h;
}

int svec_dim(int side) { return side * (side + 1) / 2; }

RealVector sym_to_svec(const RealMatrix& s) {
  const int n = static_cast<int>(s.rows());
  RealVector v(svec_dim(n));
  int idx = 0;
  for (int j = 0; j < n; ++j) v(idx++) = s(j, j);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      v(idx++) = kSqrt2 * s(j, k);
    }
  }
  return v;
}

RealMatrix svec_to_sym(const RealVector& v, int side) {
  RealMatrix s = RealMatrix::Zero(side, side);
  int idx = 0;
  for (int j = 0; j < side; ++j) s(j, j) = v(idx++);
  for (int j = 0; j < side; ++j) {
    for (int k = j + 1; k < side; ++k) {
      const double value = v(idx++) / kSqrt2;
      s(j, k) = value;
      s(k, j) = value;
    }
  }
  return s;
}

RealMatrix herm_embedding(const ComplexMatrix& h) {
  const int s = static_cast<int>(h.rows());
  RealMatrix e(2 * s, 2 * s);
  e.block(0, 0, s, s) = h.real();
  e.block(s, s, s, s) = h.real();
  e.block(0, s, s, s) = -h.imag();
  e.block(s, 0, s, s) = h.imag();
  return e;
}

RealMatrix herm_embedding_map(int side) {
  const int in_dim = herm_coord_dim(side);
  const int out_dim = svec_dim(2 * side);
  RealMatrix map(out_dim, in_dim);
  RealVector basis = RealVector::Zero(in_dim);
  for (int k = 0; k < in_dim; ++k) {
    basis(k) = 1.0;
    map.col(k) = sym_to_svec(herm_embedding(coords_to_herm(basis, side)));
    basis(k) = 0.0;
  }
  return map;
}

int VarBlock::dim() const {
  switch (kind) {
    case Kind::Scalar:
      return 1;
    case Kind::Vector:
      return size;
    case Kind::Herm:
      return herm_coord_dim(size);
  }
  throw std::logic_error("VarBlock::dim: unhandled kind");
}

int ConstraintBlock::dim() const {
  switch (kind) {
    case Kind::Vector:
      return size;
    case Kind::Herm:
      return herm_coord_dim(size);
  }
  throw std::logic_error("ConstraintBlock::dim: unhandled kind");
}

int ConicProgram::var_dim() const {
  int n = 0;
  for (const VarBlock& b : vars) n += b.dim();
  return n;
}

int ConicProgram::var_offset(int block) const {
  int n = 0;
  for (int i = 0; i < block; ++i) n += vars[static_cast<size_t>(i)].dim();
  return n;
}

int ConicProgram::constraint_dim() const {
  int n = 0;
  for (const ConstraintBlock& b : constraints) n += b.dim();
  return n;
}

int ConicProgram::constraint_offset(int block) const {
  int n = 0;
  for (int i = 0; i < block; ++i) {
    n += constraints[static_cast<size_t>(i)].dim();
  }
  return n;
}

void ConicProgram::validate() const {
  const int n = var_dim();
  if (cost.size() != n) {
    throw std::invalid_argument("ConicProgram: cost length mismatch");
  }
  for (const VarBlock& b : vars) {
    const bool ok = (b.cone == Cone::Free) ||
                    (b.cone == Cone::NonNeg && b.kind != VarBlock::Kind::Herm) ||
                    (b.cone == Cone::Psd && b.kind == VarBlock::Kind::Herm);
    if (!ok) {
      throw std::invalid_argument("ConicProgram: invalid var block cone for " +
                                  b.label);
    }
  }
  for (const ConstraintBlock& b : constraints) {
    if (b.map.rows() != b.dim() || b.map.cols() != n ||
        b.offset.size() != b.dim()) {
      throw std::invalid_argument(
          "ConicProgram: constraint block shape mismatch for " + b.label);
    }
    const bool ok =
        (b.cone == Cone::Zero) ||
        (b.cone == Cone::NonNeg && b.kind == ConstraintBlock::Kind::Vector) ||
        (b.cone == Cone::Psd && b.kind == ConstraintBlock::Kind::Herm);
    if (!ok) {
      throw std::invalid_argument(
          "ConicProgram: invalid constraint cone for " + b.label);
    }
  }
}

ProgramBuilder::ProgramBuilder(std::string name) {
  program_.name = std::move(name);
}

int ProgramBuilder::add_scalar(const std::string& label, Cone cone) {
  program_.vars.push_back({VarBlock::Kind::Scalar, 1, cone, label});
  return static_cast<int>(program_.vars.size()) - 1;
}

int ProgramBuilder::add_vector(const std::string& label, int length,
                               Cone cone) {
  program_.vars.push_back({VarBlock::Kind::Vector, length, cone, label});
  return static_cast<int>(program_.vars.size()) - 1;
}

int ProgramBuilder::add_herm(const std::string& label, int side, Cone cone) {
  program_.vars.push_back({VarBlock::Kind::Herm, side, cone, label});
  return static_cast<int>(program_.vars.size()) - 1;
}

int ProgramBuilder::var_block_dim(int block) const {
  return program_.vars[static_cast<size_t>(block)].dim();
}

void ProgramBuilder::add_constraint(const std::string& label,
                                    ConstraintBlock::Kind kind, int size,
                                    Cone cone, RealMatrix map,
                                    RealVector offset) {
  ConstraintBlock b;
  b.kind = kind;
  b.size = size;
  b.cone = cone;
  b.label = label;
  b.map = std::move(map);
  b.offset = std::move(offset);
  program_.constraints.push_back(std::move(b));
}

void ProgramBuilder::set_cost(RealVector cost) { program_.cost = std::move(cost); }

void ProgramBuilder::set_sense(ConicProgram::Sense sense) {
  program_.sense = sense;
}

ConicProgram ProgramBuilder::take() {
  program_.validate();
  return std::move(program_);
}

ConicProgram dualize(const ConicProgram& p) {
  if (p.sense == ConicProgram::Sense::Max) {
    // max <c,x> == -min <-c,x>; the dual of the negated program carries the
    // value, so dualize that and flip its sense back.
    ConicProgram negated = p;
    negated.sense = ConicProgram::Sense::Min;
    negated.cost = -p.cost;
    ConicProgram d = dualize(negated);
    d.sense = ConicProgram::Sense::Min;
    d.cost = -d.cost;
    d.name = p.name + ".dual";
    return d;
  }
  p.validate();

  ConicProgram d;
  d.name = p.name + ".dual";
  d.sense = ConicProgram::Sense::Max;

  // Dual variables: one block per primal constraint block, in the dual cone.
  int dual_dim = 0;
  for (const ConstraintBlock& cb : p.constraints) {
    VarBlock vb;
    vb.kind = (cb.kind == ConstraintBlock::Kind::Herm) ? VarBlock::Kind::Herm
                                                       : VarBlock::Kind::Vector;
    vb.size = cb.size;
    vb.cone = dual_cone(cb.cone);
    vb.label = cb.label + "*";
    d.vars.push_back(vb);
    dual_dim += vb.dim();
  }

  // Dual cost: <H2, Y>.
  RealVector dual_cost(dual_dim);
  {
    int off = 0;
    for (const ConstraintBlock& cb : p.constraints) {
      dual_cost.segment(off, cb.dim()) = cb.offset;
      off += cb.dim();
    }
  }
  d.cost = std::move(dual_cost);

  // Dual constraints: per primal variable block, H1 - N^dag(Y) in K1*.
  // Expressed as map(Y) - offset in cone with map = -N^dag rows and
  // offset = -H1 restricted to the block.
  for (size_t i = 0; i < p.vars.size(); ++i) {
    const VarBlock& vb = p.vars[i];
    const int off = p.var_offset(static_cast<int>(i));
    const int bdim = vb.dim();

    RealMatrix map = RealMatrix::Zero(bdim, dual_dim);
    int yoff = 0;
    for (const ConstraintBlock& cb : p.constraints) {
      map.block(0, yoff, bdim, cb.dim()) =
          -cb.map.block(0, off, cb.dim(), bdim).transpose();
      yoff += cb.dim();
    }

    ConstraintBlock out;
    out.kind = (vb.kind == VarBlock::Kind::Herm) ? ConstraintBlock::Kind::Herm
                                                 : ConstraintBlock::Kind::Vector;
    out.size = (vb.kind == VarBlock::Kind::Scalar) ? 1 : vb.size;
    out.cone = dual_cone(vb.cone);
    out.label = vb.label + "*";
    out.map = std::move(map);
    out.offset = -p.cost.segment(off, bdim);
    d.constraints.push_back(std::move(out));
  }

  d.validate();
  return d;
}

}  // namespace choical::conic
