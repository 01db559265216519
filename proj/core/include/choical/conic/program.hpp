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
#include <vector>

#include "choical/linalg.hpp"

namespace choical::conic {

// Conic linear program in the primal shape
//
//   minimize   <H1, X>
//   subject to N(X) - H2 in K2,   X in K1
//
// where K1 is a product of per-variable-block cones, K2 a product of
// per-constraint-block cones, and N a stacked linear map. All data is stored
// over real coordinates; Hermitian blocks use an orthonormal basis so that
// Hilbert-Schmidt inner products are plain dot products and adjoints are
// matrix transposes.

/// Elementary cones. Free/Zero are dual to each other; NonNeg and Psd are
/// self-dual. Psd means complex Hermitian PSD (the solver works on its real
/// symmetric embedding).
enum class Cone { Free, Zero, NonNeg, Psd };

Cone dual_cone(Cone c);

/// Real coordinates of a Hermitian matrix over the orthonormal basis
/// { E_jj } + { (E_jk + E_kj)/sqrt2 } + { i(E_jk - E_kj)/sqrt2 } (j < k):
/// first the s diagonal entries, then (sqrt2*Re, sqrt2*Im) per upper pair in
/// row-major order. herm_coord_dim(s) == s*s.
int herm_coord_dim(int side);
RealVector herm_to_coords(const ComplexMatrix& h);
ComplexMatrix coords_to_herm(const RealVector& v, int side);

/// svec coordinates of a real symmetric matrix (off-diagonals scaled by
/// sqrt2), dimension side*(side+1)/2.
int svec_dim(int side);
RealVector sym_to_svec(const RealMatrix& s);
RealMatrix svec_to_sym(const RealVector& v, int side);

/// Real symmetric embedding of a Hermitian matrix: [[Re, -Im], [Im, Re]].
/// PSD of the embedding is equivalent to PSD of the Hermitian block, with
/// every eigenvalue doubled in multiplicity.
RealMatrix herm_embedding(const ComplexMatrix& h);

/// Matrix of the embedding as a linear map herm coords -> svec coords.
RealMatrix herm_embedding_map(int side);

struct VarBlock {
  enum class Kind { Scalar, Vector, Herm };

  Kind kind = Kind::Scalar;
  int size = 1;       // Vector: length; Herm: side; Scalar: ignored
  Cone cone = Cone::Free;  // Free | NonNeg (Vector) | Psd (Herm)
  std::string label;

  int dim() const;  // real coordinate count
};

struct ConstraintBlock {
  enum class Kind { Vector, Herm };

  Kind kind = Kind::Vector;
  int size = 1;
  Cone cone = Cone::Zero;  // Zero | NonNeg | Psd
  std::string label;
  RealMatrix map;     // dim() x (program var_dim): row block of N
  RealVector offset;  // H2 component in block coordinates

  int dim() const;
};

struct ConicProgram {
  enum class Sense { Min, Max };

  Sense sense = Sense::Min;
  std::vector<VarBlock> vars;
  std::vector<ConstraintBlock> constraints;
  RealVector cost;  // H1 over variable coordinates
  std::string name;

  int var_dim() const;
  int var_offset(int block) const;
  int constraint_dim() const;
  int constraint_offset(int block) const;

  /// Basic shape validation (map widths, offset lengths, cone/kind pairing).
  void validate() const;
};

/// Builder utility: incrementally assemble a program over named blocks.
class ProgramBuilder {
 public:
  explicit ProgramBuilder(std::string name);

  int add_scalar(const std::string& label, Cone cone = Cone::Free);
  int add_vector(const std::string& label, int length,
                 Cone cone = Cone::Free);
  int add_herm(const std::string& label, int side, Cone cone = Cone::Free);

  int var_dim() const { return program_.var_dim(); }
  int var_offset(int block) const { return program_.var_offset(block); }
  int var_block_dim(int block) const;

  /// Dense row block over all variable coordinates.
  void add_constraint(const std::string& label, ConstraintBlock::Kind kind,
                      int size, Cone cone, RealMatrix map, RealVector offset);

  void set_cost(RealVector cost);
  void set_sense(ConicProgram::Sense sense);

  ConicProgram take();

 private:
  ConicProgram program_;
};

/// Mechanical dual:
///   maximize   <H2, Y>
///   subject to H1 - N^dag(Y) in K1*,   Y in K2*
/// expressed as another ConicProgram (dual variables become blocks mirroring
/// the primal constraint blocks). Defined for Min-sense inputs; a Max-sense
/// program is dualized through its negation.
ConicProgram dualize(const ConicProgram& p);

}  // namespace choical::conic
