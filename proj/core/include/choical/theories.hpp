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

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "choical/choi.hpp"
#include "choical/group.hpp"
#include "choical/linalg.hpp"
#include "choical/rng.hpp"

namespace choical {

class UnknownTheory : public std::runtime_error {
 public:
  explicit UnknownTheory(const std::string& name)
      : std::runtime_error("unknown theory: " + name) {}
};

struct Membership {
  bool is_member = false;
  /// Signed slack: >= 0 strictly inside the free set, < 0 outside.
  /// Membership at tolerance tol means margin >= -tol.
  double margin = 0.0;
};

/// One H-representation condition on the Hermitian variable X: a linear image
/// of X that must be PSD, entrywise nonnegative, or zero. The maps describe
/// the *cone* generated by the free states, so they are scale invariant; unit
/// trace enters separately through the optimizer's scalar lift.
struct ConeAtom {
  enum class Kind { Psd, NonNeg, Zero };

  Kind kind;
  /// For Psd: image is a Hermitian matrix of side image_side.
  std::function<ComplexMatrix(const ComplexMatrix&)> matrix_map;
  int image_side = 0;
  /// For NonNeg / Zero: image is a real coordinate vector.
  std::function<RealVector(const ComplexMatrix&)> vector_map;
  int image_length = 0;
};

/// Conic description of a free-state family at fixed dimensions: either a
/// list of H-representation atoms or the finite extreme-point list of a
/// polytope (V-representation).
struct ConeDescription {
  int side = 0;  // Hermitian variable side
  bool is_vrep = false;
  std::vector<ConeAtom> atoms;                 // H-rep
  std::vector<ComplexMatrix> extreme_points;   // V-rep, unit-trace states
};

/// A resource theory's free-state family: membership, conic description for
/// the optimizer, and by-construction samplers of free states and free
/// renormalized channel Chois.
///
/// Membership and cone descriptions are pure; samplers draw from the caller's
/// Rng, so create one Rng per thread.
class FreeStateSet {
 public:
  virtual ~FreeStateSet() = default;

  virtual std::string name() const = 0;

  /// Flat subsystem count per logical system. Spatially bipartite families
  /// (PPT, separability) use 2: each logical system is an (A,B) pair laid out
  /// adjacently, and the spatial cut groups all first halves against all
  /// second halves. This regrouping is encoded here once, not per call site.
  virtual int system_unit() const { return 1; }

  virtual bool supports(const DimVector& dims) const = 0;

  virtual Membership membership(const ComplexMatrix& rho,
                                const DimVector& dims,
                                double tol = kDefaultMembershipTol) const = 0;

  virtual ConeDescription cone(const DimVector& dims) const;

  /// Free state with membership margin >= 0; deterministic per Rng state.
  virtual ComplexMatrix sample_state(const DimVector& dims, Rng& rng) const = 0;

  /// Free renormalized channel Choi on (out_dims : in_dims): passes both
  /// is_renormalized_choi and membership.
  virtual ChoiMatrix sample_channel(const DimVector& in_dims,
                                    const DimVector& out_dims,
                                    Rng& rng) const = 0;

  /// Negative fixtures are expected to fail the Choi-state condition; the
  /// verification suite asserts the failure instead of reporting it.
  virtual bool is_negative_fixture() const { return false; }

  /// Non-null for invariance-based theories; lets the verifier cross-check
  /// condition-one outcomes against the real-representation criterion.
  virtual const GroupRepresentation* representation() const { return nullptr; }
};

// Membership tests as standalone operations.

Membership imaginarity_membership(const ComplexMatrix& rho,
                                  double tol = kDefaultMembershipTol);

/// PPT across the given bipartition: rho and its partial transpose on
/// `transposed_group` must both be PSD within tol.
Membership ppt_membership(const ComplexMatrix& rho, const DimVector& dims,
                          const std::vector<int>& transposed_group,
                          double tol = kDefaultMembershipTol);

/// Doubly nonnegative test (real, entrywise nonnegative, PSD); exact for the
/// nonnegative-amplitude family only up to total dimension 4, so larger
/// inputs are rejected rather than approximated.
Membership dnn_membership(const ComplexMatrix& rho,
                          double tol = kDefaultMembershipTol);

/// All pure stabilizer-state projectors on n qubits (n in {1, 2}); exact and
/// duplicate free. Sizes: 6 for n=1, 60 for n=2.
std::vector<ComplexMatrix> enumerate_stabilizer_states(int n_qubits);

struct StabilizerMembership {
  bool is_member = false;
  double margin = 0.0;
  /// Witness mixture over enumerate_stabilizer_states(n) when is_member.
  std::vector<double> weights;
};

/// Linear-program test for membership in the stabilizer polytope.
StabilizerMembership stabilizer_membership(const ComplexMatrix& rho,
                                           int n_qubits,
                                           double tol = kDefaultMembershipTol);

// Registry. Builtin names: "imaginarity", "all", "ppt", "sep", "dnn",
// "stabilizer", "z2-parity", plus the negative fixtures "z4-fixture" and
// "athermal-fixture". "ginv:<rep-file>" loads a representation from JSON.
std::unique_ptr<FreeStateSet> make_theory(const std::string& name);
std::vector<std::string> builtin_theories();

/// Theory over an explicit representation (used by make_theory for builtins
/// and ginv:<file>).
std::unique_ptr<FreeStateSet> make_ginvariant_theory(GroupRepresentation rep,
                                                     std::string name);

}  // namespace choical
