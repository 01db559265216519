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

#include <map>
#include <string>
#include <vector>

#include "choical/linalg.hpp"

namespace choical {

/// Finite unitary representation, one element list per atomic system
/// dimension, aligned by group-element index (identity first). On a composite
/// system the element g acts as the tensor product of its per-subsystem
/// unitaries.
class GroupRepresentation {
 public:
  /// Explicit tables, e.g. loaded from file. All listed dimensions must share
  /// the group order; each list must contain the identity and be unitary
  /// within 1e-9.
  static GroupRepresentation from_tables(
      std::map<int, std::vector<ComplexMatrix>> tables, std::string name);

  /// Z2 parity: {id, diag((-1)^j)} for every dimension.
  static GroupRepresentation z2_parity();

  /// Z4 phase rotation generated by diag(i^j); not real in the computational
  /// basis, so the invariant-state family fails to close into a
  /// channel-level theory.
  static GroupRepresentation z4_phase();

  static GroupRepresentation trivial();

  const std::string& name() const { return name_; }
  int order() const { return order_; }
  bool supports(int dim) const;
  bool supports(const DimVector& dims) const;

  /// Elements on an atomic dimension.
  std::vector<ComplexMatrix> elements(int dim) const;

  /// Elements on a composite: per-index tensor across subsystems.
  std::vector<ComplexMatrix> elements(const DimVector& dims) const;

 private:
  enum class Kind { Table, Z2Parity, Z4Phase, Trivial };

  GroupRepresentation(Kind kind, int order, std::string name)
      : kind_(kind), order_(order), name_(std::move(name)) {}

  Kind kind_;
  int order_;
  std::string name_;
  std::map<int, std::vector<ComplexMatrix>> tables_;
};

/// Group average |G|^-1 sum_g U_g rho U_g^dag. Idempotent; the output
/// commutes with every U_g.
ComplexMatrix twirl(const ComplexMatrix& rho, const GroupRepresentation& rep,
                    const DimVector& dims);

struct GInvariance {
  bool is_member = false;
  double margin = 0.0;  // -max|rho - twirl(rho)|
};

/// Invariance test: member iff ||rho - twirl(rho)||_inf <= tol.
GInvariance ginvariant_membership(const ComplexMatrix& rho,
                                  const GroupRepresentation& rep,
                                  const DimVector& dims,
                                  double tol = kDefaultMembershipTol);

/// True iff max_g ||U_g U_g^T - id||_inf <= tol at the given dimension. This
/// decides whether the invariant-state family admits a Choi-defined channel
/// theory: the renormalized Choi state is invariant exactly when every
/// representation is real in this basis.
bool representation_is_real_in_choi_basis(const GroupRepresentation& rep,
                                          int dim, double tol = kHermitianTol);

}  // namespace choical
