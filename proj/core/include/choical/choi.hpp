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

#include <vector>

#include "choical/linalg.hpp"
#include "choical/rng.hpp"

namespace choical {

// A bare matrix does not determine a channel: the same 4x4 matrix can encode a
// state preparation, an effect, or two different qubit-to-qubit maps depending
// on which factor is the input. ChoiMatrix therefore always carries the system
// metadata, with one stored convention: output systems first, input systems
// second. The alternative convention (identity tensored on the left) is only
// ever reached through an explicit reorder_systems call, never guessed.

/// Bipartite matrix on (out_dims (x) in_dims) with explicit ordering metadata.
///
/// `normalized == false`: plain Choi scaling, trace d_in for a channel.
/// `normalized == true`:  renormalized scaling, trace 1 for a channel.
/// The flag records scaling only; whether the matrix actually is a (possibly
/// renormalized) channel Choi is checked by is_channel_choi /
/// is_renormalized_choi.
struct ChoiMatrix {
  ComplexMatrix matrix;
  DimVector out_dims;
  DimVector in_dims;
  bool normalized = false;

  ChoiMatrix(ComplexMatrix m, DimVector out, DimVector in,
             bool is_normalized = false);

  int out_total() const { return out_dims.total(); }
  int in_total() const { return in_dims.total(); }

  /// Flat dims of the stored matrix: out systems then in systems.
  DimVector flat_dims() const { return out_dims.concat(in_dims); }

  /// Exact scaling conversions (multiply/divide by d_in).
  ChoiMatrix renormalized() const;
  ChoiMatrix unnormalized() const;
};

/// Channel given by Kraus operators (each out_total x in_total).
struct KrausChannel {
  std::vector<ComplexMatrix> kraus_ops;
  DimVector in_dims;
  DimVector out_dims;

  KrausChannel(std::vector<ComplexMatrix> ops, DimVector in, DimVector out);

  ComplexMatrix apply(const ComplexMatrix& rho) const;
  KrausChannel compose_after(const KrausChannel& first) const;  // this . first
  KrausChannel tensor_with(const KrausChannel& other) const;
};

/// Unnormalized Choi state Phi = sum_{x,y} |x><y| (x) |x><y| on two copies of
/// a d-dimensional system; trace d. This is the Choi matrix of the identity
/// channel.
ChoiMatrix choi_state(int d);

/// Renormalized variant Phi / d, trace 1.
ChoiMatrix renormalized_choi_state(int d);

/// Choi matrix of a Kraus channel, arranged out:in. Validates trace
/// preservation of the Kraus set and the identity input-marginal of the
/// result.
ChoiMatrix kraus_to_choi(const KrausChannel& ch);

/// Action of the channel on a state via the inverse Choi map:
/// tr_in[ M (id_out (x) rho^T) ], rescaled by d_in when m is renormalized.
ComplexMatrix apply_channel(const ChoiMatrix& m, const ComplexMatrix& rho);

/// Contraction implementing sequential composition:
///   (n * m) = tr_B[ (N_{C:B} (x) id_A') (id_C (x) M^{T_B}_{B:A'}) ]
/// with n.in_dims matched against m.out_dims. Works on the stored matrices
/// exactly as written; for unnormalized channel Chois the result is the Choi
/// of the composed channel.
ChoiMatrix link_product(const ChoiMatrix& n, const ChoiMatrix& m);

/// Link product of a Choi with a plain state (the state is viewed as a Choi
/// with trivial input). For an unnormalized channel Choi this is the channel
/// acting on the state.
ComplexMatrix link_product_state(const ChoiMatrix& n, const ComplexMatrix& rho);

/// Parallel composition on Chois: tensor, then swap the middle systems so the
/// result is ordered (out_m, out_n : in_m, in_n). Plain tensoring would
/// interleave inputs and outputs.
ChoiMatrix swap_tensor_product(const ChoiMatrix& m, const ChoiMatrix& n);

struct ChoiCheck {
  bool ok = false;
  double psd_margin = 0.0;
  /// Max deviation over all checked conditions (marginal, trace, PSD).
  double residual = 0.0;
};

/// True iff mu is PSD within tol and tr_out(mu) == id_in / d_in within tol
/// (unit trace is implied). Expects a renormalized-scaling ChoiMatrix.
ChoiCheck is_renormalized_choi(const ChoiMatrix& mu,
                               double tol = kDefaultMembershipTol);

/// True iff m is PSD within tol and tr_out(m) == id_in within tol, honoring
/// the stored normalization flag.
ChoiCheck is_channel_choi(const ChoiMatrix& m,
                          double tol = kDefaultMembershipTol);

/// View a state as a preparation-channel Choi (trivial one-dimensional input).
ChoiMatrix state_as_choi(const ComplexMatrix& rho, const DimVector& dims);

KrausChannel identity_channel(const DimVector& dims);
KrausChannel unitary_channel(const ComplexMatrix& u, const DimVector& dims);

/// Sends every input to the maximally mixed state; its renormalized Choi is
/// id / (d_out * d_in).
KrausChannel completely_depolarizing_channel(const DimVector& in_dims,
                                             const DimVector& out_dims);

/// Random channel from a Stinespring isometry with `kraus_count` Kraus terms.
KrausChannel random_channel(const DimVector& in_dims, const DimVector& out_dims,
                            int kraus_count, Rng& rng);

/// Random channel whose Kraus operators are real, so its Choi matrix is real.
KrausChannel random_real_channel(const DimVector& in_dims,
                                 const DimVector& out_dims, int kraus_count,
                                 Rng& rng);

}  // namespace choical
