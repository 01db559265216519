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

#include "choical/choi.hpp"
#include "choical/conic/program.hpp"
#include "choical/conic/solver.hpp"
#include "choical/theories.hpp"

namespace choical::conic {

// Builders for the resource quantifiers. Each program lifts the free-state
// family to its cone {(lambda, lambda*omega)} via a scalar block, the trace
// linkage tr X = lambda, and the family's scale-invariant cone description.
// All D_max outputs are base-2 logarithms, floored at zero (the exact optima
// are >= 1, so negative logs can only be solver noise).

/// Max-relative entropy of a state to the free set:
///   minimize x  s.t.  X - rho >= 0,  (x, X) in cone(free).
ConicProgram build_dmax_state(const FreeStateSet& theory,
                              const ComplexMatrix& rho, const DimVector& dims);

/// Max-relative entropy of a channel to the free channels, through its
/// renormalized Choi matrix mu on (out : in):
///   minimize x  s.t.  X - mu >= 0,  d_in tr_out X = x id_in,
///                     (x, X) in cone(free).
ConicProgram build_dmax_channel(const FreeStateSet& theory,
                                const ChoiMatrix& mu);

/// Overlap-maximization monotone in its homogeneous conic shape (H2 = 0):
///   minimize <(x,X), (0, -tau (x) rho^T)>
///   s.t. d_A tr_B X - x id_A = 0,  (x, X) in cone(free).
/// For any family containing the maximally mixed state this program is
/// unbounded below and its dual is infeasible; the finite monotone value
/// comes from monotone_value(), which pins the normalization slice x = 1.
ConicProgram build_monotone(const FreeStateSet& theory,
                            const ComplexMatrix& tau, const DimVector& dims_b,
                            const ComplexMatrix& rho, const DimVector& dims_a);

struct QuantifierResult {
  double value = 0.0;
  Solution solution;
};

/// log2 of the optimum of build_dmax_state; floored at 0.
QuantifierResult dmax_state(const FreeStateSet& theory,
                            const ComplexMatrix& rho, const DimVector& dims,
                            const SolveOptions& opts = {});

QuantifierResult dmax_channel(const FreeStateSet& theory, const ChoiMatrix& mu,
                              const SolveOptions& opts = {});

/// Plain max-relative entropy between two states (log2), +inf on support
/// mismatch. Used as the additivity reference; no optimization involved.
double dmax_pair(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                 double support_tol = 1e-10);

/// f_tau(rho): the monotone program restricted to its unit slice x = 1.
QuantifierResult monotone_value(const FreeStateSet& theory,
                                const ComplexMatrix& tau,
                                const DimVector& dims_b,
                                const ComplexMatrix& rho,
                                const DimVector& dims_a,
                                const SolveOptions& opts = {});

struct ConversionResult {
  double distance = 0.0;
  ChoiMatrix witness;  // optimal free renormalized Choi
  Solution solution;
};

/// Trace-distance conversion: minimize (1/2)||sigma - d_A mu * rho||_1 over
/// free renormalized Chois mu on (B : A), via the epigraph
/// ||Z||_1 <= tr(P + Q), P - Q = Z, P, Q >= 0.
ConversionResult conversion_distance(const FreeStateSet& theory,
                                     const ComplexMatrix& rho,
                                     const DimVector& dims_a,
                                     const ComplexMatrix& sigma,
                                     const DimVector& dims_b,
                                     const SolveOptions& opts = {});

struct ConvertibleResult {
  bool convertible = false;
  double residual = 0.0;  // best achievable max-coordinate deviation
  ChoiMatrix witness;
};

/// Feasibility of sigma = d_A mu * rho for a free renormalized Choi mu,
/// decided by minimizing the largest coordinate deviation.
ConvertibleResult convertible(const FreeStateSet& theory,
                              const ComplexMatrix& rho, const DimVector& dims_a,
                              const ComplexMatrix& sigma,
                              const DimVector& dims_b,
                              double tol = 1e-6,
                              const SolveOptions& opts = {});

struct ChainRuleResult {
  double output_dmax = 0.0;
  double state_dmax = 0.0;
  double channel_dmax = 0.0;
  double slack = 0.0;  // output - state - channel; <= tol when the rule holds
  bool holds = false;
};

/// Checks D(M(rho)) <= D(rho) + D(M) for the given channel.
ChainRuleResult check_chain_rule(const FreeStateSet& theory,
                                 const ComplexMatrix& rho,
                                 const DimVector& dims_a,
                                 const KrausChannel& channel, double tol = 1e-6,
                                 const SolveOptions& opts = {});

}  // namespace choical::conic
