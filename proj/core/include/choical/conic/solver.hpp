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

#include <limits>
#include <string>
#include <vector>

#include "choical/conic/program.hpp"

namespace choical::conic {

/// Thrown on structural failures (size caps, numerically singular KKT
/// systems). Solver outcomes that are meaningful answers (infeasible,
/// unbounded, iteration limit) come back as a status instead.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

struct SolveOptions {
  int max_iter = 100;
  /// Duality gap target (absolute, and relative to max(1, |primal|)).
  double gap_tol = 1e-7;
  double feas_tol = 1e-8;
  /// tau/kappa ratio of the self-dual embedding below which an
  /// infeasibility classification is accepted.
  double infeas_ratio = 1e-8;
  /// Size caps; programs beyond them are rejected up front.
  int max_herm_side = 16;
  int max_total_vars = 500;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, MaxIterations };

std::string to_string(SolveStatus status);

struct Solution {
  SolveStatus status = SolveStatus::MaxIterations;
  /// Optimal value in the program's own sense; +/-inf for
  /// infeasible/unbounded primal.
  double primal_value = std::numeric_limits<double>::quiet_NaN();
  /// Dual value; -inf (Min sense) when no dual feasible point exists.
  double dual_value = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
  double primal_residual = std::numeric_limits<double>::quiet_NaN();
  double dual_residual = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;

  /// Primal point per variable block, in block coordinates. For Unbounded
  /// this is the improving ray (the dual-infeasibility certificate); empty
  /// for Infeasible.
  std::vector<RealVector> primal_blocks;
  /// Multiplier per constraint block (Zero blocks: free multiplier; cone
  /// blocks: dual-cone element). For Infeasible these hold the
  /// primal-infeasibility certificate.
  std::vector<RealVector> dual_blocks;

  /// Hermitian view of a Herm variable block.
  ComplexMatrix primal_herm(const ConicProgram& p, int block) const;
  /// Hermitian multiplier of a Herm constraint block, scaled so that
  /// <Y, image> equals the compiled pairing.
  ComplexMatrix dual_herm(const ConicProgram& p, int block) const;
};

/// Primal-dual interior-point method on the homogeneous self-dual embedding,
/// with Nesterov-Todd scaling and a Mehrotra corrector. Hermitian blocks are
/// handled through their real symmetric embedding.
Solution solve(const ConicProgram& p, const SolveOptions& opts = {});

}  // namespace choical::conic
