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

#include <cmath>
#include <deque>
#include <map>
#include <sstream>

#include "choical/conic/program.hpp"
#include "choical/conic/solver.hpp"
#include "choical/theories.hpp"

namespace choical {

namespace {

ComplexMatrix hadamard() {
  ComplexMatrix h(2, 2);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  h << inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2;
  return h;
}

ComplexMatrix phase_gate() {
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  s(0, 0) = Complex(1, 0);
  s(1, 1) = Complex(0, 1);
  return s;
}

ComplexMatrix cnot(int control, int target) {
  // Two-qubit CNOT in the computational basis (qubit 0 is the most
  // significant index).
  ComplexMatrix c = ComplexMatrix::Zero(4, 4);
  for (int in = 0; in < 4; ++in) {
    const int bits[2] = {(in >> 1) & 1, in & 1};
    int out_bits[2] = {bits[0], bits[1]};
    if (bits[control] == 1) out_bits[target] ^= 1;
    c((out_bits[0] << 1) | out_bits[1], in) = Complex(1, 0);
  }
  return c;
}

std::vector<ComplexMatrix> clifford_generators(int n_qubits) {
  std::vector<ComplexMatrix> gens;
  if (n_qubits == 1) {
    gens.push_back(hadamard());
    gens.push_back(phase_gate());
    return gens;
  }
  const ComplexMatrix id2 = identity_matrix(2);
  gens.push_back(tensor(hadamard(), id2));
  gens.push_back(tensor(id2, hadamard()));
  gens.push_back(tensor(phase_gate(), id2));
  gens.push_back(tensor(id2, phase_gate()));
  gens.push_back(cnot(0, 1));
  gens.push_back(cnot(1, 0));
  return gens;
}

// Key for projector deduplication: entries snapped to a grid well below the
// 1e-10 resolution at which two distinct stabilizer projectors can approach
// each other.
std::string projector_key(const ComplexMatrix& p) {
  std::ostringstream key;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      const auto snap = [](double v) {
        double r = std::round(v * 1e8) / 1e8;
        if (r == 0.0) r = 0.0;  // normalize -0
        return r;
      };
      key << snap(p(i, j).real()) << "," << snap(p(i, j).imag()) << ";";
    }
  }
  return key.str();
}

}  // namespace

std::vector<ComplexMatrix> enumerate_stabilizer_states(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 2) {
    throw UnsupportedDimension(
        "stabilizer enumeration supports 1 or 2 qubits, got " +
        std::to_string(n_qubits));
  }
  const int d = 1 << n_qubits;
  const std::vector<ComplexMatrix> gens = clifford_generators(n_qubits);

  std::vector<ComplexMatrix> states;
  std::map<std::string, int> seen;
  std::deque<ComplexMatrix> queue;

  ComplexMatrix start = basis_projector(d, 0);
  seen[projector_key(start)] = 0;
  states.push_back(start);
  queue.push_back(start);

  while (!queue.empty()) {
    ComplexMatrix p = queue.front();
    queue.pop_front();
    for (const ComplexMatrix& g : gens) {
      ComplexMatrix next = g * p * g.adjoint();
      const std::string key = projector_key(next);
      if (seen.find(key) == seen.end()) {
        seen[key] = static_cast<int>(states.size());
        states.push_back(next);
        queue.push_back(next);
      }
    }
  }
  return states;
}

StabilizerMembership stabilizer_membership(const ComplexMatrix& rho,
                                           int n_qubits, double tol) {
  const int d = 1 << n_qubits;
  if (rho.rows() != d || rho.cols() != d) {
    throw std::invalid_argument("stabilizer_membership: dimension mismatch");
  }
  if (!is_hermitian(rho)) {
    throw std::invalid_argument("stabilizer_membership: input not Hermitian");
  }
  const std::vector<ComplexMatrix> states = enumerate_stabilizer_states(n_qubits);
  const int count = static_cast<int>(states.size());

  // minimize t  s.t.  |coords(sum_i w_i S_i - rho)| <= t, w >= 0, sum w = 1.
  conic::ProgramBuilder b("stabilizer-membership");
  const int w_block = b.add_vector("w", count, conic::Cone::NonNeg);
  const int t_block = b.add_scalar("t");
  const int total = b.var_dim();
  const int coords = conic::herm_coord_dim(d);

  RealMatrix mix(coords, count);
  for (int i = 0; i < count; ++i) {
    mix.col(i) = conic::herm_to_coords(states[static_cast<size_t>(i)]);
  }
  const RealVector target = conic::herm_to_coords(hermitize(rho));

  RealMatrix upper = RealMatrix::Zero(coords, total);
  upper.block(0, b.var_offset(w_block), coords, count) = -mix;
  upper.col(b.var_offset(t_block)).setOnes();
  b.add_constraint("upper", conic::ConstraintBlock::Kind::Vector, coords,
                   conic::Cone::NonNeg, std::move(upper), RealVector(-target));

  RealMatrix lower = RealMatrix::Zero(coords, total);
  lower.block(0, b.var_offset(w_block), coords, count) = mix;
  lower.col(b.var_offset(t_block)).setOnes();
  b.add_constraint("lower", conic::ConstraintBlock::Kind::Vector, coords,
                   conic::Cone::NonNeg, std::move(lower), RealVector(target));

  RealMatrix norm = RealMatrix::Zero(1, total);
  norm.block(0, b.var_offset(w_block), 1, count).setOnes();
  RealVector one(1);
  one(0) = 1.0;
  b.add_constraint("normalized", conic::ConstraintBlock::Kind::Vector, 1,
                   conic::Cone::Zero, std::move(norm), std::move(one));

  RealVector cost = RealVector::Zero(total);
  cost(b.var_offset(t_block)) = 1.0;
  b.set_cost(std::move(cost));

  conic::Solution sol = conic::solve(b.take());
  if (sol.status != conic::SolveStatus::Optimal) {
    throw conic::SolverError("stabilizer_membership: solver returned " +
                             conic::to_string(sol.status));
  }

  StabilizerMembership out;
  out.margin = -std::max(0.0, sol.primal_value);
  out.is_member = sol.primal_value <= tol;
  if (out.is_member) {
    const RealVector& w = sol.primal_blocks[static_cast<size_t>(w_block)];
    out.weights.assign(w.data(), w.data() + w.size());
    for (double& wi : out.weights) wi = std::max(0.0, wi);
  }
  return out;
}

}  // namespace choical
