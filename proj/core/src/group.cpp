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

#include "choical/group.hpp"

#include <cmath>

namespace choical {

namespace {

void validate_table(int dim, const std::vector<ComplexMatrix>& elements) {
  if (elements.empty()) {
    throw std::invalid_argument("GroupRepresentation: empty element list");
  }
  bool has_identity = false;
  for (const ComplexMatrix& u : elements) {
    if (u.rows() != dim || u.cols() != dim) {
      throw std::invalid_argument("GroupRepresentation: element size mismatch");
    }
    if (max_abs(u * u.adjoint() - identity_matrix(dim)) > 1e-9) {
      throw std::invalid_argument("GroupRepresentation: element not unitary");
    }
    if (max_abs(u - identity_matrix(dim)) <= 1e-9) has_identity = true;
  }
  if (!has_identity) {
    throw std::invalid_argument(
        "GroupRepresentation: element list must contain the identity");
  }
}

ComplexMatrix parity_element(int dim) {
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  for (int j = 0; j < dim; ++j) {
    u(j, j) = (j % 2 == 0) ? Complex(1, 0) : Complex(-1, 0);
  }
  return u;
}

ComplexMatrix phase_element(int dim, int power) {
  // diag(i^(j*power))
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  const Complex i_unit(0, 1);
  for (int j = 0; j < dim; ++j) {
    Complex phase(1, 0);
    for (int k = 0; k < (j * power) % 4; ++k) phase *= i_unit;
    u(j, j) = phase;
  }
  return u;
}

}  // namespace

GroupRepresentation GroupRepresentation::from_tables(
    std::map<int, std::vector<ComplexMatrix>> tables, std::string name) {
  if (tables.empty()) {
    throw std::invalid_argument("GroupRepresentation: no dimensions given");
  }
  int order = -1;
  for (const auto& [dim, elements] : tables) {
    validate_table(dim, elements);
    if (order == -1) {
      order = static_cast<int>(elements.size());
    } else if (order != static_cast<int>(elements.size())) {
      throw std::invalid_argument(
          "GroupRepresentation: element counts differ across dimensions");
    }
  }
  GroupRepresentation rep(Kind::Table, order, std::move(name));
  rep.tables_ = std::move(tables);
  return rep;
}

GroupRepresentation GroupRepresentation::z2_parity() {
  return GroupRepresentation(Kind::Z2Parity, 2, "z2-parity");
}

GroupRepresentation GroupRepresentation::z4_phase() {
  return GroupRepresentation(Kind::Z4Phase, 4, "z4-phase");
}

GroupRepresentation GroupRepresentation::trivial() {
  return GroupRepresentation(Kind::Trivial, 1, "trivial");
}

bool GroupRepresentation::supports(int dim) const {
  if (kind_ == Kind::Table) return tables_.count(dim) > 0;
  return dim >= 1;
}

bool GroupRepresentation::supports(const DimVector& dims) const {
  for (int d : dims.dims) {
    if (!supports(d)) return false;
  }
  return dims.count() > 0;
}

std::vector<ComplexMatrix> GroupRepresentation::elements(int dim) const {
  switch (kind_) {
    case Kind::Table: {
      auto it = tables_.find(dim);
      if (it == tables_.end()) {
        throw UnsupportedDimension("representation has no table for dimension " +
                                   std::to_string(dim));
      }
      return it->second;
    }
    case Kind::Z2Parity:
      return {identity_matrix(dim), parity_element(dim)};
    case Kind::Z4Phase: {
      std::vector<ComplexMatrix> out;
      for (int k = 0; k < 4; ++k) out.push_back(phase_element(dim, k));
      return out;
    }
    case Kind::Trivial:
      return {identity_matrix(dim)};
  }
  throw std::logic_error("unreachable");
}

std::vector<ComplexMatrix> GroupRepresentation::elements(
    const DimVector& dims) const {
  if (dims.count() == 0) {
    throw std::invalid_argument("GroupRepresentation: empty dims");
  }
  std::vector<std::vector<ComplexMatrix>> per_system;
  per_system.reserve(static_cast<size_t>(dims.count()));
  for (int d : dims.dims) per_system.push_back(elements(d));

  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<size_t>(order_));
  for (int g = 0; g < order_; ++g) {
    ComplexMatrix u = per_system[0][static_cast<size_t>(g)];
    for (size_t s = 1; s < per_system.size(); ++s) {
      u = tensor(u, per_system[s][static_cast<size_t>(g)]);
    }
    out.push_back(std::move(u));
  }
  return out;
}

ComplexMatrix twirl(const ComplexMatrix& rho, const GroupRepresentation& rep,
                    const DimVector& dims) {
  if (rho.rows() != dims.total() || rho.cols() != dims.total()) {
    throw std::invalid_argument("twirl: dimension mismatch");
  }
  std::vector<ComplexMatrix> us = rep.elements(dims);
  ComplexMatrix avg = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const ComplexMatrix& u : us) {
    avg += u * rho * u.adjoint();
  }
  return avg / static_cast<double>(us.size());
}

GInvariance ginvariant_membership(const ComplexMatrix& rho,
                                  const GroupRepresentation& rep,
                                  const DimVector& dims, double tol) {
  GInvariance result;
  const double deviation = max_abs(rho - twirl(rho, rep, dims));
  result.margin = -deviation;
  result.is_member = deviation <= tol;
  return result;
}

bool representation_is_real_in_choi_basis(const GroupRepresentation& rep,
                                          int dim, double tol) {
  for (const ComplexMatrix& u : rep.elements(dim)) {
    if (max_abs(u * u.transpose() - identity_matrix(dim)) > tol) {
      return false;
    }
  }
  return true;
}

}  // namespace choical
