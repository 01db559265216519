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

#include "choical/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace choical {

namespace {

// Digits of `flat` in the mixed radix given by dims (big-endian: the first
// subsystem is the most significant digit).
void decompose(int flat, const DimVector& dims, std::vector<int>& digits) {
  const int n = dims.count();
  digits.resize(static_cast<size_t>(n));
  for (int k = n - 1; k >= 0; --k) {
    digits[static_cast<size_t>(k)] = flat % dims[k];
    flat /= dims[k];
  }
}

int compose(const std::vector<int>& digits, const DimVector& dims) {
  int flat = 0;
  for (int k = 0; k < dims.count(); ++k) {
    flat = flat * dims[k] + digits[static_cast<size_t>(k)];
  }
  return flat;
}

void check_square_with_dims(const ComplexMatrix& m, const DimVector& dims,
                            const char* op) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(op) + ": matrix must be square");
  }
  if (m.rows() != dims.total()) {
    std::ostringstream msg;
    msg << op << ": matrix side " << m.rows() << " does not match dims "
        << dims.to_string();
    throw std::invalid_argument(msg.str());
  }
}

void check_subsystems(const DimVector& dims, const std::vector<int>& subset,
                      const char* op) {
  for (int s : subset) {
    if (s < 0 || s >= dims.count()) {
      throw std::invalid_argument(std::string(op) +
                                  ": subsystem index out of range");
    }
  }
}

}  // namespace

int DimVector::total() const {
  int t = 1;
  for (int d : dims) t *= d;
  return t;
}

DimVector DimVector::concat(const DimVector& other) const {
  std::vector<int> joined = dims;
  joined.insert(joined.end(), other.dims.begin(), other.dims.end());
  return DimVector(std::move(joined));
}

std::string DimVector::to_string() const {
  std::ostringstream out;
  out << "[";
  for (size_t i = 0; i < dims.size(); ++i) {
    if (i > 0) out << ",";
    out << dims[i];
  }
  out << "]";
  return out.str();
}

void DimVector::validate() const {
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("DimVector: dimensions must be >= 1");
  }
}

ComplexMatrix identity_matrix(int d) { return ComplexMatrix::Identity(d, d); }

ComplexVector basis_ket(int d, int j) {
  ComplexVector v = ComplexVector::Zero(d);
  v(j) = Complex(1.0, 0.0);
  return v;
}

ComplexMatrix basis_projector(int d, int j) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(j, j) = Complex(1.0, 0.0);
  return m;
}

double max_abs(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint().eval()) <= tol;
}

ComplexMatrix hermitize(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint().eval());
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const DimVector& dims,
                            const std::vector<int>& traced) {
  check_square_with_dims(m, dims, "partial_trace");
  check_subsystems(dims, traced, "partial_trace");

  std::vector<bool> is_traced(static_cast<size_t>(dims.count()), false);
  for (int s : traced) is_traced[static_cast<size_t>(s)] = true;

  std::vector<int> kept_dims;
  for (int k = 0; k < dims.count(); ++k) {
    if (!is_traced[static_cast<size_t>(k)]) kept_dims.push_back(dims[k]);
  }
  DimVector kept(kept_dims.empty() ? std::vector<int>{1}
                                   : std::move(kept_dims));

  const int total = dims.total();
  ComplexMatrix out = ComplexMatrix::Zero(kept.total(), kept.total());
  std::vector<int> di, dj, keep_i, keep_j;
  for (int i = 0; i < total; ++i) {
    decompose(i, dims, di);
    for (int j = 0; j < total; ++j) {
      decompose(j, dims, dj);
      bool diagonal_on_traced = true;
      for (int k = 0; k < dims.count(); ++k) {
        if (is_traced[static_cast<size_t>(k)] &&
            di[static_cast<size_t>(k)] != dj[static_cast<size_t>(k)]) {
          diagonal_on_traced = false;
          break;
        }
      }
      if (!diagonal_on_traced) continue;
      keep_i.clear();
      keep_j.clear();
      for (int k = 0; k < dims.count(); ++k) {
        if (!is_traced[static_cast<size_t>(k)]) {
          keep_i.push_back(di[static_cast<size_t>(k)]);
          keep_j.push_back(dj[static_cast<size_t>(k)]);
        }
      }
      out(compose(keep_i, kept), compose(keep_j, kept)) += m(i, j);
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, const DimVector& dims,
                                const std::vector<int>& transposed) {
  check_square_with_dims(m, dims, "partial_transpose");
  check_subsystems(dims, transposed, "partial_transpose");

  std::vector<bool> flip(static_cast<size_t>(dims.count()), false);
  for (int s : transposed) flip[static_cast<size_t>(s)] = true;

  const int total = dims.total();
  ComplexMatrix out(total, total);
  std::vector<int> di, dj, ri, rj;
  for (int i = 0; i < total; ++i) {
    decompose(i, dims, di);
    for (int j = 0; j < total; ++j) {
      decompose(j, dims, dj);
      ri = di;
      rj = dj;
      for (int k = 0; k < dims.count(); ++k) {
        if (flip[static_cast<size_t>(k)]) {
          std::swap(ri[static_cast<size_t>(k)], rj[static_cast<size_t>(k)]);
        }
      }
      out(compose(ri, dims), compose(rj, dims)) = m(i, j);
    }
  }
  return out;
}

ComplexMatrix reorder_systems(const ComplexMatrix& m, const DimVector& dims,
                              const std::vector<int>& perm) {
  check_square_with_dims(m, dims, "reorder_systems");
  if (static_cast<int>(perm.size()) != dims.count()) {
    throw std::invalid_argument("reorder_systems: permutation size mismatch");
  }
  std::vector<bool> seen(perm.size(), false);
  for (int p : perm) {
    if (p < 0 || p >= dims.count() || seen[static_cast<size_t>(p)]) {
      throw std::invalid_argument("reorder_systems: not a permutation");
    }
    seen[static_cast<size_t>(p)] = true;
  }

  std::vector<int> new_dims(perm.size());
  for (size_t k = 0; k < perm.size(); ++k) {
    new_dims[k] = dims[perm[k]];
  }
  DimVector permuted(new_dims);

  const int total = dims.total();
  std::vector<int> index_map(static_cast<size_t>(total));
  std::vector<int> digits, moved(perm.size());
  for (int i = 0; i < total; ++i) {
    decompose(i, dims, digits);
    for (size_t k = 0; k < perm.size(); ++k) {
      moved[k] = digits[static_cast<size_t>(perm[k])];
    }
    index_map[static_cast<size_t>(i)] = compose(moved, permuted);
  }

  ComplexMatrix out(total, total);
  for (int i = 0; i < total; ++i) {
    for (int j = 0; j < total; ++j) {
      out(index_map[static_cast<size_t>(i)], index_map[static_cast<size_t>(j)]) =
          m(i, j);
    }
  }
  return out;
}

double psd_margin(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("psd_margin: matrix must be square");
  }
  if (!is_hermitian(m)) {
    throw std::invalid_argument(
        "psd_margin: matrix is not Hermitian within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitize(m),
                                                      Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double trace_norm(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("trace_norm: matrix must be square");
  }
  // Singular values via the eigendecomposition of m^dag m, so PSD checks and
  // norms share one primitive and one tolerance behavior.
  ComplexMatrix gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitize(gram),
                                                      Eigen::EigenvaluesOnly);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    sum += std::sqrt(std::max(0.0, solver.eigenvalues()(i)));
  }
  return sum;
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("hermitian_eigenvalues: matrix must be square");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitize(m),
                                                      Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

}  // namespace choical
