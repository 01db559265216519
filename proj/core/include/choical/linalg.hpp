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

#include <Eigen/Dense>
#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace choical {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Matrices are treated as Hermitian iff max|m - m^dag| stays below this;
/// they are Hermitized by averaging before any eigendecomposition.
inline constexpr double kHermitianTol = 1e-9;

/// Default tolerance for free-set membership and verification checks.
inline constexpr double kDefaultMembershipTol = 1e-8;

/// Thrown when an operation is asked about dimensions a theory or routine
/// does not support. Callers that aggregate checks report these as
/// "unsupported" instead of failures.
class UnsupportedDimension : public std::runtime_error {
 public:
  explicit UnsupportedDimension(const std::string& what)
      : std::runtime_error(what) {}
};

/// Ordered subsystem dimensions. The first subsystem is the most significant
/// tensor factor: a flat index decomposes big-endian with respect to `dims`.
struct DimVector {
  std::vector<int> dims;

  DimVector() = default;
  DimVector(std::initializer_list<int> d) : dims(d) { validate(); }
  explicit DimVector(std::vector<int> d) : dims(std::move(d)) { validate(); }

  int total() const;
  int count() const { return static_cast<int>(dims.size()); }
  int operator[](int i) const { return dims[static_cast<size_t>(i)]; }
  bool operator==(const DimVector& other) const = default;

  DimVector concat(const DimVector& other) const;
  std::string to_string() const;

 private:
  void validate() const;
};

ComplexMatrix identity_matrix(int d);

/// Computational basis column vector |j> in dimension d.
ComplexVector basis_ket(int d, int j);

/// Projector |j><j| in dimension d.
ComplexMatrix basis_projector(int d, int j);

double max_abs(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);
ComplexMatrix hermitize(const ComplexMatrix& m);

/// Kronecker product: (a (x) b)[(i*rb + k), (j*cb + l)] = a(i,j) * b(k,l).
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

/// Trace out the subsystems listed in `traced`; the remaining subsystems keep
/// their relative order. Preserves the total trace.
ComplexMatrix partial_trace(const ComplexMatrix& m, const DimVector& dims,
                            const std::vector<int>& traced);

/// Transpose only the tensor factors listed in `transposed`.
ComplexMatrix partial_transpose(const ComplexMatrix& m, const DimVector& dims,
                                const std::vector<int>& transposed);

/// Conjugate by the subsystem permutation operator. `perm[k]` names the input
/// subsystem that ends up at output position k, so applying `perm` and then
/// its inverse is the identity.
ComplexMatrix reorder_systems(const ComplexMatrix& m, const DimVector& dims,
                              const std::vector<int>& perm);

/// Minimum eigenvalue of (m + m^dag)/2. The input must be square and
/// Hermitian within kHermitianTol; m counts as PSD iff psd_margin(m) >= -tol
/// for the caller's tolerance.
double psd_margin(const ComplexMatrix& m);

/// Sum of singular values, computed as sum of sqrt(eig(m^dag m)).
double trace_norm(const ComplexMatrix& m);

/// Ascending eigenvalues of the Hermitized matrix.
RealVector hermitian_eigenvalues(const ComplexMatrix& m);

}  // namespace choical
