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

#include "choical/choi.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace choical {

namespace {

void check_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite entries");
  }
}

}  // namespace

ChoiMatrix::ChoiMatrix(ComplexMatrix m, DimVector out, DimVector in,
                       bool is_normalized)
    : matrix(std::move(m)),
      out_dims(std::move(out)),
      in_dims(std::move(in)),
      normalized(is_normalized) {
  const int side = out_dims.total() * in_dims.total();
  if (matrix.rows() != side || matrix.cols() != side) {
    std::ostringstream msg;
    msg << "ChoiMatrix: matrix side " << matrix.rows()
        << " does not match out_dims " << out_dims.to_string() << " x in_dims "
        << in_dims.to_string();
    throw std::invalid_argument(msg.str());
  }
  check_finite(matrix, "ChoiMatrix");
  if (!is_hermitian(matrix)) {
    throw std::invalid_argument("ChoiMatrix: matrix not Hermitian within tolerance");
  }
}

ChoiMatrix ChoiMatrix::renormalized() const {
  if (normalized) return *this;
  return ChoiMatrix(matrix / static_cast<double>(in_total()), out_dims, in_dims,
                    true);
}

ChoiMatrix ChoiMatrix::unnormalized() const {
  if (!normalized) return *this;
  return ChoiMatrix(matrix * static_cast<double>(in_total()), out_dims, in_dims,
                    false);
}

KrausChannel::KrausChannel(std::vector<ComplexMatrix> ops, DimVector in,
                           DimVector out)
    : kraus_ops(std::move(ops)), in_dims(std::move(in)), out_dims(std::move(out)) {
  if (kraus_ops.empty()) {
    throw std::invalid_argument("KrausChannel: empty Kraus set");
  }
  const int din = in_dims.total();
  const int dout = out_dims.total();
  ComplexMatrix sum = ComplexMatrix::Zero(din, din);
  for (const ComplexMatrix& k : kraus_ops) {
    if (k.rows() != dout || k.cols() != din) {
      throw std::invalid_argument("KrausChannel: operator shape mismatch");
    }
    check_finite(k, "KrausChannel");
    sum += k.adjoint() * k;
  }
  if (max_abs(sum - identity_matrix(din)) > kHermitianTol) {
    throw std::invalid_argument(
        "KrausChannel: Kraus set is not trace preserving");
  }
}

ComplexMatrix KrausChannel::apply(const ComplexMatrix& rho) const {
  const int din = in_dims.total();
  if (rho.rows() != din || rho.cols() != din) {
    throw std::invalid_argument("KrausChannel::apply: state dimension mismatch");
  }
  ComplexMatrix out = ComplexMatrix::Zero(out_dims.total(), out_dims.total());
  for (const ComplexMatrix& k : kraus_ops) {
    out += k * rho * k.adjoint();
  }
  return out;
}

KrausChannel KrausChannel::compose_after(const KrausChannel& first) const {
  if (in_dims != first.out_dims) {
    throw std::invalid_argument(
        "KrausChannel::compose_after: middle dimensions do not match");
  }
  std::vector<ComplexMatrix> ops;
  ops.reserve(kraus_ops.size() * first.kraus_ops.size());
  for (const ComplexMatrix& k2 : kraus_ops) {
    for (const ComplexMatrix& k1 : first.kraus_ops) {
      ops.push_back(k2 * k1);
    }
  }
  return KrausChannel(std::move(ops), first.in_dims, out_dims);
}

KrausChannel KrausChannel::tensor_with(const KrausChannel& other) const {
  std::vector<ComplexMatrix> ops;
  ops.reserve(kraus_ops.size() * other.kraus_ops.size());
  for (const ComplexMatrix& a : kraus_ops) {
    for (const ComplexMatrix& b : other.kraus_ops) {
      ops.push_back(tensor(a, b));
    }
  }
  return KrausChannel(std::move(ops), in_dims.concat(other.in_dims),
                      out_dims.concat(other.out_dims));
}

ChoiMatrix choi_state(int d) {
  if (d < 1) throw std::invalid_argument("choi_state: d must be >= 1");
  ComplexMatrix phi = ComplexMatrix::Zero(d * d, d * d);
  for (int x = 0; x < d; ++x) {
    for (int y = 0; y < d; ++y) {
      phi(x * d + x, y * d + y) = Complex(1.0, 0.0);
    }
  }
  return ChoiMatrix(std::move(phi), DimVector{d}, DimVector{d}, false);
}

ChoiMatrix renormalized_choi_state(int d) {
  return choi_state(d).renormalized();
}

ChoiMatrix kraus_to_choi(const KrausChannel& ch) {
  const int din = ch.in_dims.total();
  const int dout = ch.out_dims.total();
  const int side = dout * din;
  ComplexMatrix m = ComplexMatrix::Zero(side, side);
  // M = sum_k w w^dag with w the out-major flattening of K: w(b*din + a) = K(b,a).
  for (const ComplexMatrix& k : ch.kraus_ops) {
    ComplexVector w(side);
    for (int b = 0; b < dout; ++b) {
      for (int a = 0; a < din; ++a) {
        w(b * din + a) = k(b, a);
      }
    }
    m += w * w.adjoint();
  }
  return ChoiMatrix(std::move(m), ch.out_dims, ch.in_dims, false);
}

ComplexMatrix apply_channel(const ChoiMatrix& m, const ComplexMatrix& rho) {
  const int din = m.in_total();
  const int dout = m.out_total();
  if (rho.rows() != din || rho.cols() != din) {
    throw std::invalid_argument("apply_channel: state dimension mismatch");
  }
  ChoiCheck check = is_channel_choi(m, 1e-6);
  if (!check.ok) {
    std::ostringstream msg;
    msg << "apply_channel: matrix is not a channel Choi (residual "
        << check.residual << ")";
    throw std::invalid_argument(msg.str());
  }
  const double scale = m.normalized ? static_cast<double>(din) : 1.0;
  ComplexMatrix out = ComplexMatrix::Zero(dout, dout);
  for (int b = 0; b < dout; ++b) {
    for (int bp = 0; bp < dout; ++bp) {
      Complex acc(0.0, 0.0);
      for (int a = 0; a < din; ++a) {
        for (int ap = 0; ap < din; ++ap) {
          acc += m.matrix(b * din + a, bp * din + ap) * rho(a, ap);
        }
      }
      out(b, bp) = scale * acc;
    }
  }
  return out;
}

ChoiMatrix link_product(const ChoiMatrix& n, const ChoiMatrix& m) {
  if (n.in_dims != m.out_dims) {
    std::ostringstream msg;
    msg << "link_product: middle systems do not match (" << n.in_dims.to_string()
        << " vs " << m.out_dims.to_string()
        << "); the second factor's output must be a copy of the first's input";
    throw std::invalid_argument(msg.str());
  }
  const int dc = n.out_total();
  const int db = n.in_total();
  const int da = m.in_total();
  ComplexMatrix out = ComplexMatrix::Zero(dc * da, dc * da);
  // out[(c,a),(c',a')] = sum_{b,b'} N[(c,b),(c',b')] M[(b,a),(b',a')]
  for (int c = 0; c < dc; ++c) {
    for (int cp = 0; cp < dc; ++cp) {
      for (int a = 0; a < da; ++a) {
        for (int ap = 0; ap < da; ++ap) {
          Complex acc(0.0, 0.0);
          for (int b = 0; b < db; ++b) {
            for (int bp = 0; bp < db; ++bp) {
              acc += n.matrix(c * db + b, cp * db + bp) *
                     m.matrix(b * da + a, bp * da + ap);
            }
          }
          out(c * da + a, cp * da + ap) = acc;
        }
      }
    }
  }
  return ChoiMatrix(std::move(out), n.out_dims, m.in_dims, false);
}

ComplexMatrix link_product_state(const ChoiMatrix& n, const ComplexMatrix& rho) {
  if (rho.rows() != n.in_total() || rho.cols() != n.in_total()) {
    throw std::invalid_argument("link_product_state: state dimension mismatch");
  }
  ChoiMatrix as_choi = state_as_choi(rho, n.in_dims);
  return link_product(n, as_choi).matrix;
}

ChoiMatrix swap_tensor_product(const ChoiMatrix& m, const ChoiMatrix& n) {
  if (m.normalized != n.normalized) {
    throw std::invalid_argument(
        "swap_tensor_product: mixed normalization conventions");
  }
  ComplexMatrix t = tensor(m.matrix, n.matrix);
  // Flat systems after tensoring: [m.out, m.in, n.out, n.in]. Swap the middle
  // blocks to get [m.out, n.out, m.in, n.in].
  DimVector flat = m.flat_dims().concat(n.flat_dims());
  const int p = m.out_dims.count();
  const int q = m.in_dims.count();
  const int r = n.out_dims.count();
  const int s = n.in_dims.count();
  std::vector<int> perm;
  perm.reserve(static_cast<size_t>(p + q + r + s));
  for (int k = 0; k < p; ++k) perm.push_back(k);
  for (int k = 0; k < r; ++k) perm.push_back(p + q + k);
  for (int k = 0; k < q; ++k) perm.push_back(p + k);
  for (int k = 0; k < s; ++k) perm.push_back(p + q + r + k);
  ComplexMatrix swapped = reorder_systems(t, flat, perm);
  return ChoiMatrix(std::move(swapped), m.out_dims.concat(n.out_dims),
                    m.in_dims.concat(n.in_dims), m.normalized);
}

namespace {

ChoiCheck check_choi(const ChoiMatrix& m, double marginal_scale, double tol) {
  ChoiCheck result;
  if (!is_hermitian(m.matrix)) {
    result.ok = false;
    result.residual = max_abs(m.matrix - m.matrix.adjoint().eval());
    return result;
  }
  result.psd_margin = psd_margin(m.matrix);

  std::vector<int> out_indices(static_cast<size_t>(m.out_dims.count()));
  std::iota(out_indices.begin(), out_indices.end(), 0);
  ComplexMatrix marginal =
      partial_trace(m.matrix, m.flat_dims(), out_indices);
  const double marginal_dev = max_abs(
      marginal - marginal_scale * identity_matrix(m.in_total()));

  result.residual = std::max(marginal_dev, std::max(0.0, -result.psd_margin));
  result.ok = result.psd_margin >= -tol && marginal_dev <= tol;
  return result;
}

}  // namespace

ChoiCheck is_renormalized_choi(const ChoiMatrix& mu, double tol) {
  return check_choi(mu, 1.0 / static_cast<double>(mu.in_total()), tol);
}

ChoiCheck is_channel_choi(const ChoiMatrix& m, double tol) {
  const double scale =
      m.normalized ? 1.0 / static_cast<double>(m.in_total()) : 1.0;
  return check_choi(m, scale, tol);
}

ChoiMatrix state_as_choi(const ComplexMatrix& rho, const DimVector& dims) {
  if (rho.rows() != dims.total() || rho.cols() != dims.total()) {
    throw std::invalid_argument("state_as_choi: dimension mismatch");
  }
  // A preparation channel has a one-dimensional input, so plain and
  // renormalized scalings coincide.
  return ChoiMatrix(rho, dims, DimVector{1}, false);
}

KrausChannel identity_channel(const DimVector& dims) {
  return KrausChannel({identity_matrix(dims.total())}, dims, dims);
}

KrausChannel unitary_channel(const ComplexMatrix& u, const DimVector& dims) {
  if (u.rows() != dims.total() || u.cols() != dims.total()) {
    throw std::invalid_argument("unitary_channel: dimension mismatch");
  }
  return KrausChannel({u}, dims, dims);
}

KrausChannel completely_depolarizing_channel(const DimVector& in_dims,
                                             const DimVector& out_dims) {
  const int din = in_dims.total();
  const int dout = out_dims.total();
  std::vector<ComplexMatrix> ops;
  ops.reserve(static_cast<size_t>(din * dout));
  const double scale = 1.0 / std::sqrt(static_cast<double>(dout));
  for (int i = 0; i < dout; ++i) {
    for (int j = 0; j < din; ++j) {
      ComplexMatrix k = ComplexMatrix::Zero(dout, din);
      k(i, j) = scale;
      ops.push_back(std::move(k));
    }
  }
  return KrausChannel(std::move(ops), in_dims, out_dims);
}

namespace {

KrausChannel channel_from_isometry(const ComplexMatrix& v,
                                   const DimVector& in_dims,
                                   const DimVector& out_dims, int kraus_count) {
  const int din = in_dims.total();
  const int dout = out_dims.total();
  std::vector<ComplexMatrix> ops;
  ops.reserve(static_cast<size_t>(kraus_count));
  for (int k = 0; k < kraus_count; ++k) {
    ops.push_back(v.block(k * dout, 0, dout, din));
  }
  return KrausChannel(std::move(ops), in_dims, out_dims);
}

}  // namespace

KrausChannel random_channel(const DimVector& in_dims, const DimVector& out_dims,
                            int kraus_count, Rng& rng) {
  const int din = in_dims.total();
  const int dout = out_dims.total();
  if (kraus_count < 1 || kraus_count * dout < din) {
    throw std::invalid_argument(
        "random_channel: need kraus_count * d_out >= d_in");
  }
  ComplexMatrix g = random_ginibre(kraus_count * dout, din, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() *
                    ComplexMatrix::Identity(kraus_count * dout, din);
  return channel_from_isometry(q, in_dims, out_dims, kraus_count);
}

KrausChannel random_real_channel(const DimVector& in_dims,
                                 const DimVector& out_dims, int kraus_count,
                                 Rng& rng) {
  const int din = in_dims.total();
  const int dout = out_dims.total();
  if (kraus_count < 1 || kraus_count * dout < din) {
    throw std::invalid_argument(
        "random_real_channel: need kraus_count * d_out >= d_in");
  }
  RealMatrix g(kraus_count * dout, din);
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) {
      g(i, j) = rng.normal();
    }
  }
  Eigen::HouseholderQR<RealMatrix> qr(g);
  RealMatrix q =
      qr.householderQ() * RealMatrix::Identity(kraus_count * dout, din);
  return channel_from_isometry(q.cast<Complex>(), in_dims, out_dims,
                               kraus_count);
}

}  // namespace choical
