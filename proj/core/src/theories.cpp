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

#include "choical/theories.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <utility>

#include "choical/conic/program.hpp"
#include "choical/json_io.hpp"

namespace choical {

namespace {

void require_hermitian(const ComplexMatrix& rho, const char* op) {
  if (!is_hermitian(rho)) {
    throw std::invalid_argument(std::string(op) + ": input is not Hermitian");
  }
}

double max_imag(const ComplexMatrix& rho) {
  return rho.imag().cwiseAbs().maxCoeff();
}

std::vector<int> second_halves(const DimVector& dims) {
  std::vector<int> odd;
  for (int k = 1; k < dims.count(); k += 2) odd.push_back(k);
  return odd;
}

RealVector imag_coords(const ComplexMatrix& x) {
  const int s = static_cast<int>(x.rows());
  RealVector v(s * (s - 1) / 2);
  int idx = 0;
  for (int j = 0; j < s; ++j) {
    for (int k = j + 1; k < s; ++k) {
      v(idx++) = x(j, k).imag();
    }
  }
  return v;
}

RealVector real_entry_coords(const ComplexMatrix& x) {
  const int s = static_cast<int>(x.rows());
  RealVector v(s * (s + 1) / 2);
  int idx = 0;
  for (int j = 0; j < s; ++j) {
    for (int k = j; k < s; ++k) {
      v(idx++) = x(j, k).real();
    }
  }
  return v;
}

std::vector<double> random_simplex(int n, Rng& rng) {
  std::vector<double> w(static_cast<size_t>(n));
  double total = 0.0;
  for (double& wi : w) {
    wi = -std::log(std::max(1e-300, 1.0 - rng.uniform()));
    total += wi;
  }
  for (double& wi : w) wi /= total;
  return w;
}

// --- imaginarity ---

class ImaginarityTheory final : public FreeStateSet {
 public:
  std::string name() const override { return "imaginarity"; }

  bool supports(const DimVector& dims) const override {
    return dims.count() >= 1;
  }

  Membership membership(const ComplexMatrix& rho, const DimVector& dims,
                        double tol) const override {
    (void)dims;
    return imaginarity_membership(rho, tol);
  }

  ConeDescription cone(const DimVector& dims) const override {
    ConeDescription out;
    out.side = dims.total();
    ConeAtom psd;
    psd.kind = ConeAtom::Kind::Psd;  // identity map: X itself PSD
    psd.image_side = out.side;
    out.atoms.push_back(std::move(psd));
    ConeAtom real;
    real.kind = ConeAtom::Kind::Zero;
    real.image_length = out.side * (out.side - 1) / 2;
    real.vector_map = [](const ComplexMatrix& x) { return imag_coords(x); };
    out.atoms.push_back(std::move(real));
    return out;
  }

  ComplexMatrix sample_state(const DimVector& dims, Rng& rng) const override {
    return random_real_density_matrix(dims.total(), rng);
  }

  ChoiMatrix sample_channel(const DimVector& in_dims, const DimVector& out_dims,
                            Rng& rng) const override {
    const int k = in_dims.total() + 1;
    return kraus_to_choi(random_real_channel(in_dims, out_dims, k, rng))
        .renormalized();
  }
};

// --- unrestricted (all density matrices are free) ---

class AllStatesTheory final : public FreeStateSet {
 public:
  std::string name() const override { return "all"; }

  bool supports(const DimVector& dims) const override {
    return dims.count() >= 1;
  }

  Membership membership(const ComplexMatrix& rho, const DimVector& dims,
                        double tol) const override {
    (void)dims;
    (void)tol;
    Membership m;
    m.margin = psd_margin(rho);
    m.is_member = m.margin >= -tol;
    return m;
  }

  ConeDescription cone(const DimVector& dims) const override {
    ConeDescription out;
    out.side = dims.total();
    ConeAtom psd;
    psd.kind = ConeAtom::Kind::Psd;
    psd.image_side = out.side;
    out.atoms.push_back(std::move(psd));
    return out;
  }

  ComplexMatrix sample_state(const DimVector& dims, Rng& rng) const override {
    return random_density_matrix(dims.total(), rng);
  }

  ChoiMatrix sample_channel(const DimVector& in_dims, const DimVector& out_dims,
                            Rng& rng) const override {
    const int k = in_dims.total() + 1;
    return kraus_to_choi(random_channel(in_dims, out_dims, k, rng))
        .renormalized();
  }
};

// --- PPT / SEP ---

class PptTheory final : public FreeStateSet {
 public:
  explicit PptTheory(bool sep_exact_only)
      : sep_exact_only_(sep_exact_only) {}

  std::string name() const override { return sep_exact_only_ ? "sep" : "ppt"; }

  int system_unit() const override { return 2; }

  bool supports(const DimVector& dims) const override {
    if (dims.count() < 2 || dims.count() % 2 != 0) return false;
    if (!sep_exact_only_) return true;
    // Separability decided through the transpose criterion only where that
    // criterion is exact: a single pair with spatial product <= 6.
    return dims.count() == 2 && dims[0] * dims[1] <= 6;
  }

  Membership membership(const ComplexMatrix& rho, const DimVector& dims,
                        double tol) const override {
    if (!supports(dims)) {
      throw UnsupportedDimension(name() + ": unsupported dims " +
                                 dims.to_string());
    }
    return ppt_membership(rho, dims, second_halves(dims), tol);
  }

  ConeDescription cone(const DimVector& dims) const override {
    if (!supports(dims)) {
      throw UnsupportedDimension(name() + ": unsupported dims " +
                                 dims.to_string());
    }
    ConeDescription out;
    out.side = dims.total();
    ConeAtom psd;
    psd.kind = ConeAtom::Kind::Psd;
    psd.image_side = out.side;
    out.atoms.push_back(std::move(psd));
    ConeAtom transposed;
    transposed.kind = ConeAtom::Kind::Psd;
    transposed.image_side = out.side;
    const std::vector<int> group = second_halves(dims);
    transposed.matrix_map = [dims, group](const ComplexMatrix& x) {
      return partial_transpose(x, dims, group);
    };
    out.atoms.push_back(std::move(transposed));
    return out;
  }

  ComplexMatrix sample_state(const DimVector& dims, Rng& rng) const override {
    if (!supports(dims)) {
      throw UnsupportedDimension(name() + ": unsupported dims " +
                                 dims.to_string());
    }
    const std::vector<int> group = second_halves(dims);
    const int total = dims.total();
    for (int attempt = 0; attempt < 200; ++attempt) {
      ComplexMatrix rho = random_density_matrix(total, rng);
      if (ppt_membership(rho, dims, group, 0.0).is_member) return rho;
      if (attempt == 199) return restore_ppt(rho, dims, group);
    }
    throw std::logic_error("unreachable");
  }

  ChoiMatrix sample_channel(const DimVector& in_dims, const DimVector& out_dims,
                            Rng& rng) const override {
    const DimVector flat = out_dims.concat(in_dims);
    if (!supports(flat)) {
      throw UnsupportedDimension(name() + ": unsupported channel dims " +
                                 flat.to_string());
    }
    const std::vector<int> group = second_halves(flat);
    const int k = in_dims.total() * out_dims.total() / 2 + 1;

    const auto key = std::make_pair(in_dims.total(), out_dims.total());
    const bool skip_rejection = exhausted_.count(key) > 0;
    const int cap = skip_rejection ? 1 : kRejectionCap;

    ChoiMatrix mu = kraus_to_choi(random_channel(in_dims, out_dims, k, rng))
                        .renormalized();
    for (int attempt = 0; attempt < cap; ++attempt) {
      if (psd_margin(partial_transpose(mu.matrix, flat, group)) >= 0.0) {
        return mu;
      }
      if (attempt + 1 < cap) {
        mu = kraus_to_choi(random_channel(in_dims, out_dims, k, rng))
                 .renormalized();
      }
    }
    if (!skip_rejection) exhausted_.insert(key);
    // Mix with the completely depolarizing Choi (id / D, deep inside the
    // cone) at the minimal weight restoring a PSD partial transpose.
    ComplexMatrix fixed = restore_ppt(mu.matrix, flat, group);
    return ChoiMatrix(std::move(fixed), out_dims, in_dims, true);
  }

 private:
  static ComplexMatrix restore_ppt(const ComplexMatrix& rho,
                                   const DimVector& dims,
                                   const std::vector<int>& group) {
    const int total = dims.total();
    const double lam = psd_margin(partial_transpose(rho, dims, group));
    if (lam >= 0.0) return rho;
    // Eigenvalues of the mixed partial transpose are (1-w) lam_i + w / D,
    // linear in w, so the minimal restoring weight is available in closed
    // form; a small surplus keeps the sample strictly inside.
    const double d_inv = 1.0 / static_cast<double>(total);
    double w = (-lam) / (d_inv - lam);
    w = std::min(1.0, w + 1e-6);
    return (1.0 - w) * rho + w * identity_matrix(total) * d_inv;
  }

  bool sep_exact_only_;
  static constexpr int kRejectionCap = 10000;
  mutable std::set<std::pair<int, int>> exhausted_;
};

// --- nonnegative amplitudes (doubly nonnegative characterization, d <= 4) ---

class DnnTheory final : public FreeStateSet {
 public:
  std::string name() const override { return "dnn"; }

  bool supports(const DimVector& dims) const override {
    return dims.count() >= 1 && dims.total() <= 4;
  }

  Membership membership(const ComplexMatrix& rho, const DimVector& dims,
                        double tol) const override {
    (void)dims;
    return dnn_membership(rho, tol);
  }

  ConeDescription cone(const DimVector& dims) const override {
    if (!supports(dims)) {
      throw UnsupportedDimension("dnn: unsupported dims " + dims.to_string());
    }
    ConeDescription out;
    out.side = dims.total();
    const int side = out.side;
    ConeAtom psd;
    psd.kind = ConeAtom::Kind::Psd;
    psd.image_side = side;
    out.atoms.push_back(std::move(psd));
    ConeAtom real;
    real.kind = ConeAtom::Kind::Zero;
    real.image_length = side * (side - 1) / 2;
    real.vector_map = [](const ComplexMatrix& x) { return imag_coords(x); };
    out.atoms.push_back(std::move(real));
    ConeAtom nonneg;
    nonneg.kind = ConeAtom::Kind::NonNeg;
    nonneg.image_length = side * (side + 1) / 2;
    nonneg.vector_map = [](const ComplexMatrix& x) {
      return real_entry_coords(x);
    };
    out.atoms.push_back(std::move(nonneg));
    return out;
  }

  ComplexMatrix sample_state(const DimVector& dims, Rng& rng) const override {
    const int d = dims.total();
    ComplexMatrix rho = ComplexMatrix::Zero(d, d);
    const std::vector<double> weights = random_simplex(d + 1, rng);
    for (double w : weights) {
      RealVector psi(d);
      for (int i = 0; i < d; ++i) psi(i) = std::abs(rng.normal());
      psi.normalize();
      rho += w * (psi * psi.transpose()).cast<Complex>();
    }
    return rho;
  }

  ChoiMatrix sample_channel(const DimVector& in_dims, const DimVector& out_dims,
                            Rng& rng) const override {
    const DimVector flat = out_dims.concat(in_dims);
    if (!supports(flat)) {
      throw UnsupportedDimension("dnn: unsupported channel dims " +
                                 flat.to_string());
    }
    const int din = in_dims.total();
    const int dout = out_dims.total();

    // Mixture of channels whose Chois are entrywise-nonnegative real:
    // basis permutations, resets to nonnegative pure states, classical
    // stochastic maps, and (qubit case) amplitude damping.
    std::vector<KrausChannel> parts;
    if (din == dout) {
      std::vector<int> perm(static_cast<size_t>(din));
      std::iota(perm.begin(), perm.end(), 0);
      for (int i = din - 1; i > 0; --i) {
        std::swap(perm[static_cast<size_t>(i)],
                  perm[static_cast<size_t>(rng.uniform_int(i + 1))]);
      }
      ComplexMatrix u = ComplexMatrix::Zero(din, din);
      for (int j = 0; j < din; ++j) u(perm[static_cast<size_t>(j)], j) = 1.0;
      parts.push_back(unitary_channel(u, in_dims));
    }
    {
      RealVector psi(dout);
      for (int i = 0; i < dout; ++i) psi(i) = std::abs(rng.normal());
      psi.normalize();
      std::vector<ComplexMatrix> kraus;
      for (int j = 0; j < din; ++j) {
        ComplexMatrix k = ComplexMatrix::Zero(dout, din);
        k.col(j) = psi.cast<Complex>();
        kraus.push_back(std::move(k));
      }
      parts.emplace_back(std::move(kraus), in_dims, out_dims);
    }
    {
      RealMatrix t(dout, din);
      for (int j = 0; j < din; ++j) {
        std::vector<double> col = random_simplex(dout, rng);
        for (int i = 0; i < dout; ++i) t(i, j) = col[static_cast<size_t>(i)];
      }
      std::vector<ComplexMatrix> kraus;
      for (int i = 0; i < dout; ++i) {
        for (int j = 0; j < din; ++j) {
          ComplexMatrix k = ComplexMatrix::Zero(dout, din);
          k(i, j) = std::sqrt(t(i, j));
          kraus.push_back(std::move(k));
        }
      }
      parts.emplace_back(std::move(kraus), in_dims, out_dims);
    }
    if (din == 2 && dout == 2) {
      const double gamma = rng.uniform();
      ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
      k0(0, 0) = 1.0;
      k0(1, 1) = std::sqrt(1.0 - gamma);
      ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
      k1(0, 1) = std::sqrt(gamma);
      parts.emplace_back(std::vector<ComplexMatrix>{k0, k1}, in_dims, out_dims);
    }

    const std::vector<double> weights =
        random_simplex(static_cast<int>(parts.size()), rng);
    std::vector<ComplexMatrix> kraus;
    for (size_t i = 0; i < parts.size(); ++i) {
      for (const ComplexMatrix& k : parts[i].kraus_ops) {
        kraus.push_back(std::sqrt(weights[i]) * k);
      }
    }
    return kraus_to_choi(KrausChannel(std::move(kraus), in_dims, out_dims))
        .renormalized();
  }
};

// --- stabilizer polytope ---

class StabilizerTheory final : public FreeStateSet {
 public:
  std::string name() const override { return "stabilizer"; }

  bool supports(const DimVector& dims) const override {
    int total = dims.total();
    if (total != 2 && total != 4) return false;
    for (int d : dims.dims) {
      if (d != 1 && d != 2 && d != 4) return false;
    }
    return true;
  }

  Membership membership(const ComplexMatrix& rho, const DimVector& dims,
                        double tol) const override {
    if (!supports(dims)) {
      throw UnsupportedDimension("stabilizer: unsupported dims " +
                                 dims.to_string());
    }
    StabilizerMembership result =
        stabilizer_membership(rho, qubits(dims), tol);
    return {result.is_member, result.margin};
  }

  ConeDescription cone(const DimVector& dims) const override {
    if (!supports(dims)) {
      throw UnsupportedDimension("stabilizer: unsupported dims " +
                                 dims.to_string());
    }
    ConeDescription out;
    out.side = dims.total();
    out.is_vrep = true;
    out.extreme_points = enumerate_stabilizer_states(qubits(dims));
    return out;
  }

  ComplexMatrix sample_state(const DimVector& dims, Rng& rng) const override {
    const std::vector<ComplexMatrix> states =
        enumerate_stabilizer_states(qubits(dims));
    const int picks = 3;
    const std::vector<double> weights = random_simplex(picks, rng);
    ComplexMatrix rho =
        ComplexMatrix::Zero(dims.total(), dims.total());
    for (int i = 0; i < picks; ++i) {
      rho += weights[static_cast<size_t>(i)] *
             states[static_cast<size_t>(
                 rng.uniform_int(static_cast<int>(states.size())))];
    }
    return rho;
  }

  ChoiMatrix sample_channel(const DimVector& in_dims, const DimVector& out_dims,
                            Rng& rng) const override {
    if (in_dims.total() != out_dims.total() || !supports(in_dims)) {
      throw UnsupportedDimension("stabilizer: unsupported channel dims");
    }
    const int components = 1 + rng.uniform_int(3);
    const std::vector<double> weights = random_simplex(components, rng);
    std::vector<ComplexMatrix> kraus;
    for (int i = 0; i < components; ++i) {
      kraus.push_back(std::sqrt(weights[static_cast<size_t>(i)]) *
                      random_clifford(qubits(in_dims), rng));
    }
    return kraus_to_choi(KrausChannel(std::move(kraus), in_dims, out_dims))
        .renormalized();
  }

 private:
  static int qubits(const DimVector& dims) {
    return dims.total() == 2 ? 1 : 2;
  }

  static ComplexMatrix random_clifford(int n_qubits, Rng& rng) {
    // Random word in the generating gates; long enough to mix.
    std::vector<ComplexMatrix> gens;
    if (n_qubits == 1) {
      ComplexMatrix h(2, 2);
      const double is2 = 1.0 / std::sqrt(2.0);
      h << is2, is2, is2, -is2;
      ComplexMatrix s = ComplexMatrix::Zero(2, 2);
      s(0, 0) = 1.0;
      s(1, 1) = Complex(0, 1);
      gens = {h, s};
    } else {
      ComplexMatrix h(2, 2);
      const double is2 = 1.0 / std::sqrt(2.0);
      h << is2, is2, is2, -is2;
      ComplexMatrix s = ComplexMatrix::Zero(2, 2);
      s(0, 0) = 1.0;
      s(1, 1) = Complex(0, 1);
      const ComplexMatrix id2 = identity_matrix(2);
      ComplexMatrix cx = ComplexMatrix::Zero(4, 4);
      cx(0, 0) = cx(1, 1) = cx(2, 3) = cx(3, 2) = 1.0;
      ComplexMatrix xc = ComplexMatrix::Zero(4, 4);
      xc(0, 0) = xc(3, 1) = xc(2, 2) = xc(1, 3) = 1.0;
      gens = {tensor(h, id2), tensor(id2, h), tensor(s, id2),
              tensor(id2, s), cx, xc};
    }
    const int d = 1 << n_qubits;
    ComplexMatrix u = identity_matrix(d);
    for (int step = 0; step < 20; ++step) {
      u = gens[static_cast<size_t>(
              rng.uniform_int(static_cast<int>(gens.size())))] *
          u;
    }
    return u;
  }
};

// --- G-invariant states ---

class GInvariantTheory final : public FreeStateSet {
 public:
  GInvariantTheory(GroupRepresentation rep, std::string name,
                   bool negative_fixture)
      : rep_(std::move(rep)),
        name_(std::move(name)),
        negative_fixture_(negative_fixture) {}

  std::string name() const override { return name_; }

  bool supports(const DimVector& dims) const override {
    return rep_.supports(dims);
  }

  Membership membership(const ComplexMatrix& rho, const DimVector& dims,
                        double tol) const override {
    GInvariance inv = ginvariant_membership(rho, rep_, dims, tol);
    return {inv.is_member, inv.margin};
  }

  ConeDescription cone(const DimVector& dims) const override {
    if (!supports(dims)) {
      throw UnsupportedDimension(name_ + ": unsupported dims " +
                                 dims.to_string());
    }
    ConeDescription out;
    out.side = dims.total();
    ConeAtom psd;
    psd.kind = ConeAtom::Kind::Psd;
    psd.image_side = out.side;
    out.atoms.push_back(std::move(psd));
    ConeAtom invariant;
    invariant.kind = ConeAtom::Kind::Zero;
    invariant.image_length = conic_coord_dim(out.side);
    GroupRepresentation rep = rep_;
    invariant.vector_map = [rep, dims](const ComplexMatrix& x) {
      return herm_diff_coords(x, twirl(x, rep, dims));
    };
    out.atoms.push_back(std::move(invariant));
    return out;
  }

  ComplexMatrix sample_state(const DimVector& dims, Rng& rng) const override {
    return twirl(random_density_matrix(dims.total(), rng), rep_, dims);
  }

  ChoiMatrix sample_channel(const DimVector& in_dims, const DimVector& out_dims,
                            Rng& rng) const override {
    // Covariant twirl of a random channel: average U_g^out-dag . K . U_g^in.
    const KrausChannel raw =
        random_channel(in_dims, out_dims, in_dims.total() + 1, rng);
    const std::vector<ComplexMatrix> u_in = rep_.elements(in_dims);
    const std::vector<ComplexMatrix> u_out = rep_.elements(out_dims);
    const double scale = 1.0 / std::sqrt(static_cast<double>(u_in.size()));
    std::vector<ComplexMatrix> kraus;
    for (size_t g = 0; g < u_in.size(); ++g) {
      for (const ComplexMatrix& k : raw.kraus_ops) {
        kraus.push_back(scale * u_out[g].adjoint() * k * u_in[g]);
      }
    }
    return kraus_to_choi(KrausChannel(std::move(kraus), in_dims, out_dims))
        .renormalized();
  }

  bool is_negative_fixture() const override { return negative_fixture_; }

  const GroupRepresentation* representation() const override { return &rep_; }

 private:
  static int conic_coord_dim(int side) { return side * side; }

  static RealVector herm_diff_coords(const ComplexMatrix& x,
                                     const ComplexMatrix& tw) {
    return conic::herm_to_coords(hermitize(x - tw));
  }

  GroupRepresentation rep_;
  std::string name_;
  bool negative_fixture_;
};

// --- athermality-like fixture: exactly one free state per system ---

class AthermalFixture final : public FreeStateSet {
 public:
  std::string name() const override { return "athermal-fixture"; }

  bool supports(const DimVector& dims) const override {
    return dims.count() >= 1;
  }

  Membership membership(const ComplexMatrix& rho, const DimVector& dims,
                        double tol) const override {
    require_hermitian(rho, "athermal-fixture");
    const double deviation = max_abs(rho - gibbs(dims));
    return {deviation <= tol, -deviation};
  }

  ConeDescription cone(const DimVector& dims) const override {
    ConeDescription out;
    out.side = dims.total();
    out.is_vrep = true;
    out.extreme_points = {gibbs(dims)};
    return out;
  }

  ComplexMatrix sample_state(const DimVector& dims, Rng& rng) const override {
    (void)rng;
    return gibbs(dims);
  }

  ChoiMatrix sample_channel(const DimVector& in_dims, const DimVector& out_dims,
                            Rng& rng) const override {
    (void)rng;
    // Replace-with-Gibbs: the canonical resource-non-generating channel here.
    // Its renormalized Choi gamma (x) id/d is *not* a free state, which is
    // what makes this family a negative fixture.
    const ComplexMatrix g = gibbs(out_dims);
    std::vector<ComplexMatrix> kraus;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(g);
    for (int i = 0; i < out_dims.total(); ++i) {
      for (int j = 0; j < in_dims.total(); ++j) {
        ComplexMatrix k = ComplexMatrix::Zero(out_dims.total(), in_dims.total());
        k.col(j) = std::sqrt(std::max(0.0, eig.eigenvalues()(i))) *
                   eig.eigenvectors().col(i);
        kraus.push_back(std::move(k));
      }
    }
    return kraus_to_choi(KrausChannel(std::move(kraus), in_dims, out_dims))
        .renormalized();
  }

  bool is_negative_fixture() const override { return true; }

 private:
  static ComplexMatrix gibbs(const DimVector& dims) {
    ComplexMatrix g = ComplexMatrix::Identity(1, 1);
    for (int d : dims.dims) {
      ComplexMatrix local = ComplexMatrix::Zero(d, d);
      double z = 0.0;
      for (int j = 0; j < d; ++j) z += std::exp(-static_cast<double>(j));
      for (int j = 0; j < d; ++j) {
        local(j, j) = std::exp(-static_cast<double>(j)) / z;
      }
      g = tensor(g, local);
    }
    return g;
  }
};

}  // namespace

ConeDescription FreeStateSet::cone(const DimVector& dims) const {
  throw UnsupportedDimension(name() + ": no conic description for dims " +
                             dims.to_string());
}

Membership imaginarity_membership(const ComplexMatrix& rho, double tol) {
  require_hermitian(rho, "imaginarity_membership");
  const double deviation = max_imag(rho);
  return {deviation <= tol, -deviation};
}

Membership ppt_membership(const ComplexMatrix& rho, const DimVector& dims,
                          const std::vector<int>& transposed_group,
                          double tol) {
  const double direct = psd_margin(rho);
  const double transposed =
      psd_margin(partial_transpose(rho, dims, transposed_group));
  const double margin = std::min(direct, transposed);
  return {margin >= -tol, margin};
}

Membership dnn_membership(const ComplexMatrix& rho, double tol) {
  if (rho.rows() > 4) {
    throw UnsupportedDimension(
        "dnn_membership: exact only up to dimension 4, got " +
        std::to_string(rho.rows()));
  }
  require_hermitian(rho, "dnn_membership");
  const double psd = psd_margin(rho);
  const double min_entry = rho.real().minCoeff();
  const double imag = -max_imag(rho);
  const double margin = std::min({psd, min_entry, imag});
  return {margin >= -tol, margin};
}

std::unique_ptr<FreeStateSet> make_ginvariant_theory(GroupRepresentation rep,
                                                     std::string name) {
  bool negative = false;
  // The family closes into a channel theory iff the representation is real;
  // probe the dimensions the representation reports.
  for (int d = 1; d <= 8; ++d) {
    if (rep.supports(d) && !representation_is_real_in_choi_basis(rep, d)) {
      negative = true;
      break;
    }
  }
  return std::make_unique<GInvariantTheory>(std::move(rep), std::move(name),
                                            negative);
}

std::unique_ptr<FreeStateSet> make_theory(const std::string& name) {
  if (name == "imaginarity") return std::make_unique<ImaginarityTheory>();
  if (name == "all") return std::make_unique<AllStatesTheory>();
  if (name == "ppt") return std::make_unique<PptTheory>(false);
  if (name == "sep") return std::make_unique<PptTheory>(true);
  if (name == "dnn") return std::make_unique<DnnTheory>();
  if (name == "stabilizer") return std::make_unique<StabilizerTheory>();
  if (name == "z2-parity") {
    return std::make_unique<GInvariantTheory>(GroupRepresentation::z2_parity(),
                                              "z2-parity", false);
  }
  if (name == "z4-fixture") {
    return std::make_unique<GInvariantTheory>(GroupRepresentation::z4_phase(),
                                              "z4-fixture", true);
  }
  if (name == "athermal-fixture") return std::make_unique<AthermalFixture>();
  if (name.rfind("ginv:", 0) == 0) {
    const std::string path = name.substr(5);
    Json rep_json;
    {
      std::ifstream in(path);
      if (!in) throw UnknownTheory(name + " (cannot open representation file)");
      try {
        in >> rep_json;
      } catch (const nlohmann::json::exception& e) {
        throw UnknownTheory(name + " (invalid JSON: " + e.what() + ")");
      }
    }
    const Json& elements_json =
        rep_json.is_array() ? rep_json : rep_json.value("elements", Json());
    if (!elements_json.is_array() || elements_json.empty()) {
      throw UnknownTheory(name + " (expected a list of unitary matrices)");
    }
    std::vector<ComplexMatrix> elements;
    for (const Json& m : elements_json) {
      elements.push_back(matrix_from_json(m));
    }
    const int dim = static_cast<int>(elements.front().rows());
    std::map<int, std::vector<ComplexMatrix>> tables;
    tables[dim] = std::move(elements);
    return make_ginvariant_theory(
        GroupRepresentation::from_tables(std::move(tables), name), name);
  }
  throw UnknownTheory(name);
}

std::vector<std::string> builtin_theories() {
  return {"imaginarity", "all",       "ppt",        "sep",
          "dnn",         "stabilizer", "z2-parity",  "z4-fixture",
          "athermal-fixture"};
}

}  // namespace choical
