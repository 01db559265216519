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

#include "choical/verify.hpp"

#include <numeric>

#include "choical/group.hpp"

namespace choical {

namespace {

Json membership_payload(const ComplexMatrix& state, const DimVector& dims,
                        double margin) {
  Json j;
  j["state"] = matrix_to_json(state);
  j["dims"] = dims.dims;
  j["margin"] = margin;
  return j;
}

VerificationReport base_report(const FreeStateSet& theory,
                               const std::string& condition,
                               const DimVector& dims, double tol,
                               std::uint64_t seed) {
  VerificationReport r;
  r.theory = theory.name();
  r.condition = condition;
  r.dims = dims.to_string();
  r.tolerance = tol;
  r.seed = seed;
  return r;
}

// Swap of two equally sized logical groups at the flat-subsystem level.
std::vector<int> group_swap_permutation(int flat_count) {
  std::vector<int> perm;
  const int half = flat_count / 2;
  for (int k = 0; k < half; ++k) perm.push_back(half + k);
  for (int k = 0; k < half; ++k) perm.push_back(k);
  return perm;
}

}  // namespace

Json report_to_json(const VerificationReport& report) {
  Json j;
  j["theory"] = report.theory;
  j["condition"] = report.condition;
  j["dims"] = report.dims;
  j["samples"] = report.samples;
  j["verdict"] = report.verdict;
  j["expected_failure"] = report.expected_failure;
  j["tolerance"] = report.tolerance;
  j["seed"] = report.seed;
  j["details"] = report.details;
  j["counterexample"] = report.counterexample;
  return j;
}

VerificationReport check_condition_one(const FreeStateSet& theory,
                                       const DimVector& system_dims,
                                       double tol) {
  VerificationReport r =
      base_report(theory, "condition-one", system_dims, tol, 0);
  const DimVector composite = system_dims.concat(system_dims);
  if (!theory.supports(composite)) {
    r.verdict = "unsupported";
    return r;
  }

  const int d = system_dims.total();
  const ComplexMatrix mu = renormalized_choi_state(d).matrix;
  const Membership m = theory.membership(mu, composite, tol);

  r.samples = 1;
  r.verdict = m.is_member ? "pass" : "fail";
  r.expected_failure = !m.is_member && theory.is_negative_fixture();
  Json details;
  details["margin"] = m.margin;
  if (const GroupRepresentation* rep = theory.representation()) {
    details["representation_real"] =
        representation_is_real_in_choi_basis(*rep, d);
  }
  r.details = std::move(details);
  if (!m.is_member) {
    r.counterexample = membership_payload(mu, composite, m.margin);
  }
  return r;
}

VerificationReport check_condition_two(const FreeStateSet& theory,
                                       const DimVector& in_dims,
                                       const DimVector& out_dims,
                                       int n_samples, std::uint64_t seed,
                                       double tol) {
  VerificationReport r = base_report(theory, "condition-two",
                                     in_dims.concat(out_dims), tol, seed);
  const DimVector choi_dims = out_dims.concat(in_dims);
  if (!theory.supports(in_dims) || !theory.supports(out_dims) ||
      !theory.supports(choi_dims)) {
    r.verdict = "unsupported";
    return r;
  }

  Rng rng(seed);
  const double d_in = static_cast<double>(in_dims.total());
  for (int i = 0; i < n_samples; ++i) {
    const ChoiMatrix mu = theory.sample_channel(in_dims, out_dims, rng);
    const ComplexMatrix rho = theory.sample_state(in_dims, rng);

    const ChoiCheck choi_ok = is_renormalized_choi(mu, 1e-6);
    const Membership mu_free = theory.membership(mu.matrix, choi_dims, tol);
    if (!choi_ok.ok || !mu_free.is_member) {
      r.samples = i + 1;
      r.verdict = "fail";
      Json ce;
      ce["kind"] = "sampler-produced-invalid-channel";
      ce["mu"] = choi_to_json(mu);
      ce["choi_residual"] = choi_ok.residual;
      ce["membership_margin"] = mu_free.margin;
      ce["sample_index"] = i;
      r.counterexample = std::move(ce);
      return r;
    }

    const ComplexMatrix output =
        d_in * link_product(mu, state_as_choi(rho, in_dims)).matrix;
    const Membership m = theory.membership(output, out_dims, tol);
    if (!m.is_member) {
      r.samples = i + 1;
      r.verdict = "fail";
      Json ce;
      ce["kind"] = "link-product-left-free-set";
      ce["mu"] = choi_to_json(mu);
      ce["rho"] = matrix_to_json(rho);
      ce["output"] = matrix_to_json(output);
      ce["margin"] = m.margin;
      ce["sample_index"] = i;
      r.counterexample = std::move(ce);
      return r;
    }
  }
  r.samples = n_samples;
  r.verdict = "pass";
  return r;
}

VerificationReport check_minimal_closure(const FreeStateSet& theory,
                                         const DimVector& system_dims,
                                         int n_samples, std::uint64_t seed,
                                         double tol) {
  VerificationReport r =
      base_report(theory, "minimal-closure", system_dims, tol, seed);
  const DimVector composite = system_dims.concat(system_dims);
  if (!theory.supports(system_dims) || !theory.supports(composite)) {
    r.verdict = "unsupported";
    return r;
  }

  Rng rng(seed);
  const int flat_count = composite.count();
  const std::vector<int> swap_perm = group_swap_permutation(flat_count);
  std::vector<int> first_block(static_cast<size_t>(system_dims.count()));
  std::iota(first_block.begin(), first_block.end(), 0);
  std::vector<int> second_block(static_cast<size_t>(system_dims.count()));
  std::iota(second_block.begin(), second_block.end(), system_dims.count());

  auto fail = [&](int i, const char* op, const ComplexMatrix& state,
                  const DimVector& dims, double margin) {
    r.samples = i + 1;
    r.verdict = "fail";
    Json ce = membership_payload(state, dims, margin);
    ce["operation"] = op;
    ce["sample_index"] = i;
    r.counterexample = std::move(ce);
    return r;
  };

  for (int i = 0; i < n_samples; ++i) {
    const ComplexMatrix a = theory.sample_state(system_dims, rng);
    const ComplexMatrix b = theory.sample_state(system_dims, rng);
    const ComplexMatrix joint = tensor(a, b);

    Membership m = theory.membership(joint, composite, tol);
    if (!m.is_member) return fail(i, "tensor", joint, composite, m.margin);

    const ComplexMatrix traced_second =
        partial_trace(joint, composite, second_block);
    m = theory.membership(traced_second, system_dims, tol);
    if (!m.is_member) {
      return fail(i, "partial-trace", traced_second, system_dims, m.margin);
    }
    const ComplexMatrix traced_first =
        partial_trace(joint, composite, first_block);
    m = theory.membership(traced_first, system_dims, tol);
    if (!m.is_member) {
      return fail(i, "partial-trace", traced_first, system_dims, m.margin);
    }

    const ComplexMatrix swapped = reorder_systems(joint, composite, swap_perm);
    m = theory.membership(swapped, composite, tol);
    if (!m.is_member) return fail(i, "system-swap", swapped, composite, m.margin);
  }
  r.samples = n_samples;
  r.verdict = "pass";
  return r;
}

VerificationReport check_crng_equivalence(const FreeStateSet& theory,
                                          const ChoiMatrix& channel,
                                          int n_probe, std::uint64_t seed,
                                          double tol) {
  const ChoiCheck valid = is_renormalized_choi(channel, 1e-6);
  if (!channel.normalized || !valid.ok) {
    throw std::invalid_argument(
        "check_crng_equivalence: input is not a renormalized channel Choi");
  }

  const DimVector in_dims = channel.in_dims;
  const DimVector out_dims = channel.out_dims;
  const DimVector choi_dims = channel.flat_dims();
  const DimVector probe_dims = in_dims.concat(in_dims);
  const DimVector output_dims = out_dims.concat(in_dims);

  VerificationReport r =
      base_report(theory, "crng-equivalence", choi_dims, tol, seed);
  if (!theory.supports(choi_dims) || !theory.supports(probe_dims) ||
      !theory.supports(output_dims)) {
    r.verdict = "unsupported";
    return r;
  }

  const Membership cd = theory.membership(channel.matrix, choi_dims, tol);

  // Extended channel M (x) id acting on (A, R) with R a copy of A.
  const ChoiMatrix id_ref(choi_state(in_dims.total()).matrix, in_dims, in_dims,
                          false);
  const ChoiMatrix extended =
      swap_tensor_product(channel.unnormalized(), id_ref);

  Rng rng(seed);
  bool any_violation = false;
  Json violation;
  int probes_run = 0;
  for (int i = 0; i <= n_probe; ++i) {
    // Probe 0 is always the renormalized Choi state: it reproduces the
    // channel's own Choi, so a non-member Choi is witnessed deterministically.
    const ComplexMatrix probe =
        (i == 0) ? renormalized_choi_state(in_dims.total()).matrix
                 : theory.sample_state(probe_dims, rng);
    const ComplexMatrix image = apply_channel(extended, probe);
    const Membership m = theory.membership(image, output_dims, tol);
    ++probes_run;
    if (!m.is_member) {
      any_violation = true;
      violation = membership_payload(image, output_dims, m.margin);
      violation["probe_index"] = i;
      violation["probe"] = matrix_to_json(probe);
      break;
    }
  }

  r.samples = probes_run;
  Json details;
  details["choi_member"] = cd.is_member;
  details["choi_margin"] = cd.margin;
  details["violation_found"] = any_violation;
  r.details = std::move(details);

  const bool coherent = cd.is_member ? !any_violation : any_violation;
  r.verdict = coherent ? "pass" : "fail";
  if (!coherent) {
    Json ce;
    ce["kind"] = cd.is_member ? "free-choi-but-resource-generated"
                              : "resource-choi-with-no-witness";
    ce["channel"] = choi_to_json(channel);
    if (any_violation) ce["violation"] = violation;
    r.counterexample = std::move(ce);
  }
  return r;
}

std::vector<VerificationReport> run_full_suite(
    const FreeStateSet& theory, const std::vector<DimVector>& dims_list,
    std::uint64_t seed, int n_samples, double tol) {
  std::vector<VerificationReport> reports;
  std::uint64_t salt = 0;
  for (const DimVector& dims : dims_list) {
    reports.push_back(check_condition_one(theory, dims, tol));
    if (theory.is_negative_fixture()) {
      continue;  // fixture samplers are not valid free-channel sources
    }
    reports.push_back(check_condition_two(theory, dims, dims, n_samples,
                                          seed + 1000003 * (salt + 1), tol));
    reports.push_back(check_minimal_closure(theory, dims, n_samples,
                                            seed + 1000003 * (salt + 2), tol));

    // Spot-check the equivalence on a free-by-construction channel and on a
    // generic random channel.
    const DimVector composite = dims.concat(dims);
    if (theory.supports(composite)) {
      Rng rng(seed + 1000003 * (salt + 3));
      const ChoiMatrix free_channel = theory.sample_channel(dims, dims, rng);
      reports.push_back(check_crng_equivalence(
          theory, free_channel, 20, seed + 1000003 * (salt + 4), tol));
      const ChoiMatrix generic =
          kraus_to_choi(random_channel(dims, dims, 2, rng)).renormalized();
      reports.push_back(check_crng_equivalence(
          theory, generic, 20, seed + 1000003 * (salt + 5), tol));
    }
    salt += 8;
  }
  return reports;
}

bool suite_passed(const std::vector<VerificationReport>& reports) {
  for (const VerificationReport& r : reports) {
    if (!r.acceptable()) return false;
  }
  return true;
}

}  // namespace choical
