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

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "choical/conic/builders.hpp"
#include "choical/json_io.hpp"
#include "choical/theories.hpp"
#include "choical/verify.hpp"

namespace {

using namespace choical;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitConfig = 3;
constexpr int kExitSolver = 4;

// All numeric output carries 12 significant digits; human mode flushes
// values below 1e-10 to zero, JSON keeps them raw.
std::string format_value(double v, bool human) {
  if (human && std::abs(v) < 1e-10) return "0";
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string format_matrix(const ComplexMatrix& m, bool human) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << "  [";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) os << ", ";
      const Complex z = m(i, j);
      os << format_value(z.real(), human);
      if (std::abs(z.imag()) >= (human ? 1e-10 : 0.0)) {
        os << (z.imag() >= 0 ? "+" : "") << format_value(z.imag(), human)
           << "i";
      }
    }
    os << "]\n";
  }
  return os.str();
}

DimVector parse_dims(const std::string& text) {
  std::vector<int> dims;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    dims.push_back(std::stoi(part));
  }
  return DimVector(dims);
}

double default_tolerance() {
  if (const char* env = std::getenv("CHOICAL_TOL")) {
    try {
      return std::stod(env);
    } catch (...) {
      // fall through to the builtin default
    }
  }
  return kDefaultMembershipTol;
}

struct QuantOptions {
  std::string theory;
  std::string state_path;
  std::string choi_path;
  std::string tau_path;
  std::string target_path;
  std::string dims_a_text;
  std::string dims_b_text;
  std::string certificates_path;
  double tol = default_tolerance();
  bool json = false;
  int max_iter = 100;
  double gap_tol = 1e-7;
};

conic::SolveOptions solver_options(const QuantOptions& q) {
  conic::SolveOptions opts;
  opts.max_iter = q.max_iter;
  opts.gap_tol = q.gap_tol;
  return opts;
}

DimVector dims_or_default(const std::string& text, int total) {
  if (!text.empty()) {
    DimVector dims = parse_dims(text);
    if (dims.total() != total) {
      throw std::invalid_argument("dims " + dims.to_string() +
                                  " do not match matrix side " +
                                  std::to_string(total));
    }
    return dims;
  }
  return DimVector{total};
}

void emit_solution_certificates(const std::string& path,
                                const conic::ConicProgram& program,
                                const conic::Solution& sol) {
  Json j;
  j["program"] = program.name;
  j["status"] = conic::to_string(sol.status);
  j["primal_value"] = sol.primal_value;
  j["dual_value"] = sol.dual_value;
  j["gap"] = sol.gap;
  j["iterations"] = sol.iterations;
  Json primal = Json::array();
  for (size_t i = 0; i < sol.primal_blocks.size(); ++i) {
    Json block;
    block["label"] = program.vars[i].label;
    block["coords"] = std::vector<double>(
        sol.primal_blocks[i].data(),
        sol.primal_blocks[i].data() + sol.primal_blocks[i].size());
    primal.push_back(std::move(block));
  }
  j["primal_blocks"] = std::move(primal);
  Json dual = Json::array();
  for (size_t i = 0; i < sol.dual_blocks.size(); ++i) {
    Json block;
    block["label"] = program.constraints[i].label;
    block["coords"] = std::vector<double>(
        sol.dual_blocks[i].data(),
        sol.dual_blocks[i].data() + sol.dual_blocks[i].size());
    dual.push_back(std::move(block));
  }
  j["dual_blocks"] = std::move(dual);
  write_json_file(path, j);
}

int run_choi_inspect(const std::string& path,
                     const std::vector<std::string>& dims_candidates,
                     bool json_mode) {
  ComplexMatrix m = read_matrix_file(path);
  if (m.rows() != m.cols()) {
    throw ParseError("choi inspect: matrix must be square");
  }
  const int side = static_cast<int>(m.rows());

  std::vector<std::pair<int, int>> splits;
  if (dims_candidates.empty()) {
    for (int d_first = 1; d_first <= side; ++d_first) {
      if (side % d_first == 0) splits.push_back({d_first, side / d_first});
    }
  } else {
    for (const std::string& text : dims_candidates) {
      DimVector dims = parse_dims(text);
      if (dims.count() != 2 || dims.total() != side) {
        throw std::invalid_argument("candidate split " + text +
                                    " does not match matrix side " +
                                    std::to_string(side));
      }
      splits.push_back({dims[0], dims[1]});
    }
  }

  Json out;
  out["trace"] = m.trace().real();
  out["side"] = side;
  Json readings = Json::array();

  std::ostringstream human;
  human << "matrix side " << side << ", trace "
        << format_value(m.trace().real(), true) << "\n";

  for (const auto& [d_first, d_second] : splits) {
    const DimVector flat{d_first, d_second};
    const ComplexMatrix marg_second = partial_trace(m, flat, {0});
    const ComplexMatrix marg_first = partial_trace(m, flat, {1});
    const double dev_second =
        max_abs(marg_second - identity_matrix(d_second));
    const double dev_first = max_abs(marg_first - identity_matrix(d_first));
    const bool first_as_output_valid = dev_second <= 1e-8;
    const bool second_as_output_valid = dev_first <= 1e-8;
    const bool inconclusive = first_as_output_valid && second_as_output_valid;

    Json entry;
    entry["split"] = {d_first, d_second};
    entry["marginal_dev_keeping_second"] = dev_second;
    entry["marginal_dev_keeping_first"] = dev_first;
    entry["inconclusive"] = inconclusive;

    human << "split " << d_first << ":" << d_second << "\n";
    if (inconclusive) {
      human << "  both marginals identity: inconclusive\n";
    }

    if (first_as_output_valid) {
      // Reading with the first factor as the channel output.
      ChoiMatrix as_choi(m, DimVector{d_first}, DimVector{d_second}, false);
      const ComplexMatrix image =
          apply_channel(as_choi, basis_projector(d_second, 0));
      entry["image_of_ground_state_output_first"] = matrix_to_json(image);
      human << "  output=first factor, image of |0><0|:\n"
            << format_matrix(image, true);
    }
    if (second_as_output_valid) {
      // Alternative convention: identity tensored on the left; reach it by
      // an explicit reorder, never by reinterpreting the stored matrix.
      const ComplexMatrix swapped = reorder_systems(m, flat, {1, 0});
      ChoiMatrix as_choi(swapped, DimVector{d_second}, DimVector{d_first},
                         false);
      const ComplexMatrix image =
          apply_channel(as_choi, basis_projector(d_first, 0));
      entry["image_of_ground_state_output_second"] = matrix_to_json(image);
      human << "  output=second factor, image of |0><0|:\n"
            << format_matrix(image, true);
    }
    readings.push_back(std::move(entry));
  }
  out["readings"] = std::move(readings);

  if (json_mode) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << human.str();
  }
  return kExitOk;
}

int run_verify(const std::string& theory_name,
               const std::vector<std::string>& dims_texts, int samples,
               std::uint64_t seed, double tol, bool json_mode) {
  std::unique_ptr<FreeStateSet> theory = make_theory(theory_name);

  std::vector<DimVector> dims_list;
  if (dims_texts.empty()) {
    dims_list.push_back(theory->system_unit() == 2 ? DimVector{2, 2}
                                                   : DimVector{2});
  } else {
    for (const std::string& text : dims_texts) {
      dims_list.push_back(parse_dims(text));
    }
  }

  const std::vector<VerificationReport> reports =
      run_full_suite(*theory, dims_list, seed, samples, tol);
  const bool ok = suite_passed(reports);

  if (json_mode) {
    Json out;
    out["theory"] = theory_name;
    out["seed"] = seed;
    out["samples"] = samples;
    out["tolerance"] = tol;
    out["passed"] = ok;
    Json items = Json::array();
    for (const VerificationReport& r : reports) {
      items.push_back(report_to_json(r));
    }
    out["reports"] = std::move(items);
    std::cout << out.dump(2) << "\n";
  } else {
    for (const VerificationReport& r : reports) {
      std::cout << (r.passed() ? "PASS"
                  : r.verdict == "unsupported"
                      ? "SKIP"
                      : (r.expected_failure ? "FAIL (expected)" : "FAIL"))
                << "  " << r.theory << "  " << r.condition << "  dims "
                << r.dims << "  samples " << r.samples << "\n";
    }
    std::cout << (ok ? "suite passed" : "suite FAILED") << "  (seed " << seed
              << ", tol " << format_value(tol, true) << ")\n";
  }
  return ok ? kExitOk : 1;
}

void print_quant_result(const std::string& quantity, double value,
                        const conic::Solution& sol, const QuantOptions& q,
                        const Json& extras = Json(nullptr)) {
  if (q.json) {
    Json out;
    out["quantity"] = quantity;
    out["theory"] = q.theory;
    out["value"] = value;
    out["status"] = conic::to_string(sol.status);
    out["primal_value"] = sol.primal_value;
    out["dual_value"] = sol.dual_value;
    out["gap"] = sol.gap;
    out["iterations"] = sol.iterations;
    out["tolerance"] = q.tol;
    out["gap_tol"] = q.gap_tol;
    if (!extras.is_null()) out["details"] = extras;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << quantity << " = " << format_value(value, true) << "  ("
              << q.theory << ", status " << conic::to_string(sol.status)
              << ", gap " << format_value(sol.gap, true) << ")\n";
  }
}

int run_quant(const std::string& which, const QuantOptions& q) {
  std::unique_ptr<FreeStateSet> theory = make_theory(q.theory);
  const conic::SolveOptions opts = solver_options(q);

  if (which == "dmax-state") {
    ComplexMatrix rho = read_matrix_file(q.state_path);
    DimVector dims = dims_or_default(q.dims_a_text,
                                     static_cast<int>(rho.rows()));
    conic::ConicProgram program = conic::build_dmax_state(*theory, rho, dims);
    conic::QuantifierResult result =
        conic::dmax_state(*theory, rho, dims, opts);
    if (!q.certificates_path.empty()) {
      emit_solution_certificates(q.certificates_path, program,
                                 result.solution);
    }
    print_quant_result("dmax-state", result.value, result.solution, q);
    return kExitOk;
  }
  if (which == "dmax-channel") {
    ChoiMatrix mu = read_choi_file(q.choi_path);
    conic::ConicProgram program = conic::build_dmax_channel(*theory, mu);
    conic::QuantifierResult result = conic::dmax_channel(*theory, mu, opts);
    if (!q.certificates_path.empty()) {
      emit_solution_certificates(q.certificates_path, program,
                                 result.solution);
    }
    print_quant_result("dmax-channel", result.value, result.solution, q);
    return kExitOk;
  }
  if (which == "monotone") {
    ComplexMatrix tau = read_matrix_file(q.tau_path);
    ComplexMatrix rho = read_matrix_file(q.state_path);
    DimVector dims_b =
        dims_or_default(q.dims_b_text, static_cast<int>(tau.rows()));
    DimVector dims_a =
        dims_or_default(q.dims_a_text, static_cast<int>(rho.rows()));
    conic::QuantifierResult result =
        conic::monotone_value(*theory, tau, dims_b, rho, dims_a, opts);

    // The cone-shaped program (no normalization slice) has a trivial dual:
    // report its verdict alongside the value.
    conic::ConicProgram cone_program =
        conic::build_monotone(*theory, tau, dims_b, rho, dims_a);
    conic::Solution cone_sol = conic::solve(cone_program, opts);
    Json extras;
    extras["cone_program_status"] = conic::to_string(cone_sol.status);
    extras["dual_infeasible"] =
        cone_sol.status == conic::SolveStatus::Unbounded;
    print_quant_result("monotone", result.value, result.solution, q, extras);
    return kExitOk;
  }
  if (which == "convert-distance") {
    ComplexMatrix rho = read_matrix_file(q.state_path);
    ComplexMatrix sigma = read_matrix_file(q.target_path);
    DimVector dims_a =
        dims_or_default(q.dims_a_text, static_cast<int>(rho.rows()));
    DimVector dims_b =
        dims_or_default(q.dims_b_text, static_cast<int>(sigma.rows()));
    conic::ConversionResult result =
        conic::conversion_distance(*theory, rho, dims_a, sigma, dims_b, opts);
    if (!q.certificates_path.empty()) {
      write_json_file(q.certificates_path, choi_to_json(result.witness));
    }
    print_quant_result("convert-distance", result.distance, result.solution,
                       q);
    return kExitOk;
  }
  if (which == "convertible") {
    ComplexMatrix rho = read_matrix_file(q.state_path);
    ComplexMatrix sigma = read_matrix_file(q.target_path);
    DimVector dims_a =
        dims_or_default(q.dims_a_text, static_cast<int>(rho.rows()));
    DimVector dims_b =
        dims_or_default(q.dims_b_text, static_cast<int>(sigma.rows()));
    conic::ConvertibleResult result = conic::convertible(
        *theory, rho, dims_a, sigma, dims_b, q.tol, solver_options(q));
    if (!q.certificates_path.empty()) {
      write_json_file(q.certificates_path, choi_to_json(result.witness));
    }
    if (q.json) {
      Json out;
      out["quantity"] = "convertible";
      out["theory"] = q.theory;
      out["convertible"] = result.convertible;
      out["residual"] = result.residual;
      out["tolerance"] = q.tol;
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << "convertible = " << (result.convertible ? "yes" : "no")
                << "  (residual " << format_value(result.residual, true)
                << ", tol " << format_value(q.tol, true) << ")\n";
    }
    return kExitOk;
  }
  throw std::invalid_argument("unknown quantifier: " + which);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Choi-matrix calculus, free-state families, and conic resource quantifiers"};
  app.require_subcommand(1);

  // choi inspect
  CLI::App* choi_cmd = app.add_subcommand("choi", "Choi matrix utilities");
  choi_cmd->require_subcommand(1);
  CLI::App* inspect = choi_cmd->add_subcommand(
      "inspect", "Print marginals and every channel reading of a raw matrix");
  std::string inspect_path;
  std::vector<std::string> inspect_dims;
  bool inspect_json = false;
  inspect->add_option("matrix", inspect_path, "matrix JSON file")->required();
  inspect->add_option("--dims", inspect_dims,
                      "candidate out,in split (repeatable)");
  inspect->add_flag("--json", inspect_json, "machine-readable output");

  // cdrt verify
  CLI::App* cdrt_cmd = app.add_subcommand("cdrt", "structural verification");
  cdrt_cmd->require_subcommand(1);
  CLI::App* verify = cdrt_cmd->add_subcommand(
      "verify", "Run the condition and closure checks for a theory");
  std::string verify_theory;
  std::vector<std::string> verify_dims;
  int verify_samples = 200;
  std::uint64_t verify_seed = 7;
  double verify_tol = default_tolerance();
  bool verify_json = false;
  verify->add_option("--theory", verify_theory, "registered theory name")
      ->required();
  verify->add_option("--dims", verify_dims, "system dims, e.g. 2 or 2,2");
  verify->add_option("--samples", verify_samples, "samples per check");
  verify->add_option("--seed", verify_seed, "RNG seed");
  verify->add_option("--tol", verify_tol, "membership tolerance");
  verify->add_flag("--json", verify_json, "machine-readable output");

  // quant subcommands
  CLI::App* quant_cmd = app.add_subcommand("quant", "resource quantifiers");
  quant_cmd->require_subcommand(1);
  QuantOptions q;
  std::vector<std::pair<std::string, CLI::App*>> quant_subs;
  for (const char* name : {"dmax-state", "dmax-channel", "monotone",
                           "convert-distance", "convertible"}) {
    CLI::App* sub = quant_cmd->add_subcommand(name, name);
    sub->add_option("--theory", q.theory)->required();
    sub->add_option("--state", q.state_path, "input state JSON");
    sub->add_option("--choi", q.choi_path, "input Choi JSON");
    sub->add_option("--tau", q.tau_path, "monotone direction state JSON");
    sub->add_option("--target", q.target_path, "target state JSON");
    sub->add_option("--dims", q.dims_a_text, "input-system dims");
    sub->add_option("--dims-out", q.dims_b_text, "output-system dims");
    sub->add_option("--tol", q.tol, "tolerance");
    sub->add_option("--max-iter", q.max_iter, "solver iteration cap");
    sub->add_option("--gap-tol", q.gap_tol, "solver duality-gap target");
    sub->add_option("--certificates", q.certificates_path,
                    "write primal/dual certificates to this file");
    sub->add_flag("--json", q.json);
    quant_subs.emplace_back(name, sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (inspect->parsed()) {
      return run_choi_inspect(inspect_path, inspect_dims, inspect_json);
    }
    if (verify->parsed()) {
      return run_verify(verify_theory, verify_dims, verify_samples,
                        verify_seed, verify_tol, verify_json);
    }
    for (const auto& [name, sub] : quant_subs) {
      if (sub->parsed()) return run_quant(name, q);
    }
    std::cerr << "no subcommand selected\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const UnknownTheory& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnsupportedDimension& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const conic::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}
