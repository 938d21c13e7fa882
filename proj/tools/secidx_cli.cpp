// secidx: security index analysis, simulation, attack detection and correction.
//
// Exit codes: 0 clean/success, 1 attack detected, 2 usage or input error,
// 3 unobservable system, 4 method disagreement, 5 uncorrectable, 6 ambiguous.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "secidx/coding.hpp"
#include "secidx/guard.hpp"
#include "secidx/index.hpp"
#include "secidx/io.hpp"
#include "secidx/simulate.hpp"

namespace {

using namespace secidx;

enum Exit : int {
  kOk = 0,
  kAttacked = 1,
  kUsage = 2,
  kUnobservable = 3,
  kDisagreement = 4,
  kUncorrectable = 5,
  kAmbiguous = 6,
};

int exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::NotObservable: return kUnobservable;
    case ErrorCode::MethodDisagreement: return kDisagreement;
    case ErrorCode::NoConsistentSupport: return kUncorrectable;
    case ErrorCode::AmbiguousCorrection: return kAmbiguous;
    default: return kUsage;
  }
}

std::string format_set(const SensorSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

std::string format_vector(const Vector& v) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? ", " : "") + io::format_scalar(v(i));
  return out + ")";
}

struct Common {
  ToleranceConfig tol;
  bool json = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--rank-tol", tol.rank_tol, "singular-value cutoff factor")->capture_default_str();
    cmd->add_option("--residual-tol", tol.residual_tol, "consistency threshold")->capture_default_str();
    cmd->add_option("--detect-tol", tol.detect_tol, "syndrome threshold")->capture_default_str();
    cmd->add_flag("--json", json, "machine-readable output");
  }
};

int cmd_analyze(const std::string& system_file, const std::string& method, const Common& c) {
  const SystemModel sys = io::load_system(system_file, c.tol);
  const CodingMatrix cm = build_coding_matrix(sys);
  SecurityIndexReport report;
  if (method == "all") {
    report = security_index(sys, c.tol);
  } else if (method == "subset") {
    report = security_index_subset(cm, c.tol);
  } else if (method == "spark") {
    report = security_index_spark(cm, build_check_matrix(cm, c.tol), c.tol);
  } else {
    report = security_index_eigen(sys, eigen_structure(sys, c.tol), c.tol);
  }
  const bool maximal = is_maximally_secure(cm, c.tol);
  if (c.json) {
    std::cout << io::to_json(report, maximal, sys.sensors()).dump() << '\n';
    return kOk;
  }
  std::cout << "delta = " << report.delta << "; maximally secure: " << (maximal ? "yes" : "no")
            << " (N = " << sys.sensors() << ")\n";
  if (report.method_values.empty()) {
    std::cout << "  " << to_string(report.method) << ": " << report.delta << '\n';
  }
  for (const auto& [m, v] : report.method_values) std::cout << "  " << to_string(m) << ": " << v << '\n';
  std::cout << "witness support: " << format_set(report.witness_support) << '\n';
  if (report.witness_state) std::cout << "witness state: " << format_vector(*report.witness_state) << '\n';
  return kOk;
}

struct SimulateArgs {
  std::string system_file;
  std::string x0;
  std::size_t horizon = 0;
  std::string out;
  std::optional<std::size_t> attack_weight;
  std::uint64_t seed = 0;
  double magnitude = 1.0;
  std::optional<std::size_t> attack_window;
  std::string attacked_out;
  std::string attack_out;
  std::string sidecar;
};

int cmd_simulate(const SimulateArgs& a, const Common& c) {
  const SystemModel sys = io::load_system(a.system_file, c.tol);
  const Trajectory y = simulate(sys, io::parse_vector(a.x0), a.horizon);
  if (!a.out.empty()) {
    io::save_trajectory(a.out, y);
  } else if (!a.attack_weight) {
    io::write_trajectory_csv(std::cout, y);
  }
  if (!a.attack_weight) return kOk;

  AttackOptions opts;
  opts.magnitude = a.magnitude;
  opts.active_horizon = a.attack_window;
  const AttackSignal eta = random_attack(sys.sensors(), a.horizon, *a.attack_weight, a.seed, opts);
  const Trajectory r = inject(y, eta);
  if (!a.attacked_out.empty()) {
    io::save_trajectory(a.attacked_out, r);
  } else {
    io::write_trajectory_csv(std::cout, r);
  }
  if (!a.attack_out.empty()) io::save_trajectory(a.attack_out, eta.samples());
  const auto sidecar = io::attack_sidecar(eta, a.seed, a.magnitude);
  if (!a.sidecar.empty()) {
    io::save_json(a.sidecar, sidecar);
  } else {
    std::cerr << "attack " << sidecar.dump() << '\n';
  }
  return kOk;
}

int cmd_detect(const std::string& system_file, const std::string& traj_file, const std::string& rule,
               const std::string& poly_file, const Common& c) {
  if (rule == "R" && poly_file.empty()) {
    std::cerr << "error: --rule R requires --R <polynomial matrix file>\n";
    return kUsage;
  }
  const SystemModel sys = io::load_system(system_file, c.tol);
  const Trajectory r = io::load_trajectory(traj_file);
  if (r.sensors() != sys.sensors()) throw Error(ErrorCode::DimensionMismatch, "trajectory sensor count");
  const DetectionReport report =
      rule == "R" ? detect_R(io::load_poly_matrix(poly_file), r, c.tol) : detect_H(sys, r, c.tol);
  if (c.json) {
    std::cout << io::to_json(report).dump() << '\n';
  } else if (report.attacked) {
    std::cout << "attack detected (max syndrome norm " << report.max_syndrome_norm << ", first window "
              << *report.first_flagged_window << ")\n";
  } else {
    std::cout << "clean (max syndrome norm " << report.max_syndrome_norm << ")\n";
  }
  return report.attacked ? kAttacked : kOk;
}

int cmd_correct(const std::string& system_file, const std::string& traj_file, const std::string& out,
                const Common& c) {
  const SystemModel sys = io::load_system(system_file, c.tol);
  const Trajectory r = io::load_trajectory(traj_file);
  const CorrectionResult result = correct(sys, r, c.tol);
  if (!out.empty()) io::save_trajectory(out, result.corrected);
  if (c.json) {
    std::cout << io::to_json(result).dump() << '\n';
  } else {
    std::cout << "x0 = " << format_vector(result.x0_estimate) << '\n'
              << "attack support = " << format_set(result.attack_support) << '\n'
              << "residual = " << result.residual << '\n'
              << "supports tested = " << result.search_size << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Security index analysis and sensor-attack detection/correction for LTI systems"};
  app.require_subcommand(1);

  Common common;

  std::string system_file;
  std::string traj_file;

  auto* analyze = app.add_subcommand("analyze", "compute the security index");
  std::string method = "all";
  analyze->add_option("system", system_file, "system JSON")->required();
  analyze->add_option("--method", method, "subset|spark|eigen|all")
      ->check(CLI::IsMember({"subset", "spark", "eigen", "all"}))
      ->capture_default_str();
  common.attach(analyze);

  auto* sim = app.add_subcommand("simulate", "simulate clean and attacked trajectories");
  SimulateArgs sa;
  sim->add_option("system", sa.system_file, "system JSON")->required();
  sim->add_option("--x0", sa.x0, "initial state, comma separated")->required();
  sim->add_option("--T", sa.horizon, "horizon length")->required()->check(CLI::PositiveNumber);
  sim->add_option("--out", sa.out, "clean trajectory CSV");
  sim->add_option("--attack-weight", sa.attack_weight, "number of attacked sensors");
  sim->add_option("--seed", sa.seed, "attack seed")->capture_default_str();
  sim->add_option("--magnitude", sa.magnitude, "attack scale")->capture_default_str();
  sim->add_option("--attack-window", sa.attack_window, "confine attack to t < this");
  sim->add_option("--attacked-out", sa.attacked_out, "attacked trajectory CSV");
  sim->add_option("--attack-out", sa.attack_out, "attack signal CSV");
  sim->add_option("--sidecar", sa.sidecar, "attack sidecar JSON");
  common.attach(sim);

  auto* det = app.add_subcommand("detect", "syndrome-based attack detection");
  std::string rule = "H";
  std::string poly_file;
  det->add_option("system", system_file, "system JSON")->required();
  det->add_option("trajectory", traj_file, "received trajectory CSV")->required();
  det->add_option("--rule", rule, "H|R")->check(CLI::IsMember({"H", "R"}))->capture_default_str();
  det->add_option("--R", poly_file, "polynomial matrix JSON for --rule R");
  common.attach(det);

  auto* cor = app.add_subcommand("correct", "support-enumeration attack correction");
  std::string out;
  cor->add_option("system", system_file, "system JSON")->required();
  cor->add_option("trajectory", traj_file, "received trajectory CSV")->required();
  cor->add_option("--out", out, "corrected trajectory CSV");
  common.attach(cor);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    common.tol.validate();
    if (*analyze) return cmd_analyze(system_file, method, common);
    if (*sim) return cmd_simulate(sa, common);
    if (*det) return cmd_detect(system_file, traj_file, rule, poly_file, common);
    if (*cor) return cmd_correct(system_file, traj_file, out, common);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
