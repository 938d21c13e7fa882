// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "secidx/coding.hpp"
#include "secidx/guard.hpp"
#include "secidx/index.hpp"
#include "secidx/io.hpp"
#include "secidx/polymat.hpp"
#include "secidx/simulate.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace secidx;
using secidx::testing::mat;
using secidx::testing::vec;

namespace {

constexpr std::size_t kSuiteSize = 200;
constexpr std::uint64_t kSuiteSeed = 20240601;
constexpr std::size_t kAttacksPerWeight = 10;
constexpr double kStateRelTol = 1e-8;
constexpr double kExampleBudgetSeconds = 1.0;
constexpr double kEquivalenceBudgetSeconds = 30.0;
constexpr std::size_t kMinRepeatedEigen = 20;
constexpr std::size_t kMinConstructedOverweight = 10;

struct Outcome {
  bool pass = true;
  std::vector<std::string> failures;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (failures.size() < 8) failures.push_back(what);
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string label(const testing::SuiteSystem& s) {
  std::ostringstream os;
  os << testing::to_string(s.kind) << " seed=" << s.seed << " n=" << s.sys.states() << " N=" << s.sys.sensors();
  return os.str();
}

PolyMatrix two_mode_R(double l1, double l2) {
  return PolyMatrix({{Polynomial({-l1, 1.0}), Polynomial({-l1, 1.0})}, {Polynomial({-l2, 1.0}), Polynomial({l2, -1.0})}});
}

std::size_t horizon_for(const SystemModel& sys) { return 2 * sys.states() + 2; }

Outcome example_reproduction(const ToleranceConfig& tol) {
  Outcome out;
  const auto start = Clock::now();
  std::vector<std::pair<double, double>> pairs{{1.0, 2.0}};
  std::mt19937_64 rng(kSuiteSeed);
  std::uniform_real_distribution<double> uni(-3.0, 3.0);
  while (pairs.size() < 6) {
    const double a = uni(rng), b = uni(rng);
    if (std::abs(a - b) > 0.05) pairs.emplace_back(a, b);
  }
  for (const auto& [l1, l2] : pairs) {
    const std::string tag = "lambda=(" + std::to_string(l1) + "," + std::to_string(l2) + ")";
    const SystemModel sys = testing::two_mode_system(l1, l2);
    const CodingMatrix cm = build_coding_matrix(sys);
    try {
      const SecurityIndexReport r = security_index(sys, tol);
      out.expect(r.delta == 2, tag + " dispatcher delta=" + std::to_string(r.delta));
      out.expect(r.method_values.size() == 3, tag + " not all three methods ran");
      for (const auto& [m, v] : r.method_values) out.expect(v == 2, tag + " " + to_string(m) + "=" + std::to_string(v));
    } catch (const Error& e) {
      out.expect(false, tag + " " + e.what());
    }
    out.expect(oracle_security_index(cm, tol) == 2, tag + " oracle");
    out.expect(security_index_from_R(two_mode_R(l1, l2), tol) == 2, tag + " kernel representation");
  }
  const double elapsed = seconds_since(start);
  out.expect(elapsed < kExampleBudgetSeconds, "runtime " + std::to_string(elapsed) + " s");
  out.detail = std::to_string(pairs.size()) + " eigenvalue pairs, " + std::to_string(elapsed * 1e3) + " ms";
  return out;
}

struct SuiteFacts {
  std::size_t delta = 0;
};

Outcome method_equivalence(const std::vector<testing::SuiteSystem>& suite, const ToleranceConfig& tol,
                          std::vector<SuiteFacts>& facts) {
  Outcome out;
  const auto start = Clock::now();
  facts.assign(suite.size(), {});
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto& s = suite[i];
    const CodingMatrix cm = build_coding_matrix(s.sys);
    const std::size_t subset = security_index_subset(cm, tol).delta;
    const std::size_t spk = spark(build_check_matrix(cm, tol), tol);
    const std::size_t oracle = oracle_security_index(cm, tol);
    out.expect(subset == spk && spk == oracle, label(s) + " subset=" + std::to_string(subset) +
                                                   " spark=" + std::to_string(spk) + " oracle=" + std::to_string(oracle));
    facts[i].delta = oracle;
  }
  const double elapsed = seconds_since(start);
  out.expect(elapsed < kEquivalenceBudgetSeconds, "runtime " + std::to_string(elapsed) + " s");
  std::size_t histogram[8] = {};
  for (const auto& f : facts) ++histogram[std::min<std::size_t>(f.delta, 7)];
  std::ostringstream os;
  os << suite.size() << " systems, " << elapsed << " s, delta histogram";
  for (std::size_t d = 1; d < 8; ++d) os << ' ' << d << ':' << histogram[d];
  out.detail = os.str();
  return out;
}

Outcome eigen_consistency(const std::vector<testing::SuiteSystem>& suite, const std::vector<SuiteFacts>& facts,
                 const ToleranceConfig& tol) {
  Outcome out;
  std::size_t diagonalizable = 0;
  std::size_t repeated = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto& s = suite[i];
    const EigenStructure es = eigen_structure(s.sys, tol);
    if (s.kind == testing::SuiteKind::Defective) {
      out.expect(!es.diagonalizable, label(s) + " defective A reported diagonalizable");
    }
    if (!es.diagonalizable) continue;
    ++diagonalizable;
    bool has_repeat = false;
    for (const Matrix& b : es.eigenspaces) has_repeat = has_repeat || b.cols() >= 2;
    if (has_repeat) ++repeated;
    const std::size_t eigen = security_index_eigen(s.sys, es, tol).delta;
    out.expect(eigen == facts[i].delta,
               label(s) + " eigen=" + std::to_string(eigen) + " others=" + std::to_string(facts[i].delta));
  }
  out.expect(repeated >= kMinRepeatedEigen, "only " + std::to_string(repeated) + " repeated-eigenvalue systems");
  out.detail = std::to_string(diagonalizable) + " diagonalizable, " + std::to_string(repeated) +
               " with geometric multiplicity >= 2";
  return out;
}

Outcome detection_bound(const std::vector<testing::SuiteSystem>& suite, const std::vector<SuiteFacts>& facts,
                 const ToleranceConfig& tol) {
  Outcome out;
  std::mt19937_64 rng(kSuiteSeed + 1);
  std::size_t attacks = 0;
  std::size_t evading = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto& s = suite[i];
    const std::size_t delta = facts[i].delta;
    const std::size_t horizon = horizon_for(s.sys);
    const CheckMatrix h = build_check_matrix(build_coding_matrix(s.sys), tol);
    for (std::size_t q = 1; q < delta; ++q) {
      for (std::size_t k = 0; k < kAttacksPerWeight; ++k) {
        const Vector x0 = testing::random_state(rng, s.sys.states());
        const AttackSignal eta = random_attack(s.sys.sensors(), horizon, q, s.seed * 1000 + q * 17 + k);
        const Trajectory r = inject(simulate(s.sys, x0, horizon), eta);
        out.expect(detect_H(h, r, tol).attacked, label(s) + " missed weight-" + std::to_string(q) + " attack");
        ++attacks;
      }
    }
    const Vector x0 = testing::random_state(rng, s.sys.states());
    const Trajectory y = simulate(s.sys, x0, horizon);
    out.expect(!detect_H(h, y, tol).attacked, label(s) + " false alarm on clean trajectory");

    // Sharpness: a minimal-weight trajectory used as the attack leaves r in the behavior.
    const SecurityIndexReport rep = security_index_subset(build_coding_matrix(s.sys), tol);
    const Trajectory witness = simulate(s.sys, *rep.witness_state, horizon);
    const AttackSignal sneaky = restrict_attack(witness, rep.witness_support);
    out.expect(sneaky.weight() == delta, label(s) + " witness attack weight " + std::to_string(sneaky.weight()));
    const bool evaded = !detect_H(h, inject(y, sneaky), tol).attacked;
    out.expect(evaded, label(s) + " weight-delta witness attack was detected");
    if (evaded) ++evading;
  }
  out.detail = std::to_string(attacks) + " sub-delta attacks detected, " + std::to_string(evading) +
               " weight-delta witness attacks evade";
  return out;
}

Outcome correction_bound(const std::vector<testing::SuiteSystem>& suite, const std::vector<SuiteFacts>& facts,
                 const ToleranceConfig& tol) {
  Outcome out;
  std::mt19937_64 rng(kSuiteSeed + 2);
  std::size_t corrected = 0;
  std::size_t systems = 0;
  std::size_t overweight = 0;
  std::size_t refused = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto& s = suite[i];
    const std::size_t delta = facts[i].delta;
    const std::size_t horizon = horizon_for(s.sys);
    const std::size_t n = s.sys.states();
    if (delta >= 3) {
      ++systems;
      for (std::size_t q = 0; q <= (delta + 1) / 2 - 1; ++q) {
        for (std::size_t k = 0; k < kAttacksPerWeight; ++k) {
          const Vector x0 = testing::random_state(rng, n);
          const AttackSignal eta = random_attack(s.sys.sensors(), horizon, q, s.seed * 7 + q * 131 + k);
          const Trajectory r = inject(simulate(s.sys, x0, horizon), eta);
          try {
            const CorrectionResult res = correct(s.sys, r, delta, tol);
            const double err = testing::relative_error(res.x0_estimate, x0);
            worst = std::max(worst, err);
            out.expect(err <= kStateRelTol, label(s) + " x0 relative error " + std::to_string(err));
            out.expect(res.attack_support == eta.support(), label(s) + " wrong support at q=" + std::to_string(q));
            ++corrected;
          } catch (const Error& e) {
            out.expect(false, label(s) + " q=" + std::to_string(q) + " " + e.what());
          }
        }
      }
    }
    if (delta >= 2) {
      // Split a minimal witness: attacking ceil(delta/2) of its rows makes r
      // equally consistent with another state attacked on the remaining rows.
      const SecurityIndexReport rep = security_index_subset(build_coding_matrix(s.sys), tol);
      const Trajectory witness = simulate(s.sys, *rep.witness_state, horizon);
      const std::size_t heavy = (delta + 1) / 2;
      const SensorSet rows(rep.witness_support.begin(), rep.witness_support.begin() + static_cast<long>(heavy));
      const AttackSignal eta = restrict_attack(witness, rows);
      const Vector x0 = testing::random_state(rng, n);
      const Trajectory r = inject(simulate(s.sys, x0, horizon), eta);
      ++overweight;
      try {
        const CorrectionResult res = correct(s.sys, r, delta, tol);
        const bool differs =
            res.attack_support != eta.support() || testing::relative_error(res.x0_estimate, x0) > kStateRelTol;
        out.expect(differs, label(s) + " overweight attack silently 'corrected' to the truth");
      } catch (const Error& e) {
        const bool expected = e.code() == ErrorCode::NoConsistentSupport || e.code() == ErrorCode::AmbiguousCorrection;
        out.expect(expected, label(s) + " unexpected error " + e.what());
        if (e.code() == ErrorCode::NoConsistentSupport) ++refused;
      }
    }
  }
  out.expect(overweight >= kMinConstructedOverweight,
             "only " + std::to_string(overweight) + " constructed overweight attacks");
  std::ostringstream os;
  os << corrected << " attacks corrected on " << systems << " systems (worst x0 rel. error " << worst << "); "
     << overweight << " overweight attacks, " << refused << " refused, rest mis-corrected";
  out.detail = os.str();
  return out;
}

Outcome maximal_security(const std::vector<testing::SuiteSystem>& suite, const std::vector<SuiteFacts>& facts,
                   const ToleranceConfig& tol) {
  Outcome out;
  std::size_t maximal = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const bool ms = is_maximally_secure(build_coding_matrix(suite[i].sys), tol);
    maximal += ms ? 1 : 0;
    out.expect(ms == (facts[i].delta == suite[i].sys.sensors()), label(suite[i]) + " maximal-security mismatch");
  }
  out.detail = std::to_string(maximal) + " maximally secure of " + std::to_string(suite.size());
  return out;
}

Outcome behavior(const std::vector<testing::SuiteSystem>& suite, const ToleranceConfig& tol) {
  Outcome out;
  std::mt19937_64 rng(kSuiteSeed + 3);
  std::size_t windows = 0;
  for (const auto& s : suite) {
    const std::size_t n = s.sys.states();
    const std::size_t horizon = horizon_for(s.sys);
    const Vector x0 = testing::random_state(rng, n);
    const Trajectory y = simulate(s.sys, x0, horizon);
    const double scale = tol.detect_tol * y.max_abs();

    const Trajectory shifted = simulate(s.sys, s.sys.A() * x0, horizon - 1);
    const double shift_gap =
        (shifted.samples() - y.samples().rightCols(static_cast<Eigen::Index>(horizon - 1))).cwiseAbs().maxCoeff();
    out.expect(shift_gap <= scale, label(s) + " shift invariance gap " + std::to_string(shift_gap));

    const CheckMatrix h = build_check_matrix(build_coding_matrix(s.sys), tol);
    for (std::size_t t = 0; t + n <= horizon; ++t) {
      const double syn = (h.H() * window_vector(y, t, n)).norm();
      out.expect(syn <= scale, label(s) + " syndrome " + std::to_string(syn) + " at window " + std::to_string(t));
      ++windows;
    }
  }
  out.detail = std::to_string(suite.size()) + " trajectories, " + std::to_string(windows) + " windows";
  return out;
}

int run(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_round_trip(const std::string& cli, const fs::path& dir) {
  Outcome out;
  if (cli.empty()) {
    out.expect(false, "no --cli binary given");
    return out;
  }
  fs::create_directories(dir);
  const std::string exe = "'" + cli + "'";
  auto path = [&](const std::string& name) { return "'" + (dir / name).string() + "'"; };
  auto quiet = [&](const std::string& name) { return " > " + path(name) + " 2>&1"; };
  auto check_exit = [&](const std::string& args, int want, const std::string& log) {
    const int got = run(exe + " " + args + quiet(log));
    out.expect(got == want, args + " -> exit " + std::to_string(got) + ", want " + std::to_string(want));
    return got;
  };

  io::save_json((dir / "example.json").string(), io::system_to_json(mat({{1, 0}, {0, 2}}), mat({{1, 1}, {1, -1}})));
  io::save_json((dir / "triple.json").string(), io::system_to_json(mat({{2}}), mat({{1}, {1}, {1}})));
  io::save_json((dir / "unobservable.json").string(), io::system_to_json(mat({{1, 0}, {0, 1}}), mat({{1, 0}})));
  io::save_json((dir / "example_R.json").string(), io::poly_matrix_to_json(two_mode_R(1.0, 2.0)));

  // analyze
  check_exit("analyze " + path("example.json"), 0, "analyze.txt");
  out.expect(slurp(dir / "analyze.txt").find("delta = 2; maximally secure: yes (N = 2)") != std::string::npos,
             "analyze summary line");
  check_exit("analyze " + path("unobservable.json"), 3, "analyze_unobs.txt");
  check_exit("analyze --method all --json " + path("triple.json"), 0, "analyze_triple.json");
  try {
    const auto j = io::json::parse(slurp(dir / "analyze_triple.json"));
    out.expect(j.at("delta") == 3, "triple system delta in JSON");
  } catch (const std::exception& e) {
    out.expect(false, std::string("analyze JSON: ") + e.what());
  }

  // Example-1: simulate, detect, correct
  check_exit("simulate " + path("example.json") + " --x0 1,1 --T 5 --out " + path("ex_clean.csv"), 0, "sim1.txt");
  check_exit("simulate " + path("example.json") + " --x0 1,1 --T 5 --attack-weight 1 --seed 7 --attacked-out " +
                 path("ex_attacked.csv") + " --sidecar " + path("ex_attack.json"),
             0, "sim2.txt");
  check_exit("simulate " + path("example.json") + " --x0 1,1 --T 5 --attack-weight 1 --seed 7 --attacked-out " +
                 path("ex_attacked_again.csv"),
             0, "sim3.txt");
  out.expect(slurp(dir / "ex_attacked.csv") == slurp(dir / "ex_attacked_again.csv"), "seeded simulate not reproducible");
  try {
    const Trajectory clean = io::load_trajectory((dir / "ex_clean.csv").string());
    out.expect(clean.sensors() == 2 && clean.horizon() == 5, "clean CSV shape");
  } catch (const std::exception& e) {
    out.expect(false, std::string("clean CSV: ") + e.what());
  }
  check_exit("simulate " + path("example.json") + " --x0 1,1 --T 5 --attack-weight 3", 2, "sim_bad.txt");
  check_exit("detect " + path("example.json") + " " + path("ex_clean.csv"), 0, "det1.txt");
  check_exit("detect " + path("example.json") + " " + path("ex_attacked.csv"), 1, "det2.txt");
  check_exit("detect --rule R --R " + path("example_R.json") + " " + path("example.json") + " " + path("ex_clean.csv"), 0,
             "det3.txt");
  check_exit("detect --rule R --R " + path("example_R.json") + " " + path("example.json") + " " +
                 path("ex_attacked.csv"),
             1, "det4.txt");
  check_exit("detect --rule R " + path("example.json") + " " + path("ex_clean.csv"), 2, "det5.txt");
  check_exit("correct " + path("example.json") + " " + path("ex_clean.csv"), 0, "cor1.txt");
  check_exit("correct " + path("example.json") + " " + path("ex_attacked.csv"), 5, "cor2.txt");

  // Three-sensor system (delta = 3): one attacked sensor is correctable.
  const SystemModel triple = testing::triple_sensor_system();
  const Trajectory y = simulate(triple, vec({1}), 4);
  Matrix eta = Matrix::Zero(3, 4);
  eta.row(1).setConstant(5.0);
  io::save_trajectory((dir / "tri_clean.csv").string(), y);
  io::save_trajectory((dir / "tri_attacked.csv").string(), inject(y, AttackSignal(Trajectory(eta))));
  Matrix eta2 = eta;
  eta2.row(2).setConstant(-2.0);
  io::save_trajectory((dir / "tri_heavy.csv").string(), inject(y, AttackSignal(Trajectory(eta2))));

  check_exit("detect " + path("triple.json") + " " + path("tri_clean.csv"), 0, "tdet1.txt");
  check_exit("detect " + path("triple.json") + " " + path("tri_attacked.csv"), 1, "tdet2.txt");
  check_exit("correct --json " + path("triple.json") + " " + path("tri_attacked.csv") + " --out " +
                 path("tri_fixed.csv"),
             0, "tcor1.json");
  try {
    const auto j = io::json::parse(slurp(dir / "tcor1.json"));
    out.expect(j.at("support") == io::json::array({2}), "correct support " + j.at("support").dump());
    out.expect(std::abs(j.at("x0").at(0).get<double>() - 1.0) < 1e-9, "correct x0 " + j.at("x0").dump());
    const Trajectory fixed = io::load_trajectory((dir / "tri_fixed.csv").string());
    out.expect((fixed.samples() - y.samples()).cwiseAbs().maxCoeff() < 1e-9, "corrected CSV");
  } catch (const std::exception& e) {
    out.expect(false, std::string("correct JSON: ") + e.what());
  }
  check_exit("correct " + path("triple.json") + " " + path("tri_heavy.csv"), 5, "tcor2.txt");
  check_exit("correct --json " + path("triple.json") + " " + path("tri_clean.csv"), 0, "tcor3.json");
  try {
    out.expect(io::json::parse(slurp(dir / "tcor3.json")).at("support").empty(), "clean input support not empty");
  } catch (const std::exception& e) {
    out.expect(false, std::string("clean correct JSON: ") + e.what());
  }

  // Seeded attacked file from simulate round-trips through detect and correct.
  check_exit("simulate " + path("triple.json") + " --x0 1 --T 4 --attack-weight 1 --seed 11 --attacked-out " +
                 path("tri_sim.csv") + " --sidecar " + path("tri_sim.json"),
             0, "tsim.txt");
  check_exit("detect " + path("triple.json") + " " + path("tri_sim.csv"), 1, "tdet3.txt");
  check_exit("correct --json " + path("triple.json") + " " + path("tri_sim.csv"), 0, "tcor4.json");
  try {
    const auto sidecar = io::json::parse(slurp(dir / "tri_sim.json"));
    const auto res = io::json::parse(slurp(dir / "tcor4.json"));
    out.expect(sidecar.at("support") == res.at("support"), "decoder support differs from sidecar");
  } catch (const std::exception& e) {
    out.expect(false, std::string("sidecar: ") + e.what());
  }

  // JSON output is byte-stable for fixed inputs.
  check_exit("correct --json " + path("triple.json") + " " + path("tri_attacked.csv"), 0, "tcor5.json");
  out.expect(slurp(dir / "tcor1.json") == slurp(dir / "tcor5.json"), "correct --json not byte-stable");

  out.detail = "exit codes verified on the two-mode and three-sensor systems";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::string cli;
  std::string workdir = (fs::temp_directory_path() / "secidx_acceptance").string();
  app.add_option("--cli", cli, "path to the secidx executable");
  app.add_option("--workdir", workdir, "scratch directory for CLI files");
  CLI11_PARSE(app, argc, argv);

  const ToleranceConfig tol;
  std::vector<std::pair<std::string, Outcome>> results;

  results.emplace_back("AC1 example reproduction", example_reproduction(tol));

  const auto suite = testing::make_suite(kSuiteSize, kSuiteSeed);
  std::vector<SuiteFacts> facts;
  results.emplace_back("AC2 subset-kernel = spark = oracle", method_equivalence(suite, tol, facts));
  results.emplace_back("AC3 eigenspace method consistency", eigen_consistency(suite, facts, tol));
  results.emplace_back("AC4 detection below delta, evasion at delta", detection_bound(suite, facts, tol));
  results.emplace_back("AC5 correction below delta/2", correction_bound(suite, facts, tol));
  results.emplace_back("AC6 maximal security iff delta = N", maximal_security(suite, facts, tol));
  results.emplace_back("AC7 shift invariance and syndrome annihilation", behavior(suite, tol));
  results.emplace_back("AC8 CLI exit codes", cli_round_trip(cli, workdir));

  bool all = true;
  for (const auto& [name, o] : results) {
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << " -- " << o.detail << '\n';
    for (const auto& f : o.failures) std::cout << "         " << f << '\n';
    all = all && o.pass;
  }
  std::cout << (all ? "all acceptance criteria passed" : "acceptance FAILED") << std::endl;
  return all ? 0 : 1;
}
