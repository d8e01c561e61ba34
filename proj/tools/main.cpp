#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gcsplan/program.hpp"
#include "gcsplan/scenario.hpp"
#include "gcsplan/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitAuditFailed = 3;
constexpr int kExitUsage = 64;

struct Overrides {
  std::optional<int> degree;
  std::optional<int> facets;
  std::optional<double> alpha1, alpha2, alpha3, alpha4;
  std::optional<double> v_min, v_max, h_rate_min, t_max;
  std::optional<double> audit_dt;
};

void apply(const Overrides& ov, gcsplan::Scenario& sc) {
  if (ov.degree) sc.degree = *ov.degree;
  if (ov.facets) sc.facets = *ov.facets;
  if (ov.alpha1) sc.weights.alpha1 = *ov.alpha1;
  if (ov.alpha2) sc.weights.alpha2 = *ov.alpha2;
  if (ov.alpha3) sc.weights.alpha3 = *ov.alpha3;
  if (ov.alpha4) sc.weights.alpha4 = *ov.alpha4;
  if (ov.v_min) sc.limits.v_min = *ov.v_min;
  if (ov.v_max) sc.limits.v_max = *ov.v_max;
  if (ov.h_rate_min) sc.limits.h_rate_min = *ov.h_rate_min;
  if (ov.t_max) sc.limits.t_max = *ov.t_max;
  if (ov.audit_dt) sc.audit_dt = *ov.audit_dt;
  sc.limits.validate();
  sc.weights.validate();
}

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--degree", ov.degree, "Bezier degree override (4..10)");
  cmd->add_option("--facets", ov.facets, "unit-circle facet count override");
  cmd->add_option("--alpha1", ov.alpha1, "spatial 2nd-difference weight");
  cmd->add_option("--alpha2", ov.alpha2, "spatial 3rd-difference weight");
  cmd->add_option("--alpha3", ov.alpha3, "temporal 2nd-difference weight");
  cmd->add_option("--alpha4", ov.alpha4, "temporal 3rd-difference weight");
  cmd->add_option("--v-min", ov.v_min, "directional minimum speed (m/s)");
  cmd->add_option("--v-max", ov.v_max, "maximum speed (m/s)");
  cmd->add_option("--h-rate-min", ov.h_rate_min, "minimum time-scaling rate");
  cmd->add_option("--t-max", ov.t_max, "planning horizon (s)");
  cmd->add_option("--audit-dt", ov.audit_dt, "audit sample step (s)");
}

std::string default_out_dir() {
  const char* env = std::getenv("GCSPLAN_OUT_DIR");
  return env ? env : "out";
}

int require_file(const std::string& path, const std::string& what) {
  if (!std::filesystem::exists(path)) {
    std::fprintf(stderr, "error: %s '%s' does not exist\nrun 'gcsplan --help' for usage\n",
                 what.c_str(), path.c_str());
    return kExitUsage;
  }
  return kExitOk;
}

void print_report_summary(const gcsplan::FeasibilityReport& rep) {
  std::printf("audit: min obstacle distance %.4f m at t=%.2f s\n",
              rep.min_obstacle_distance, rep.min_distance_time);
  std::printf("audit: speed range [%.3f, %.3f] m/s (bound %.3f), |a_t| <= %.3f, "
              "|a_n| <= %.3f m/s^2\n",
              rep.speed_min, rep.speed_max, rep.speed_bound, rep.max_abs_tangential,
              rep.max_abs_normal);
  if (rep.max_abs_steer)
    std::printf("audit: |steer| <= %.4f rad\n", *rep.max_abs_steer);
  std::printf("audit: rollout deviation max %.4f m (rms %.4f m) over %.1f m path\n",
              rep.rollout.max_deviation, rep.rollout.rms_deviation,
              rep.rollout.path_length);
  if (!rep.windows_ok)
    for (const std::string& v : rep.window_violations)
      std::printf("audit: window violation: %s\n", v.c_str());
  if (rep.speed_violations > 0)
    std::printf("audit: %zu samples exceed the speed bound %.3f m/s\n",
                rep.speed_violations, rep.speed_bound);
  if (!rep.containment_ok)
    std::printf("audit: containment violated by up to %.6f m\n",
                rep.max_containment_violation);
  if (!rep.terminal_in_goal) std::printf("audit: terminal position outside goal\n");
  if (rep.terminal_speed_error > 0.2)
    std::printf("audit: terminal speed off by %.3f m/s\n", rep.terminal_speed_error);
}

int cmd_plan(const std::string& scenario_path, const std::string& out_dir,
             const std::string& strategy_name, const Overrides& ov, bool verbose) {
  if (int rc = require_file(scenario_path, "scenario file")) return rc;
  std::vector<std::string> notes;
  gcsplan::Scenario sc = gcsplan::load_scenario_file(scenario_path, &notes);
  apply(ov, sc);
  if (verbose)
    for (const std::string& n : notes) std::printf("load: %s\n", n.c_str());

  gcsplan::PlannerConfig cfg;
  cfg.strategy = gcsplan::strategy_from_string(strategy_name);

  gcsplan::PlanResult result;
  try {
    result = gcsplan::plan(sc, cfg);
  } catch (const gcsplan::InfeasibleError& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    for (const std::string& c : e.causes())
      std::fprintf(stderr, "  %s\n", c.c_str());
    return kExitInfeasible;
  }

  std::printf("plan: path");
  for (const std::string& id : result.path_ids) std::printf(" %s", id.c_str());
  std::printf("\nplan: objective %.9g\n", result.objective);
  if (result.lower_bound) {
    std::printf("plan: relaxation lower bound %.9g\n", *result.lower_bound);
    if (*result.lower_bound > result.objective + 1e-6 * (1.0 + result.objective)) {
      std::fprintf(stderr, "error: lower bound exceeds objective\n");
      return kExitError;
    }
  }
  if (result.objective_relax_round) {
    std::printf("plan: relax-round objective %.9g\n", *result.objective_relax_round);
    if (result.lower_bound &&
        *result.lower_bound >
            *result.objective_relax_round + 1e-6 * (1.0 + *result.objective_relax_round)) {
      std::fprintf(stderr, "error: lower bound exceeds relax-round objective\n");
      return kExitError;
    }
  }
  std::printf("plan: times ms enumeration %.2f assembly %.2f solve %.2f rounding %.2f "
              "total %.2f\n",
              result.times.enumeration_ms, result.times.assembly_ms,
              result.times.solve_ms, result.times.rounding_ms, result.times.total_ms);

  const gcsplan::FeasibilityReport report = gcsplan::audit(result, sc, sc.audit_dt);
  print_report_summary(report);
  const auto files = gcsplan::write_result(result, report, sc, out_dir);
  std::printf("wrote %s, %s, %s\n", files.result_path.c_str(),
              files.profile_path.c_str(), files.svg_path.c_str());
  return report.passed() ? kExitOk : kExitAuditFailed;
}

int cmd_verify(const std::string& result_path, const std::string& scenario_path,
               const Overrides& ov, bool verbose) {
  if (int rc = require_file(result_path, "result file")) return rc;
  if (int rc = require_file(scenario_path, "scenario file")) return rc;
  std::vector<std::string> notes;
  gcsplan::Scenario sc = gcsplan::load_scenario_file(scenario_path, &notes);
  apply(ov, sc);
  if (verbose)
    for (const std::string& n : notes) std::printf("load: %s\n", n.c_str());

  gcsplan::PlanResult stored = gcsplan::read_result_file(result_path, sc);
  const gcsplan::FeasibilityReport report = gcsplan::audit(stored, sc, sc.audit_dt);
  print_report_summary(report);
  std::printf("verify: %s\n", report.passed() ? "PASS" : "FAIL");
  return report.passed() ? kExitOk : kExitAuditFailed;
}

int cmd_bench(const std::vector<std::string>& scenario_paths, int runs,
              const Overrides& ov) {
  for (const std::string& p : scenario_paths)
    if (int rc = require_file(p, "scenario file")) return rc;
  std::printf("%-24s %12s %12s %8s\n", "scenario", "mean (ms)", "std (ms)", "runs");
  for (const std::string& path : scenario_paths) {
    gcsplan::Scenario sc = gcsplan::load_scenario_file(path);
    apply(ov, sc);
    std::vector<double> times;
    times.reserve(runs);
    gcsplan::PlannerConfig cfg;
    for (int i = 0; i < runs; ++i) {
      const gcsplan::PlanResult r = gcsplan::plan(sc, cfg);
      times.push_back(r.times.total_ms);  // planning phases only, no parse/audit/io
    }
    const auto [mean, sd] = gcsplan::mean_std(times);
    std::printf("%-24s %12.3f %12.3f %8d\n", sc.name.c_str(), mean, sd, runs);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vehicle trajectory planning over a graph of convex regions"};
  app.require_subcommand(1);

  std::string scenario_path, result_path, out_dir = default_out_dir();
  std::string strategy = "auto";
  std::vector<std::string> bench_paths;
  int bench_runs = 500;
  unsigned seed = 0;
  bool verbose = false;
  Overrides ov;

  CLI::App* plan_cmd = app.add_subcommand("plan", "plan a scenario and audit the result");
  plan_cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  plan_cmd->add_option("--out", out_dir, "output directory (env GCSPLAN_OUT_DIR)");
  plan_cmd->add_option("--strategy", strategy,
                       "auto | enumerate | relax-round | both");
  plan_cmd->add_option("--seed", seed, "seed recorded for randomized tooling");
  plan_cmd->add_flag("--verbose", verbose, "echo applied defaults and warnings");
  add_override_flags(plan_cmd, ov);

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "re-audit a stored result independently");
  verify_cmd->add_option("--result", result_path, "result JSON file")->required();
  verify_cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  verify_cmd->add_flag("--verbose", verbose, "echo applied defaults and warnings");
  add_override_flags(verify_cmd, ov);

  CLI::App* bench_cmd = app.add_subcommand("bench", "plan-time statistics per scenario");
  bench_cmd->add_option("--scenario", bench_paths, "scenario JSON file(s)")->required();
  bench_cmd->add_option("--runs", bench_runs, "number of runs per scenario");
  add_override_flags(bench_cmd, ov);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (plan_cmd->parsed())
      return cmd_plan(scenario_path, out_dir, strategy, ov, verbose);
    if (verify_cmd->parsed()) return cmd_verify(result_path, scenario_path, ov, verbose);
    if (bench_cmd->parsed()) return cmd_bench(bench_paths, bench_runs, ov);
  } catch (const gcsplan::ScenarioError& e) {
    std::fprintf(stderr, "scenario error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitUsage;
}
