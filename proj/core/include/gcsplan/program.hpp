#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gcsplan/bezier.hpp"
#include "gcsplan/graph.hpp"
#include "gcsplan/lp.hpp"
#include "gcsplan/scenario.hpp"

namespace gcsplan {

struct FeasibilityReport;

enum class Strategy { Auto, Enumerate, RelaxRound, Both };

Strategy strategy_from_string(const std::string& s);
const char* strategy_name(Strategy s);

struct PlannerConfig {
  Strategy strategy = Strategy::Auto;
  int max_path_len = 12;
  int max_enumeration = 64;  // Auto switches to relax+round above this
};

/// Variable layout of a per-path program. Per path vertex: interleaved
/// spatial control points, then time knots, then epigraph variables.
struct PathProgram {
  LinearProgram lp;
  std::vector<int> path;  // graph vertex indices
  int degree = 0;

  int stride() const;
  int var_px(int k, int l) const;
  int var_py(int k, int l) const;
  int var_tau(int k, int l) const;
  int var_epi(int k, int family, int j) const;  // family: 0=P2, 1=P3, 2=T2, 3=T3
  int epi_per_vertex() const;
};

/// Per-vertex timing windows resolved against graph indices.
std::map<int, TimingWindow> resolve_windows(const Scenario& scenario);

PathProgram assemble_path_program(const Scenario& scenario, const std::vector<int>& path,
                                  const std::map<int, TimingWindow>& windows);

/// Solved control points back to curve segments; validates monotonicity and
/// gluing residuals instead of clamping.
std::vector<TrajectorySegment> extract(const std::vector<double>& solution,
                                       const PathProgram& program);

/// Lifted convex relaxation of the full graph program (flows in [0,1]).
FlowSolution relax_solve(const Scenario& scenario,
                         const std::map<int, TimingWindow>& windows);

struct PhaseTimes {
  double enumeration_ms = 0.0;
  double assembly_ms = 0.0;
  double solve_ms = 0.0;
  double rounding_ms = 0.0;
  double total_ms = 0.0;
};

struct PlanResult {
  std::vector<int> path;                  // graph vertex indices
  std::vector<std::string> path_ids;      // region ids along the path
  std::vector<TrajectorySegment> segments;
  double objective = 0.0;
  std::optional<double> lower_bound;      // set when the relaxation was solved
  std::optional<double> objective_relax_round;  // strategy "both" cross-check
  PhaseTimes times;
  Strategy strategy_used = Strategy::Enumerate;
  int paths_considered = 0;
  std::shared_ptr<const FeasibilityReport> report;  // attached after audit

  double start_time() const { return segments.front().entry_time(); }
  double end_time() const { return segments.back().exit_time(); }
};

/// Plans over the scenario graph. Throws InfeasibleError with per-path
/// diagnostics when no route admits a feasible program.
PlanResult plan(const Scenario& scenario, const PlannerConfig& config = {});

}  // namespace gcsplan
