#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "gcsplan/common.hpp"

namespace gcsplan {

/// Constraint families, used to attribute infeasibility to a named source.
enum class RowFamily {
  Containment,
  Velocity,
  MinSpeed,
  Monotonicity,
  TimeWindow,
  Continuity,
  Boundary,
  Epigraph,
  Flow,
  Lifting,
  Bound,
  Other,
};

const char* row_family_name(RowFamily family);

struct SparseRow {
  std::vector<std::pair<int, double>> terms;
  double rhs = 0.0;
  RowFamily family = RowFamily::Other;
};

/// Canonical linear program: min c.x subject to A x <= b, E x = d and
/// per-variable bounds (infinities allowed).
struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<SparseRow> less_equal;
  std::vector<SparseRow> equal;
  std::vector<double> lower;
  std::vector<double> upper;

  static constexpr double kInf = std::numeric_limits<double>::infinity();

  int add_var(double cost = 0.0, double lo = -kInf, double hi = kInf);
  void add_leq(std::vector<std::pair<int, double>> terms, double rhs,
               RowFamily family = RowFamily::Other);
  /// terms . x >= rhs, stored as the negated <= row.
  void add_geq(std::vector<std::pair<int, double>> terms, double rhs,
               RowFamily family = RowFamily::Other);
  void add_eq(std::vector<std::pair<int, double>> terms, double rhs,
              RowFamily family = RowFamily::Other);
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  std::vector<double> x;
  double objective = 0.0;
  /// Phase-I residual per constraint family (infeasible problems only).
  std::vector<std::pair<RowFamily, double>> infeasibility;
  int iterations = 0;

  std::string infeasibility_summary() const;
};

struct SimplexOptions {
  int max_iterations = 200000;
  double tol = 1e-9;
  /// Solve over a growing active subset of the inequality rows. Exact: the
  /// returned point satisfies every row of the full program.
  bool row_activation = true;
  int activation_batch = 192;
};

/// Deterministic two-phase primal simplex (Dantzig pricing with a Bland
/// fallback after stalls).
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts = {});

}  // namespace gcsplan
