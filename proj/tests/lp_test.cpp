#include <doctest.h>

#include <random>

#include "gcsplan/lp.hpp"
#include "lp_oracle.hpp"

using namespace gcsplan;

namespace {

// Random LP that is feasible (an interior point is baked in) and bounded
// (every variable is boxed).
LinearProgram random_lp(std::mt19937& rng) {
  std::uniform_int_distribution<int> nd(2, 8), md(2, 14);
  std::uniform_real_distribution<double> coef(-2.0, 2.0), pt(0.5, 4.0);
  LinearProgram lp;
  const int n = nd(rng);
  std::vector<double> x0;
  for (int i = 0; i < n; ++i) {
    lp.add_var(coef(rng), 0.0, 6.0);
    x0.push_back(pt(rng));
  }
  const int m = md(rng);
  std::uniform_real_distribution<double> slackd(0.1, 3.0);
  for (int r = 0; r < m; ++r) {
    std::vector<std::pair<int, double>> terms;
    double lhs = 0.0;
    for (int i = 0; i < n; ++i) {
      const double a = coef(rng);
      if (std::abs(a) < 0.15) continue;
      terms.push_back({i, a});
      lhs += a * x0[i];
    }
    if (terms.empty()) continue;
    lp.add_leq(std::move(terms), lhs + slackd(rng));
  }
  return lp;
}

}  // namespace

TEST_CASE("lp: trivial minimum at a bound") {
  LinearProgram lp;
  const int x = lp.add_var(1.0);
  lp.add_geq({{x, 1.0}}, 1.0);
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x[x] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("lp: degenerate face") {
  LinearProgram lp;
  const int x = lp.add_var(1.0, 0.0);
  const int y = lp.add_var(1.0, 0.0);
  lp.add_geq({{x, 1.0}, {y, 1.0}}, 2.0);
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("lp: equalities and free variables") {
  LinearProgram lp;
  const int x = lp.add_var(0.0);  // free
  const int y = lp.add_var(1.0);  // free
  lp.add_eq({{x, 1.0}, {y, 1.0}}, 3.0);
  lp.add_geq({{y, 1.0}}, -2.0);
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x[y] == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(sol.x[x] == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("lp: infeasible is detected and attributed") {
  LinearProgram lp;
  const int x = lp.add_var(1.0, 0.0);
  lp.add_leq({{x, 1.0}}, -1.0, RowFamily::TimeWindow);
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Infeasible);
  REQUIRE_FALSE(sol.infeasibility.empty());
  CHECK(sol.infeasibility.front().first == RowFamily::TimeWindow);
  CHECK(sol.infeasibility_summary().find("time-window") != std::string::npos);
}

TEST_CASE("lp: unbounded is detected") {
  LinearProgram lp;
  const int x = lp.add_var(-1.0, 0.0);
  lp.add_leq({{x, -1.0}}, 0.0);
  const LpSolution sol = solve_lp(lp);
  CHECK(sol.status == LpStatus::Unbounded);
}

TEST_CASE("lp: unbounded with inactive rows that cut the ray") {
  LinearProgram lp;
  const int x = lp.add_var(-1.0, 0.0);
  lp.add_leq({{x, 1.0}}, 7.0);  // activation must discover this row
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x[x] == doctest::Approx(7.0).epsilon(1e-9));
}

TEST_CASE("lp: duplicate rows tolerated") {
  LinearProgram lp;
  const int x = lp.add_var(1.0, 0.0);
  for (int i = 0; i < 4; ++i) lp.add_geq({{x, 1.0}}, 2.0);
  lp.add_eq({{x, 2.0}}, 4.0);
  lp.add_eq({{x, 4.0}}, 8.0);  // dependent equality
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.x[x] == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("lp: 200 random instances match the dense-tableau oracle") {
  std::mt19937 rng(2024);
  int checked = 0;
  while (checked < 200) {
    const LinearProgram lp = random_lp(rng);
    const lp_oracle::Result ref = lp_oracle::solve(lp);
    if (!ref.optimal) continue;  // generator guarantees feasibility; skip oddities
    ++checked;
    const LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(std::abs(sol.objective - ref.objective) <=
          1e-6 * (1.0 + std::abs(ref.objective)));
    // primal feasibility of our solution
    for (const SparseRow& r : lp.less_equal) {
      double lhs = 0.0;
      for (const auto& [i, v] : r.terms) lhs += v * sol.x[i];
      CHECK(lhs <= r.rhs + 1e-7);
    }
  }
  CHECK(checked == 200);
}

TEST_CASE("lp: determinism") {
  std::mt19937 rng(77);
  const LinearProgram lp = random_lp(rng);
  const LpSolution a = solve_lp(lp);
  const LpSolution b = solve_lp(lp);
  REQUIRE(a.status == b.status);
  REQUIRE(a.x.size() == b.x.size());
  for (std::size_t i = 0; i < a.x.size(); ++i) CHECK(a.x[i] == b.x[i]);
  CHECK(a.objective == b.objective);
}

TEST_CASE("lp: row activation agrees with the full solve") {
  std::mt19937 rng(31337);
  for (int round = 0; round < 40; ++round) {
    const LinearProgram lp = random_lp(rng);
    SimplexOptions no_activation;
    no_activation.row_activation = false;
    const LpSolution full = solve_lp(lp, no_activation);
    const LpSolution active = solve_lp(lp);
    REQUIRE(full.status == LpStatus::Optimal);
    REQUIRE(active.status == LpStatus::Optimal);
    CHECK(std::abs(full.objective - active.objective) <=
          1e-8 * (1.0 + std::abs(full.objective)));
  }
}

TEST_CASE("lp: validation rejects malformed programs") {
  LinearProgram lp;
  lp.add_var(1.0);
  lp.add_leq({{3, 1.0}}, 0.0);  // unknown variable index
  CHECK_THROWS_AS(solve_lp(lp), NumericalError);
}
