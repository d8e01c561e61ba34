#pragma once

// Test-only reference LP solver: a plain dense big-M tableau simplex with
// Bland's rule throughout. Written independently of gcsplan/lp.cpp so the
// two implementations can cross-check each other.

#include <cmath>
#include <limits>
#include <vector>

#include "gcsplan/lp.hpp"

namespace lp_oracle {

struct Result {
  bool optimal = false;
  bool infeasible = false;
  bool unbounded = false;
  double objective = 0.0;
  std::vector<double> x;
};

// Solves min c.x, A x <= b, E x = d, lo <= x <= hi by converting everything
// to equalities over nonnegative variables with artificials and a big-M
// objective.
inline Result solve(const gcsplan::LinearProgram& lp) {
  const double inf = std::numeric_limits<double>::infinity();
  const int n = lp.num_vars;

  // x_i = pos_i - neg_i, both >= 0; finite bounds become rows.
  struct RowSpec {
    std::vector<double> a;
    double rhs;
    int type;  // 0: <=, 1: ==
  };
  std::vector<RowSpec> rows;
  auto dense = [n](const gcsplan::SparseRow& r) {
    std::vector<double> a(n, 0.0);
    for (const auto& [i, v] : r.terms) a[i] += v;
    return a;
  };
  for (const auto& r : lp.less_equal) rows.push_back({dense(r), r.rhs, 0});
  for (const auto& r : lp.equal) rows.push_back({dense(r), r.rhs, 1});
  for (int i = 0; i < n; ++i) {
    if (lp.lower[i] > -inf && lp.lower[i] != 0.0) {
      std::vector<double> a(n, 0.0);
      a[i] = -1.0;
      rows.push_back({a, -lp.lower[i], 0});
    }
    if (lp.upper[i] < inf) {
      std::vector<double> a(n, 0.0);
      a[i] = 1.0;
      rows.push_back({a, lp.upper[i], 0});
    }
  }
  // variables with lower bound exactly 0 keep a single nonnegative column
  std::vector<int> pos(n), neg(n, -1);
  int cols = 0;
  for (int i = 0; i < n; ++i) {
    pos[i] = cols++;
    if (!(lp.lower[i] == 0.0)) neg[i] = cols++;
  }
  const int m = static_cast<int>(rows.size());
  const int slack0 = cols;
  int nslack = 0;
  for (const RowSpec& r : rows)
    if (r.type == 0) ++nslack;
  const int art0 = slack0 + nslack;
  const int total = art0 + m;

  std::vector<std::vector<double>> T(m, std::vector<double>(total + 1, 0.0));
  std::vector<double> cost(total + 1, 0.0);
  std::vector<int> basis(m, -1);

  const double big_m = 1e7;
  for (int i = 0; i < n; ++i) {
    cost[pos[i]] += lp.objective[i];
    if (neg[i] >= 0) cost[neg[i]] -= lp.objective[i];
  }

  int srow = 0;
  for (int r = 0; r < m; ++r) {
    for (int i = 0; i < n; ++i) {
      T[r][pos[i]] += rows[r].a[i];
      if (neg[i] >= 0) T[r][neg[i]] -= rows[r].a[i];
    }
    double rhs = rows[r].rhs;
    int slack = -1;
    if (rows[r].type == 0) {
      slack = slack0 + srow++;
      T[r][slack] = 1.0;
    }
    if (rhs < 0.0) {
      for (int j = 0; j <= total; ++j) T[r][j] = -T[r][j];
      rhs = -rhs;
    }
    T[r][total] = rhs;
    if (slack >= 0 && T[r][slack] > 0.5) {
      basis[r] = slack;
    } else {
      T[r][art0 + r] = 1.0;
      basis[r] = art0 + r;
      cost[art0 + r] = big_m;
    }
  }
  // price out basic artificials
  for (int r = 0; r < m; ++r)
    if (basis[r] >= art0)
      for (int j = 0; j <= total; ++j) cost[j] -= big_m * T[r][j];

  Result res;
  for (int iter = 0; iter < 200000; ++iter) {
    int entering = -1;
    for (int j = 0; j < total; ++j)
      if (cost[j] < -1e-9) {  // Bland: first improving column
        entering = j;
        break;
      }
    if (entering < 0) break;
    int leave = -1;
    double best = inf;
    for (int r = 0; r < m; ++r) {
      if (T[r][entering] <= 1e-10) continue;
      const double ratio = T[r][total] / T[r][entering];
      if (ratio < best - 1e-12 ||
          (ratio < best + 1e-12 && (leave < 0 || basis[r] < basis[leave]))) {
        best = ratio;
        leave = r;
      }
    }
    if (leave < 0) {
      res.unbounded = true;
      return res;
    }
    const double piv = T[leave][entering];
    for (int j = 0; j <= total; ++j) T[leave][j] /= piv;
    for (int r = 0; r < m; ++r) {
      if (r == leave) continue;
      const double f = T[r][entering];
      if (f != 0.0)
        for (int j = 0; j <= total; ++j) T[r][j] -= f * T[leave][j];
    }
    const double fc = cost[entering];
    if (fc != 0.0)
      for (int j = 0; j <= total; ++j) cost[j] -= fc * T[leave][j];
    basis[leave] = entering;
  }

  for (int r = 0; r < m; ++r)
    if (basis[r] >= art0 && T[r][total] > 1e-6) {
      res.infeasible = true;
      return res;
    }

  std::vector<double> z(total, 0.0);
  for (int r = 0; r < m; ++r)
    if (basis[r] < total) z[basis[r]] = T[r][total];
  res.x.assign(n, 0.0);
  res.optimal = true;
  for (int i = 0; i < n; ++i) {
    res.x[i] = z[pos[i]] - (neg[i] >= 0 ? z[neg[i]] : 0.0);
    res.objective += lp.objective[i] * res.x[i];
  }
  return res;
}

}  // namespace lp_oracle
