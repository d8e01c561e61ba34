#include "gcsplan/lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <cstdlib>
#include <cstdio>

#include "gcsplan/common.hpp"

namespace gcsplan {

const char* row_family_name(RowFamily family) {
  switch (family) {
    case RowFamily::Containment: return "containment";
    case RowFamily::Velocity: return "velocity";
    case RowFamily::MinSpeed: return "min-speed";
    case RowFamily::Monotonicity: return "monotonicity";
    case RowFamily::TimeWindow: return "time-window";
    case RowFamily::Continuity: return "continuity";
    case RowFamily::Boundary: return "boundary";
    case RowFamily::Epigraph: return "epigraph";
    case RowFamily::Flow: return "flow";
    case RowFamily::Lifting: return "lifting";
    case RowFamily::Bound: return "bound";
    case RowFamily::Other: return "other";
  }
  return "unknown";
}

int LinearProgram::add_var(double cost, double lo, double hi) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  return num_vars++;
}

void LinearProgram::add_leq(std::vector<std::pair<int, double>> terms, double rhs,
                            RowFamily family) {
  less_equal.push_back(SparseRow{std::move(terms), rhs, family});
}

void LinearProgram::add_geq(std::vector<std::pair<int, double>> terms, double rhs,
                            RowFamily family) {
  for (auto& t : terms) t.second = -t.second;
  less_equal.push_back(SparseRow{std::move(terms), -rhs, family});
}

void LinearProgram::add_eq(std::vector<std::pair<int, double>> terms, double rhs,
                           RowFamily family) {
  equal.push_back(SparseRow{std::move(terms), rhs, family});
}

void LinearProgram::validate() const {
  if (static_cast<int>(objective.size()) != num_vars ||
      static_cast<int>(lower.size()) != num_vars ||
      static_cast<int>(upper.size()) != num_vars)
    throw NumericalError("linear program arrays inconsistent with variable count");
  auto check_rows = [this](const std::vector<SparseRow>& rows) {
    for (const SparseRow& r : rows) {
      if (!std::isfinite(r.rhs)) throw NumericalError("non-finite right-hand side");
      for (const auto& [idx, coef] : r.terms) {
        if (idx < 0 || idx >= num_vars) throw NumericalError("row references unknown variable");
        if (!std::isfinite(coef)) throw NumericalError("non-finite coefficient");
      }
    }
  };
  check_rows(less_equal);
  check_rows(equal);
  for (double c : objective)
    if (!std::isfinite(c)) throw NumericalError("non-finite objective coefficient");
}

std::string LpSolution::infeasibility_summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < infeasibility.size(); ++i) {
    if (i) os << ", ";
    os << row_family_name(infeasibility[i].first) << " residual "
       << infeasibility[i].second;
  }
  return os.str();
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Standard-form problem: min c.z subject to rows over z >= 0.
struct StdRow {
  std::vector<std::pair<int, double>> a;
  double rhs = 0.0;
  bool is_eq = false;
  RowFamily family = RowFamily::Other;
};

struct ColMap {
  int pos = -1;
  int neg = -1;  // split column for free variables
  double shift = 0.0;
};

struct StdProblem {
  int ncols = 0;
  std::vector<double> c;
  std::vector<StdRow> rows;  // equalities first
  std::vector<ColMap> map;
  int num_eq = 0;
};

StdProblem standardize(const LinearProgram& lp) {
  StdProblem sp;
  sp.map.resize(lp.num_vars);
  std::vector<StdRow> bound_rows;
  for (int i = 0; i < lp.num_vars; ++i) {
    ColMap& cm = sp.map[i];
    if (lp.lower[i] > -kInf) {
      cm.pos = sp.ncols++;
      cm.shift = lp.lower[i];
      if (lp.upper[i] < kInf) {
        StdRow r;
        r.a = {{cm.pos, 1.0}};
        r.rhs = lp.upper[i] - lp.lower[i];
        r.family = RowFamily::Bound;
        bound_rows.push_back(std::move(r));
      }
    } else {
      cm.pos = sp.ncols++;
      cm.neg = sp.ncols++;
      if (lp.upper[i] < kInf) {
        StdRow r;
        r.a = {{cm.pos, 1.0}, {cm.neg, -1.0}};
        r.rhs = lp.upper[i];
        r.family = RowFamily::Bound;
        bound_rows.push_back(std::move(r));
      }
    }
  }
  sp.c.assign(sp.ncols, 0.0);
  for (int i = 0; i < lp.num_vars; ++i) {
    sp.c[sp.map[i].pos] += lp.objective[i];
    if (sp.map[i].neg >= 0) sp.c[sp.map[i].neg] -= lp.objective[i];
  }

  auto convert = [&sp](const SparseRow& r, bool is_eq) {
    StdRow out;
    out.is_eq = is_eq;
    out.family = r.family;
    double rhs = r.rhs;
    std::map<int, double> acc;
    for (const auto& [idx, coef] : r.terms) {
      const ColMap& cm = sp.map[idx];
      rhs -= coef * cm.shift;
      acc[cm.pos] += coef;
      if (cm.neg >= 0) acc[cm.neg] -= coef;
    }
    double scale = 1.0;
    for (const auto& [col, v] : acc) scale = std::max(scale, std::abs(v));
    for (const auto& [col, v] : acc)
      if (std::abs(v) > 0.0) out.a.emplace_back(col, v / scale);
    out.rhs = rhs / scale;
    return out;
  };

  for (const SparseRow& r : lp.equal) sp.rows.push_back(convert(r, true));
  sp.num_eq = static_cast<int>(sp.rows.size());
  for (const SparseRow& r : lp.less_equal) sp.rows.push_back(convert(r, false));
  for (StdRow& r : bound_rows) sp.rows.push_back(std::move(r));
  return sp;
}

struct CoreResult {
  LpStatus status = LpStatus::IterationLimit;
  std::vector<double> z;
  std::vector<double> ray;
  std::vector<std::pair<RowFamily, double>> infeasibility;
  int iterations = 0;
};

// Dense two-phase tableau simplex over the selected rows.
class CoreSimplex {
 public:
  CoreSimplex(const StdProblem& sp, const std::vector<int>& active,
              const SimplexOptions& opts)
      : sp_(sp), active_(active), opts_(opts) {}

  CoreResult run() {
    build();
    CoreResult res;
    if (!phase1(res)) return res;
    phase2(res);
    return res;
  }

 private:
  void build() {
    m_ = static_cast<int>(active_.size());
    nslack_ = 0;
    for (int r : active_)
      if (!sp_.rows[r].is_eq) ++nslack_;
    // Columns: structural | slacks | artificials (one per row, used as needed).
    slack0_ = sp_.ncols;
    art0_ = slack0_ + nslack_;
    total_ = art0_ + m_;
    T_.setZero(m_, total_ + 1);
    basis_.assign(m_, -1);
    artificial_rows_.clear();

    int srow = 0;
    for (int i = 0; i < m_; ++i) {
      const StdRow& row = sp_.rows[active_[i]];
      for (const auto& [col, v] : row.a) T_(i, col) = v;
      double rhs = row.rhs;
      int slack_col = -1;
      if (!row.is_eq) {
        slack_col = slack0_ + srow++;
        T_(i, slack_col) = 1.0;
      }
      if (rhs < 0.0) {
        T_.row(i) = -T_.row(i);
        rhs = -rhs;
      }
      T_(i, total_) = rhs;
      if (!row.is_eq && T_(i, slack_col) > 0.5) {
        basis_[i] = slack_col;
      } else {
        const int art = art0_ + i;
        T_(i, art) = 1.0;
        basis_[i] = art;
        artificial_rows_.push_back(i);
      }
    }
  }

  void pivot(int row, int col) {
    T_.row(row) /= T_(row, col);
    for (int r = 0; r < m_; ++r) {
      if (r == row) continue;
      const double f = T_(r, col);
      if (f != 0.0) T_.row(r) -= f * T_.row(row);
    }
    const double fc = cost_(col);
    if (fc != 0.0) cost_ -= fc * T_.row(row);
    basis_[row] = col;
  }

  // Returns false when the iteration limit was hit.
  bool iterate(int allowed_cols, CoreResult& res, bool phase_one) {
    int stall = 0;
    bool bland = false;
    double last_obj = -cost_(total_);
    while (true) {
      if (res.iterations >= opts_.max_iterations) {
        res.status = LpStatus::IterationLimit;
        return false;
      }
      int entering = -1;
      if (bland) {
        for (int j = 0; j < allowed_cols; ++j)
          if (!banned_[j] && cost_(j) < -opts_.tol) {
            entering = j;
            break;
          }
      } else {
        double best = -opts_.tol;
        for (int j = 0; j < allowed_cols; ++j)
          if (!banned_[j] && cost_(j) < best) {
            best = cost_(j);
            entering = j;
          }
      }
      if (entering < 0) return true;  // optimal for this phase

      int leave = -1;
      double best_ratio = kInf;
      for (int r = 0; r < m_; ++r) {
        const double a = T_(r, entering);
        if (a <= 1e-9) continue;
        const double ratio = T_(r, total_) / a;
        const bool tie = ratio < best_ratio + 1e-12;
        if (ratio < best_ratio - 1e-12) {
          best_ratio = ratio;
          leave = r;
        } else if (tie && leave >= 0) {
          // Bland mode: smallest basis index. Otherwise prefer the larger
          // pivot element for numerical stability.
          if (bland ? basis_[r] < basis_[leave]
                    : T_(r, entering) > T_(leave, entering)) {
            best_ratio = std::min(best_ratio, ratio);
            leave = r;
          }
        }
      }
      if (leave < 0) {
        // Distinguish a genuine ray from a numerically null column (all
        // entries at noise level while the reduced cost barely clears tol).
        double max_entry = 0.0;
        for (int r = 0; r < m_; ++r) max_entry = std::max(max_entry, T_(r, entering));
        if (phase_one || max_entry > 1e-14 || cost_(entering) > -1e-7) {
          banned_[entering] = true;
          continue;
        }
        res.status = LpStatus::Unbounded;
        res.ray.assign(sp_.ncols, 0.0);
        if (entering < sp_.ncols) res.ray[entering] = 1.0;
        for (int r = 0; r < m_; ++r)
          if (basis_[r] < sp_.ncols) res.ray[basis_[r]] = -T_(r, entering);
        return false;
      }
      pivot(leave, entering);
      ++res.iterations;

      const double obj = -cost_(total_);
      if (obj < last_obj - 1e-12) {
        stall = 0;
        last_obj = obj;
      } else if (++stall > 64) {
        bland = true;  // anti-cycling fallback
      }
    }
  }

  bool phase1(CoreResult& res) {
    banned_.assign(total_, false);
    for (int j = art0_; j < total_; ++j) banned_[j] = true;  // never re-enter
    cost_.setZero(total_ + 1);
    for (int r : artificial_rows_) cost_ -= T_.row(r);
    if (!artificial_rows_.empty()) {
      if (!iterate(art0_, res, /*phase_one=*/true)) return false;
      const double infeas = -cost_(total_);
      if (infeas > 1e-7) {
        res.status = LpStatus::Infeasible;
        std::map<RowFamily, double> residuals;
        for (int r = 0; r < m_; ++r)
          if (basis_[r] >= art0_ && T_(r, total_) > 1e-9)
            residuals[sp_.rows[active_[r]].family] += T_(r, total_);
        res.infeasibility.assign(residuals.begin(), residuals.end());
        return false;
      }
      // Drive remaining zero-level artificials out of the basis.
      for (int r = 0; r < m_; ++r) {
        if (basis_[r] < art0_) continue;
        int col = -1;
        for (int j = 0; j < art0_; ++j)
          if (std::abs(T_(r, j)) > 1e-9) {
            col = j;
            break;
          }
        if (col >= 0) {
          pivot(r, col);
        } else {
          redundant_rows_.push_back(r);  // all-zero row: dependent constraint
        }
      }
    }
    return true;
  }

  void phase2(CoreResult& res) {
    // Re-allow columns banned as numeric noise in phase 1; artificials stay out.
    banned_.assign(total_, false);
    for (int j = art0_; j < total_; ++j) banned_[j] = true;
    cost_.setZero(total_ + 1);
    for (int j = 0; j < sp_.ncols; ++j) cost_(j) = sp_.c[j];
    for (int r = 0; r < m_; ++r) {
      const int b = basis_[r];
      if (b < sp_.ncols && sp_.c[b] != 0.0) cost_ -= sp_.c[b] * T_.row(r);
    }
    // Redundant rows keep their zero-level artificial basic; their columns
    // stay banned so they are inert.
    if (!iterate(art0_, res, /*phase_one=*/false)) return;
    res.status = LpStatus::Optimal;
    res.z.assign(sp_.ncols, 0.0);
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < sp_.ncols) res.z[basis_[r]] = T_(r, total_);
  }

  const StdProblem& sp_;
  const std::vector<int>& active_;
  const SimplexOptions& opts_;
  int m_ = 0, nslack_ = 0, slack0_ = 0, art0_ = 0, total_ = 0;
  Eigen::MatrixXd T_;
  Eigen::RowVectorXd cost_;
  std::vector<int> basis_;
  std::vector<char> banned_;
  std::vector<int> artificial_rows_;
  std::vector<int> redundant_rows_;
};

double eval_row(const StdRow& row, const std::vector<double>& z) {
  double v = 0.0;
  for (const auto& [col, coef] : row.a) v += coef * z[col];
  return v;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts) {
  lp.validate();
  const StdProblem sp = standardize(lp);
  const int nrows = static_cast<int>(sp.rows.size());

  std::vector<int> active;
  std::vector<char> is_active(nrows, 0);
  auto activate = [&](int r) {
    if (!is_active[r]) {
      is_active[r] = 1;
      active.push_back(r);
    }
  };
  if (opts.row_activation) {
    for (int r = 0; r < nrows; ++r)
      if (sp.rows[r].is_eq || sp.rows[r].rhs < 0.0) activate(r);
  } else {
    for (int r = 0; r < nrows; ++r) activate(r);
  }

  LpSolution sol;
  int total_iterations = 0;
  const bool debug = std::getenv("GCSPLAN_LP_DEBUG") != nullptr;
  for (int round = 0; round < 10000; ++round) {
    std::sort(active.begin(), active.end());
    CoreResult res = CoreSimplex(sp, active, opts).run();
    total_iterations += res.iterations;
    if (debug)
      std::fprintf(stderr, "lp round %d: active=%zu status=%d iters=%d\n", round,
                   active.size(), static_cast<int>(res.status), res.iterations);

    if (res.status == LpStatus::Infeasible || res.status == LpStatus::IterationLimit) {
      sol.status = res.status;
      sol.infeasibility = std::move(res.infeasibility);
      sol.iterations = total_iterations;
      return sol;
    }

    const std::vector<double>& probe =
        res.status == LpStatus::Optimal ? res.z : res.ray;
    std::vector<std::pair<double, int>> violated;  // (violation, row)
    for (int r = 0; r < nrows; ++r) {
      if (is_active[r]) continue;
      const StdRow& row = sp.rows[r];
      const double lhs = eval_row(row, probe);
      const double bound = res.status == LpStatus::Optimal ? row.rhs : 0.0;
      const double v = lhs - bound;
      if (v > opts.tol * (1.0 + std::abs(row.rhs))) violated.emplace_back(-v, r);
    }

    if (violated.empty()) {
      sol.status = res.status;
      sol.iterations = total_iterations;
      if (res.status == LpStatus::Optimal) {
        sol.x.assign(lp.num_vars, 0.0);
        for (int i = 0; i < lp.num_vars; ++i) {
          const ColMap& cm = sp.map[i];
          sol.x[i] = cm.shift + res.z[cm.pos] - (cm.neg >= 0 ? res.z[cm.neg] : 0.0);
          sol.objective += lp.objective[i] * sol.x[i];
        }
      }
      return sol;
    }
    std::sort(violated.begin(), violated.end());
    const int batch = std::min<int>(opts.activation_batch, violated.size());
    for (int k = 0; k < batch; ++k) activate(violated[k].second);
  }
  sol.status = LpStatus::IterationLimit;
  sol.iterations = total_iterations;
  return sol;
}

}  // namespace gcsplan
