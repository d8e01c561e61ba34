#include "gcsplan/program.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

namespace gcsplan {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string path_label(const Scenario& sc, const std::vector<int>& path) {
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += "->";
    s += sc.graph.vertices[path[i]].id;
  }
  return s;
}

// Coefficients of the k-th forward difference.
constexpr double kDiff2[3] = {1.0, -2.0, 1.0};
constexpr double kDiff3[4] = {-1.0, 3.0, -3.0, 1.0};

}  // namespace

Strategy strategy_from_string(const std::string& s) {
  if (s == "auto") return Strategy::Auto;
  if (s == "enumerate") return Strategy::Enumerate;
  if (s == "relax-round") return Strategy::RelaxRound;
  if (s == "both") return Strategy::Both;
  throw ScenarioError("unknown strategy '" + s + "'");
}

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Auto: return "auto";
    case Strategy::Enumerate: return "enumerate";
    case Strategy::RelaxRound: return "relax-round";
    case Strategy::Both: return "both";
  }
  return "?";
}

int PathProgram::epi_per_vertex() const { return 2 * ((degree - 1) + (degree - 2)); }

int PathProgram::stride() const { return 3 * (degree + 1) + epi_per_vertex(); }

int PathProgram::var_px(int k, int l) const { return k * stride() + 2 * l; }

int PathProgram::var_py(int k, int l) const { return k * stride() + 2 * l + 1; }

int PathProgram::var_tau(int k, int l) const {
  return k * stride() + 2 * (degree + 1) + l;
}

int PathProgram::var_epi(int k, int family, int j) const {
  const int n2 = degree - 1, n3 = degree - 2;
  int off = k * stride() + 3 * (degree + 1);
  switch (family) {
    case 0: return off + j;
    case 1: return off + n2 + j;
    case 2: return off + n2 + n3 + j;
    case 3: return off + n2 + n3 + n2 + j;
  }
  throw NumericalError("unknown epigraph family");
}

std::map<int, TimingWindow> resolve_windows(const Scenario& scenario) {
  std::map<int, TimingWindow> out;
  for (const TimingWindow& w : timing_windows(scenario)) {
    const int v = scenario.graph.index_of(w.vertex);
    if (v < 0) throw ScenarioError("timing window names unknown region '" + w.vertex + "'");
    out[v] = w;
  }
  return out;
}

PathProgram assemble_path_program(const Scenario& scenario, const std::vector<int>& path,
                                  const std::map<int, TimingWindow>& windows) {
  if (path.empty()) throw ScenarioError("cannot assemble a program for an empty path");
  const int m = scenario.degree;
  if (m < 4) throw ScenarioError("degree must be at least 4 for C3 gluing");
  std::set<std::pair<int, int>> edge_set(scenario.graph.edges.begin(),
                                         scenario.graph.edges.end());
  for (std::size_t k = 0; k + 1 < path.size(); ++k)
    if (!edge_set.count({path[k], path[k + 1]}))
      throw ScenarioError("path uses an edge missing from the graph");

  PathProgram prog;
  prog.path = path;
  prog.degree = m;
  LinearProgram& lp = prog.lp;

  const int K = static_cast<int>(path.size());
  const CostWeights& w = scenario.weights;
  const Limits& lim = scenario.limits;
  const UnitBallFacets facets = unit_ball_facets(scenario.facets);
  const double inf = LinearProgram::kInf;

  // Variables, laid out exactly as the accessors expect.
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l <= m; ++l) {
      lp.add_var(0.0, -inf, inf);  // px
      lp.add_var(0.0, -inf, inf);  // py
    }
    for (int l = 0; l <= m; ++l) lp.add_var(0.0, 0.0, inf);  // tau
    for (int j = 0; j < m - 1; ++j) lp.add_var(w.alpha1, 0.0, inf);
    for (int j = 0; j < m - 2; ++j) lp.add_var(w.alpha2, 0.0, inf);
    for (int j = 0; j < m - 1; ++j) lp.add_var(w.alpha3, 0.0, inf);
    for (int j = 0; j < m - 2; ++j) lp.add_var(w.alpha4, 0.0, inf);
  }

  for (int k = 0; k < K; ++k) {
    const GraphVertex& vert = scenario.graph.vertices[path[k]];

    // (1) containment of every control point in the region
    for (int l = 0; l <= m; ++l)
      for (std::size_t i = 0; i < vert.region.normals.size(); ++i)
        lp.add_leq({{prog.var_px(k, l), vert.region.normals[i].x()},
                    {prog.var_py(k, l), vert.region.normals[i].y()}},
                   vert.region.offsets[i], RowFamily::Containment);

    for (int l = 0; l < m; ++l) {
      const int px0 = prog.var_px(k, l), px1 = prog.var_px(k, l + 1);
      const int py0 = prog.var_py(k, l), py1 = prog.var_py(k, l + 1);
      const int t0 = prog.var_tau(k, l), t1 = prog.var_tau(k, l + 1);
      // (3) facet speed bound and directional minimum speed
      for (const Vec2& a : facets.directions)
        lp.add_leq({{px1, a.x()}, {px0, -a.x()}, {py1, a.y()}, {py0, -a.y()},
                    {t1, -lim.v_max}, {t0, lim.v_max}},
                   0.0, RowFamily::Velocity);
      if (lim.v_min > 0.0)
        lp.add_geq({{px1, vert.direction.x()}, {px0, -vert.direction.x()},
                    {py1, vert.direction.y()}, {py0, -vert.direction.y()},
                    {t1, -lim.v_min}, {t0, lim.v_min}},
                   0.0, RowFamily::MinSpeed);
      // (2) strictly increasing time-scaling
      lp.add_geq({{t1, 1.0}, {t0, -1.0}}, lim.h_rate_min / m, RowFamily::Monotonicity);
    }

    // (6) per-vertex timing windows
    if (auto it = windows.find(path[k]); it != windows.end()) {
      const TimingWindow& win = it->second;
      const int entry = prog.var_tau(k, 0), exit = prog.var_tau(k, m);
      if (win.entry_min) lp.add_geq({{entry, 1.0}}, *win.entry_min, RowFamily::TimeWindow);
      if (win.entry_max) lp.add_leq({{entry, 1.0}}, *win.entry_max, RowFamily::TimeWindow);
      if (win.exit_min) lp.add_geq({{exit, 1.0}}, *win.exit_min, RowFamily::TimeWindow);
      if (win.exit_max) lp.add_leq({{exit, 1.0}}, *win.exit_max, RowFamily::TimeWindow);
      if (win.max_dwell)
        lp.add_leq({{exit, 1.0}, {entry, -1.0}}, *win.max_dwell, RowFamily::TimeWindow);
    }

    // objective epigraphs: facet-supported norms of the difference vectors
    for (int j = 0; j <= m - 2; ++j) {
      const int sig = prog.var_epi(k, 0, j);
      for (const Vec2& a : facets.directions) {
        std::vector<std::pair<int, double>> terms{{sig, -1.0}};
        for (int i = 0; i < 3; ++i) {
          terms.push_back({prog.var_px(k, j + i), a.x() * kDiff2[i]});
          terms.push_back({prog.var_py(k, j + i), a.y() * kDiff2[i]});
        }
        lp.add_leq(std::move(terms), 0.0, RowFamily::Epigraph);
      }
      const int sig_t = prog.var_epi(k, 2, j);
      for (double sgn : {1.0, -1.0})
        lp.add_leq({{prog.var_tau(k, j), sgn * kDiff2[0]},
                    {prog.var_tau(k, j + 1), sgn * kDiff2[1]},
                    {prog.var_tau(k, j + 2), sgn * kDiff2[2]},
                    {sig_t, -1.0}},
                   0.0, RowFamily::Epigraph);
    }
    for (int j = 0; j <= m - 3; ++j) {
      const int sig = prog.var_epi(k, 1, j);
      for (const Vec2& a : facets.directions) {
        std::vector<std::pair<int, double>> terms{{sig, -1.0}};
        for (int i = 0; i < 4; ++i) {
          terms.push_back({prog.var_px(k, j + i), a.x() * kDiff3[i]});
          terms.push_back({prog.var_py(k, j + i), a.y() * kDiff3[i]});
        }
        lp.add_leq(std::move(terms), 0.0, RowFamily::Epigraph);
      }
      const int sig_t = prog.var_epi(k, 3, j);
      for (double sgn : {1.0, -1.0}) {
        std::vector<std::pair<int, double>> terms{{sig_t, -1.0}};
        for (int i = 0; i < 4; ++i)
          terms.push_back({prog.var_tau(k, j + i), sgn * kDiff3[i]});
        lp.add_leq(std::move(terms), 0.0, RowFamily::Epigraph);
      }
    }
  }

  // (4) C3 gluing of both families across consecutive vertices
  for (int k = 0; k + 1 < K; ++k) {
    auto glue = [&lp, &prog, k](auto var, int dims) {
      const int m_ = prog.degree;
      for (int d = 0; d < dims; ++d) {
        lp.add_eq({{var(k, m_, d), 1.0}, {var(k + 1, 0, d), -1.0}}, 0.0,
                  RowFamily::Continuity);
        for (int order = 1; order <= 3; ++order) {
          const double* coef = order == 1 ? nullptr : (order == 2 ? kDiff2 : kDiff3);
          std::vector<std::pair<int, double>> terms;
          if (order == 1) {
            terms = {{var(k, m_, d), 1.0}, {var(k, m_ - 1, d), -1.0},
                     {var(k + 1, 1, d), -1.0}, {var(k + 1, 0, d), 1.0}};
          } else {
            const int n = order + 1;
            for (int i = 0; i < n; ++i) {
              terms.push_back({var(k, m_ - order + i, d), coef[i]});
              terms.push_back({var(k + 1, i, d), -coef[i]});
            }
          }
          lp.add_eq(std::move(terms), 0.0, RowFamily::Continuity);
        }
      }
    };
    glue([&prog](int kk, int l, int d) {
      return d == 0 ? prog.var_px(kk, l) : prog.var_py(kk, l);
    }, 2);
    glue([&prog](int kk, int l, int) { return prog.var_tau(kk, l); }, 1);
  }

  // (5) boundary conditions
  lp.add_eq({{prog.var_tau(0, 0), 1.0}}, 0.0, RowFamily::Boundary);
  lp.add_eq({{prog.var_px(0, 0), 1.0}}, scenario.start.x(), RowFamily::Boundary);
  lp.add_eq({{prog.var_py(0, 0), 1.0}}, scenario.start.y(), RowFamily::Boundary);
  lp.add_eq({{prog.var_px(0, 1), 1.0}, {prog.var_px(0, 0), -1.0},
             {prog.var_tau(0, 1), -scenario.start_velocity.x()},
             {prog.var_tau(0, 0), scenario.start_velocity.x()}},
            0.0, RowFamily::Boundary);
  lp.add_eq({{prog.var_py(0, 1), 1.0}, {prog.var_py(0, 0), -1.0},
             {prog.var_tau(0, 1), -scenario.start_velocity.y()},
             {prog.var_tau(0, 0), scenario.start_velocity.y()}},
            0.0, RowFamily::Boundary);
  const int kl = K - 1;
  for (std::size_t i = 0; i < scenario.goal_region.normals.size(); ++i)
    lp.add_leq({{prog.var_px(kl, m), scenario.goal_region.normals[i].x()},
                {prog.var_py(kl, m), scenario.goal_region.normals[i].y()}},
               scenario.goal_region.offsets[i], RowFamily::Boundary);
  lp.add_eq({{prog.var_px(kl, m), 1.0}, {prog.var_px(kl, m - 1), -1.0},
             {prog.var_tau(kl, m), -scenario.goal_velocity.x()},
             {prog.var_tau(kl, m - 1), scenario.goal_velocity.x()}},
            0.0, RowFamily::Boundary);
  lp.add_eq({{prog.var_py(kl, m), 1.0}, {prog.var_py(kl, m - 1), -1.0},
             {prog.var_tau(kl, m), -scenario.goal_velocity.y()},
             {prog.var_tau(kl, m - 1), scenario.goal_velocity.y()}},
            0.0, RowFamily::Boundary);
  // (2) horizon
  lp.add_leq({{prog.var_tau(kl, m), 1.0}}, scenario.limits.t_max, RowFamily::TimeWindow);

  return prog;
}

std::vector<TrajectorySegment> extract(const std::vector<double>& solution,
                                       const PathProgram& program) {
  const int m = program.degree;
  const int K = static_cast<int>(program.path.size());
  std::vector<TrajectorySegment> segments;
  segments.reserve(K);
  for (int k = 0; k < K; ++k) {
    std::vector<Vec2> pts(m + 1);
    std::vector<double> knots(m + 1);
    for (int l = 0; l <= m; ++l) {
      pts[l] = Vec2(solution[program.var_px(k, l)], solution[program.var_py(k, l)]);
      knots[l] = solution[program.var_tau(k, l)];
    }
    knots[0] = std::max(knots[0], 0.0);  // solver round-off at the t=0 boundary
    for (int l = 0; l < m; ++l)
      if (knots[l + 1] - knots[l] <= 0.0)
        throw NumericalError("extracted time-scaling is not increasing (solver tolerance breach)");
    std::vector<Bezier2d::Point> cp(pts.begin(), pts.end());
    segments.emplace_back(Bezier2d(std::move(cp)), TimeScaling(std::move(knots)));
  }

  // Gluing residuals must vanish; report rather than clamp.
  for (int k = 0; k + 1 < K; ++k) {
    const auto& a = segments[k].spatial.control_points;
    const auto& b = segments[k + 1].spatial.control_points;
    const auto& ta = segments[k].temporal.curve.control_points;
    const auto& tb = segments[k + 1].temporal.curve.control_points;
    double res = (a[m] - b[0]).norm() + std::abs(ta[m](0) - tb[0](0));
    res += ((a[m] - a[m - 1]) - (b[1] - b[0])).norm();
    res += std::abs((ta[m](0) - ta[m - 1](0)) - (tb[1](0) - tb[0](0)));
    res += ((a[m] - 2 * a[m - 1] + a[m - 2]) - (b[2] - 2 * b[1] + b[0])).norm();
    res += std::abs((ta[m](0) - 2 * ta[m - 1](0) + ta[m - 2](0)) -
                    (tb[2](0) - 2 * tb[1](0) + tb[0](0)));
    res += ((a[m] - 3 * a[m - 1] + 3 * a[m - 2] - a[m - 3]) -
            (b[3] - 3 * b[2] + 3 * b[1] - b[0])).norm();
    res += std::abs((ta[m](0) - 3 * ta[m - 1](0) + 3 * ta[m - 2](0) - ta[m - 3](0)) -
                    (tb[3](0) - 3 * tb[2](0) + 3 * tb[1](0) - tb[0](0)));
    if (res > 1e-8)
      throw NumericalError("gluing residual above tolerance after extraction");
  }
  return segments;
}

namespace {

// Variable block of one lifted edge copy.
struct LiftedBlock {
  int p0 = -1;    // first of 2*(m+1) spatial coords
  int tau0 = -1;  // first of (m+1) knots
};

struct LiftedEdge {
  int y = -1;
  LiftedBlock tail, head;
};

// Emits every per-vertex constraint on one lifted copy, scaled by the flow.
void emit_copy_constraints(LinearProgram& lp, const LiftedBlock& blk, int y,
                           const Scenario& sc, const GraphVertex& vert,
                           const TimingWindow* win, const UnitBallFacets& facets,
                           int m) {
  auto px = [&blk](int l) { return blk.p0 + 2 * l; };
  auto py = [&blk](int l) { return blk.p0 + 2 * l + 1; };
  auto tau = [&blk](int l) { return blk.tau0 + l; };
  const Limits& lim = sc.limits;

  for (int l = 0; l <= m; ++l)
    for (std::size_t i = 0; i < vert.region.normals.size(); ++i)
      lp.add_leq({{px(l), vert.region.normals[i].x()},
                  {py(l), vert.region.normals[i].y()},
                  {y, -vert.region.offsets[i]}},
                 0.0, RowFamily::Containment);
  for (int l = 0; l < m; ++l) {
    for (const Vec2& a : facets.directions)
      lp.add_leq({{px(l + 1), a.x()}, {px(l), -a.x()}, {py(l + 1), a.y()},
                  {py(l), -a.y()}, {tau(l + 1), -lim.v_max}, {tau(l), lim.v_max}},
                 0.0, RowFamily::Velocity);
    if (lim.v_min > 0.0)
      lp.add_geq({{px(l + 1), vert.direction.x()}, {px(l), -vert.direction.x()},
                  {py(l + 1), vert.direction.y()}, {py(l), -vert.direction.y()},
                  {tau(l + 1), -lim.v_min}, {tau(l), lim.v_min}},
                 0.0, RowFamily::MinSpeed);
    lp.add_geq({{tau(l + 1), 1.0}, {tau(l), -1.0}, {y, -lim.h_rate_min / m}}, 0.0,
               RowFamily::Monotonicity);
  }
  lp.add_leq({{tau(m), 1.0}, {y, -lim.t_max}}, 0.0, RowFamily::TimeWindow);
  if (win) {
    if (win->entry_min)
      lp.add_geq({{tau(0), 1.0}, {y, -*win->entry_min}}, 0.0, RowFamily::TimeWindow);
    if (win->entry_max)
      lp.add_leq({{tau(0), 1.0}, {y, -*win->entry_max}}, 0.0, RowFamily::TimeWindow);
    if (win->exit_min)
      lp.add_geq({{tau(m), 1.0}, {y, -*win->exit_min}}, 0.0, RowFamily::TimeWindow);
    if (win->exit_max)
      lp.add_leq({{tau(m), 1.0}, {y, -*win->exit_max}}, 0.0, RowFamily::TimeWindow);
    if (win->max_dwell)
      lp.add_leq({{tau(m), 1.0}, {tau(0), -1.0}, {y, -*win->max_dwell}}, 0.0,
                 RowFamily::TimeWindow);
  }
}

// Epigraph cost block over a lifted copy; returns nothing, adds sigma vars.
void emit_copy_cost(LinearProgram& lp, const LiftedBlock& blk, const Scenario& sc,
                    const UnitBallFacets& facets, int m) {
  auto px = [&blk](int l) { return blk.p0 + 2 * l; };
  auto py = [&blk](int l) { return blk.p0 + 2 * l + 1; };
  auto tau = [&blk](int l) { return blk.tau0 + l; };
  const CostWeights& w = sc.weights;
  for (int j = 0; j <= m - 2; ++j) {
    const int sig = lp.add_var(w.alpha1, 0.0, LinearProgram::kInf);
    for (const Vec2& a : facets.directions) {
      std::vector<std::pair<int, double>> terms{{sig, -1.0}};
      for (int i = 0; i < 3; ++i) {
        terms.push_back({px(j + i), a.x() * kDiff2[i]});
        terms.push_back({py(j + i), a.y() * kDiff2[i]});
      }
      lp.add_leq(std::move(terms), 0.0, RowFamily::Epigraph);
    }
    const int sig_t = lp.add_var(w.alpha3, 0.0, LinearProgram::kInf);
    for (double sgn : {1.0, -1.0})
      lp.add_leq({{tau(j), sgn * kDiff2[0]}, {tau(j + 1), sgn * kDiff2[1]},
                  {tau(j + 2), sgn * kDiff2[2]}, {sig_t, -1.0}},
                 0.0, RowFamily::Epigraph);
  }
  for (int j = 0; j <= m - 3; ++j) {
    const int sig = lp.add_var(w.alpha2, 0.0, LinearProgram::kInf);
    for (const Vec2& a : facets.directions) {
      std::vector<std::pair<int, double>> terms{{sig, -1.0}};
      for (int i = 0; i < 4; ++i) {
        terms.push_back({px(j + i), a.x() * kDiff3[i]});
        terms.push_back({py(j + i), a.y() * kDiff3[i]});
      }
      lp.add_leq(std::move(terms), 0.0, RowFamily::Epigraph);
    }
    const int sig_t = lp.add_var(w.alpha4, 0.0, LinearProgram::kInf);
    for (double sgn : {1.0, -1.0}) {
      std::vector<std::pair<int, double>> terms{{sig_t, -1.0}};
      for (int i = 0; i < 4; ++i) terms.push_back({tau(j + i), sgn * kDiff3[i]});
      lp.add_leq(std::move(terms), 0.0, RowFamily::Epigraph);
    }
  }
}

}  // namespace

FlowSolution relax_solve(const Scenario& scenario,
                         const std::map<int, TimingWindow>& windows) {
  const RegionGraph& g = scenario.graph;
  const int m = scenario.degree;
  const int npts = m + 1;
  const UnitBallFacets facets = unit_ball_facets(scenario.facets);
  LinearProgram lp;

  std::vector<LiftedEdge> lifted(g.edges.size());
  auto add_block = [&lp, npts](LiftedBlock& blk) {
    blk.p0 = lp.num_vars;
    for (int i = 0; i < 2 * npts; ++i)
      lp.add_var(0.0, -LinearProgram::kInf, LinearProgram::kInf);
    blk.tau0 = lp.num_vars;
    for (int i = 0; i < npts; ++i) lp.add_var(0.0, 0.0, LinearProgram::kInf);
  };
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    lifted[e].y = lp.add_var(0.0, 0.0, 1.0);
    add_block(lifted[e].tail);
    add_block(lifted[e].head);
  }

  auto window_for = [&windows](int v) -> const TimingWindow* {
    auto it = windows.find(v);
    return it == windows.end() ? nullptr : &it->second;
  };

  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto [u, v] = g.edges[e];
    const LiftedEdge& le = lifted[e];
    emit_copy_constraints(lp, le.tail, le.y, scenario, g.vertices[u], window_for(u),
                          facets, m);
    emit_copy_constraints(lp, le.head, le.y, scenario, g.vertices[v], window_for(v),
                          facets, m);
    emit_copy_cost(lp, le.tail, scenario, facets, m);
    if (v == g.target) emit_copy_cost(lp, le.head, scenario, facets, m);

    // continuity between the tail copy's end and the head copy's start
    auto tpx = [&le](int l) { return le.tail.p0 + 2 * l; };
    auto tpy = [&le](int l) { return le.tail.p0 + 2 * l + 1; };
    auto ttau = [&le](int l) { return le.tail.tau0 + l; };
    auto hpx = [&le](int l) { return le.head.p0 + 2 * l; };
    auto hpy = [&le](int l) { return le.head.p0 + 2 * l + 1; };
    auto htau = [&le](int l) { return le.head.tau0 + l; };
    auto glue = [&lp, m](auto tail_var, auto head_var) {
      lp.add_eq({{tail_var(m), 1.0}, {head_var(0), -1.0}}, 0.0, RowFamily::Continuity);
      lp.add_eq({{tail_var(m), 1.0}, {tail_var(m - 1), -1.0}, {head_var(1), -1.0},
                 {head_var(0), 1.0}},
                0.0, RowFamily::Continuity);
      for (int order = 2; order <= 3; ++order) {
        const double* coef = order == 2 ? kDiff2 : kDiff3;
        std::vector<std::pair<int, double>> terms;
        for (int i = 0; i <= order; ++i) {
          terms.push_back({tail_var(m - order + i), coef[i]});
          terms.push_back({head_var(i), -coef[i]});
        }
        lp.add_eq(std::move(terms), 0.0, RowFamily::Continuity);
      }
    };
    glue(tpx, hpx);
    glue(tpy, hpy);
    glue(ttau, htau);

    // boundary conditions, scaled by the flow
    if (u == g.source) {
      lp.add_eq({{tpx(0), 1.0}, {le.y, -scenario.start.x()}}, 0.0, RowFamily::Boundary);
      lp.add_eq({{tpy(0), 1.0}, {le.y, -scenario.start.y()}}, 0.0, RowFamily::Boundary);
      lp.add_eq({{ttau(0), 1.0}}, 0.0, RowFamily::Boundary);
      lp.add_eq({{tpx(1), 1.0}, {tpx(0), -1.0},
                 {ttau(1), -scenario.start_velocity.x()},
                 {ttau(0), scenario.start_velocity.x()}},
                0.0, RowFamily::Boundary);
      lp.add_eq({{tpy(1), 1.0}, {tpy(0), -1.0},
                 {ttau(1), -scenario.start_velocity.y()},
                 {ttau(0), scenario.start_velocity.y()}},
                0.0, RowFamily::Boundary);
    }
    if (v == g.target) {
      for (std::size_t i = 0; i < scenario.goal_region.normals.size(); ++i)
        lp.add_leq({{hpx(m), scenario.goal_region.normals[i].x()},
                    {hpy(m), scenario.goal_region.normals[i].y()},
                    {le.y, -scenario.goal_region.offsets[i]}},
                   0.0, RowFamily::Boundary);
      lp.add_eq({{hpx(m), 1.0}, {hpx(m - 1), -1.0},
                 {htau(m), -scenario.goal_velocity.x()},
                 {htau(m - 1), scenario.goal_velocity.x()}},
                0.0, RowFamily::Boundary);
      lp.add_eq({{hpy(m), 1.0}, {hpy(m - 1), -1.0},
                 {htau(m), -scenario.goal_velocity.y()},
                 {htau(m - 1), scenario.goal_velocity.y()}},
                0.0, RowFamily::Boundary);
    }
  }

  // flow conservation and spatial flow conservation
  for (int vtx = 0; vtx < static_cast<int>(g.vertices.size()); ++vtx) {
    std::vector<std::pair<int, double>> flow;
    std::vector<int> in_edges, out_edges;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      if (g.edges[e].first == vtx) {
        flow.push_back({lifted[e].y, 1.0});
        out_edges.push_back(static_cast<int>(e));
      }
      if (g.edges[e].second == vtx) {
        flow.push_back({lifted[e].y, -1.0});
        in_edges.push_back(static_cast<int>(e));
      }
    }
    const double rhs = vtx == g.source ? 1.0 : (vtx == g.target ? -1.0 : 0.0);
    lp.add_eq(std::move(flow), rhs, RowFamily::Flow);

    if (vtx == g.source || vtx == g.target) continue;
    for (int c = 0; c < 3 * npts; ++c) {
      std::vector<std::pair<int, double>> terms;
      auto coord = [npts, c](const LiftedBlock& b) {
        return c < 2 * npts ? b.p0 + c : b.tau0 + (c - 2 * npts);
      };
      for (int e : in_edges) terms.push_back({coord(lifted[e].head), 1.0});
      for (int e : out_edges) terms.push_back({coord(lifted[e].tail), -1.0});
      lp.add_eq(std::move(terms), 0.0, RowFamily::Flow);
    }
  }

  const LpSolution sol = solve_lp(lp);
  if (sol.status == LpStatus::Infeasible)
    throw InfeasibleError("relaxation infeasible: scenario admits no plan",
                          {sol.infeasibility_summary()});
  if (sol.status != LpStatus::Optimal)
    throw NumericalError("relaxation solve failed");

  FlowSolution flows;
  flows.edge_flows.resize(g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    flows.edge_flows[e] = sol.x[lifted[e].y];
  flows.lower_bound = sol.objective;
  return flows;
}

namespace {

struct PathAttempt {
  std::vector<int> path;
  double objective = 0.0;
  std::vector<TrajectorySegment> segments;
  bool feasible = false;
  std::string diagnostic;
};

PathAttempt solve_path(const Scenario& sc, const std::vector<int>& path,
                       const std::map<int, TimingWindow>& windows, PhaseTimes& times) {
  PathAttempt att;
  att.path = path;
  const auto t0 = Clock::now();
  PathProgram prog = assemble_path_program(sc, path, windows);
  times.assembly_ms += ms_since(t0);
  const auto t1 = Clock::now();
  const LpSolution sol = solve_lp(prog.lp);
  times.solve_ms += ms_since(t1);
  if (sol.status == LpStatus::Optimal) {
    att.feasible = true;
    att.objective = sol.objective;
    att.segments = extract(sol.x, prog);
  } else if (sol.status == LpStatus::Infeasible) {
    att.diagnostic = "path " + path_label(sc, path) + ": infeasible (" +
                     sol.infeasibility_summary() + ")";
  } else {
    att.diagnostic = "path " + path_label(sc, path) + ": solver failure";
  }
  return att;
}

}  // namespace

PlanResult plan(const Scenario& scenario, const PlannerConfig& config) {
  const auto t_start = Clock::now();
  PlanResult result;
  const std::map<int, TimingWindow> windows = resolve_windows(scenario);

  const auto t_enum = Clock::now();
  const std::vector<std::vector<int>> paths =
      enumerate_paths(scenario.graph, config.max_path_len);
  result.times.enumeration_ms = ms_since(t_enum);
  result.paths_considered = static_cast<int>(paths.size());
  if (paths.empty())
    throw InfeasibleError("no source->target route in the region graph", {});

  Strategy strategy = config.strategy;
  if (strategy == Strategy::Auto)
    strategy = static_cast<int>(paths.size()) <= config.max_enumeration
                   ? Strategy::Enumerate
                   : Strategy::RelaxRound;
  result.strategy_used = strategy;

  std::vector<std::string> diagnostics;
  auto run_enumeration = [&]() -> std::optional<PathAttempt> {
    std::optional<PathAttempt> best;
    for (const auto& path : paths) {
      PathAttempt att = solve_path(scenario, path, windows, result.times);
      if (!att.feasible) {
        diagnostics.push_back(att.diagnostic);
        continue;
      }
      if (!best || att.objective < best->objective - 1e-12) best = std::move(att);
    }
    return best;
  };

  std::optional<PathAttempt> chosen;
  if (strategy == Strategy::Enumerate) {
    chosen = run_enumeration();
  } else if (strategy == Strategy::RelaxRound) {
    const auto t_solve = Clock::now();
    const FlowSolution flows = relax_solve(scenario, windows);
    result.times.solve_ms += ms_since(t_solve);
    result.lower_bound = flows.lower_bound;
    const auto t_round = Clock::now();
    const std::vector<int> rounded = round_flows(flows, scenario.graph);
    result.times.rounding_ms = ms_since(t_round);
    if (!rounded.empty()) {
      PathAttempt att = solve_path(scenario, rounded, windows, result.times);
      if (att.feasible)
        chosen = std::move(att);
      else
        diagnostics.push_back(att.diagnostic + " [rounded path, falling back]");
    } else {
      diagnostics.push_back("rounding produced no path, falling back to enumeration");
    }
    if (!chosen) chosen = run_enumeration();
  } else {  // Both
    chosen = run_enumeration();
    const auto t_solve = Clock::now();
    const FlowSolution flows = relax_solve(scenario, windows);
    result.times.solve_ms += ms_since(t_solve);
    result.lower_bound = flows.lower_bound;
    const auto t_round = Clock::now();
    const std::vector<int> rounded = round_flows(flows, scenario.graph);
    result.times.rounding_ms = ms_since(t_round);
    if (!rounded.empty()) {
      PathAttempt att = solve_path(scenario, rounded, windows, result.times);
      if (att.feasible) result.objective_relax_round = att.objective;
      if (att.feasible && (!chosen || att.path != chosen->path))
        diagnostics.push_back("strategies disagree: enumeration " +
                              (chosen ? path_label(scenario, chosen->path) : "none") +
                              " vs rounding " + path_label(scenario, att.path));
    }
  }

  if (!chosen)
    throw InfeasibleError("no feasible path program", diagnostics);

  result.path = chosen->path;
  for (int v : result.path) result.path_ids.push_back(scenario.graph.vertices[v].id);
  result.segments = std::move(chosen->segments);
  result.objective = chosen->objective;
  result.times.total_ms = ms_since(t_start);
  return result;
}

}  // namespace gcsplan
