#include "gcsplan/timing.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gcsplan/scenario.hpp"

namespace gcsplan {
namespace {

// Arc length advanced along the profile after time t; closed-form piecewise
// kinematics, constant final speed past the last piece.
double advance(const std::vector<ProfilePiece>& profile, double t) {
  double s = 0.0;
  double remaining = t;
  double final_speed = 0.0;
  for (const ProfilePiece& p : profile) {
    final_speed = p.speed + p.accel * p.duration;
    if (remaining <= p.duration) {
      return s + p.speed * remaining + 0.5 * p.accel * remaining * remaining;
    }
    s += p.speed * p.duration + 0.5 * p.accel * p.duration * p.duration;
    remaining -= p.duration;
  }
  return s + final_speed * remaining;
}

struct PolylinePoint {
  Vec2 position;
  double yaw;
};

PolylinePoint point_at_arclength(const std::vector<Vec2>& path, double s) {
  double walked = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Vec2 seg = path[i + 1] - path[i];
    const double len = seg.norm();
    if (s <= walked + len || i + 2 == path.size()) {
      const Vec2 dir = len > 1e-12 ? Vec2(seg / len) : Vec2(1, 0);
      return {path[i] + dir * (s - walked), std::atan2(dir.y(), dir.x())};
    }
    walked += len;
  }
  return {path.back(), 0.0};
}

}  // namespace

void ObstaclePrediction::validate() const {
  if (path.size() < 2) throw ScenarioError("obstacle path needs at least 2 points");
  if (profile.empty()) throw ScenarioError("obstacle profile is empty");
  if (length < 0.0 || width < 0.0)
    throw ScenarioError("obstacle footprint cannot be negative");
  double speed_out = profile.front().speed;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const ProfilePiece& p = profile[i];
    if (p.duration <= 0.0) throw ScenarioError("obstacle profile piece duration must be > 0");
    if (p.speed < 0.0 || p.speed + p.accel * p.duration < -1e-12)
      throw ScenarioError("obstacle speed must stay nonnegative");
    if (i > 0 && std::abs(p.speed - speed_out) > 1e-9)
      throw ScenarioError("obstacle profile speed jumps across a piece boundary");
    speed_out = p.speed + p.accel * p.duration;
  }
}

Pose predict_pose(const ObstaclePrediction& o, double t) {
  if (t < 0.0) throw NumericalError("prediction time must be nonnegative");
  const PolylinePoint p = point_at_arclength(o.path, advance(o.profile, t));
  return Pose{p.position, p.yaw};
}

std::optional<std::pair<double, double>> occupancy_interval(
    const ObstaclePrediction& o, const Polytope& region, double horizon,
    double margin) {
  if (horizon <= 0.0) throw NumericalError("occupancy horizon must be positive");

  const double len = o.length + 2.0 * margin;
  const double wid = o.width + 2.0 * margin;
  const ConvexPolygon region_poly{region.vertices()};
  auto inside = [&](double t) {
    const Pose pose = predict_pose(o, t);
    if (len < 1e-12 || wid < 1e-12) return contains(region, pose.position, 0.0);
    const ConvexPolygon foot = oriented_rectangle(pose.position, pose.yaw, len, wid);
    return polygon_distance(region_poly, foot) <= 1e-12;
  };

  constexpr double kCoarse = 0.01;   // 10 ms sweep
  constexpr double kRefine = 0.001;  // 1 ms bisection width
  const int n = static_cast<int>(std::ceil(horizon / kCoarse));
  int first = -1, last = -1;
  std::vector<char> hits(n + 1, 0);
  for (int i = 0; i <= n; ++i) {
    const double t = std::min(horizon, i * kCoarse);
    hits[i] = inside(t) ? 1 : 0;
    if (hits[i]) {
      if (first < 0) first = i;
      last = i;
    }
  }
  if (first < 0) return std::nullopt;

  double t_in = std::min(horizon, first * kCoarse);
  if (first > 0) {
    double lo = (first - 1) * kCoarse, hi = t_in;  // lo outside, hi inside
    while (hi - lo > kRefine) {
      const double mid = 0.5 * (lo + hi);
      (inside(mid) ? hi : lo) = mid;
    }
    t_in = hi;
  }
  double t_out = std::min(horizon, last * kCoarse);
  if (last < n) {
    double lo = t_out, hi = std::min(horizon, (last + 1) * kCoarse);  // lo inside
    while (hi - lo > kRefine) {
      const double mid = 0.5 * (lo + hi);
      (inside(mid) ? lo : hi) = mid;
    }
    t_out = lo;
  }
  return std::make_pair(t_in, t_out);
}

namespace {

void merge_bound(std::optional<double>& into, std::optional<double> value, bool take_max) {
  if (!value) return;
  if (!into)
    into = value;
  else
    into = take_max ? std::max(*into, *value) : std::min(*into, *value);
}

void merge_window(TimingWindow& into, const TimingWindow& w) {
  merge_bound(into.entry_min, w.entry_min, true);
  merge_bound(into.entry_max, w.entry_max, false);
  merge_bound(into.exit_min, w.exit_min, true);
  merge_bound(into.exit_max, w.exit_max, false);
  merge_bound(into.max_dwell, w.max_dwell, false);
  if (!w.note.empty()) into.note += (into.note.empty() ? "" : "; ") + w.note;
}

void check_window(const TimingWindow& w) {
  auto bad = [](std::optional<double> lo, std::optional<double> hi) {
    return lo && hi && *lo > *hi + 1e-12;
  };
  if (bad(w.entry_min, w.entry_max) || bad(w.exit_min, w.exit_max) ||
      (w.max_dwell && *w.max_dwell < 0.0))
    throw ScenarioError("contradictory timing window for region '" + w.vertex +
                        "' (" + w.note + ")");
}

}  // namespace

std::vector<TimingWindow> timing_windows(const Scenario& scenario) {
  std::map<std::string, TimingWindow> merged;
  auto absorb = [&merged](const TimingWindow& w) {
    auto [it, fresh] = merged.try_emplace(w.vertex, w);
    if (!fresh) merge_window(it->second, w);
  };

  for (std::size_t oi = 0; oi < scenario.dynamic_obstacles.size(); ++oi) {
    const DynamicObstacleSpec& obs = scenario.dynamic_obstacles[oi];
    for (const AvoidanceRule& rule : obs.avoidance) {
      const int v = scenario.graph.index_of(rule.region_id);
      if (v < 0)
        throw ScenarioError("avoidance rule names unknown region '" + rule.region_id + "'");
      const auto occ =
          occupancy_interval(obs.prediction, scenario.graph.vertices[v].region,
                             scenario.limits.t_max, 0.5 * scenario.ego_length);
      if (!occ) continue;
      TimingWindow w;
      w.vertex = rule.region_id;
      w.note = "obstacle " + std::to_string(oi) +
               (rule.mode == AvoidMode::ExitBefore ? " exit-before " : " enter-after ");
      if (rule.mode == AvoidMode::ExitBefore) {
        w.exit_max = occ->first;
        w.note += "T_in=" + std::to_string(occ->first);
      } else {
        w.entry_min = occ->second;
        w.note += "T_out=" + std::to_string(occ->second);
      }
      absorb(w);
    }
  }
  for (const TimingWindow& w : scenario.pinned_windows) absorb(w);

  std::vector<TimingWindow> out;
  out.reserve(merged.size());
  for (auto& [id, w] : merged) {
    check_window(w);
    out.push_back(w);
  }
  return out;
}

}  // namespace gcsplan
