#include "gcsplan/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gcsplan/timing.hpp"

namespace gcsplan {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

}  // namespace

FeasibilityReport audit(const PlanResult& plan, const Scenario& scenario, double dt) {
  if (dt <= 0.0 || dt > 0.1)
    throw NumericalError("audit sample step must lie in (0, 0.1] s");
  if (plan.segments.empty()) throw NumericalError("plan has no segments");

  FeasibilityReport rep;
  rep.sample_dt = dt;
  rep.speed_bound =
      scenario.limits.v_max * unit_ball_facets(scenario.facets).conservativeness();

  std::vector<ConvexPolygon> static_polys;
  for (const OrientedBoxSpec& box : scenario.static_obstacles)
    static_polys.push_back(box.polygon());

  const double t0 = plan.start_time();
  const double t1 = plan.end_time();
  const auto steps = static_cast<std::size_t>(std::floor((t1 - t0) / dt));
  rep.sample_count = steps + 1;
  rep.samples.reserve(steps + 1);

  double last_yaw = std::atan2(scenario.start_velocity.y(), scenario.start_velocity.x());
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = std::min(t0 + static_cast<double>(i) * dt, t1);
    std::size_t seg_idx = 0;
    const TrajectorySegment& seg = segment_at_time(plan.segments, t, &seg_idx);
    const Kinematics kin = kinematics_at(seg, t);
    const double s = invert_time(seg.temporal, t);
    const AccelComponents acc = accel_components(seg, s);

    ProfileSample sample;
    sample.t = t;
    sample.x = kin.position.x();
    sample.y = kin.position.y();
    sample.v = kin.velocity.norm();
    sample.a_t = acc.tangential;
    sample.a_n = acc.normal;

    double yaw = last_yaw;
    if (sample.v >= scenario.limits.v_floor) {
      const FlatState fs = flat_reconstruct(kin.velocity, kin.acceleration,
                                            jerk_at(seg, t), scenario.vehicle,
                                            scenario.limits.v_floor);
      yaw = fs.psi;
      sample.steer = fs.steer;
      rep.max_abs_steer = std::max(rep.max_abs_steer.value_or(0.0), std::abs(fs.steer));
    } else {
      rep.flat_profile_complete = false;
    }
    last_yaw = yaw;

    const ConvexPolygon ego =
        oriented_rectangle(kin.position, yaw, scenario.ego_length, scenario.ego_width);
    double dist = std::numeric_limits<double>::infinity();
    for (const ConvexPolygon& obs : static_polys)
      dist = std::min(dist, polygon_distance(ego, obs));
    for (const DynamicObstacleSpec& dyn : scenario.dynamic_obstacles) {
      const Pose pose = predict_pose(dyn.prediction, t);
      const ConvexPolygon obs = oriented_rectangle(
          pose.position, pose.yaw, dyn.prediction.length, dyn.prediction.width);
      dist = std::min(dist, polygon_distance(ego, obs));
    }
    sample.min_dist = dist;
    if (dist < rep.min_obstacle_distance) {
      rep.min_obstacle_distance = dist;
      rep.min_distance_time = t;
    }

    rep.speed_min = std::min(rep.speed_min, sample.v);
    rep.speed_max = std::max(rep.speed_max, sample.v);
    if (sample.v > rep.speed_bound + 1e-9) ++rep.speed_violations;
    rep.max_abs_tangential = std::max(rep.max_abs_tangential, std::abs(acc.tangential));
    rep.max_abs_normal = std::max(rep.max_abs_normal, std::abs(acc.normal));

    // containment of the sampled position in its segment's region
    const Polytope& region = scenario.graph.vertices[plan.path[seg_idx]].region;
    for (std::size_t h = 0; h < region.normals.size(); ++h) {
      const double viol = region.normals[h].dot(kin.position) - region.offsets[h];
      rep.max_containment_violation = std::max(rep.max_containment_violation, viol);
    }
    rep.samples.push_back(sample);
  }
  rep.containment_ok = rep.max_containment_violation <= 1e-6;
  rep.speed_bound_ok = rep.speed_violations == 0;

  // two-sided continuity residuals at junction times
  for (std::size_t k = 0; k + 1 < plan.segments.size(); ++k) {
    const TrajectorySegment& left = plan.segments[k];
    const TrajectorySegment& right = plan.segments[k + 1];
    const double tj = left.exit_time();
    const Kinematics kl = kinematics_at(left, tj);
    const Kinematics kr = kinematics_at(right, std::max(tj, right.entry_time()));
    JunctionResidual res;
    res.time = tj;
    res.position = (kl.position - kr.position).norm();
    res.velocity = (kl.velocity - kr.velocity).norm();
    res.acceleration = (kl.acceleration - kr.acceleration).norm();
    res.jerk = (jerk_at(left, tj) - jerk_at(right, std::max(tj, right.entry_time()))).norm();
    rep.junctions.push_back(res);
  }

  // timing windows, re-read from the solved time-scaling control points
  const std::map<int, TimingWindow> windows = resolve_windows(scenario);
  for (std::size_t k = 0; k < plan.path.size(); ++k) {
    const auto it = windows.find(plan.path[k]);
    if (it == windows.end()) continue;
    const TimingWindow& w = it->second;
    const double entry = plan.segments[k].entry_time();
    const double exit = plan.segments[k].exit_time();
    auto fail = [&](const std::string& what, double got, double bound) {
      rep.windows_ok = false;
      rep.window_violations.push_back("region '" + w.vertex + "' " + what + ": " +
                                      fmt(got) + " vs " + fmt(bound));
    };
    if (w.entry_min && entry < *w.entry_min - 1e-6) fail("entry_min", entry, *w.entry_min);
    if (w.entry_max && entry > *w.entry_max + 1e-6) fail("entry_max", entry, *w.entry_max);
    if (w.exit_min && exit < *w.exit_min - 1e-6) fail("exit_min", exit, *w.exit_min);
    if (w.exit_max && exit > *w.exit_max + 1e-6) fail("exit_max", exit, *w.exit_max);
    if (w.max_dwell && exit - entry > *w.max_dwell + 1e-6)
      fail("max_dwell", exit - entry, *w.max_dwell);
  }

  // terminal conditions
  const Kinematics kin_end = kinematics_at(plan.segments.back(), t1);
  rep.terminal_in_goal = contains(scenario.goal_region, kin_end.position, 1e-6);
  rep.terminal_speed_error =
      std::abs(kin_end.velocity.norm() - scenario.goal_velocity.norm());

  // flat-map fidelity via the independent rollout
  try {
    rep.rollout = rollout_consistency(plan.segments, scenario.vehicle, dt,
                                      scenario.limits.v_floor);
  } catch (const NumericalError&) {
    rep.rollout_ok = false;
  }
  return rep;
}

std::string profile_csv(const FeasibilityReport& report) {
  std::string out = "t,x,y,v,a_t,a_n,delta,min_dist\n";
  for (const ProfileSample& s : report.samples) {
    out += fmt(s.t) + "," + fmt(s.x) + "," + fmt(s.y) + "," + fmt(s.v) + "," +
           fmt(s.a_t) + "," + fmt(s.a_n) + "," + fmt(s.steer) + "," +
           fmt(s.min_dist) + "\n";
  }
  return out;
}

}  // namespace gcsplan
