#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gcsplan/common.hpp"
#include "gcsplan/flatness.hpp"
#include "gcsplan/geometry.hpp"
#include "gcsplan/graph.hpp"
#include "gcsplan/timing.hpp"

namespace gcsplan {

struct PlanResult;
struct FeasibilityReport;

/// Kinematic and timing limits for the planner.
struct Limits {
  double v_min = 0.0;        // m/s, along the per-region nominal direction
  double v_max = 15.0;       // m/s
  double h_rate_min = 0.05;  // s per unit of curve parameter, min h'(s)
  double t_max = 10.0;       // s, planning horizon
  double v_floor = 0.5;      // m/s, flat reconstruction floor

  void validate() const;
};

struct CostWeights {
  double alpha1 = 1.0;  // spatial second differences
  double alpha2 = 1.0;  // spatial third differences
  double alpha3 = 1.0;  // temporal second differences
  double alpha4 = 1.0;  // temporal third differences

  void validate() const;
};

struct LaneSpec {
  std::vector<Vec2> centerline;
  double width = 3.5;
};

struct OrientedBoxSpec {
  Vec2 center = Vec2::Zero();
  double yaw = 0.0;
  double length = 0.0;
  double width = 0.0;

  ConvexPolygon polygon() const { return oriented_rectangle(center, yaw, length, width); }
};

struct AvoidanceRule {
  std::string region_id;
  AvoidMode mode = AvoidMode::EnterAfter;
};

struct DynamicObstacleSpec {
  ObstaclePrediction prediction;
  std::vector<AvoidanceRule> avoidance;
};

struct Scenario {
  std::string name;
  std::vector<LaneSpec> lanes;
  RegionGraph graph;

  Vec2 start = Vec2::Zero();
  Vec2 start_velocity = Vec2::Zero();
  std::optional<double> start_yaw;
  Polytope goal_region;
  Vec2 goal_velocity = Vec2::Zero();

  std::vector<OrientedBoxSpec> static_obstacles;
  std::vector<DynamicObstacleSpec> dynamic_obstacles;
  std::vector<TimingWindow> pinned_windows;

  VehicleParams vehicle;
  double ego_length = 4.8;
  double ego_width = 2.0;

  Limits limits;
  CostWeights weights;
  int degree = 6;    // Bezier degree for both families, 3..10
  int facets = 16;   // unit-circle facet count for velocity/cost surrogates
  double audit_dt = 0.01;
};

/// Parses and validates a scenario document. Applied defaults are echoed
/// into `defaults_applied` when provided.
Scenario parse_scenario(const std::string& json_text,
                        std::vector<std::string>* defaults_applied = nullptr);

Scenario load_scenario_file(const std::string& path,
                            std::vector<std::string>* defaults_applied = nullptr);

std::string serialize_scenario(const Scenario& scenario);

/// Serialized plan (result.json): path ids, control points, tau values,
/// objective and bound. Reparses bit-exactly.
std::string result_json(const PlanResult& plan, const Scenario& scenario);

/// Snapshot figure of lanes, regions, obstacles and the planned motion.
std::string trajectory_svg(const PlanResult& plan, const Scenario& scenario,
                           double snapshot_interval = 1.0);

struct ResultFiles {
  std::string result_path;
  std::string profile_path;
  std::string svg_path;
  std::string stats_path;
};

/// Writes result.json, profile.csv, trajectory.svg and run_stats.json under
/// `out_dir`. Wall-clock timings go only to run_stats.json so result.json
/// stays byte-identical across reruns.
ResultFiles write_result(const PlanResult& plan, const FeasibilityReport& report,
                         const Scenario& scenario, const std::string& out_dir);

/// Reads a stored result.json back into segments for independent auditing.
PlanResult read_result_file(const std::string& path, const Scenario& scenario);

}  // namespace gcsplan
