#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gcsplan/flatness.hpp"
#include "gcsplan/program.hpp"
#include "gcsplan/scenario.hpp"

namespace gcsplan {

struct ProfileSample {
  double t = 0.0;
  double x = 0.0, y = 0.0;
  double v = 0.0;
  double a_t = 0.0, a_n = 0.0;
  double steer = std::numeric_limits<double>::quiet_NaN();
  double min_dist = std::numeric_limits<double>::infinity();
};

struct JunctionResidual {
  double time = 0.0;
  double position = 0.0;
  double velocity = 0.0;
  double acceleration = 0.0;
  double jerk = 0.0;
};

/// Formulation-blind audit summary: everything is recomputed from the
/// emitted segments and the scenario, never from planner constraint data.
struct FeasibilityReport {
  double sample_dt = 0.0;
  std::size_t sample_count = 0;

  double min_obstacle_distance = std::numeric_limits<double>::infinity();
  double min_distance_time = 0.0;

  double speed_min = std::numeric_limits<double>::infinity();
  double speed_max = -std::numeric_limits<double>::infinity();
  /// Sound bound v_max / cos(pi/F) and the samples exceeding it.
  double speed_bound = 0.0;
  std::size_t speed_violations = 0;
  bool speed_bound_ok = true;
  double max_abs_tangential = 0.0;
  double max_abs_normal = 0.0;
  std::optional<double> max_abs_steer;
  bool flat_profile_complete = true;

  std::vector<JunctionResidual> junctions;

  bool containment_ok = true;
  double max_containment_violation = 0.0;

  bool windows_ok = true;
  std::vector<std::string> window_violations;

  bool terminal_in_goal = true;
  double terminal_speed_error = 0.0;

  bool rollout_ok = true;
  ConsistencyReport rollout;

  std::vector<ProfileSample> samples;

  bool collision_free() const { return min_obstacle_distance > 0.0; }
  bool passed() const {
    return collision_free() && containment_ok && windows_ok && speed_bound_ok &&
           terminal_in_goal && terminal_speed_error <= 0.2;
  }
};

FeasibilityReport audit(const PlanResult& plan, const Scenario& scenario, double dt);

/// Deterministic tabular time series (15 significant digits).
std::string profile_csv(const FeasibilityReport& report);

}  // namespace gcsplan
