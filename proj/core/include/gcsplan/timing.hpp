#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gcsplan/common.hpp"
#include "gcsplan/geometry.hpp"

namespace gcsplan {

struct Scenario;

/// One leg of a piecewise-constant-acceleration speed profile.
struct ProfilePiece {
  double duration = 0.0;  // s
  double speed = 0.0;     // m/s at the start of the piece
  double accel = 0.0;     // m/s^2
};

/// Predicted obstacle motion: a speed profile advanced along a polyline.
/// After the last piece the obstacle keeps its final speed.
struct ObstaclePrediction {
  std::vector<Vec2> path;  // at least 2 points; extrapolated past the end
  std::vector<ProfilePiece> profile;
  double length = 0.0;  // footprint, m
  double width = 0.0;   // footprint, m

  void validate() const;
};

struct Pose {
  Vec2 position;
  double yaw = 0.0;
};

Pose predict_pose(const ObstaclePrediction& o, double t);

/// First and last times in [0, horizon] at which the obstacle footprint,
/// inflated by `margin` on every side, touches the region. Dense 10 ms
/// sampling refined to 1 ms by bisection.
std::optional<std::pair<double, double>> occupancy_interval(
    const ObstaclePrediction& o, const Polytope& region, double horizon,
    double margin);

/// Temporal-separation disjunct selected per (obstacle, region) pair.
enum class AvoidMode { ExitBefore, EnterAfter };

/// Linear bounds on a vertex's entry time tau_0 and exit time tau_m.
struct TimingWindow {
  std::string vertex;
  std::optional<double> entry_min, entry_max;
  std::optional<double> exit_min, exit_max;
  std::optional<double> max_dwell;
  std::string note;  // provenance, e.g. which obstacle produced the bound
};

/// Occupancy-derived windows for every avoidance rule in the scenario plus
/// the scenario's pinned windows, merged per vertex. Throws on empty windows.
std::vector<TimingWindow> timing_windows(const Scenario& scenario);

}  // namespace gcsplan
