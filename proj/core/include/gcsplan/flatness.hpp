#pragma once

#include <vector>

#include "gcsplan/bezier.hpp"
#include "gcsplan/common.hpp"

namespace gcsplan {

/// Single-track (bicycle) model parameters with linear tire stiffnesses.
struct VehicleParams {
  double mass = 1500.0;        // kg
  double inertia_z = 2500.0;   // kg m^2
  double lf = 1.35;            // m, CoM to front axle
  double lr = 1.35;            // m, CoM to rear axle
  double cf = 8.0e4;           // N/rad, front cornering stiffness
  double cr = 8.0e4;           // N/rad, rear cornering stiffness

  void validate() const;
};

/// States and inputs recovered from trajectory derivatives under the
/// small-slip quasi-steady approximation. theta = psi + beta and
/// omega = v * k hold by construction.
struct FlatState {
  double v = 0.0;        // m/s, speed
  double theta = 0.0;    // rad, velocity heading
  double k = 0.0;        // 1/m, signed curvature
  double omega = 0.0;    // rad/s, yaw rate
  double beta = 0.0;     // rad, side-slip
  double psi = 0.0;      // rad, yaw
  double vx = 0.0;       // m/s, body-frame longitudinal velocity
  double vy = 0.0;       // m/s, body-frame lateral velocity
  double accel = 0.0;    // m/s^2, longitudinal input a
  double steer = 0.0;    // rad, steering input delta
};

struct FullState {
  double px = 0.0, py = 0.0;
  double psi = 0.0;
  double vx = 0.0, vy = 0.0;
  double omega = 0.0;
};

struct ControlInput {
  double accel = 0.0;  // m/s^2
  double steer = 0.0;  // rad
};

inline constexpr double kFlatSpeedFloor = 0.5;  // m/s, flat map singular at rest

FlatState flat_reconstruct(const Vec2& qd, const Vec2& qdd, const Vec2& qddd,
                           const VehicleParams& params,
                           double v_floor = kFlatSpeedFloor);

/// Forward-Euler integration of the full six-state model. Returns the state
/// series including the initial state (inputs.size() + 1 entries).
std::vector<FullState> rollout(const VehicleParams& params, const FullState& x0,
                               const std::vector<ControlInput>& inputs, double dt,
                               double v_floor = kFlatSpeedFloor);

struct ConsistencyReport {
  double max_deviation = 0.0;  // m
  double rms_deviation = 0.0;  // m
  double path_length = 0.0;    // m
  double duration = 0.0;       // s
};

/// Reconstructs inputs along a planned trajectory, rolls the full model from
/// the flat initial state, and reports the position deviation.
ConsistencyReport rollout_consistency(const std::vector<TrajectorySegment>& traj,
                                      const VehicleParams& params, double dt,
                                      double v_floor = kFlatSpeedFloor);

}  // namespace gcsplan
