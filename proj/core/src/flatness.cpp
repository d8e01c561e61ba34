#include "gcsplan/flatness.hpp"

#include <cmath>

namespace gcsplan {

std::pair<double, double> mean_std(const std::vector<double>& samples) {
  if (samples.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(samples.size());
  if (samples.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  return {mean, std::sqrt(ss / static_cast<double>(samples.size() - 1))};
}

void VehicleParams::validate() const {
  if (mass <= 0 || inertia_z <= 0 || lf <= 0 || lr <= 0 || cf <= 0 || cr <= 0)
    throw ScenarioError("vehicle parameters must be strictly positive");
}

FlatState flat_reconstruct(const Vec2& qd, const Vec2& qdd, const Vec2& qddd,
                           const VehicleParams& params, double v_floor) {
  const double v = qd.norm();
  if (v < v_floor) throw NumericalError("speed below flat reconstruction floor");

  FlatState st;
  st.v = v;
  st.theta = std::atan2(qd.y(), qd.x());

  const double c = qd.x() * qdd.y() - qd.y() * qdd.x();
  const double v3 = v * v * v;
  st.k = c / v3;
  const double vdot = qd.dot(qdd) / v;
  st.omega = v * st.k;

  // k = c / v^3 differentiates to kdot = (cdot - 3 c vdot / v) / v^3;
  // the mixed qdd x qdd terms in cdot cancel.
  const double cdot = qd.x() * qddd.y() - qd.y() * qddd.x();
  const double kdot = (cdot - 3.0 * c * vdot / v) / v3;
  const double omega_dot = vdot * st.k + v * kdot;

  // Quasi-steady lateral balance and yaw balance, solved jointly for
  // (beta, delta):
  //   0        = -((cf+cr)/m) beta + (cf/m) delta - omega v + ((cr lr - cf lf)/(m v)) omega
  //   Iz wdot  = lf cf (delta - beta - lf omega / v) + lr cr (beta - lr omega / v)
  const double m = params.mass, iz = params.inertia_z;
  const double lf = params.lf, lr = params.lr, cf = params.cf, cr = params.cr;
  const double a11 = -(cf + cr) / m, a12 = cf / m;
  const double b1 = st.omega * v - (cr * lr - cf * lf) / (m * v) * st.omega;
  const double a21 = lr * cr - lf * cf, a22 = lf * cf;
  const double b2 = iz * omega_dot + (lf * lf * cf + lr * lr * cr) * st.omega / v;
  const double det = a11 * a22 - a12 * a21;
  if (std::abs(det) < 1e-9) throw NumericalError("singular side-slip/steering system");
  st.beta = (b1 * a22 - a12 * b2) / det;
  st.steer = (a11 * b2 - b1 * a21) / det;

  st.psi = st.theta - st.beta;
  st.vx = v;
  st.vy = v * st.beta;
  st.accel = vdot - v * v * st.k * st.beta;
  return st;
}

std::vector<FullState> rollout(const VehicleParams& params, const FullState& x0,
                               const std::vector<ControlInput>& inputs, double dt,
                               double v_floor) {
  if (dt <= 0.0) throw NumericalError("rollout requires dt > 0");
  std::vector<FullState> states;
  states.reserve(inputs.size() + 1);
  states.push_back(x0);
  FullState x = x0;
  for (const ControlInput& u : inputs) {
    if (x.vx < v_floor) throw NumericalError("model invalid: vx fell below floor");
    const double alpha_f = u.steer - (x.vy + params.lf * x.omega) / x.vx;
    const double alpha_r = -(x.vy - params.lr * x.omega) / x.vx;
    const double fyf = params.cf * alpha_f;
    const double fyr = params.cr * alpha_r;
    FullState n;
    n.px = x.px + dt * (x.vx * std::cos(x.psi) - x.vy * std::sin(x.psi));
    n.py = x.py + dt * (x.vx * std::sin(x.psi) + x.vy * std::cos(x.psi));
    n.psi = x.psi + dt * x.omega;
    n.vx = x.vx + dt * (u.accel + x.omega * x.vy);
    n.vy = x.vy + dt * (-x.omega * x.vx + (fyf + fyr) / params.mass);
    n.omega = x.omega + dt * (fyf * params.lf - fyr * params.lr) / params.inertia_z;
    states.push_back(n);
    x = n;
  }
  return states;
}

ConsistencyReport rollout_consistency(const std::vector<TrajectorySegment>& traj,
                                      const VehicleParams& params, double dt,
                                      double v_floor) {
  if (traj.empty()) throw NumericalError("empty trajectory");
  const double t0 = traj.front().entry_time();
  const double t1 = traj.back().exit_time();
  const auto steps = static_cast<std::size_t>(std::floor((t1 - t0) / dt));

  std::vector<ControlInput> inputs(steps);
  std::vector<Vec2> planned(steps + 1);
  double path_length = 0.0;
  Vec2 prev = Vec2::Zero();
  FlatState initial;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = std::min(t0 + static_cast<double>(i) * dt, t1);
    const TrajectorySegment& seg = segment_at_time(traj, t);
    const Kinematics kin = kinematics_at(seg, t);
    const FlatState fs =
        flat_reconstruct(kin.velocity, kin.acceleration, jerk_at(seg, t), params, v_floor);
    planned[i] = kin.position;
    if (i == 0)
      initial = fs;
    else
      path_length += (kin.position - prev).norm();
    prev = kin.position;
    if (i < steps) inputs[i] = ControlInput{fs.accel, fs.steer};
  }

  FullState x0;
  x0.px = planned[0].x();
  x0.py = planned[0].y();
  x0.psi = initial.psi;
  x0.vx = initial.vx;
  x0.vy = initial.vy;
  x0.omega = initial.omega;
  const std::vector<FullState> rolled = rollout(params, x0, inputs, dt, v_floor);

  ConsistencyReport rep;
  rep.path_length = path_length;
  rep.duration = t1 - t0;
  double sq_sum = 0.0;
  for (std::size_t i = 0; i < rolled.size(); ++i) {
    const double dev = (Vec2(rolled[i].px, rolled[i].py) - planned[i]).norm();
    rep.max_deviation = std::max(rep.max_deviation, dev);
    sq_sum += dev * dev;
  }
  rep.rms_deviation = std::sqrt(sq_sum / static_cast<double>(rolled.size()));
  return rep;
}

}  // namespace gcsplan
