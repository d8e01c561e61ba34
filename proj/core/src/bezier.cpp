#include "gcsplan/bezier.hpp"

#include <cmath>

namespace gcsplan {
namespace {

constexpr double kRateFloor = 1e-9;
constexpr double kTangentFloor = 1e-9;

template <int Dim>
typename BezierCurve<Dim>::Point de_casteljau(
    const std::vector<typename BezierCurve<Dim>::Point>& pts, double s) {
  auto work = pts;
  for (std::size_t level = work.size() - 1; level > 0; --level)
    for (std::size_t i = 0; i < level; ++i) work[i] = (1.0 - s) * work[i] + s * work[i + 1];
  return work[0];
}

// Derivative control points; a degree-0 input differentiates to zero.
template <int Dim>
std::vector<typename BezierCurve<Dim>::Point> derivative_points(
    const std::vector<typename BezierCurve<Dim>::Point>& pts) {
  using Point = typename BezierCurve<Dim>::Point;
  const int m = static_cast<int>(pts.size()) - 1;
  if (m < 1) return {Point::Zero()};
  std::vector<Point> out;
  out.reserve(pts.size() - 1);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    out.push_back(static_cast<double>(m) * (pts[i + 1] - pts[i]));
  return out;
}

double check_unit_interval(double s) {
  if (s < -1e-12 || s > 1.0 + 1e-12)
    throw NumericalError("curve parameter outside [0,1]");
  return std::clamp(s, 0.0, 1.0);
}

}  // namespace

TimeScaling::TimeScaling(Bezier1d c) : curve(std::move(c)) {
  const auto& cp = curve.control_points;
  if (cp.size() < 2) throw NumericalError("time-scaling needs degree >= 1");
  if (cp.front()(0) < -1e-9) throw NumericalError("time-scaling starts before t=0");
  for (std::size_t i = 0; i + 1 < cp.size(); ++i)
    if (cp[i + 1](0) - cp[i](0) <= 0.0)
      throw NumericalError("time-scaling control points must be strictly increasing");
}

TimeScaling::TimeScaling(std::vector<double> knots) {
  std::vector<Eigen::Matrix<double, 1, 1>> pts;
  pts.reserve(knots.size());
  for (double k : knots) pts.push_back(Eigen::Matrix<double, 1, 1>(k));
  *this = TimeScaling(Bezier1d(std::move(pts)));
}

double TimeScaling::value(double s) const { return evaluate(curve, s)(0); }

double TimeScaling::rate(double s) const { return evaluate(derivative(curve), s)(0); }

double TimeScaling::accel(double s) const {
  return evaluate(derivative(derivative(curve)), s)(0);
}

double TimeScaling::jerk(double s) const {
  return evaluate(derivative(derivative(derivative(curve))), s)(0);
}

TrajectorySegment::TrajectorySegment(Bezier2d r, TimeScaling h)
    : spatial(std::move(r)), temporal(std::move(h)) {
  if (spatial.degree() != temporal.curve.degree())
    throw NumericalError("spatial and temporal curves must share one degree");
}

template <int Dim>
typename BezierCurve<Dim>::Point evaluate(const BezierCurve<Dim>& c, double s) {
  return de_casteljau<Dim>(c.control_points, check_unit_interval(s));
}

template <int Dim>
BezierCurve<Dim> derivative(const BezierCurve<Dim>& c) {
  return BezierCurve<Dim>(derivative_points<Dim>(c.control_points));
}

template Bezier1d::Point evaluate<1>(const Bezier1d&, double);
template Bezier2d::Point evaluate<2>(const Bezier2d&, double);
template Bezier1d derivative<1>(const Bezier1d&);
template Bezier2d derivative<2>(const Bezier2d&);

double curvature(const Bezier2d& r, double s) {
  const Bezier2d d1 = derivative(r);
  const Bezier2d d2 = derivative(d1);
  const Vec2 rp = evaluate(d1, s);
  const Vec2 rpp = evaluate(d2, s);
  const double speed = rp.norm();
  if (speed < kTangentFloor) throw NumericalError("curvature undefined: vanishing tangent");
  return (rp.x() * rpp.y() - rp.y() * rpp.x()) / (speed * speed * speed);
}

double invert_time(const TimeScaling& h, double t) {
  const double t0 = h.start_time(), t1 = h.end_time();
  if (t < t0 - 1e-9 || t > t1 + 1e-9)
    throw NumericalError("time outside the segment span");
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 120; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double v = h.value(mid);
    if (std::abs(v - t) <= 1e-14) return mid;
    if (v < t)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-17) break;
  }
  return 0.5 * (lo + hi);
}

Kinematics kinematics_at(const TrajectorySegment& seg, double t) {
  const double s = invert_time(seg.temporal, t);
  const Bezier2d d1 = derivative(seg.spatial);
  const Bezier2d d2 = derivative(d1);
  const Vec2 rp = evaluate(d1, s);
  const Vec2 rpp = evaluate(d2, s);
  const double hp = seg.temporal.rate(s);
  const double hpp = seg.temporal.accel(s);
  if (hp < kRateFloor) throw NumericalError("degenerate time-scaling: h'(s) ~ 0");
  Kinematics k;
  k.position = evaluate(seg.spatial, s);
  k.velocity = rp / hp;
  k.acceleration = (rpp * hp - rp * hpp) / (hp * hp * hp);
  return k;
}

Vec2 jerk_at(const TrajectorySegment& seg, double t) {
  const double s = invert_time(seg.temporal, t);
  const Bezier2d d1 = derivative(seg.spatial);
  const Bezier2d d2 = derivative(d1);
  const Bezier2d d3 = derivative(d2);
  const Vec2 rp = evaluate(d1, s);
  const Vec2 rpp = evaluate(d2, s);
  const Vec2 rppp = evaluate(d3, s);
  const double hp = seg.temporal.rate(s);
  const double hpp = seg.temporal.accel(s);
  const double hppp = seg.temporal.jerk(s);
  if (hp < kRateFloor) throw NumericalError("degenerate time-scaling: h'(s) ~ 0");
  const Vec2 n = rpp * hp - rp * hpp;            // h'^3 * qdd
  const Vec2 np = rppp * hp - rp * hppp;         // dn/ds
  const double hp5 = hp * hp * hp * hp * hp;
  return (np * hp - 3.0 * hpp * n) / hp5;
}

const TrajectorySegment& segment_at_time(const std::vector<TrajectorySegment>& segs,
                                         double t, std::size_t* index) {
  if (segs.empty()) throw NumericalError("empty segment chain");
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (t <= segs[i].exit_time() + 1e-9) {
      if (index) *index = i;
      return segs[i];
    }
  }
  if (index) *index = segs.size() - 1;
  return segs.back();
}

AccelComponents accel_components(const TrajectorySegment& seg, double s) {
  const Bezier2d d1 = derivative(seg.spatial);
  const Bezier2d d2 = derivative(d1);
  const Vec2 rp = evaluate(d1, s);
  const Vec2 rpp = evaluate(d2, s);
  const double speed = rp.norm();
  const double hp = seg.temporal.rate(s);
  const double hpp = seg.temporal.accel(s);
  if (speed < kTangentFloor) throw NumericalError("vanishing tangent");
  if (hp < kRateFloor) throw NumericalError("degenerate time-scaling: h'(s) ~ 0");
  const Vec2 tangent = rp / speed;
  AccelComponents out;
  out.tangential = tangent.dot(rpp) / (hp * hp) - hpp / (hp * hp * hp) * speed;
  const double kappa = (rp.x() * rpp.y() - rp.y() * rpp.x()) / (speed * speed * speed);
  out.normal = kappa * speed * speed / (hp * hp);
  return out;
}

}  // namespace gcsplan
