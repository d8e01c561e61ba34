#pragma once

#include <vector>

#include "gcsplan/common.hpp"

namespace gcsplan {

/// Polynomial curve in Bernstein form, evaluated by de Casteljau recursion.
template <int Dim>
struct BezierCurve {
  using Point = Eigen::Matrix<double, Dim, 1>;

  std::vector<Point> control_points;

  BezierCurve() = default;
  explicit BezierCurve(std::vector<Point> pts) : control_points(std::move(pts)) {
    if (control_points.empty()) throw NumericalError("bezier curve needs control points");
    for (const Point& p : control_points)
      if (!p.allFinite()) throw NumericalError("bezier control point not finite");
  }

  int degree() const { return static_cast<int>(control_points.size()) - 1; }
};

using Bezier1d = BezierCurve<1>;
using Bezier2d = BezierCurve<2>;

/// Strictly increasing scalar Bezier mapping s in [0,1] to time.
struct TimeScaling {
  Bezier1d curve;

  TimeScaling() = default;
  explicit TimeScaling(Bezier1d c);
  explicit TimeScaling(std::vector<double> knots);

  double start_time() const { return curve.control_points.front()(0); }
  double end_time() const { return curve.control_points.back()(0); }

  double value(double s) const;  // h(s)
  double rate(double s) const;   // h'(s)
  double accel(double s) const;  // h''(s)
  double jerk(double s) const;   // h'''(s)
};

/// Spatial curve paired with its time-scaling; both share one degree.
struct TrajectorySegment {
  Bezier2d spatial;
  TimeScaling temporal;

  TrajectorySegment() = default;
  TrajectorySegment(Bezier2d r, TimeScaling h);

  double entry_time() const { return temporal.start_time(); }
  double exit_time() const { return temporal.end_time(); }
};

template <int Dim>
typename BezierCurve<Dim>::Point evaluate(const BezierCurve<Dim>& c, double s);

template <int Dim>
BezierCurve<Dim> derivative(const BezierCurve<Dim>& c);

/// Forward differences of consecutive points, order 1..3.
template <typename T>
std::vector<T> forward_diff(const std::vector<T>& points, int order) {
  if (order < 1 || order > 3) throw NumericalError("forward_diff order must be 1..3");
  if (points.size() <= static_cast<std::size_t>(order))
    throw NumericalError("forward_diff needs more points than the order");
  static const double kBinomial[4][4] = {
      {1, 0, 0, 0}, {-1, 1, 0, 0}, {1, -2, 1, 0}, {-1, 3, -3, 1}};
  std::vector<T> out;
  out.reserve(points.size() - order);
  for (std::size_t l = 0; l + order < points.size(); ++l) {
    T acc = kBinomial[order][0] * points[l];
    for (int j = 1; j <= order; ++j) acc += kBinomial[order][j] * points[l + j];
    out.push_back(acc);
  }
  return out;
}

/// Signed curvature (r'_x r''_y - r'_y r''_x) / |r'|^3.
double curvature(const Bezier2d& r, double s);

/// Inverse of the time-scaling by bisection; |h(s) - t| <= 1e-10.
double invert_time(const TimeScaling& h, double t);

struct Kinematics {
  Vec2 position;
  Vec2 velocity;
  Vec2 acceleration;
};

Kinematics kinematics_at(const TrajectorySegment& seg, double t);

/// Third time derivative of the composed trajectory at time t.
Vec2 jerk_at(const TrajectorySegment& seg, double t);

struct AccelComponents {
  double tangential;
  double normal;
};

AccelComponents accel_components(const TrajectorySegment& seg, double s);

/// Segment covering time t in a chain of contiguous segments.
const TrajectorySegment& segment_at_time(const std::vector<TrajectorySegment>& segs,
                                         double t, std::size_t* index = nullptr);

}  // namespace gcsplan
