#include <doctest.h>

#include <cmath>

#include "gcsplan/timing.hpp"
#include "test_scenarios.hpp"

using namespace gcsplan;

namespace {

ObstaclePrediction constant_speed(const Vec2& start, double heading, double speed,
                                  double length = 0.0, double width = 0.0) {
  ObstaclePrediction o;
  o.path = {start, start + Vec2(std::cos(heading), std::sin(heading))};
  o.profile = {ProfilePiece{1000.0, speed, 0.0}};
  o.length = length;
  o.width = width;
  return o;
}

}  // namespace

TEST_CASE("predict_pose: constant speed along +x") {
  const auto o = constant_speed(Vec2(20, 0), 0.0, 3.0);
  const Pose p = predict_pose(o, 5.0);
  CHECK(p.position.x() == doctest::Approx(35.0));
  CHECK(p.position.y() == doctest::Approx(0.0));
  CHECK(p.yaw == doctest::Approx(0.0));

  const auto o2 = constant_speed(Vec2(5, 3.5), 0.0, 10.0);
  const Pose p2 = predict_pose(o2, 2.0);
  CHECK(p2.position.x() == doctest::Approx(25.0));
  CHECK(p2.position.y() == doctest::Approx(3.5));
}

TEST_CASE("predict_pose: acceleration piece advances the closed-form distance") {
  ObstaclePrediction o;
  o.path = {Vec2(0, 0), Vec2(1, 0)};
  o.profile = {ProfilePiece{5.0, 3.0, 1.0}, ProfilePiece{100.0, 8.0, 0.0}};
  o.validate();
  const Pose at_boundary = predict_pose(o, 5.0);
  CHECK(at_boundary.position.x() == doctest::Approx(0.5 * (3.0 + 8.0) * 5.0));
  // beyond the last piece: constant final speed
  const Pose later = predict_pose(o, 7.0);
  CHECK(later.position.x() == doctest::Approx(27.5 + 2.0 * 8.0));
}

TEST_CASE("predict_pose: deceleration back to the initial speed") {
  ObstaclePrediction o;
  o.path = {Vec2(35, 0), Vec2(36, 0)};
  o.profile = {ProfilePiece{5.0, 3.0, 1.0}, ProfilePiece{5.0, 8.0, -1.0}};
  o.validate();
  CHECK(predict_pose(o, 10.0).position.x() == doctest::Approx(35.0 + 27.5 + 27.5));
  CHECK(predict_pose(o, 11.0).position.x() == doctest::Approx(90.0 + 3.0));
}

TEST_CASE("predict_pose: continuity across piece boundaries") {
  ObstaclePrediction o;
  o.path = {Vec2(0, 0), Vec2(100, 50)};
  o.profile = {ProfilePiece{2.0, 4.0, 0.5}, ProfilePiece{3.0, 5.0, -0.5},
               ProfilePiece{1.0, 3.5, 0.0}};
  o.validate();
  for (double tb : {2.0, 5.0, 6.0}) {
    const Pose before = predict_pose(o, tb - 1e-7);
    const Pose after = predict_pose(o, tb + 1e-7);
    CHECK((before.position - after.position).norm() <= 1e-5);
  }
}

TEST_CASE("prediction validation") {
  ObstaclePrediction o;
  o.path = {Vec2(0, 0), Vec2(1, 0)};
  o.length = 4.8;
  o.width = 2.0;
  o.profile = {ProfilePiece{1.0, 2.0, -3.0}};  // speed would go negative
  CHECK_THROWS_AS(o.validate(), ScenarioError);
  o.profile = {ProfilePiece{1.0, 2.0, 0.0}, ProfilePiece{1.0, 5.0, 0.0}};  // jump
  CHECK_THROWS_AS(o.validate(), ScenarioError);
  o.profile = {ProfilePiece{-1.0, 2.0, 0.0}};
  CHECK_THROWS_AS(o.validate(), ScenarioError);
}

TEST_CASE("occupancy: point obstacle crossing a slab") {
  const auto o = constant_speed(Vec2(20, 0), 0.0, 3.0);
  const Polytope region = Polytope::axis_box(30, 50, -5, 5);
  const auto occ = occupancy_interval(o, region, 20.0, 0.0);
  REQUIRE(occ.has_value());
  CHECK(occ->first == doctest::Approx(10.0 / 3.0).epsilon(2e-3));
  CHECK(occ->second == doctest::Approx(10.0).epsilon(2e-3));
}

TEST_CASE("occupancy: obstacle heading away never occupies") {
  const auto o = constant_speed(Vec2(20, 0), kPi, 3.0);  // moving -x
  const Polytope region = Polytope::axis_box(30, 50, -5, 5);
  CHECK_FALSE(occupancy_interval(o, region, 20.0, 0.0).has_value());
}

TEST_CASE("occupancy: stationary obstacle inside spans the horizon") {
  auto o = constant_speed(Vec2(35, 0), 0.0, 0.0, 4.8, 2.0);
  const Polytope region = Polytope::axis_box(30, 50, -5, 5);
  const auto occ = occupancy_interval(o, region, 12.0, 0.0);
  REQUIRE(occ.has_value());
  CHECK(occ->first == doctest::Approx(0.0));
  CHECK(occ->second == doctest::Approx(12.0));
}

TEST_CASE("occupancy: monotone in the inflation margin") {
  const auto o = constant_speed(Vec2(0, 0), 0.0, 5.0, 4.8, 2.0);
  const Polytope region = Polytope::axis_box(30, 40, -5, 5);
  const auto tight = occupancy_interval(o, region, 20.0, 0.0);
  const auto wide = occupancy_interval(o, region, 20.0, 2.4);
  REQUIRE(tight.has_value());
  REQUIRE(wide.has_value());
  CHECK(wide->first <= tight->first + 1e-9);
  CHECK(wide->second >= tight->second - 1e-9);
}

TEST_CASE("timing_windows: no dynamic obstacles means no windows") {
  const Scenario sc = test_scenarios::straight_corridor();
  CHECK(timing_windows(sc).empty());
}

TEST_CASE("timing_windows: enter-after emits a lower entry bound") {
  Scenario sc = test_scenarios::diamond();
  DynamicObstacleSpec dyn;
  dyn.prediction = constant_speed(Vec2(6, -3), 0.0, 4.0, 4.8, 2.0);
  dyn.avoidance = {AvoidanceRule{"lower", AvoidMode::EnterAfter}};
  sc.dynamic_obstacles.push_back(dyn);

  const auto windows = timing_windows(sc);
  REQUIRE(windows.size() == 1);
  CHECK(windows[0].vertex == "lower");
  REQUIRE(windows[0].entry_min.has_value());
  const auto occ = occupancy_interval(dyn.prediction,
                                      sc.graph.vertices[2].region, sc.limits.t_max, 2.4);
  REQUIRE(occ.has_value());
  CHECK(*windows[0].entry_min == doctest::Approx(occ->second));
}

TEST_CASE("timing_windows: exit-before emits an upper exit bound") {
  Scenario sc = test_scenarios::diamond();
  DynamicObstacleSpec dyn;
  dyn.prediction = constant_speed(Vec2(-20, 3), 0.0, 5.0, 4.8, 2.0);
  dyn.avoidance = {AvoidanceRule{"upper", AvoidMode::ExitBefore}};
  sc.dynamic_obstacles.push_back(dyn);

  const auto windows = timing_windows(sc);
  REQUIRE(windows.size() == 1);
  REQUIRE(windows[0].exit_max.has_value());
  const auto occ = occupancy_interval(dyn.prediction,
                                      sc.graph.vertices[1].region, sc.limits.t_max, 2.4);
  REQUIRE(occ.has_value());
  CHECK(*windows[0].exit_max == doctest::Approx(occ->first));
}

TEST_CASE("timing_windows: pinned windows pass through and merge") {
  Scenario sc = test_scenarios::diamond();
  TimingWindow a;
  a.vertex = "upper";
  a.entry_max = 2.4;
  TimingWindow b;
  b.vertex = "upper";
  b.max_dwell = 4.0;
  sc.pinned_windows = {a, b};
  const auto windows = timing_windows(sc);
  REQUIRE(windows.size() == 1);
  CHECK(windows[0].entry_max == doctest::Approx(2.4));
  CHECK(windows[0].max_dwell == doctest::Approx(4.0));
}

TEST_CASE("timing_windows: contradictions are reported") {
  Scenario sc = test_scenarios::diamond();
  TimingWindow w;
  w.vertex = "upper";
  w.entry_min = 3.0;
  w.entry_max = 2.0;
  sc.pinned_windows = {w};
  CHECK_THROWS_AS(timing_windows(sc), ScenarioError);
}

TEST_CASE("disjunct soundness at the sampling resolution") {
  // entering after T_out keeps the obstacle clear of the region thereafter
  Scenario sc = test_scenarios::diamond();
  DynamicObstacleSpec dyn;
  dyn.prediction = constant_speed(Vec2(6, -3), 0.0, 4.0, 4.8, 2.0);
  dyn.avoidance = {AvoidanceRule{"lower", AvoidMode::EnterAfter}};
  sc.dynamic_obstacles.push_back(dyn);
  const auto windows = timing_windows(sc);
  REQUIRE(windows.size() == 1);
  const double t_out = *windows[0].entry_min;
  const Polytope& region = sc.graph.vertices[2].region;
  const ConvexPolygon region_poly{region.vertices()};
  for (double t = t_out + 2e-3; t <= sc.limits.t_max; t += 1e-3) {
    const Pose p = predict_pose(dyn.prediction, t);
    const ConvexPolygon foot = oriented_rectangle(
        p.position, p.yaw, dyn.prediction.length + 4.8, dyn.prediction.width + 4.8);
    CHECK(polygon_distance(region_poly, foot) > 0.0);
  }
}
