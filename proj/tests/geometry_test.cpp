#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gcsplan/geometry.hpp"

using namespace gcsplan;

namespace {

// Exact oracle: SAT intersection test plus the minimum over vertex/edge
// pairs in both directions. Independent of the GJK implementation.
double brute_distance(const ConvexPolygon& a, const ConvexPolygon& b) {
  auto separated = [](const ConvexPolygon& e, const ConvexPolygon& o) {
    const auto& v = e.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec2 edge = v[(i + 1) % v.size()] - v[i];
      const Vec2 n(edge.y(), -edge.x());
      bool all_out = true;
      for (const Vec2& w : o.vertices)
        if (n.dot(w - v[i]) <= 0.0) {
          all_out = false;
          break;
        }
      if (all_out) return true;
    }
    return false;
  };
  if (!separated(a, b) && !separated(b, a)) return 0.0;
  auto seg_dist = [](const Vec2& p, const Vec2& s0, const Vec2& s1) {
    const Vec2 d = s1 - s0;
    const double t = std::clamp((p - s0).dot(d) / d.squaredNorm(), 0.0, 1.0);
    return (p - (s0 + t * d)).norm();
  };
  double best = 1e300;
  for (const Vec2& p : a.vertices)
    for (std::size_t i = 0; i < b.vertices.size(); ++i)
      best = std::min(best,
                      seg_dist(p, b.vertices[i], b.vertices[(i + 1) % b.vertices.size()]));
  for (const Vec2& p : b.vertices)
    for (std::size_t i = 0; i < a.vertices.size(); ++i)
      best = std::min(best,
                      seg_dist(p, a.vertices[i], a.vertices[(i + 1) % a.vertices.size()]));
  return best;
}

ConvexPolygon square(const Vec2& c, double half) {
  return ConvexPolygon({c + Vec2(half, -half), c + Vec2(half, half),
                        c + Vec2(-half, half), c + Vec2(-half, -half)});
}

ConvexPolygon random_polygon(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_int_distribution<int> nd(3, 8);
  const Vec2 center(u(rng), u(rng));
  const int n = nd(rng);
  std::vector<double> angles(n);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  for (double& a : angles) a = ang(rng);
  std::sort(angles.begin(), angles.end());
  std::uniform_real_distribution<double> rad(0.5, 3.0);
  const double r = rad(rng);
  std::vector<Vec2> verts;
  for (double a : angles)
    verts.push_back(center + r * Vec2(std::cos(a), std::sin(a)));
  // points on a circle are convex; drop near-duplicates to keep CCW strict
  std::vector<Vec2> clean;
  for (const Vec2& v : verts)
    if (clean.empty() || (v - clean.back()).norm() > 1e-3) clean.push_back(v);
  if (clean.size() < 3) return square(center, r);
  return ConvexPolygon(clean);
}

}  // namespace

TEST_CASE("polytope containment") {
  const Polytope unit = Polytope::axis_box(0, 1, 0, 1);
  CHECK(contains(unit, Vec2(0.5, 0.5), 0.0));
  CHECK(contains(unit, Vec2(1.0, 1.0), 0.0));
  CHECK_FALSE(contains(unit, Vec2(1.5, 0.5), 1e-9));
}

TEST_CASE("containment agrees with direct half-space evaluation") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int round = 0; round < 200; ++round) {
    const double x0 = u(rng), y0 = u(rng);
    const Polytope p = Polytope::axis_box(x0, x0 + 2.0, y0, y0 + 1.5);
    const Vec2 q(u(rng), u(rng));
    bool direct = true;
    for (std::size_t i = 0; i < p.normals.size(); ++i)
      direct = direct && p.normals[i].dot(q) <= p.offsets[i];
    CHECK(contains(p, q, 0.0) == direct);
  }
}

TEST_CASE("polytope vertex enumeration") {
  const Polytope box = Polytope::axis_box(-1, 2, 0, 1);
  const auto verts = box.vertices();
  REQUIRE(verts.size() == 4);
  const ConvexPolygon poly(verts);  // validates CCW ordering
  CHECK(poly.centroid().x() == doctest::Approx(0.5));
  CHECK(poly.centroid().y() == doctest::Approx(0.5));
}

TEST_CASE("polygon distance: axis-aligned gap") {
  CHECK(polygon_distance(square(Vec2(0, 0), 0.5), square(Vec2(3, 0), 0.5)) ==
        doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("polygon distance: overlap is zero") {
  CHECK(polygon_distance(square(Vec2(0, 0), 0.5), square(Vec2(0.4, 0.2), 0.5)) == 0.0);
}

TEST_CASE("polygon distance: diagonal separation matches the oracle") {
  // Unit squares (side 1) centered at (0,0) and (3,3): nearest corners are
  // (0.5,0.5)-(2.5,2.5). Frozen from the brute-force oracle.
  const ConvexPolygon a = square(Vec2(0, 0), 0.5);
  const ConvexPolygon b = square(Vec2(3, 3), 0.5);
  const double oracle = brute_distance(a, b);
  CHECK(oracle == doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
  CHECK(polygon_distance(a, b) == doctest::Approx(oracle).epsilon(1e-9));

  // Side-2 squares at the same centers: distance sqrt(2) (= sqrt(8)-sqrt(2)).
  const ConvexPolygon c = square(Vec2(0, 0), 1.0);
  const ConvexPolygon d = square(Vec2(3, 3), 1.0);
  CHECK(brute_distance(c, d) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(polygon_distance(c, d) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("polygon distance: random pairs match the oracle, symmetric") {
  std::mt19937 rng(42);
  for (int round = 0; round < 400; ++round) {
    const ConvexPolygon a = random_polygon(rng);
    const ConvexPolygon b = random_polygon(rng);
    const double dab = polygon_distance(a, b);
    const double dba = polygon_distance(b, a);
    CHECK(std::abs(dab - dba) <= 1e-12 * (1.0 + dab));
    CHECK(dab == doctest::Approx(brute_distance(a, b)).epsilon(1e-7));
  }
}

TEST_CASE("polygon distance: triangle inequality spot checks") {
  std::mt19937 rng(99);
  for (int round = 0; round < 50; ++round) {
    const ConvexPolygon a = random_polygon(rng);
    const ConvexPolygon b = random_polygon(rng);
    const ConvexPolygon c = random_polygon(rng);
    // d(a,c) <= d(a,b) + diam(b) + d(b,c)
    double diam = 0.0;
    for (const Vec2& p : b.vertices)
      for (const Vec2& q : b.vertices) diam = std::max(diam, (p - q).norm());
    CHECK(polygon_distance(a, c) <=
          polygon_distance(a, b) + diam + polygon_distance(b, c) + 1e-9);
  }
}

TEST_CASE("oriented rectangle") {
  const ConvexPolygon r = oriented_rectangle(Vec2(0, 0), 0.0, 4.8, 2.0);
  REQUIRE(r.vertices.size() == 4);
  for (const Vec2& v : r.vertices) {
    CHECK(std::abs(v.x()) == doctest::Approx(2.4).epsilon(1e-12));
    CHECK(std::abs(v.y()) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(r.centroid().norm() <= 1e-12);

  const ConvexPolygon rot = oriented_rectangle(Vec2(0, 0), kPi / 2, 4.8, 2.0);
  for (const Vec2& v : rot.vertices) {
    CHECK(std::abs(v.x()) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(v.y()) == doctest::Approx(2.4).epsilon(1e-9));
  }

  // yaw pi equals yaw 0 as a set
  const ConvexPolygon flip = oriented_rectangle(Vec2(1, 2), kPi, 4.8, 2.0);
  const ConvexPolygon base = oriented_rectangle(Vec2(1, 2), 0.0, 4.8, 2.0);
  for (const Vec2& v : flip.vertices) {
    double best = 1e300;
    for (const Vec2& w : base.vertices) best = std::min(best, (v - w).norm());
    CHECK(best <= 1e-9);
  }

  CHECK_THROWS_AS(oriented_rectangle(Vec2(0, 0), 0.0, -1.0, 2.0), ScenarioError);
}

TEST_CASE("unit ball facets") {
  const UnitBallFacets f4 = unit_ball_facets(4);
  REQUIRE(f4.count() == 4);
  CHECK((f4.directions[0] - Vec2(1, 0)).norm() <= 1e-12);
  CHECK((f4.directions[1] - Vec2(0, 1)).norm() <= 1e-12);
  CHECK((f4.directions[2] - Vec2(-1, 0)).norm() <= 1e-12);
  CHECK((f4.directions[3] - Vec2(0, -1)).norm() <= 1e-12);

  const UnitBallFacets f8 = unit_ball_facets(8);
  const Vec2 v = Vec2(1, 1) / std::sqrt(2.0);
  for (const Vec2& a : f8.directions) CHECK(a.dot(v) <= 1.0 + 1e-12);

  CHECK(unit_ball_facets(16).conservativeness() ==
        doctest::Approx(1.0 / std::cos(kPi / 16.0)).epsilon(1e-12));

  CHECK_THROWS_AS(unit_ball_facets(3), ScenarioError);
}

TEST_CASE("unit ball facets: inner approximation soundness") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (std::size_t F : {4u, 8u, 16u}) {
    const UnitBallFacets f = unit_ball_facets(F);
    const double c = 1.3;
    const double factor = 1.0 / std::cos(kPi / static_cast<double>(F));
    int accepted = 0;
    for (int i = 0; i < 10000; ++i) {
      const Vec2 v(u(rng), u(rng));
      bool inside = true;
      for (const Vec2& a : f.directions)
        if (a.dot(v) > c) {
          inside = false;
          break;
        }
      if (inside) {
        ++accepted;
        CHECK(v.norm() <= c * factor + 1e-12);
      }
      if (v.norm() <= c * std::cos(kPi / static_cast<double>(F))) {
        for (const Vec2& a : f.directions) CHECK(a.dot(v) <= c + 1e-12);
      }
    }
    CHECK(accepted > 100);
  }
}

TEST_CASE("unit norms enforced on facet directions") {
  for (std::size_t F : {4u, 5u, 16u, 64u})
    for (const Vec2& a : unit_ball_facets(F).directions)
      CHECK(std::abs(a.norm() - 1.0) <= 1e-12);
}

TEST_CASE("polygon inflation grows every support value") {
  const ConvexPolygon r = oriented_rectangle(Vec2(1, 1), 0.3, 4.0, 2.0);
  const ConvexPolygon grown = inflate(r, 0.7);
  for (int k = 0; k < 16; ++k) {
    const double ang = 2.0 * kPi * k / 16.0;
    const Vec2 d(std::cos(ang), std::sin(ang));
    CHECK(d.dot(grown.support(d)) >= d.dot(r.support(d)) + 0.7 * 0.9 - 1e-9);
  }
}

TEST_CASE("convex polygon validation") {
  CHECK_THROWS_AS(ConvexPolygon({Vec2(0, 0), Vec2(1, 0)}), ScenarioError);
  // clockwise ordering rejected
  CHECK_THROWS_AS(ConvexPolygon({Vec2(0, 0), Vec2(0, 1), Vec2(1, 0)}), ScenarioError);
}
