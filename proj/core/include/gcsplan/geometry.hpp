#pragma once

#include <optional>
#include <vector>

#include "gcsplan/common.hpp"

namespace gcsplan {

/// Convex planar region in half-space form {x : A x <= b}.
/// Rows of A are stored as `normals`, entries of b as `offsets`.
struct Polytope {
  std::vector<Vec2> normals;
  std::vector<double> offsets;

  Polytope() = default;
  Polytope(std::vector<Vec2> n, std::vector<double> b);

  static Polytope axis_box(double xmin, double xmax, double ymin, double ymax);

  std::size_t num_halfspaces() const { return normals.size(); }

  /// Vertices of the region, counterclockwise. Requires a bounded,
  /// full-dimensional set (enforced at scenario load).
  std::vector<Vec2> vertices() const;
};

/// Counterclockwise convex polygon given by its vertices.
struct ConvexPolygon {
  std::vector<Vec2> vertices;

  ConvexPolygon() = default;
  explicit ConvexPolygon(std::vector<Vec2> v);

  Vec2 centroid() const;
  /// Support point: vertex maximizing dot(v, dir).
  Vec2 support(const Vec2& dir) const;
};

/// Outward facet normals of a regular polygon inscribed in the unit circle.
/// Any v with dot(a_k, v) <= c for all k satisfies |v| <= c / cos(pi/F).
struct UnitBallFacets {
  std::vector<Vec2> directions;

  std::size_t count() const { return directions.size(); }
  double conservativeness() const;  // 1 / cos(pi/F)
};

bool contains(const Polytope& p, const Vec2& x, double tol);

/// Euclidean distance between two convex polygons; 0 iff they intersect.
double polygon_distance(const ConvexPolygon& a, const ConvexPolygon& b);

ConvexPolygon oriented_rectangle(const Vec2& center, double yaw, double length,
                                 double width);

UnitBallFacets unit_ball_facets(std::size_t F);

/// Grows a convex polygon outward by `margin` along each edge normal.
ConvexPolygon inflate(const ConvexPolygon& poly, double margin);

/// Distance from a convex polygon to a polytope (0 iff they intersect).
double polytope_polygon_distance(const Polytope& p, const ConvexPolygon& poly);

}  // namespace gcsplan
