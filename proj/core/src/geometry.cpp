#include "gcsplan/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace gcsplan {
namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

Vec2 closest_point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double denom = ab.squaredNorm();
  if (denom < 1e-30) return a;
  const double t = std::clamp((p - a).dot(ab) / denom, 0.0, 1.0);
  return a + t * ab;
}

// Separating-axis intersection test for convex CCW polygons.
bool polygons_intersect(const ConvexPolygon& a, const ConvexPolygon& b) {
  auto separated_by_edges_of = [](const ConvexPolygon& edges, const ConvexPolygon& other) {
    const auto& v = edges.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec2 e = v[(i + 1) % v.size()] - v[i];
      const Vec2 n(e.y(), -e.x());  // outward for CCW
      double max_other = -std::numeric_limits<double>::infinity();
      for (const Vec2& w : other.vertices) max_other = std::max(max_other, n.dot(w - v[i]));
      if (max_other < 0.0) return true;
    }
    return false;
  };
  return !separated_by_edges_of(a, b) && !separated_by_edges_of(b, a);
}

// Exact fallback: min over vertex/edge pairs in both directions.
double brute_force_distance(const ConvexPolygon& a, const ConvexPolygon& b) {
  if (polygons_intersect(a, b)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  auto scan = [&best](const ConvexPolygon& pts, const ConvexPolygon& segs) {
    const auto& sv = segs.vertices;
    for (const Vec2& p : pts.vertices) {
      for (std::size_t i = 0; i < sv.size(); ++i) {
        const Vec2 q = closest_point_on_segment(p, sv[i], sv[(i + 1) % sv.size()]);
        best = std::min(best, (p - q).norm());
      }
    }
  };
  scan(a, b);
  scan(b, a);
  return best;
}

// Closest point to the origin on the hull of a 1- or 2-point simplex,
// shrinking the simplex to the supporting features.
Vec2 simplex_closest(std::vector<Vec2>& simplex) {
  if (simplex.size() == 1) return simplex[0];
  const Vec2 a = simplex[0], b = simplex[1];
  const Vec2 ab = b - a;
  const double denom = ab.squaredNorm();
  if (denom < 1e-30) {
    simplex = {a};
    return a;
  }
  const double t = -a.dot(ab) / denom;
  if (t <= 0.0) {
    simplex = {a};
    return a;
  }
  if (t >= 1.0) {
    simplex = {b};
    return b;
  }
  return a + t * ab;
}

}  // namespace

Polytope::Polytope(std::vector<Vec2> n, std::vector<double> b)
    : normals(std::move(n)), offsets(std::move(b)) {
  if (normals.size() != offsets.size() || normals.size() < 3)
    throw ScenarioError("polytope needs matching normals/offsets, at least 3 half-spaces");
  for (const Vec2& nn : normals)
    if (!nn.allFinite() || nn.norm() < 1e-12)
      throw ScenarioError("polytope has a zero or non-finite normal");
}

Polytope Polytope::axis_box(double xmin, double xmax, double ymin, double ymax) {
  return Polytope({Vec2(1, 0), Vec2(-1, 0), Vec2(0, 1), Vec2(0, -1)},
                  {xmax, -xmin, ymax, -ymin});
}

std::vector<Vec2> Polytope::vertices() const {
  std::vector<Vec2> out;
  const std::size_t p = normals.size();
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      const double det = cross2(normals[i], normals[j]);
      if (std::abs(det) < 1e-12) continue;
      const Vec2 x((offsets[i] * normals[j].y() - offsets[j] * normals[i].y()) / det,
                   (offsets[j] * normals[i].x() - offsets[i] * normals[j].x()) / det);
      bool inside = true;
      for (std::size_t k = 0; k < p && inside; ++k)
        inside = normals[k].dot(x) <= offsets[k] + 1e-7 * (1.0 + std::abs(offsets[k]));
      if (!inside) continue;
      bool duplicate = false;
      for (const Vec2& v : out)
        if ((v - x).norm() < 1e-8) {
          duplicate = true;
          break;
        }
      if (!duplicate) out.push_back(x);
    }
  }
  if (out.size() >= 3) {
    Vec2 mean = Vec2::Zero();
    for (const Vec2& v : out) mean += v;
    mean /= static_cast<double>(out.size());
    std::sort(out.begin(), out.end(), [&mean](const Vec2& a, const Vec2& b) {
      return std::atan2(a.y() - mean.y(), a.x() - mean.x()) <
             std::atan2(b.y() - mean.y(), b.x() - mean.x());
    });
  }
  return out;
}

ConvexPolygon::ConvexPolygon(std::vector<Vec2> v) : vertices(std::move(v)) {
  if (vertices.size() < 3) throw ScenarioError("polygon needs at least 3 vertices");
  const std::size_t n = vertices.size();
  double area2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = vertices[i];
    const Vec2& b = vertices[(i + 1) % n];
    const Vec2& c = vertices[(i + 2) % n];
    if (cross2(b - a, c - b) < -1e-12)
      throw ScenarioError("polygon vertices are not in convex counterclockwise order");
    area2 += cross2(a, b);
  }
  if (area2 <= 0.0) throw ScenarioError("polygon is not counterclockwise");
}

Vec2 ConvexPolygon::centroid() const {
  // Area-weighted centroid.
  double area2 = 0.0;
  Vec2 acc = Vec2::Zero();
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = vertices[i];
    const Vec2& b = vertices[(i + 1) % n];
    const double w = cross2(a, b);
    area2 += w;
    acc += w * (a + b);
  }
  return acc / (3.0 * area2);
}

Vec2 ConvexPolygon::support(const Vec2& dir) const {
  double best = -std::numeric_limits<double>::infinity();
  Vec2 out = vertices.front();
  for (const Vec2& v : vertices) {
    const double d = dir.dot(v);
    if (d > best) {
      best = d;
      out = v;
    }
  }
  return out;
}

double UnitBallFacets::conservativeness() const {
  return 1.0 / std::cos(kPi / static_cast<double>(directions.size()));
}

bool contains(const Polytope& p, const Vec2& x, double tol) {
  for (std::size_t i = 0; i < p.normals.size(); ++i)
    if (p.normals[i].dot(x) > p.offsets[i] + tol) return false;
  return true;
}

double polygon_distance(const ConvexPolygon& a, const ConvexPolygon& b) {
  // Support-function descent over the Minkowski difference (GJK distance).
  auto support_diff = [&a, &b](const Vec2& d) -> Vec2 {
    return a.support(d) - b.support(-d);
  };

  Vec2 d0 = a.centroid() - b.centroid();
  if (d0.norm() < 1e-12) d0 = Vec2(1, 0);
  std::vector<Vec2> simplex{support_diff(-d0)};

  constexpr int kMaxIters = 64;
  for (int iter = 0; iter < kMaxIters; ++iter) {
    const Vec2 v = simplex_closest(simplex);
    const double vnorm = v.norm();
    if (vnorm < 1e-9) return 0.0;  // origin on the difference boundary
    const Vec2 w = support_diff(-v);
    // No progress toward the origin: v is the closest point.
    if (vnorm * vnorm - v.dot(w) <= 1e-12 * std::max(1.0, vnorm * vnorm)) return vnorm;
    if (simplex.size() == 1) {
      simplex.push_back(w);
      continue;
    }
    const Vec2 c0 = simplex[0], c1 = simplex[1];
    // Origin strictly inside the triangle (c0, c1, w): intersection.
    const double d1 = cross2(c1 - c0, -c0);
    const double d2 = cross2(w - c1, -c1);
    const double d3 = cross2(c0 - w, -w);
    if ((d1 > 1e-12 && d2 > 1e-12 && d3 > 1e-12) ||
        (d1 < -1e-12 && d2 < -1e-12 && d3 < -1e-12))
      return 0.0;
    // Keep the 2-subset containing w whose hull is closest to the origin.
    std::vector<Vec2> s0{c0, w}, s1{c1, w};
    const Vec2 p0 = simplex_closest(s0);
    const Vec2 p1 = simplex_closest(s1);
    simplex = p0.squaredNorm() < p1.squaredNorm() ? std::move(s0) : std::move(s1);
  }
  return brute_force_distance(a, b);
}

ConvexPolygon oriented_rectangle(const Vec2& center, double yaw, double length,
                                 double width) {
  if (length <= 0.0 || width <= 0.0)
    throw ScenarioError("rectangle length/width must be positive");
  const double c = std::cos(yaw), s = std::sin(yaw);
  const double hl = 0.5 * length, hw = 0.5 * width;
  auto place = [&](double x, double y) {
    return Vec2(center.x() + c * x - s * y, center.y() + s * x + c * y);
  };
  return ConvexPolygon({place(hl, -hw), place(hl, hw), place(-hl, hw), place(-hl, -hw)});
}

UnitBallFacets unit_ball_facets(std::size_t F) {
  if (F < 4) throw ScenarioError("facet count must be at least 4");
  UnitBallFacets facets;
  facets.directions.reserve(F);
  for (std::size_t k = 0; k < F; ++k) {
    const double ang = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(F);
    facets.directions.emplace_back(std::cos(ang), std::sin(ang));
  }
  return facets;
}

ConvexPolygon inflate(const ConvexPolygon& poly, double margin) {
  if (margin == 0.0) return poly;
  const std::size_t n = poly.vertices.size();
  // Shift every edge outward, then re-intersect consecutive edge lines.
  std::vector<Vec2> points(n), dirs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly.vertices[i];
    const Vec2 b = poly.vertices[(i + 1) % n];
    Vec2 e = b - a;
    const Vec2 out = Vec2(e.y(), -e.x()).normalized();
    points[i] = a + margin * out;
    dirs[i] = e;
  }
  std::vector<Vec2> verts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const double det = cross2(dirs[i], dirs[j]);
    if (std::abs(det) < 1e-12) {
      verts[j] = points[j];  // collinear edges, keep the shifted point
      continue;
    }
    const double t = cross2(points[j] - points[i], dirs[j]) / det;
    verts[j] = points[i] + t * dirs[i];
  }
  return ConvexPolygon(verts);
}

double polytope_polygon_distance(const Polytope& p, const ConvexPolygon& poly) {
  return polygon_distance(ConvexPolygon(p.vertices()), poly);
}

}  // namespace gcsplan
