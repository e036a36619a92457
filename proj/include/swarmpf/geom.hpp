#pragma once

// 2D primitives shared by the whole simulator: convex hulls with a relative
// collinearity tolerance, exterior angle bisectors, point/segment and
// moving-point distances, and least-squares similarity alignment.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace swarmpf {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
inline bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }
inline Point2 perp(Point2 a) { return {-a.y, a.x}; }
inline bool is_finite(Point2 a) { return std::isfinite(a.x) && std::isfinite(a.y); }

struct Direction2 {
  double ux = 1.0;
  double uy = 0.0;

  static Direction2 of(Point2 v) {
    double n = norm(v);
    if (!(n > 1e-300)) throw std::invalid_argument("zero direction");
    return {v.x / n, v.y / n};
  }
  Point2 vec() const { return {ux, uy}; }
};

// eps_geom: collinearity / on-circle slack; eps_adj: adjacency detection band;
// clearance: leader routing clearance.
struct Tolerances {
  double eps_geom = 1e-9;
  double eps_adj = 5e-3;
  double clearance = 1.05;

  void validate() const {
    if (!(0.0 < eps_geom && eps_geom < eps_adj && eps_adj < clearance - 1.0))
      throw std::invalid_argument("tolerances must satisfy 0 < eps_geom < eps_adj < clearance - 1");
  }
};

// Collinearity with a relative tolerance: |cross| <= eps * longest segment,
// so classification stays stable as coordinates grow.
inline bool collinear(Point2 a, Point2 b, Point2 c, double eps) {
  double len = std::max({dist(a, b), dist(a, c), dist(b, c)});
  return std::fabs(cross(b - a, c - a)) <= eps * len;
}

// Strictly convex CCW hull. Collinear mid-points are excluded. For inputs that
// are entirely collinear (or have fewer than 3 distinct points) `degenerate`
// is set and `vertices` holds the extremes.
struct Hull {
  std::vector<Point2> vertices;  // CCW, starting at the lexicographically least point
  bool degenerate = false;
};

inline Hull convex_hull(const std::vector<Point2>& points, double eps = 1e-9) {
  if (points.empty()) throw std::invalid_argument("no points");
  std::vector<Point2> pts = points;
  std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });

  auto strict_left = [eps](Point2 a, Point2 b, Point2 c) {
    double len = std::max({dist(a, b), dist(b, c), dist(a, c)});
    return cross(b - a, c - a) > eps * len;
  };

  size_t n = pts.size();
  std::vector<Point2> h(2 * n + 1);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {  // lower
    while (k >= 2 && !strict_left(h[k - 2], h[k - 1], pts[i])) --k;
    h[k++] = pts[i];
  }
  for (size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper
    while (k >= t && !strict_left(h[k - 2], h[k - 1], pts[i])) --k;
    h[k++] = pts[i];
  }
  h.resize(k > 1 ? k - 1 : k);

  Hull out;
  out.vertices = std::move(h);
  out.degenerate = out.vertices.size() < 3;
  return out;
}

// Unit direction bisecting the exterior angle at hull corner v (points away
// from the hull interior).
inline Direction2 exterior_bisector(Point2 prev, Point2 v, Point2 next, double eps = 1e-9) {
  if (collinear(prev, v, next, eps)) throw std::invalid_argument("degenerate corner");
  Point2 s = Direction2::of(prev - v).vec() + Direction2::of(next - v).vec();
  if (norm(s) < 1e-12) throw std::invalid_argument("degenerate corner");
  return Direction2::of(-1.0 * s);
}

inline double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  Point2 ab = b - a;
  double len2 = dot(ab, ab);
  if (len2 <= 0.0) return dist(p, a);
  double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return dist(p, a + t * ab);
}

// Minimum distance between two points moving simultaneously along straight
// lines over t in [0,1]; closed form on the quadratic in t.
inline double moving_points_min_distance(Point2 a0, Point2 a1, Point2 b0, Point2 b1) {
  Point2 r0 = a0 - b0;
  Point2 rv = (a1 - a0) - (b1 - b0);
  double vv = dot(rv, rv);
  double best = std::min(norm(r0), norm(r0 + rv));
  if (vv > 0.0) {
    double t = std::clamp(-dot(r0, rv) / vv, 0.0, 1.0);
    best = std::min(best, norm(r0 + t * rv));
  }
  return best;
}

// Mean of the hull vertex positions (not the polygon area centroid): after the
// expansion phase every robot is a hull vertex, and the vertex mean is
// computable identically by every robot from its snapshot.
inline Point2 centroid(const std::vector<Point2>& points, double eps = 1e-9) {
  if (points.empty()) throw std::invalid_argument("no points");
  Hull h = convex_hull(points, eps);
  Point2 sum{0.0, 0.0};
  for (Point2 v : h.vertices) sum = sum + v;
  return (1.0 / static_cast<double>(h.vertices.size())) * sum;
}

struct Similarity {
  double scale = 1.0;
  double rotation = 0.0;  // radians
  bool reflect = false;
  Point2 translation{0.0, 0.0};

  Point2 apply(Point2 p) const {
    double px = p.x, py = reflect ? -p.y : p.y;
    double c = std::cos(rotation), s = std::sin(rotation);
    return {scale * (c * px - s * py) + translation.x,
            scale * (s * px + c * py) + translation.y};
  }
};

struct AlignResult {
  Similarity transform;
  double residual = 0.0;  // max per-point distance after the transform
};

// Least-squares similarity (scale, rotation, optional reflection,
// translation) mapping source onto target with correspondence by index.
inline AlignResult similarity_align(const std::vector<Point2>& source,
                                    const std::vector<Point2>& target,
                                    bool allow_reflection = true) {
  if (source.empty() || source.size() != target.size())
    throw std::invalid_argument("alignment needs equal nonempty point sets");
  using C = std::complex<double>;
  auto as_c = [](Point2 p) { return C(p.x, p.y); };

  size_t n = source.size();
  C cx{0, 0}, cy{0, 0};
  for (size_t i = 0; i < n; ++i) {
    cx += as_c(source[i]);
    cy += as_c(target[i]);
  }
  cx /= static_cast<double>(n);
  cy /= static_cast<double>(n);

  double var = 0.0, tvar = 0.0;
  for (size_t i = 0; i < n; ++i) {
    var += std::norm(as_c(source[i]) - cx);
    tvar += std::norm(as_c(target[i]) - cy);
  }
  if (var < 1e-300) {
    if (tvar > 1e-18) throw std::invalid_argument("degenerate alignment");
    AlignResult r;
    r.transform.translation = {cy.real() - cx.real(), cy.imag() - cx.imag()};
    return r;
  }

  auto fit = [&](bool reflect) {
    C num{0, 0};
    for (size_t i = 0; i < n; ++i) {
      C xs = as_c(source[i]) - cx;
      if (reflect) xs = std::conj(xs);
      num += (as_c(target[i]) - cy) * std::conj(xs);
    }
    C alpha = num / var;
    C beta = cy - alpha * (reflect ? std::conj(cx) : cx);
    double resid = 0.0;
    for (size_t i = 0; i < n; ++i) {
      C xs = reflect ? std::conj(as_c(source[i])) : as_c(source[i]);
      resid = std::max(resid, std::abs(alpha * xs + beta - as_c(target[i])));
    }
    AlignResult r;
    r.transform.scale = std::abs(alpha);
    r.transform.rotation = std::arg(alpha);
    r.transform.reflect = reflect;
    r.transform.translation = {beta.real(), beta.imag()};
    r.residual = resid;
    return r;
  };

  AlignResult best = fit(false);
  if (allow_reflection) {
    AlignResult m = fit(true);
    if (m.residual < best.residual) best = m;
  }
  if (!(best.transform.scale > 0.0)) throw std::invalid_argument("degenerate alignment");
  return best;
}

}  // namespace swarmpf
