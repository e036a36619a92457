#pragma once

// Fat-disk visibility between unit-diameter robots and per-robot snapshot
// construction in private, possibly disoriented frames.
//
// Robot a sees robot b iff some straight segment from a point on circle(a,1/2)
// to a point on circle(b,1/2) has a relative interior that meets no closed
// blocker disk. Decision procedure, restricted to the corridor (convex hull
// of the two disks):
//   1. a connected chain of closed blocker disks (disks chain when centers
//      are within 1) touching both flat tangent walls within their extent
//      separates the two caps, blocking every segment;
//   2. with no such chain and at most one corridor blocker, a clear segment
//      always exists;
//   3. otherwise blockers at staggered offsets can still block every
//      *straight* segment while leaving curved gaps, so the decision falls
//      through to an exact witness search over extremal candidate lines
//      (bitangents of blocker/endpoint circle pairs, nudged off tangency).

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "swarmpf/geom.hpp"

namespace swarmpf {

// Orientation (rotation + optional reflection) is fixed per robot for the
// whole run; origin tracks the robot's current position, so the robot itself
// always sits at the local origin.
struct Frame {
  double rotation = 0.0;
  bool reflect = false;
  Point2 origin{0.0, 0.0};

  // local -> world: reflect across local x-axis, rotate, translate.
  Point2 to_world(Point2 local) const {
    double lx = local.x, ly = reflect ? -local.y : local.y;
    double c = std::cos(rotation), s = std::sin(rotation);
    return {c * lx - s * ly + origin.x, s * lx + c * ly + origin.y};
  }

  Point2 to_local(Point2 world) const {
    double dx = world.x - origin.x, dy = world.y - origin.y;
    double c = std::cos(rotation), s = std::sin(rotation);
    double lx = c * dx + s * dy, ly = -s * dx + c * dy;
    return {lx, reflect ? -ly : ly};
  }

  // vectors: no translation
  Point2 vec_to_world(Point2 local) const {
    double lx = local.x, ly = reflect ? -local.y : local.y;
    double c = std::cos(rotation), s = std::sin(rotation);
    return {c * lx - s * ly, s * lx + c * ly};
  }
};

// Positions of the robots visible to the observer, in the observer's local
// frame. The observer itself is at the origin and is not included.
struct Snapshot {
  std::vector<Point2> visible;
};

namespace visdetail {

// Exact straight-segment witness search. Every locally clearance-maximal
// sight line is pinned by at most two of the constraints "stay within 1/2 of
// an endpoint center" / "stay at least 1/2 from a blocker", so it suffices to
// scan bitangent lines of circle pairs (all radius 1/2), slightly nudged so a
// strict witness is recognized, plus the center line.
inline bool line_witness_exists(Point2 a, Point2 b, const std::vector<Point2>& blockers,
                                double inflate = 0.0) {
  const double r = 0.5;
  const double rb = 0.5 + inflate;  // blocker disk radius
  std::vector<Point2> circles;
  circles.push_back(a);
  circles.push_back(b);
  for (Point2 w : blockers) circles.push_back(w);

  auto clear_on_line = [&](Point2 p0, Point2 dir) {
    double t_a = dot(a - p0, dir), t_b = dot(b - p0, dir);
    if (t_a > t_b) {
      dir = -1.0 * dir;
      t_a = -t_a;
      t_b = -t_b;
    }
    Point2 nrm = perp(dir);
    double sa = std::fabs(dot(a - p0, nrm)), sb = std::fabs(dot(b - p0, nrm));
    if (sa > r + 1e-9 || sb > r + 1e-9) return false;  // line misses a circle
    double ha = std::sqrt(std::max(0.0, r * r - sa * sa));
    double hb = std::sqrt(std::max(0.0, r * r - sb * sb));
    double tp = t_a + ha, tq = t_b - hb;  // inner crossings
    if (tp >= tq) return false;
    Point2 p = p0 + tp * dir, q = p0 + tq * dir;
    for (Point2 w : blockers)
      if (point_segment_distance(w, p, q) <= rb + 1e-9) return false;
    return true;
  };

  // tries a line and nudged variants; tangency-generated candidates sit at
  // exactly r from their generators, so a strictly clear witness appears only
  // after a small shift
  auto try_line = [&](Point2 p0, Point2 dir) {
    const double eps = 1e-6;
    Point2 nrm = perp(dir);
    if (clear_on_line(p0, dir)) return true;
    if (clear_on_line(p0 + eps * nrm, dir)) return true;
    if (clear_on_line(p0 - eps * nrm, dir)) return true;
    Point2 rot_p{dir.x - eps * dir.y, dir.y + eps * dir.x};
    Point2 rot_m{dir.x + eps * dir.y, dir.y - eps * dir.x};
    if (clear_on_line(p0, Direction2::of(rot_p).vec())) return true;
    if (clear_on_line(p0, Direction2::of(rot_m).vec())) return true;
    return false;
  };

  if (dist(a, b) <= 1.0 + 1e-9) return true;  // touching robots share a boundary point
  if (try_line(a, Direction2::of(b - a).vec())) return true;

  auto radius_of = [&](size_t i) { return i < 2 ? r : rb; };
  for (size_t i = 0; i < circles.size(); ++i)
    for (size_t j = i + 1; j < circles.size(); ++j) {
      double d = dist(circles[i], circles[j]);
      if (d < 1e-12) continue;
      Point2 e = Direction2::of(circles[j] - circles[i]).vec();
      Point2 pp = perp(e);
      double r1 = radius_of(i), r2 = radius_of(j);
      // lines at signed distance s1*r1 from the first and s2*r2 from the
      // second circle: the four bitangents
      for (double s1 : {1.0, -1.0})
        for (double s2 : {1.0, -1.0}) {
          double sin_t = (s2 * r2 - s1 * r1) / d;
          if (std::fabs(sin_t) > 1.0) continue;
          double cos_t = std::sqrt(1.0 - sin_t * sin_t);
          for (double cs : {cos_t, -cos_t}) {
            Point2 nrm{sin_t * e.x + cs * pp.x, sin_t * e.y + cs * pp.y};
            Point2 p0 = circles[i] - s1 * r1 * nrm;
            if (try_line(p0, perp(nrm))) return true;
          }
        }
    }
  return false;
}

}  // namespace visdetail

// inflate widens every blocker disk (used by tests probing decision margins);
// the default is the exact unit-disk model.
inline bool can_see(Point2 a, Point2 b, const std::vector<Point2>& blockers,
                    const Tolerances& tol = Tolerances{}, double inflate = 0.0) {
  double L = dist(a, b);
  if (L < 1.0 - tol.eps_geom) throw std::runtime_error("invalid configuration");
  Point2 e = Direction2::of(b - a).vec();
  Point2 nrm = perp(e);
  const double rb = 0.5 + inflate;

  struct Bl {
    double t, s;
  };
  std::vector<Bl> rel;
  std::vector<Point2> relp;
  for (Point2 w : blockers) {
    if (dist(w, a) < 1.0 - tol.eps_geom || dist(w, b) < 1.0 - tol.eps_geom)
      throw std::runtime_error("invalid configuration");
    if (point_segment_distance(w, a, b) > 0.5 + rb + tol.eps_geom) continue;
    rel.push_back({dot(w - a, e), dot(w - a, nrm)});
    relp.push_back(w);
  }
  if (rel.empty()) return true;

  size_t m = rel.size();
  std::vector<size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j)
      if (dist(relp[i], relp[j]) <= 2.0 * rb + tol.eps_geom) parent[find(i)] = find(j);

  // A blocker touches a wall (the flat corridor boundary at signed offset
  // +-1/2) iff its disk reaches the wall line and the contact interval
  // overlaps the wall segment t in [0, L]. The slack sits at rounding scale:
  // any genuinely positive clearance must count as a line of sight, or
  // robots straightening out of a collinear past would stay mutually blind
  // long after exact geometry separates them.
  double teps = 1e-12 * (1.0 + L);
  auto touches_wall = [&](const Bl& b2, double wall) {
    double gap = b2.s - wall;  // center offset from the wall line
    double h2 = rb * rb - gap * gap;
    if (h2 < -teps) return false;
    double h = std::sqrt(std::max(0.0, h2));
    return b2.t + h >= -teps && b2.t - h <= L + teps;
  };

  std::vector<bool> plus(m, false), minus(m, false);
  for (size_t i = 0; i < m; ++i) {
    size_t r = find(i);
    if (touches_wall(rel[i], 0.5)) plus[r] = true;
    if (touches_wall(rel[i], -0.5)) minus[r] = true;
  }
  for (size_t i = 0; i < m; ++i)
    if (plus[i] && minus[i]) return false;

  // no separating chain: a curved escape exists, and with a single corridor
  // blocker so does a straight one; several staggered blockers need the
  // exact witness search
  if (m <= 1) return true;
  return visdetail::line_witness_exists(a, b, relp, inflate);
}

// Snapshot for one robot: every other robot it can see, mapped through its
// frame. Look happens on a single immutable world state, so snapshots for all
// robots in a round may be computed independently.
inline Snapshot take_snapshot(const std::vector<Point2>& world_positions, size_t observer,
                              const std::vector<Frame>& frames,
                              const Tolerances& tol = Tolerances{}) {
  Snapshot snap;
  std::vector<Point2> blockers;
  blockers.reserve(world_positions.size());
  for (size_t j = 0; j < world_positions.size(); ++j) {
    if (j == observer) continue;
    blockers.clear();
    for (size_t k2 = 0; k2 < world_positions.size(); ++k2)
      if (k2 != observer && k2 != j) blockers.push_back(world_positions[k2]);
    if (can_see(world_positions[observer], world_positions[j], blockers, tol))
      snap.visible.push_back(frames[observer].to_local(world_positions[j]));
  }
  return snap;
}

enum class SelfClass { Corner, Interior, Degenerate };

struct ObservedHull {
  Hull hull;  // over {origin} u visible, observer's local frame
  SelfClass self_class = SelfClass::Corner;
  bool collinear_triple_seen = false;
};

namespace detail {
inline bool contains_origin(const std::vector<Point2>& vs) {
  for (Point2 v : vs)
    if (norm(v) < 1e-9) return true;
  return false;
}
}  // namespace detail

// exact_triple: when false the collinear-triple scan is evaluated lazily for
// the phase-termination gate only: on strictly convex observations it checks
// consecutive vertex triples (equivalent there, linear instead of cubic), and
// it is skipped entirely when some observed robot is not a hull vertex, since
// the gate is already closed then.
inline ObservedHull observed_hull(const Snapshot& s, const Tolerances& tol = Tolerances{},
                                  bool exact_triple = true) {
  std::vector<Point2> pts;
  pts.reserve(s.visible.size() + 1);
  pts.push_back({0.0, 0.0});
  for (Point2 p : s.visible) pts.push_back(p);

  ObservedHull out;
  out.hull = convex_hull(pts, tol.eps_geom);

  if (out.hull.degenerate) {
    out.self_class =
        detail::contains_origin(out.hull.vertices) ? SelfClass::Corner : SelfClass::Degenerate;
  } else {
    out.self_class =
        detail::contains_origin(out.hull.vertices) ? SelfClass::Corner : SelfClass::Interior;
  }

  bool all_vertices = out.hull.vertices.size() == pts.size() && !out.hull.degenerate;
  if (!exact_triple && !all_vertices) {
    return out;
  }
  if (!exact_triple) {
    const auto& v = out.hull.vertices;
    size_t n = v.size();
    for (size_t i = 0; i < n && !out.collinear_triple_seen; ++i) {
      Point2 mid = v[(i + 1) % n];
      if (norm(mid) < 1e-9) continue;  // the triple's middle must be a visible robot
      if (point_segment_distance(mid, v[i], v[(i + 2) % n]) <= tol.eps_geom)
        out.collinear_triple_seen = true;
    }
  } else {
    // a visible robot within eps of the segment between two other points
    for (size_t j = 0; j < s.visible.size() && !out.collinear_triple_seen; ++j) {
      Point2 midp = s.visible[j];
      for (size_t i = 0; i < pts.size() && !out.collinear_triple_seen; ++i) {
        if (pts[i] == midp) continue;
        for (size_t k2 = i + 1; k2 < pts.size(); ++k2) {
          if (pts[k2] == midp) continue;
          if (point_segment_distance(midp, pts[i], pts[k2]) <= tol.eps_geom &&
              dist(pts[i], midp) > tol.eps_geom && dist(pts[k2], midp) > tol.eps_geom) {
            out.collinear_triple_seen = true;
            break;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace swarmpf
