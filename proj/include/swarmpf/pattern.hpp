#pragma once

// Target-pattern ingestion, canonical ordering, scaled placement, and final
// configuration matching under similarity (scale + rotation + optional
// reflection + translation).

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "swarmpf/geom.hpp"

namespace swarmpf {

struct TargetPattern {
  std::vector<Point2> points;  // pattern frame

  int k() const { return static_cast<int>(points.size()); }

  void validate(const Tolerances& tol = Tolerances{}) const {
    if (points.empty()) throw std::invalid_argument("pattern must have at least one point");
    for (size_t i = 0; i < points.size(); ++i) {
      if (!is_finite(points[i])) throw std::invalid_argument("pattern point not finite");
      for (size_t j = i + 1; j < points.size(); ++j)
        if (dist(points[i], points[j]) < 1.0 - tol.eps_geom)
          throw std::invalid_argument("pattern points closer than one robot diameter");
    }
  }
};

// Left to right, ties broken top to bottom.
inline std::vector<Point2> order_canonical(const std::vector<Point2>& points) {
  std::vector<Point2> out = points;
  std::sort(out.begin(), out.end(),
            [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y > b.y); });
  for (size_t i = 0; i + 1 < out.size(); ++i)
    if (out[i] == out[i + 1]) throw std::invalid_argument("duplicate pattern point");
  return out;
}

struct ScaledPlacement {
  std::vector<Point2> world_targets;  // canonical order; last equals anchor
  double scale = 5.0;
  Point2 anchor{0.0, 0.0};
};

// Order canonically, scale offsets relative to the last ordered point, and
// translate so the last point lands at (x_min - 100, y_max + 100).
inline ScaledPlacement scaled_placement(const TargetPattern& p, double x_min, double y_max,
                                        double scale = 5.0) {
  if (scale < 3.0) throw std::invalid_argument("scale factor must be >= 3");
  std::vector<Point2> q = order_canonical(p.points);
  ScaledPlacement out;
  out.scale = scale;
  out.anchor = {x_min - 100.0, y_max + 100.0};
  out.world_targets.reserve(q.size());
  Point2 last = q.back();
  for (Point2 qi : q) out.world_targets.push_back(out.anchor + scale * (qi - last));
  return out;
}

struct PatternMatch {
  bool ok = false;
  Similarity transform;     // pattern frame -> world
  double residual = 0.0;    // max per-point error after refinement
  std::vector<Point2> matched;  // world points, canonical pattern order
};

// True iff some k-subset of the final positions is a similarity image of the
// pattern within tol. A similarity is pinned by two correspondences, so the
// search tries every ordered pair of final positions against the pattern's
// widest point pair, with and without reflection. A positive required_scale
// restricts the search to matches at that scale (small patterns can embed at
// many scales; the placement check cares about one).
inline PatternMatch match_pattern(const std::vector<Point2>& final_positions,
                                  const TargetPattern& p, double tol = 1e-6,
                                  double required_scale = 0.0) {
  PatternMatch best;
  if (final_positions.size() < p.points.size() || p.points.empty()) return best;
  std::vector<Point2> q = order_canonical(p.points);
  size_t k = q.size();

  if (k == 1) {
    best.ok = true;
    best.matched = {final_positions.front()};
    best.transform.translation = final_positions.front() - q[0];
    return best;
  }

  // widest pair in the pattern: robust base for the pinned similarity
  size_t qa = 0, qb = 1;
  double w = 0.0;
  for (size_t i = 0; i < k; ++i)
    for (size_t j = i + 1; j < k; ++j)
      if (dist(q[i], q[j]) > w) {
        w = dist(q[i], q[j]);
        qa = i;
        qb = j;
      }

  auto try_map = [&](Point2 u, Point2 v, bool reflect) -> bool {
    // complex similarity z -> alpha*(z or conj z) + beta with q[qa]->u, q[qb]->v
    auto cm = [](Point2 a, Point2 b) {  // complex multiply
      return Point2{a.x * b.x - a.y * b.y, a.x * b.y + a.y * b.x};
    };
    Point2 dq = q[qb] - q[qa];
    if (reflect) dq.y = -dq.y;
    double den = dot(dq, dq);
    if (den <= 0.0) return false;
    Point2 dv = v - u;
    if (required_scale > 0.0 &&
        std::fabs(norm(dv) / norm(dq) - required_scale) > 1e-6 * std::max(1.0, required_scale))
      return false;
    Point2 alpha = {(dv.x * dq.x + dv.y * dq.y) / den, (dv.y * dq.x - dv.x * dq.y) / den};
    std::vector<Point2> imgs(k);
    for (size_t i = 0; i < k; ++i) {
      Point2 z = q[i] - q[qa];
      if (reflect) z.y = -z.y;
      imgs[i] = u + cm(alpha, z);
    }
    std::vector<Point2> matched(k);
    std::vector<char> used(final_positions.size(), 0);
    for (size_t i = 0; i < k; ++i) {
      bool found = false;
      for (size_t j = 0; j < final_positions.size(); ++j) {
        if (used[j]) continue;
        if (dist(final_positions[j], imgs[i]) <= tol) {
          used[j] = 1;
          matched[i] = final_positions[j];
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    AlignResult ar = similarity_align(q, matched, true);
    if (ar.residual > tol) return false;
    best.ok = true;
    best.transform = ar.transform;
    best.residual = ar.residual;
    best.matched = std::move(matched);
    return true;
  };

  for (size_t i = 0; i < final_positions.size(); ++i)
    for (size_t j = 0; j < final_positions.size(); ++j) {
      if (i == j) continue;
      if (try_map(final_positions[i], final_positions[j], false)) return best;
      if (try_map(final_positions[i], final_positions[j], true)) return best;
    }
  return best;
}

inline bool pattern_achieved(const std::vector<Point2>& final_positions, const TargetPattern& p,
                             double tol = 1e-6) {
  if (final_positions.size() < p.points.size()) return false;
  return match_pattern(final_positions, p, tol).ok;
}

}  // namespace swarmpf
