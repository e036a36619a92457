#pragma once

// The per-robot algorithm: a pure function from (snapshot, memory, randomness)
// to (motion target in the robot's own frame, updated memory), covering the
// three phases.
//
//  - Mutual visibility: corner robots expand the hull one unit along exterior
//    bisectors each round; interior robots exit perpendicularly through the
//    closest eligible edge (length >= 3, nobody closer). A corner that
//    observes all visible robots in strictly convex position starts a 4k+2
//    countdown; when it reaches zero the phase ends and n is learned.
//  - Leader election: the circle through the farthest robot about the hull
//    vertex centroid is computed once and stored; robots on it repeatedly
//    flip 1/k coins, losers dip inside and return until exactly one remains.
//  - Pattern formation: the leader walks robots one at a time into the scaled
//    pattern using adjacency-direction + displacement-distance instruction
//    legs; followers only ever move when instructed.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "swarmpf/geom.hpp"
#include "swarmpf/memory.hpp"
#include "swarmpf/pattern.hpp"
#include "swarmpf/rng.hpp"
#include "swarmpf/visibility.hpp"

namespace swarmpf {

// Static algorithm inputs known to every robot: tolerances, the target
// pattern, and the scaling factor. Not part of per-robot memory.
struct AlgoConfig {
  Tolerances tol{};
  std::vector<Point2> pattern_canonical;
  double scale_factor = 5.0;

  int pattern_size() const { return static_cast<int>(pattern_canonical.size()); }

  static AlgoConfig make(const TargetPattern& p, Tolerances tol = Tolerances{},
                         double scale = 5.0) {
    tol.validate();
    p.validate(tol);
    if (scale < 3.0) throw std::invalid_argument("scale factor must be >= 3");
    AlgoConfig cfg;
    cfg.tol = tol;
    cfg.pattern_canonical = order_canonical(p.points);
    cfg.scale_factor = scale;
    return cfg;
  }
};

struct Motion {
  Point2 target{0.0, 0.0};  // robot's local frame; origin means stay
  bool moves() const { return target.x != 0.0 || target.y != 0.0; }
};

struct StepResult {
  Motion motion;
  Memory memory;
};

namespace detail {

inline bool any_adjacent(const Snapshot& s, const Tolerances& tol) {
  for (Point2 p : s.visible) {
    double d = norm(p);
    if (d >= 1.0 - 1e-6 && d <= 1.0 + tol.eps_adj) return true;
  }
  return false;
}

inline int find_origin_vertex(const std::vector<Point2>& vs) {
  for (size_t i = 0; i < vs.size(); ++i)
    if (norm(vs[i]) < 1e-9) return static_cast<int>(i);
  return -1;
}

// exact CCW quarter-turn rotations (no trig, so scripted coordinates stay exact)
inline Point2 rot90k(Point2 p, int k) {
  switch (k & 3) {
    case 1: return {-p.y, p.x};
    case 2: return {-p.x, -p.y};
    case 3: return {p.y, -p.x};
    default: return p;
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Mutual Visibility
// ---------------------------------------------------------------------------

namespace detail {

// Interior robot exit move through the closest eligible edge, or stay.
inline Point2 interior_exit_target(const ObservedHull& oh, const Snapshot& s,
                                   const Tolerances& tol) {
  const auto& vs = oh.hull.vertices;
  size_t nv = vs.size();

  // visible robots that are not hull vertices compete for edges
  std::vector<Point2> competitors;
  for (Point2 p : s.visible) {
    bool is_vertex = false;
    for (Point2 v : vs)
      if (dist(p, v) < 1e-9) {
        is_vertex = true;
        break;
      }
    if (!is_vertex) competitors.push_back(p);
  }

  Point2 origin{0.0, 0.0};

  // usable exit edges: long enough, the robot strictly behind them by half a
  // diameter (a robot on or barely behind an edge cannot pass "through" it;
  // straightened 180-degree robots sink into the interior instead), the
  // perpendicular foot strictly inside with endpoint margins, and no visible
  // competitor strictly closer
  struct Candidate {
    size_t edge;
    double my_d, t, elen;
  };
  std::vector<Candidate> cands;
  for (size_t i = 0; i < nv; ++i) {
    Point2 u = vs[i], v = vs[(i + 1) % nv];
    double elen = dist(u, v);
    if (elen < 3.0 - tol.eps_geom) continue;
    double my_d = point_segment_distance(origin, u, v);
    if (my_d < 0.5) continue;
    Point2 e = Direction2::of(v - u).vec();
    double t = dot(origin - u, e);
    if (t < 0.5 + tol.eps_geom || t > elen - 0.5 - tol.eps_geom) continue;
    double deps = tol.eps_geom * (1.0 + my_d);
    bool eligible = true;
    for (Point2 p : competitors)
      if (point_segment_distance(p, u, v) < my_d - deps) {
        eligible = false;
        break;
      }
    if (eligible) cands.push_back({i, my_d, t, elen});
  }
  std::sort(cands.begin(), cands.end(),
            [](const Candidate& a, const Candidate& b) { return a.my_d < b.my_d; });

  for (const Candidate& c : cands) {
    Point2 u = vs[c.edge], v = vs[(c.edge + 1) % nv];
    Point2 e = Direction2::of(v - u).vec();
    double deps = tol.eps_geom * (1.0 + c.my_d);

    // crowding: one robot per edge per round. Simultaneous exits through one
    // edge would land exactly on a line parallel to it, seeding degenerate
    // near-collinear hull corners, so among equidistant contenders only the
    // outright winner of the frame-invariant tiebreak (smaller distance to
    // the nearer edge endpoint) moves.
    double my_key = std::min(c.t, c.elen - c.t);
    bool crowded = false;
    for (Point2 p : competitors) {
      double pd = point_segment_distance(p, u, v);
      double pt = dot(p - u, e);
      if (pd <= c.my_d + deps) {
        double their_key = std::min(pt, c.elen - pt);
        if (their_key <= my_key + deps) {
          crowded = true;  // they win or unresolvable tie
          break;
        }
      }
    }
    if (crowded) continue;

    // CCW hull: interior on the left of u->v, outward on the right
    Point2 outward{e.y, -e.x};
    Point2 target = u + c.t * e + outward;

    // swept path inflated by one diameter must be free of visible robots
    bool blocked = false;
    for (Point2 p : s.visible)
      if (point_segment_distance(p, origin, target) < 1.0 - tol.eps_geom) {
        blocked = true;
        break;
      }
    if (!blocked) return target;
  }
  return origin;
}

}  // namespace detail

inline StepResult mv_step(const Snapshot& s, const Memory& m0, const AlgoConfig& cfg) {
  const Tolerances& tol = cfg.tol;
  Memory m = m0;
  ObservedHull oh = observed_hull(s, tol, /*exact_triple=*/false);
  int pts_count = static_cast<int>(s.visible.size()) + 1;
  bool small = pts_count <= 2;
  bool all_strict =
      !oh.hull.degenerate && oh.hull.vertices.size() == static_cast<size_t>(pts_count);
  bool all_convex = small || (all_strict && !oh.collinear_triple_seen);
  int k_now = small ? pts_count : static_cast<int>(oh.hull.vertices.size());
  bool self_corner = oh.self_class == SelfClass::Corner;

  // countdown bookkeeping: clear on growth, otherwise decrement; restart is
  // re-evaluated in the same round after a clear
  bool terminated = false;
  if (m.mv_counter) {
    if (k_now > *m.mv_k) {
      m.mv_counter.reset();
      m.mv_k.reset();
    } else {
      *m.mv_counter -= 1;
      if (*m.mv_counter <= 0) {
        m.phase = Phase::LeaderElection;
        m.n_total = pts_count;
        m.mv_counter.reset();
        m.mv_k.reset();
        terminated = true;
      }
    }
  }
  if (!terminated && !m.mv_counter && self_corner && all_convex) {
    m.mv_counter = 4 * k_now + 2;
    m.mv_k = k_now;
  }

  Point2 target{0.0, 0.0};
  if (oh.hull.degenerate) {
    if (self_corner) {
      // extreme of the observed line: one unit directly away from the other extreme
      Point2 other{0.0, 0.0};
      double far = 0.0;
      for (Point2 v : oh.hull.vertices)
        if (norm(v) > far) {
          far = norm(v);
          other = v;
        }
      if (far > tol.eps_geom) target = -1.0 * Direction2::of(other).vec();
    } else {
      // on the line strictly between others: one unit perpendicular, side +y
      Point2 u = oh.hull.vertices.front(), v = oh.hull.vertices.back();
      Point2 n = perp(Direction2::of(v - u).vec());
      if (n.y < -tol.eps_geom || (std::fabs(n.y) <= tol.eps_geom && n.x < 0.0)) n = -1.0 * n;
      target = n;
    }
  } else if (self_corner) {
    const auto& vs = oh.hull.vertices;
    int idx = detail::find_origin_vertex(vs);
    size_t nv = vs.size();
    Point2 prev = vs[(idx + nv - 1) % nv], next = vs[(idx + 1) % nv];
    target = exterior_bisector(prev, vs[idx], next, tol.eps_geom).vec();
  } else {
    target = detail::interior_exit_target(oh, s, tol);
  }

  m.had_adjacent_prev = detail::any_adjacent(s, tol);
  m.rebase(target);
  return {Motion{target}, m};
}

// ---------------------------------------------------------------------------
// Leader Election
// ---------------------------------------------------------------------------

namespace detail {

// Retreat depth: half the clearance to the chord of the own hull neighbours
// (keeps the robot a strict hull vertex), capped for collision safety against
// other circle robots and interior robots, floored just past the boundary
// classification band.
inline double retreat_depth(const Snapshot& s, Point2 c, double d, const Tolerances& tol) {
  double band = tol.eps_geom * (1.0 + d);
  double cap = 0.5;

  Point2 inward = Direction2::of(c).vec();

  std::vector<Point2> pts;
  pts.push_back({0.0, 0.0});
  for (Point2 p : s.visible) pts.push_back(p);
  Hull h = convex_hull(pts, tol.eps_geom);
  if (!h.degenerate) {
    int idx = find_origin_vertex(h.vertices);
    if (idx >= 0) {
      size_t nv = h.vertices.size();
      Point2 u = h.vertices[(idx + nv - 1) % nv], w = h.vertices[(idx + 1) % nv];
      Point2 uw = w - u;
      double den = cross(inward, uw);
      if (std::fabs(den) > 1e-12) {
        double t = cross(u, uw) / den;  // ray origin + t*inward hits line(u,w)
        if (t > 0.0) cap = std::min(cap, t / 2.0);
      }
    }
  }

  // angular neighbours on the circle: both may retreat simultaneously
  double my_angle = std::atan2(-c.y, -c.x);
  double best_ccw = 1e30, best_cw = 1e30;
  Point2 nb_ccw{}, nb_cw{};
  bool have_ccw = false, have_cw = false;
  for (Point2 p : s.visible) {
    double dc = dist(p, c);
    if (std::fabs(dc - d) <= band) {
      Point2 v = p - c;
      double a = std::atan2(v.y, v.x) - my_angle;
      while (a <= 0.0) a += 2.0 * M_PI;
      while (a > 2.0 * M_PI) a -= 2.0 * M_PI;
      if (a < best_ccw) {
        best_ccw = a;
        nb_ccw = p;
        have_ccw = true;
      }
      if (2.0 * M_PI - a < best_cw) {
        best_cw = 2.0 * M_PI - a;
        nb_cw = p;
        have_cw = true;
      }
    } else if (dc < d - band) {
      // interior robot: only I move toward it
      cap = std::min(cap, (norm(p) - 1.0) / 2.0);
    }
  }
  for (int which = 0; which < 2; ++which) {
    if (which == 0 ? have_ccw : have_cw) {
      double g = norm(which == 0 ? nb_ccw : nb_cw);
      if (g > 1.0) cap = std::min(cap, d * (g - 1.0) / (2.0 * g));
      else cap = 0.0;
    }
  }

  double floor = std::max(tol.eps_geom, 4.0 * band);
  return std::max(floor, cap);
}

}  // namespace detail

inline StepResult le_step(const Snapshot& s, const Memory& m0, Rng& rng, const AlgoConfig& cfg) {
  const Tolerances& tol = cfg.tol;
  Memory m = m0;
  bool adj = detail::any_adjacent(s, tol);

  auto finish = [&](Point2 target) {
    m.had_adjacent_prev = adj;
    m.rebase(target);
    return StepResult{Motion{target}, m};
  };

  if (!m.le_center) {
    // phase entry: feasibility gate, then fix the election circle
    if (cfg.pattern_size() > m.n_total.value_or(0)) {
      m.phase = Phase::Done;
      return finish({0.0, 0.0});
    }
    std::vector<Point2> pts;
    pts.push_back({0.0, 0.0});
    for (Point2 p : s.visible) pts.push_back(p);
    Point2 c = centroid(pts, tol.eps_geom);
    double d = 0.0;
    for (Point2 p : pts) d = std::max(d, dist(p, c));
    m.le_center = c;
    m.le_radius = d;
    m.competing = std::fabs(norm(c) - d) <= tol.eps_geom * (1.0 + d);
    m.le_stage = LeStage::Flip;
  }

  Point2 c = *m.le_center;
  double d = *m.le_radius;
  double band = tol.eps_geom * (1.0 + d);
  auto on_circle = [&](Point2 p) { return std::fabs(dist(p, c) - d) <= band; };

  bool self_on = std::fabs(norm(c) - d) <= band;  // own distance to c
  int boundary = self_on ? 1 : 0;
  for (Point2 p : s.visible)
    if (on_circle(p)) ++boundary;

  if (boundary == 1) {
    m.is_leader = self_on;
    m.phase = Phase::PatternFormation;
    m.competing.reset();
    m.le_stage.reset();
    m.saved_pos.reset();
    if (!self_on) {
      m.le_center.reset();
      m.le_radius.reset();
    }  // the leader keeps the circle for its exit route
    m.follow_state = FollowState{};
    return finish({0.0, 0.0});
  }

  if (*m.le_stage == LeStage::Flip) {
    m.le_stage = LeStage::Evaluate;
    if (m.competing.value_or(false) && self_on) {
      int k = boundary;
      if (rng.uniform01() < 1.0 / static_cast<double>(k)) return finish({0.0, 0.0});
      double delta = detail::retreat_depth(s, c, d, tol);
      m.saved_pos = Point2{0.0, 0.0};
      return finish(delta * Direction2::of(c).vec());
    }
    return finish({0.0, 0.0});
  }

  // Evaluate with no election: retreated robots return to their circle spots
  m.le_stage = LeStage::Flip;
  if (m.saved_pos) {
    Point2 back = *m.saved_pos;
    m.saved_pos.reset();
    return finish(back);
  }
  return finish({0.0, 0.0});
}

// ---------------------------------------------------------------------------
// Pattern Formation: leader script
// ---------------------------------------------------------------------------

namespace detail {

struct LeaderView {
  Point2 anchor_w;                    // work coords, relative to self
  std::vector<Point2> visible_w;      // work coords
  std::vector<Point2> unplaced;       // cluster robots (candidates for guidance)
  std::optional<Point2> band_robot;   // robot mid-guidance in the staging band
};

inline LeaderView leader_view(const Snapshot& s, const Memory& m) {
  LeaderView v;
  int qt = m.work_frame->quarter_turns;
  v.anchor_w = rot90k(*m.anchor, qt);
  for (Point2 p : s.visible) {
    Point2 w = rot90k(p, qt);
    v.visible_w.push_back(w);
    if (w.x > v.anchor_w.x + 50.0) v.unplaced.push_back(w);
    else if (w.x > v.anchor_w.x + 5.0) v.band_robot = w;
  }
  return v;
}

inline Point2 leftmost_topmost(const std::vector<Point2>& pts) {
  Point2 best = pts.front();
  for (Point2 p : pts)
    if (p.x < best.x || (p.x == best.x && p.y > best.y)) best = p;
  return best;
}

}  // namespace detail

inline StepResult pf_leader_step(const Snapshot& s, const Memory& m0, const AlgoConfig& cfg) {
  const Tolerances& tol = cfg.tol;
  Memory m = m0;
  bool adj = detail::any_adjacent(s, tol);
  const double kArrive = 1e-6;

  auto finish_work = [&](Point2 target_w) {
    Point2 local = detail::rot90k(target_w, (4 - m.work_frame->quarter_turns) & 3);
    m.had_adjacent_prev = adj;
    m.rebase(local);
    return StepResult{Motion{local}, m};
  };
  auto stay = [&]() {
    m.had_adjacent_prev = adj;
    return StepResult{Motion{{0.0, 0.0}}, m};
  };

  if (!m.pf_stage) {
    // setup: feasibility recheck, empty quadrant, construction frame, anchor
    if (cfg.pattern_size() > m.n_total.value_or(0)) {
      m.phase = Phase::Done;
      return stay();
    }
    int chosen = -1;
    for (int qt = 0; qt < 4 && chosen < 0; ++qt) {
      bool occupied = false;
      for (Point2 p : s.visible) {
        Point2 w = detail::rot90k(p, qt);
        double ax = tol.eps_geom * (1.0 + norm(p));
        if (w.x < -ax && w.y > ax) {
          occupied = true;
          break;
        }
      }
      if (!occupied) chosen = qt;
    }
    if (chosen < 0) throw std::runtime_error("impossible: leader not a hull corner");
    m.work_frame = WorkFrame{static_cast<std::int8_t>(chosen), false};
    double x_min = 0.0, y_max = 0.0;  // self included at the work origin
    for (Point2 p : s.visible) {
      Point2 w = detail::rot90k(p, chosen);
      x_min = std::min(x_min, w.x);
      y_max = std::max(y_max, w.y);
    }
    Point2 anchor_w{x_min - 100.0, y_max + 100.0};
    m.anchor = detail::rot90k(anchor_w, (4 - chosen) & 3);
    m.placed_count = 0;
    m.pf_stage = (m.n_total.value_or(1) == 1) ? PfStage::FinalGoCorridor : PfStage::ExitRadial;
  }

  detail::LeaderView lv = detail::leader_view(s, m);
  const Point2 anchor_w = lv.anchor_w;
  const double corridor_x = anchor_w.x + 10.0;   // x_min0 - 90
  const double corridor_x2 = anchor_w.x + 9.0;   // x_min0 - 91
  const int k = cfg.pattern_size();
  const int placed = m.placed_count.value_or(0);

  auto needs_target = [&](PfStage st) {
    return st == PfStage::ExitRing || st == PfStage::Approach || st == PfStage::Leg1Demo ||
           st == PfStage::Leg1Clear || st == PfStage::Transit2;
  };
  if (needs_target(*m.pf_stage) && lv.unplaced.empty()) return stay();

  // next pattern point, work coords relative to self
  auto pattern_point = [&](int index1) {
    Point2 q = cfg.pattern_canonical[static_cast<size_t>(index1 - 1)];
    Point2 qlast = cfg.pattern_canonical.back();
    return anchor_w + cfg.scale_factor * (q - qlast);
  };

  for (;;) {
    switch (*m.pf_stage) {
      case PfStage::Setup:
        m.pf_stage = PfStage::ExitRadial;
        continue;

      case PfStage::ExitRadial: {
        Point2 c_w = detail::rot90k(*m.le_center, m.work_frame->quarter_turns);
        double d = *m.le_radius;
        m.pf_stage = PfStage::ExitRing;
        return finish_work(c_w * (-2.0 / d));
      }

      case PfStage::ExitRing: {
        Point2 c_w = detail::rot90k(*m.le_center, m.work_frame->quarter_turns);
        double d = *m.le_radius;
        Point2 r1 = detail::leftmost_topmost(lv.unplaced);
        Point2 W{anchor_w.x + 100.0 - 3.0 - d, r1.y};
        Point2 me = -1.0 * c_w;        // from circle center to self
        Point2 uw = W - c_w;
        double theta_me = std::atan2(me.y, me.x);
        double theta_w = std::atan2(uw.y, uw.x);
        double dmax = 2.0 * std::acos((d + 1.01) / (d + 2.0));
        double gap = theta_w - theta_me;
        while (gap > M_PI) gap -= 2.0 * M_PI;
        while (gap <= -M_PI) gap += 2.0 * M_PI;
        if (std::fabs(gap) <= dmax) {
          m.pf_stage = PfStage::Approach;
          return finish_work(W);
        }
        double theta = theta_me + (gap > 0 ? dmax : -dmax);
        Point2 next = c_w + (d + 2.0) * Point2{std::cos(theta), std::sin(theta)};
        return finish_work(next);
      }

      case PfStage::Approach: {
        Point2 r = detail::leftmost_topmost(lv.unplaced);
        m.le_center.reset();
        m.le_radius.reset();
        m.pf_stage = PfStage::Leg1Demo;
        return finish_work({r.x - 1.0, r.y});
      }

      case PfStage::Leg1Demo: {
        Point2 f = detail::leftmost_topmost(lv.unplaced);
        m.pf_stage = PfStage::Leg1Clear;
        return finish_work({corridor_x2, f.y});
      }

      case PfStage::Leg1Clear: {
        // the follower will stop exactly one unit short of my current spot,
        // so its landing is at my x + 1; referencing the station to that
        // keeps the one-unit clearances exact instead of drifting with the
        // anchor's accumulated rounding
        Point2 f = detail::leftmost_topmost(lv.unplaced);
        double dy = pattern_point(placed + 1).y - f.y;
        if (std::fabs(dy) >= 0.5) {
          m.pf_stage = PfStage::Leg1WaitV;
          return finish_work({1.0, f.y + (dy > 0 ? 1.0 : -1.0)});
        }
        m.pf_stage = PfStage::Leg1WaitOv;
        return finish_work({1.0, f.y + 1.0});
      }

      case PfStage::Leg1WaitV:
        if (lv.band_robot && std::fabs(lv.band_robot->x) <= kArrive &&
            std::fabs(std::fabs(lv.band_robot->y) - 1.0) <= kArrive) {
          m.pf_stage = PfStage::VLegDemo;
          continue;
        }
        return stay();

      case PfStage::Leg1WaitOv:
        if (lv.band_robot && std::fabs(lv.band_robot->x) <= kArrive &&
            std::fabs(lv.band_robot->y + 1.0) <= kArrive) {
          m.pf_stage = PfStage::OvUpDemo;
          continue;
        }
        return stay();

      case PfStage::VLegDemo: {
        Point2 b = *lv.band_robot;  // directly above or below at distance 1
        double target_row = pattern_point(placed + 1).y;
        double sigma = (b.y < 0.0) ? 1.0 : -1.0;  // demo direction: away from the follower
        m.pf_stage = PfStage::VLegClear;
        return finish_work({b.x, target_row + sigma});
      }

      case PfStage::VLegClear: {
        // follower lands one unit short of me along its direction; clear to
        // exactly one unit left of that landing
        Point2 b = *lv.band_robot;
        double sigma = (b.y < 0.0) ? 1.0 : -1.0;
        m.pf_stage = PfStage::VLegWait;
        return finish_work({b.x - 1.0, -sigma});
      }

      case PfStage::VLegWait:
        if (lv.band_robot && std::fabs(lv.band_robot->x - 1.0) <= kArrive &&
            std::fabs(lv.band_robot->y) <= kArrive) {
          m.pf_stage = PfStage::Leg3Demo;
          continue;
        }
        return stay();

      case PfStage::OvUpDemo: {
        Point2 b = *lv.band_robot;  // follower one below
        double y_top_rel = pattern_point(placed + 1).y + 5.0;
        m.pf_stage = PfStage::OvUpClear;
        return finish_work({b.x, y_top_rel + 1.0});
      }

      case PfStage::OvUpClear:
        m.pf_stage = PfStage::OvUpWait;
        return finish_work({-2.0, 0.0});

      case PfStage::OvUpWait:
        if (lv.band_robot && std::fabs(lv.band_robot->x - 2.0) <= kArrive &&
            std::fabs(lv.band_robot->y + 1.0) <= kArrive) {
          m.pf_stage = PfStage::OvMidDown;
          continue;
        }
        return stay();

      case PfStage::OvMidDown:
        m.pf_stage = PfStage::OvAdjDown;
        return finish_work({0.0, -2.0});

      case PfStage::OvAdjDown: {
        Point2 b = *lv.band_robot;  // follower at (2, 1) relative to me
        m.pf_stage = PfStage::OvDownDemo;
        return finish_work({b.x, b.y - 1.0});
      }

      case PfStage::OvDownDemo: {
        Point2 b = *lv.band_robot;  // follower one above
        m.pf_stage = PfStage::OvDownClear;
        return finish_work({b.x, b.y - 6.0});
      }

      case PfStage::OvDownClear: {
        Point2 b = *lv.band_robot;  // follower five above its landing
        m.pf_stage = PfStage::OvDownWait;
        return finish_work({b.x - 1.0, b.y - 5.0});
      }

      case PfStage::OvDownWait:
        if (lv.band_robot && std::fabs(lv.band_robot->x - 1.0) <= kArrive &&
            std::fabs(lv.band_robot->y) <= kArrive) {
          m.pf_stage = PfStage::Leg3Demo;
          continue;
        }
        return stay();

      case PfStage::Leg3Demo: {
        Point2 p = pattern_point(placed + 1);
        m.pf_stage = PfStage::Leg3Clear;
        return finish_work({p.x - 1.0, p.y});
      }

      case PfStage::Leg3Clear:
        // detach: the follower lands at my x + 1; drop to two below its spot
        m.pf_stage = PfStage::Leg3Wait;
        return finish_work({1.0, -2.0});

      case PfStage::Leg3Wait: {
        bool placed_now = false;
        for (Point2 w : lv.visible_w)
          if (std::fabs(w.x) <= kArrive && std::fabs(w.y - 2.0) <= kArrive) placed_now = true;
        if (!placed_now) return stay();
        m.placed_count = placed + 1;
        if (*m.placed_count == k) m.pf_stage = PfStage::ParkAndDone;
        else if (*m.placed_count == k - 1 && k == m.n_total.value_or(0))
          m.pf_stage = PfStage::FinalGoCorridor;
        else m.pf_stage = PfStage::Transit1;
        continue;
      }

      case PfStage::Transit1:
        m.pf_stage = PfStage::Transit2;
        return finish_work({corridor_x, 0.0});

      case PfStage::Transit2: {
        Point2 r = detail::leftmost_topmost(lv.unplaced);
        m.pf_stage = PfStage::Approach;
        return finish_work({0.0, r.y});
      }

      case PfStage::ParkAndDone:
        m.phase = Phase::Done;
        return finish_work({corridor_x, 0.0});

      case PfStage::FinalGoCorridor:
        m.le_center.reset();
        m.le_radius.reset();
        m.pf_stage = PfStage::FinalVertical;
        return finish_work({corridor_x, 0.0});

      case PfStage::FinalVertical:
        m.pf_stage = PfStage::FinalPlace;
        return finish_work({0.0, anchor_w.y});

      case PfStage::FinalPlace:
        m.phase = Phase::Done;
        return finish_work(anchor_w);
    }
  }
}

// ---------------------------------------------------------------------------
// Pattern Formation: follower protocol
// ---------------------------------------------------------------------------

inline StepResult pf_follower_step(const Snapshot& s, const Memory& m0, const AlgoConfig& cfg) {
  const Tolerances& tol = cfg.tol;
  Memory m = m0;

  std::vector<Point2> adjacent;
  for (Point2 p : s.visible) {
    double d = norm(p);
    if (d >= 1.0 - 1e-6 && d <= 1.0 + tol.eps_adj) adjacent.push_back(p);
  }
  bool any_adj = !adjacent.empty();

  Point2 target{0.0, 0.0};
  switch (m.follow_state.kind) {
    case FollowKind::Idle:
      if (any_adj && !m.had_adjacent_prev) {
        Point2 best = adjacent.front();
        for (Point2 p : adjacent) {
          double dp = norm(p), db = norm(best);
          if (dp < db || (dp == db && (p.x < best.x || (p.x == best.x && p.y < best.y)))) best = p;
        }
        m.follow_state = FollowState{FollowKind::Armed, Direction2::of(best).vec(), 0.0};
      }
      break;

    case FollowKind::Armed: {
      Point2 dir = m.follow_state.dir;
      double cone = std::cos(1e-3);
      bool found = false;
      double best_d = 0.0;
      Point2 best_p{};
      for (Point2 p : s.visible) {
        double d = norm(p);
        if (d <= 0.0) continue;
        if (dot(p, dir) / d >= cone && (!found || d < best_d)) {
          found = true;
          best_d = d;
          best_p = p;
        }
      }
      if (found) {
        // re-derive the direction from the measured robot itself: the long
        // baseline keeps the lateral error of a D-unit move at the scale of
        // the instructor's placement noise instead of amplifying it D-fold
        m.follow_state =
            FollowState{FollowKind::Ready, Direction2::of(best_p).vec(), best_d - 1.0};
      } else {
        m.follow_state = FollowState{};  // instructor vanished; leader re-instructs
      }
      break;
    }

    case FollowKind::Ready: {
      double D = m.follow_state.dist;
      Point2 dir = m.follow_state.dir;
      if (D <= 1e-12) {
        m.follow_state = FollowState{};
        break;
      }
      Point2 end = D * dir;
      bool blocked = false;
      for (Point2 p : s.visible)
        if (point_segment_distance(p, {0.0, 0.0}, end) < 1.0 - tol.eps_geom) {
          blocked = true;
          break;
        }
      if (!blocked) {
        target = end;
        m.follow_state = FollowState{};
      }
      break;
    }
  }

  m.had_adjacent_prev = any_adj;
  m.rebase(target);
  return {Motion{target}, m};
}

// ---------------------------------------------------------------------------

inline StepResult robot_step(const Snapshot& s, const Memory& m, Rng& rng,
                             const AlgoConfig& cfg) {
  switch (m.phase) {
    case Phase::MutualVisibility:
      return mv_step(s, m, cfg);
    case Phase::LeaderElection:
      return le_step(s, m, rng, cfg);
    case Phase::PatternFormation:
      return m.is_leader.value_or(false) ? pf_leader_step(s, m, cfg)
                                         : pf_follower_step(s, m, cfg);
    case Phase::Done:
    default: {
      Memory mm = m;
      mm.had_adjacent_prev = detail::any_adjacent(s, cfg.tol);
      return {Motion{}, mm};
    }
  }
}

}  // namespace swarmpf
