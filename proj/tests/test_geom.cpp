#include <catch2/catch.hpp>

#include <cmath>

#include "swarmpf/geom.hpp"
#include "swarmpf/rng.hpp"

using namespace swarmpf;

namespace {

bool has_point(const std::vector<Point2>& vs, Point2 p, double tol = 1e-12) {
  for (Point2 v : vs)
    if (dist(v, p) <= tol) return true;
  return false;
}

}  // namespace

TEST_CASE("convex hull basic shapes") {
  SECTION("triangle is its own hull, CCW") {
    Hull h = convex_hull({{0, 0}, {4, 0}, {0, 4}});
    REQUIRE(h.vertices.size() == 3);
    REQUIRE_FALSE(h.degenerate);
    // CCW: every consecutive triple turns left
    for (size_t i = 0; i < 3; ++i) {
      Point2 a = h.vertices[i], b = h.vertices[(i + 1) % 3], c = h.vertices[(i + 2) % 3];
      REQUIRE(cross(b - a, c - a) > 0.0);
    }
  }
  SECTION("interior point excluded") {
    Hull h = convex_hull({{0, 0}, {4, 0}, {4, 4}, {0, 4}, {2, 2}});
    REQUIRE(h.vertices.size() == 4);
    REQUIRE_FALSE(has_point(h.vertices, {2, 2}));
  }
  SECTION("collinear input gives the two extremes, degenerate") {
    Hull h = convex_hull({{0, 0}, {3, 0}, {7, 0}});
    REQUIRE(h.degenerate);
    REQUIRE(h.vertices.size() == 2);
    REQUIRE(has_point(h.vertices, {0, 0}));
    REQUIRE(has_point(h.vertices, {7, 0}));
  }
  SECTION("one and two points") {
    REQUIRE(convex_hull({{1, 2}}).vertices.size() == 1);
    REQUIRE(convex_hull({{1, 2}}).degenerate);
    Hull h2 = convex_hull({{0, 0}, {1, 1}});
    REQUIRE(h2.vertices.size() == 2);
    REQUIRE(h2.degenerate);
  }
  SECTION("empty input rejected") { REQUIRE_THROWS(convex_hull({})); }
}

TEST_CASE("convex hull strict convexity on random clouds") {
  Rng rng(42);
  for (int iter = 0; iter < 300; ++iter) {
    int n = 3 + static_cast<int>(rng.below(40));
    std::vector<Point2> pts;
    while (static_cast<int>(pts.size()) < n) {
      Point2 c{rng.uniform(-50, 50), rng.uniform(-50, 50)};
      bool ok = true;
      for (Point2 p : pts)
        if (dist(p, c) < 1e-6) ok = false;
      if (ok) pts.push_back(c);
    }
    Hull h = convex_hull(pts);
    if (h.degenerate) continue;
    size_t m = h.vertices.size();
    for (size_t i = 0; i < m; ++i) {
      Point2 a = h.vertices[i], b = h.vertices[(i + 1) % m], c = h.vertices[(i + 2) % m];
      double len = std::max({dist(a, b), dist(b, c), dist(a, c)});
      REQUIRE(cross(b - a, c - a) > 1e-9 * len);
    }
    // every input point inside or on the hull
    for (Point2 p : pts) {
      for (size_t i = 0; i < m; ++i) {
        Point2 a = h.vertices[i], b = h.vertices[(i + 1) % m];
        REQUIRE(cross(b - a, p - a) >= -1e-7 * std::max(1.0, dist(a, b)));
      }
    }
  }
}

TEST_CASE("exterior bisector") {
  SECTION("right angle at origin") {
    Direction2 d = exterior_bisector({0, 1}, {0, 0}, {1, 0});
    REQUIRE(d.ux == Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
    REQUIRE(d.uy == Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
  }
  SECTION("symmetric wedge opening upward points down") {
    Direction2 d = exterior_bisector({-1, 1}, {0, 0}, {1, 1});
    REQUIRE(d.ux == Approx(0.0).margin(1e-12));
    REQUIRE(d.uy == Approx(-1.0).epsilon(1e-12));
  }
  SECTION("shallow wedge agrees with numeric angle maximization") {
    Point2 prev{-2, 0.1}, v{0, 0}, next{2, 0.1};
    Direction2 d = exterior_bisector(prev, v, next);
    // oracle: the exterior bisector maximizes the minimum angle to both edges
    double best_score = -1e9;
    Point2 best{0, 0};
    const int kSteps = 1000000;
    for (int i = 0; i < kSteps; ++i) {
      double a = 2.0 * M_PI * i / kSteps;
      Point2 u{std::cos(a), std::sin(a)};
      double s = std::min(std::acos(std::clamp(dot(u, Direction2::of(prev - v).vec()), -1.0, 1.0)),
                          std::acos(std::clamp(dot(u, Direction2::of(next - v).vec()), -1.0, 1.0)));
      if (s > best_score) {
        best_score = s;
        best = u;
      }
    }
    REQUIRE(dist({d.ux, d.uy}, best) < 1e-4);
    REQUIRE(d.uy < 0.0);  // away from the wedge
  }
  SECTION("collinear corner rejected") {
    REQUIRE_THROWS_WITH(exterior_bisector({-1, 0}, {0, 0}, {1, 0}), "degenerate corner");
  }
}

TEST_CASE("exterior bisector points outward on random convex polygons") {
  Rng rng(7);
  for (int iter = 0; iter < 200; ++iter) {
    int n = 3 + static_cast<int>(rng.below(12));
    std::vector<double> angles;
    for (int i = 0; i < n; ++i) angles.push_back(rng.uniform(0, 2 * M_PI));
    std::sort(angles.begin(), angles.end());
    bool distinct = true;
    for (int i = 0; i + 1 < n; ++i)
      if (angles[i + 1] - angles[i] < 0.05) distinct = false;
    if (!distinct) continue;
    std::vector<Point2> pts;
    double r = rng.uniform(3, 20);
    for (double a : angles) pts.push_back({r * std::cos(a), r * std::sin(a)});
    Hull h = convex_hull(pts);
    if (h.degenerate) continue;
    Point2 c = centroid(pts);
    size_t m = h.vertices.size();
    for (size_t i = 0; i < m; ++i) {
      Point2 prev = h.vertices[(i + m - 1) % m], v = h.vertices[i], next = h.vertices[(i + 1) % m];
      Direction2 b = exterior_bisector(prev, v, next);
      REQUIRE(dot(b.vec(), c - v) < 0.0);
    }
  }
}

TEST_CASE("point to segment distance") {
  REQUIRE(point_segment_distance({0, 1}, {-1, 0}, {1, 0}) == Approx(1.0));
  REQUIRE(point_segment_distance({3, 0}, {-1, 0}, {1, 0}) == Approx(2.0));
  REQUIRE(point_segment_distance({0.3, 0.4}, {0, 0}, {1, 0}) == Approx(0.4));
}

TEST_CASE("moving points minimum distance") {
  SECTION("parallel translation") {
    REQUIRE(moving_points_min_distance({0, 0}, {2, 0}, {0, 3}, {2, 3}) == Approx(3.0));
  }
  SECTION("symmetric crossing meets at zero") {
    REQUIRE(moving_points_min_distance({0, 0}, {2, 2}, {2, 0}, {0, 2}) == Approx(0.0).margin(1e-12));
  }
  SECTION("pass-by against a static point, oracle sampled at 1e6 steps") {
    double closed = moving_points_min_distance({0, 0}, {4, 0}, {2, 1}, {2, 1});
    double sampled = 1e300;
    const int kSteps = 1000000;
    for (int i = 0; i <= kSteps; ++i) {
      double t = static_cast<double>(i) / kSteps;
      sampled = std::min(sampled, dist(Point2{4 * t, 0}, Point2{2, 1}));
    }
    REQUIRE(closed == Approx(1.0).epsilon(1e-9));
    REQUIRE(std::fabs(closed - sampled) < 1e-6);
  }
  SECTION("random motions agree with dense sampling") {
    Rng rng(99);
    for (int iter = 0; iter < 200; ++iter) {
      Point2 a0{rng.uniform(-5, 5), rng.uniform(-5, 5)}, a1{rng.uniform(-5, 5), rng.uniform(-5, 5)};
      Point2 b0{rng.uniform(-5, 5), rng.uniform(-5, 5)}, b1{rng.uniform(-5, 5), rng.uniform(-5, 5)};
      double closed = moving_points_min_distance(a0, a1, b0, b1);
      double sampled = 1e300;
      const int kSteps = 100000;
      for (int i = 0; i <= kSteps; ++i) {
        double t = static_cast<double>(i) / kSteps;
        sampled = std::min(sampled, dist(a0 + t * (a1 - a0), b0 + t * (b1 - b0)));
      }
      REQUIRE(std::fabs(closed - sampled) < 1e-6);
    }
  }
}

TEST_CASE("centroid is the hull vertex mean") {
  REQUIRE(dist(centroid({{0, 0}, {2, 0}, {0, 2}, {2, 2}}), {1, 1}) < 1e-12);
  REQUIRE(dist(centroid({{0, 0}}), {0, 0}) < 1e-12);
  REQUIRE(dist(centroid({{0, 0}, {6, 0}, {0, 6}}), {2, 2}) < 1e-12);
  // interior points do not shift it
  REQUIRE(dist(centroid({{0, 0}, {2, 0}, {0, 2}, {2, 2}, {1.7, 1.2}}), {1, 1}) < 1e-12);
}

TEST_CASE("similarity alignment") {
  std::vector<Point2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  SECTION("pure translation") {
    std::vector<Point2> tgt;
    for (Point2 p : square) tgt.push_back(p + Point2{5, 5});
    AlignResult r = similarity_align(square, tgt);
    REQUIRE(r.transform.scale == Approx(1.0));
    REQUIRE(r.transform.rotation == Approx(0.0).margin(1e-12));
    REQUIRE_FALSE(r.transform.reflect);
    REQUIRE(dist(r.transform.translation, {5, 5}) < 1e-12);
    REQUIRE(r.residual < 1e-12);
  }
  SECTION("scale 5 and quarter turn") {
    std::vector<Point2> tgt;
    for (Point2 p : square) tgt.push_back({-5.0 * p.y, 5.0 * p.x});
    AlignResult r = similarity_align(square, tgt);
    REQUIRE(r.transform.scale == Approx(5.0));
    REQUIRE(r.transform.rotation == Approx(M_PI / 2).epsilon(1e-12));
    REQUIRE(r.residual < 1e-9);
  }
  SECTION("planted reflected similarity is recovered") {
    Rng rng(5);
    for (int iter = 0; iter < 200; ++iter) {
      size_t n = 2 + rng.below(9);
      std::vector<Point2> src;
      for (size_t i = 0; i < n; ++i) src.push_back({rng.uniform(-4, 4), rng.uniform(-4, 4)});
      double spread = 0.0;
      for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) spread = std::max(spread, dist(src[i], src[j]));
      if (spread < 0.1) continue;
      Similarity planted;
      planted.scale = rng.uniform(0.5, 6.0);
      planted.rotation = rng.uniform(0, 2 * M_PI);
      planted.reflect = rng.bernoulli(0.5);
      planted.translation = {rng.uniform(-10, 10), rng.uniform(-10, 10)};
      std::vector<Point2> tgt;
      for (Point2 p : src) tgt.push_back(planted.apply(p));
      AlignResult r = similarity_align(src, tgt, true);
      REQUIRE(r.residual < 1e-9);
      REQUIRE(r.transform.scale == Approx(planted.scale).epsilon(1e-9));
      for (Point2 p : src) REQUIRE(dist(r.transform.apply(p), planted.apply(p)) < 1e-9);
    }
  }
  SECTION("identical sources with spread targets rejected") {
    REQUIRE_THROWS_WITH(similarity_align({{1, 1}, {1, 1}}, {{0, 0}, {3, 0}}),
                        "degenerate alignment");
  }
}

TEST_CASE("tolerances validate ordering") {
  REQUIRE_NOTHROW(Tolerances{}.validate());
  Tolerances bad;
  bad.eps_adj = 0.2;  // violates eps_adj < clearance - 1
  REQUIRE_THROWS(bad.validate());
}
