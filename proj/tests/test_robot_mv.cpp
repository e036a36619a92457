#include <catch2/catch.hpp>

#include <cmath>

#include "swarmpf/robot.hpp"

using namespace swarmpf;

namespace {

AlgoConfig cfg1() {
  TargetPattern p{{{0, 0}}};
  return AlgoConfig::make(p);
}

Snapshot snap_of(std::vector<Point2> visible) {
  Snapshot s;
  s.visible = std::move(visible);
  return s;
}

Memory mv_memory() {
  Memory m;
  m.phase = Phase::MutualVisibility;
  return m;
}

}  // namespace

TEST_CASE("corner of a square hull moves along the outward diagonal") {
  // observer at the (0,0) corner of a 4x4 square, with an interior robot
  Snapshot s = snap_of({{4, 0}, {4, 4}, {0, 4}, {2, 2}});
  auto [motion, m] = mv_step(s, mv_memory(), cfg1());
  REQUIRE(motion.target.x == Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
  REQUIRE(motion.target.y == Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
  REQUIRE_FALSE(m.mv_counter.has_value());  // interior robot visible: no countdown
}

TEST_CASE("interior robot exits through an eligible edge") {
  // square hull 4x4 around the observer at its center: every edge has length
  // 4, the observer is 2 away from each; it exits 1 unit past the foot of the
  // first edge in hull order
  Snapshot s = snap_of({{-2, -2}, {2, -2}, {2, 2}, {-2, 2}});
  auto [motion, m] = mv_step(s, mv_memory(), cfg1());
  REQUIRE(motion.moves());
  REQUIRE(norm(motion.target) == Approx(3.0).epsilon(1e-12));  // distance 2 + 1 beyond
  (void)m;
}

TEST_CASE("interior robot with a closer competitor avoids claimed edges") {
  // the competitor at (0.5,-1) is strictly closer to the south and east
  // edges, so those are not eligible for the observer; it exits through the
  // first remaining edge instead
  Snapshot s = snap_of({{-2, -2}, {2, -2}, {2, 2}, {-2, 2}, {0.5, -1}});
  auto [motion, m] = mv_step(s, mv_memory(), cfg1());
  REQUIRE(motion.moves());
  REQUIRE(norm(motion.target) == Approx(3.0).epsilon(1e-12));
  REQUIRE(motion.target.y >= -1.0);  // not through the south edge
  (void)m;
}

TEST_CASE("countdown starts from a strictly convex observation") {
  // observer + 5 visible robots, all strict hull corners: k = 6
  Snapshot s = snap_of({{4, 0}, {6, 3}, {4, 6}, {0, 6}, {-2, 3}});
  auto [motion, m] = mv_step(s, mv_memory(), cfg1());
  REQUIRE(m.mv_counter == 26);  // 4*6 + 2
  REQUIRE(m.mv_k == 6);
  REQUIRE(motion.moves());  // corner motion continues during the countdown
}

TEST_CASE("countdown exhaustion ends the phase and learns n") {
  Snapshot s = snap_of({{4, 0}, {6, 3}, {4, 6}, {0, 6}, {-2, 3}});
  Memory m = mv_memory();
  m.mv_counter = 1;
  m.mv_k = 6;
  auto [motion, out] = mv_step(s, m, cfg1());
  REQUIRE(out.phase == Phase::LeaderElection);
  REQUIRE(out.n_total == 6);
  REQUIRE_FALSE(out.mv_counter.has_value());
  REQUIRE(motion.moves());  // final corner move still happens
}

TEST_CASE("countdown clears when more corners appear") {
  Snapshot s = snap_of({{4, 0}, {6, 3}, {4, 6}, {0, 6}, {-2, 3}});
  Memory m = mv_memory();
  m.mv_counter = 9;
  m.mv_k = 4;  // started earlier with fewer corners
  auto [motion, out] = mv_step(s, m, cfg1());
  (void)motion;
  // cleared and restarted in the same round with the new corner count
  REQUIRE(out.mv_counter == 26);
  REQUIRE(out.mv_k == 6);
}

TEST_CASE("interior countdown never starts on a collinear triple") {
  // a visible robot sits exactly on the segment between two corners
  Snapshot s = snap_of({{4, 0}, {2, 3}, {4, 6}, {0, 6}, {2, 0}});
  Memory m = mv_memory();
  auto [motion, out] = mv_step(s, m, cfg1());
  (void)motion;
  REQUIRE_FALSE(out.mv_counter.has_value());
}

TEST_CASE("degenerate line handling") {
  SECTION("extreme steps away from the other extreme") {
    Snapshot s = snap_of({{1.5, 0}});  // single visible neighbour on the line
    auto [motion, m] = mv_step(s, mv_memory(), cfg1());
    REQUIRE(motion.target.x == Approx(-1.0).epsilon(1e-12));
    REQUIRE(motion.target.y == Approx(0.0).margin(1e-12));
    // two observed points count as a convex observation: k = 2
    REQUIRE(m.mv_counter == 10);
    REQUIRE(m.mv_k == 2);
  }
  SECTION("middle robot steps one unit perpendicular toward local +y") {
    Snapshot s = snap_of({{-1.5, 0}, {1.5, 0}});
    auto [motion, m] = mv_step(s, mv_memory(), cfg1());
    REQUIRE(motion.target.x == Approx(0.0).margin(1e-12));
    REQUIRE(motion.target.y == Approx(1.0).epsilon(1e-12));
    REQUIRE_FALSE(m.mv_counter.has_value());
  }
  SECTION("alone: stay, count to six, terminate with n_total 1") {
    Snapshot s = snap_of({});
    Memory m = mv_memory();
    int rounds = 0;
    while (m.phase == Phase::MutualVisibility && rounds < 20) {
      auto [motion, out] = mv_step(s, m, cfg1());
      REQUIRE_FALSE(motion.moves());
      m = out;
      ++rounds;
    }
    REQUIRE(m.phase == Phase::LeaderElection);
    REQUIRE(m.n_total == 1);
    REQUIRE(rounds == 7);  // start round + countdown 6..1
  }
}
