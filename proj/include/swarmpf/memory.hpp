#pragma once

// Per-robot persistent state. Fixed slot layout: every slot is a scalar,
// point, or small enum -- never a collection -- and integer magnitudes are
// bounded by the robot count, so the serialized size is O(log n) bits.
//
// Stored points (saved_pos, le_center, anchor) live in the robot's egocentric
// frame: whenever the robot moves it rebases them by its own motion.

#include <cstdint>
#include <optional>
#include <type_traits>

#include "swarmpf/geom.hpp"

namespace swarmpf {

enum class Phase : std::uint8_t { MutualVisibility, LeaderElection, PatternFormation, Done };

enum class LeStage : std::uint8_t { Flip, Evaluate };

enum class FollowKind : std::uint8_t { Idle, Armed, Ready };

struct FollowState {
  FollowKind kind = FollowKind::Idle;
  Point2 dir{1.0, 0.0};  // unit direction, meaningful for Armed/Ready
  double dist = 0.0;     // meaningful for Ready
};

// The leader's construction frame: its own local frame turned by quarter
// turns so the empty quadrant is top-left.
struct WorkFrame {
  std::int8_t quarter_turns = 0;  // 0..3, CCW
  bool reflect = false;
};

// Leader script stages for the formation phase.
enum class PfStage : std::uint8_t {
  Setup,
  ExitRadial,
  ExitRing,
  Approach,      // horizontal run-in ending adjacent-left of the next robot
  Leg1Demo,      // demonstrate the leftward distance
  Leg1Clear,     // clear to the vertical-leg adjacency (or overshoot start)
  Leg1WaitV,
  Leg1WaitOv,
  VLegDemo,      // single vertical leg (|dy| >= 0.5)
  VLegClear,
  VLegWait,
  OvUpDemo,      // overshoot: up dy+5, around, then down 5
  OvUpClear,
  OvUpWait,
  OvMidDown,
  OvAdjDown,
  OvDownDemo,
  OvDownClear,
  OvDownWait,
  Leg3Demo,      // final leftward leg into the pattern point
  Leg3Clear,     // detach two below the placed position
  Leg3Wait,
  Transit1,      // right to the staging column
  Transit2,      // along the column to the next robot's row
  FinalGoCorridor,
  FinalVertical,
  FinalPlace,
  ParkAndDone    // pattern smaller than n: park at the column and finish
};

struct Memory {
  Phase phase = Phase::MutualVisibility;            // 1
  std::optional<int> mv_counter;                    // 2  termination countdown
  std::optional<int> mv_k;                          // 3  corner count when it started
  std::optional<int> n_total;                       // 4  learned at phase end
  std::optional<bool> competing;                    // 5
  std::optional<Point2> saved_pos;                  // 6  own circle position
  std::optional<bool> is_leader;                    // 7
  std::optional<LeStage> le_stage;                  // 8
  std::optional<Point2> le_center;                  // 9  election circle
  std::optional<double> le_radius;                  // 10
  std::optional<WorkFrame> work_frame;              // 11
  std::optional<PfStage> pf_stage;                  // 12
  std::optional<int> placed_count;                  // 13
  std::optional<Point2> anchor;                     // 14 last scaled pattern point
  FollowState follow_state{};                       // 15
  bool had_adjacent_prev = false;                   // 16

  static constexpr int kSlotCount = 16;

  // Keep stored points valid across the robot's own motion.
  void rebase(Point2 motion) {
    if (saved_pos) *saved_pos = *saved_pos - motion;
    if (le_center) *le_center = *le_center - motion;
    if (anchor) *anchor = *anchor - motion;
  }
};

static_assert(std::is_trivially_copyable_v<Memory>, "memory slots must stay flat scalar records");

}  // namespace swarmpf
