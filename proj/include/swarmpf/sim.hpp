#pragma once
#define SWARMPF_SIM_HPP_INCLUDED 1

// Fully synchronous round engine: Look (snapshots of one immutable world
// state), Compute (pure robot steps), Move (simultaneous commit), with a
// continuous-motion collision audit per round, event extraction, and
// deterministic seeding. Completion is detected by the simulator: followers
// have no way to observe that the pattern is finished.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swarmpf/geom.hpp"
#include "swarmpf/memory.hpp"
#include "swarmpf/pattern.hpp"
#include "swarmpf/rng.hpp"
#include "swarmpf/robot.hpp"
#include "swarmpf/visibility.hpp"

namespace swarmpf {

struct FrameSpec {
  bool random = true;
  double rotation_deg = 0.0;
  bool reflect = false;
};

struct SimParams {
  Tolerances tol{};
  double scale_factor = 5.0;
  long round_limit = 0;  // 0: default 200*n + 1000
  std::uint64_t seed = 1;
  double match_tol = 1e-6;
};

struct Scenario {
  std::vector<Point2> positions;
  std::vector<FrameSpec> frame_specs;  // empty: all random
  TargetPattern pattern;
  SimParams params;
};

inline long effective_round_limit(const Scenario& sc) {
  if (sc.params.round_limit > 0) return sc.params.round_limit;
  return 200L * static_cast<long>(sc.positions.size()) + 1000L;
}

inline std::vector<std::string> validate_scenario(const Scenario& sc) {
  std::vector<std::string> out;
  if (sc.positions.empty()) out.push_back("no robots");
  for (size_t i = 0; i < sc.positions.size(); ++i) {
    if (!is_finite(sc.positions[i])) out.push_back("robot " + std::to_string(i) + " not finite");
    for (size_t j = i + 1; j < sc.positions.size(); ++j)
      if (dist(sc.positions[i], sc.positions[j]) < 1.0 - sc.params.tol.eps_geom)
        out.push_back("overlap: robots " + std::to_string(i) + " and " + std::to_string(j));
  }
  if (!sc.frame_specs.empty() && sc.frame_specs.size() != sc.positions.size())
    out.push_back("frame count does not match robot count");
  try {
    sc.params.tol.validate();
  } catch (const std::exception& e) {
    out.push_back(e.what());
  }
  if (sc.params.scale_factor < 3.0) out.push_back("scale factor below 3");
  try {
    sc.pattern.validate(sc.params.tol);
    order_canonical(sc.pattern.points);
  } catch (const std::exception& e) {
    out.push_back(std::string("pattern: ") + e.what());
  }
  return out;
}

struct WorldState {
  std::vector<Point2> positions;
  std::vector<Frame> frames;
  std::vector<Memory> memories;
  long round = 0;
};

inline WorldState init_world(const Scenario& sc) {
  WorldState w;
  w.positions = sc.positions;
  size_t n = sc.positions.size();
  w.frames.resize(n);
  w.memories.resize(n);
  for (size_t i = 0; i < n; ++i) {
    FrameSpec fs = sc.frame_specs.empty() ? FrameSpec{} : sc.frame_specs[i];
    if (fs.random) {
      Rng fr = Rng::child(sc.params.seed, (1ULL << 32) + i);
      w.frames[i].rotation = fr.uniform(0.0, 2.0 * M_PI);
      w.frames[i].reflect = fr.bernoulli(0.5);
    } else {
      w.frames[i].rotation = fs.rotation_deg * M_PI / 180.0;
      w.frames[i].reflect = fs.reflect;
    }
    w.frames[i].origin = w.positions[i];
  }
  return w;
}

enum class RunStatus { PatternFormed, Infeasible, RoundLimit, CollisionDetected, InternalError };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::PatternFormed: return "PatternFormed";
    case RunStatus::Infeasible: return "Infeasible";
    case RunStatus::RoundLimit: return "RoundLimit";
    case RunStatus::CollisionDetected: return "CollisionDetected";
    default: return "InternalError";
  }
}

struct RoundEvent {
  std::string type;
  int robot = -1;
  double value = 0.0;
};

struct RoundRecord {
  long round = 0;
  std::vector<Point2> before, after;
  std::vector<Phase> phases;  // after the round's compute
  std::vector<RoundEvent> events;
  double min_move_dist = 0.0;  // continuous pairwise minimum during the move
};

struct RunOutcome {
  RunStatus status = RunStatus::InternalError;
  long rounds = 0;
  long mv_rounds = 0, le_rounds = 0, pf_rounds = 0;
  long le_iterations = 0;
  int leader = -1;
  double min_pair_distance = 0.0;
};

struct Trace {
  int n = 0;
  std::uint64_t seed = 0;
  long round_limit = 0;
  double scale_factor = 5.0;
  std::vector<Point2> pattern_points;
  std::vector<Point2> initial;
  std::vector<Frame> frames;
  std::vector<RoundRecord> rounds;
  RunOutcome outcome;
  // in-memory only (not serialized)
  std::vector<Point2> final_positions;
  std::vector<Memory> final_memories;
};

namespace simdetail {

inline const char* phase_tag(Phase p) {
  switch (p) {
    case Phase::MutualVisibility: return "MV";
    case Phase::LeaderElection: return "LE";
    case Phase::PatternFormation: return "PF";
    default: return "Done";
  }
}

// All-pairs visibility on one immutable state; snapshots share the matrix.
inline std::vector<Snapshot> all_snapshots(const WorldState& w, const Tolerances& tol) {
  size_t n = w.positions.size();
  std::vector<char> vis(n * n, 0);
  std::vector<Point2> blockers;
  blockers.reserve(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      blockers.clear();
      for (size_t k = 0; k < n; ++k)
        if (k != i && k != j) blockers.push_back(w.positions[k]);
      bool v = can_see(w.positions[i], w.positions[j], blockers, tol);
      vis[i * n + j] = vis[j * n + i] = v;
    }
  std::vector<Snapshot> snaps(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (vis[i * n + j]) snaps[i].visible.push_back(w.frames[i].to_local(w.positions[j]));
  return snaps;
}

inline void extract_events(const std::vector<Memory>& before, const std::vector<Memory>& after,
                           RoundRecord& rec) {
  bool flip_logged = false;
  for (size_t i = 0; i < before.size(); ++i) {
    const Memory& a = before[i];
    const Memory& b = after[i];
    if (!a.mv_counter && b.mv_counter)
      rec.events.push_back({"counter_started", static_cast<int>(i),
                            static_cast<double>(*b.mv_k)});
    if (a.mv_counter && !b.mv_counter && b.phase == Phase::MutualVisibility)
      rec.events.push_back({"counter_cleared", static_cast<int>(i), 0.0});
    if (a.phase != b.phase)
      rec.events.push_back({std::string("phase_") + phase_tag(b.phase), static_cast<int>(i), 0.0});
    if (!a.is_leader.value_or(false) && b.is_leader.value_or(false))
      rec.events.push_back({"leader_elected", static_cast<int>(i), 0.0});
    if (b.placed_count.value_or(0) > a.placed_count.value_or(0))
      rec.events.push_back({"robot_placed", static_cast<int>(i),
                            static_cast<double>(*b.placed_count)});
    bool was_flip_stage = !a.le_stage || *a.le_stage == LeStage::Flip;
    if (!flip_logged && was_flip_stage && b.le_stage == LeStage::Evaluate &&
        b.competing.value_or(false)) {
      rec.events.push_back({"le_flip", -1, 0.0});
      flip_logged = true;
    }
  }
}

}  // namespace simdetail

// One synchronous round. Returns a status when the run must abort.
inline std::optional<RunStatus> step(WorldState& w, const AlgoConfig& cfg, std::vector<Rng>& rngs,
                                     RoundRecord& rec) {
  size_t n = w.positions.size();
  rec.round = w.round;
  rec.before = w.positions;

  std::vector<Snapshot> snaps = simdetail::all_snapshots(w, cfg.tol);

  std::vector<Point2> next(n);
  std::vector<Memory> mems(n);
  for (size_t i = 0; i < n; ++i) {
    StepResult r = robot_step(snaps[i], w.memories[i], rngs[i], cfg);
    if (!is_finite(r.motion.target)) return RunStatus::InternalError;
    next[i] = w.frames[i].to_world(r.motion.target);
    if (!is_finite(next[i])) return RunStatus::InternalError;
    mems[i] = r.memory;
  }

  double audit = 1e300;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      audit = std::min(audit,
                       moving_points_min_distance(w.positions[i], next[i], w.positions[j], next[j]));
  rec.min_move_dist = n > 1 ? audit : 1e300;

  rec.after = next;
  rec.phases.resize(n);
  for (size_t i = 0; i < n; ++i) rec.phases[i] = mems[i].phase;
  simdetail::extract_events(w.memories, mems, rec);

  if (n > 1 && audit < 1.0 - 1e-9) return RunStatus::CollisionDetected;

  w.positions = std::move(next);
  w.memories = std::move(mems);
  for (size_t i = 0; i < n; ++i) w.frames[i].origin = w.positions[i];
  w.round += 1;
  return std::nullopt;
}

inline std::pair<Trace, RunOutcome> run(const Scenario& sc) {
  {
    auto viol = validate_scenario(sc);
    if (!viol.empty()) throw std::invalid_argument("invalid scenario: " + viol.front());
  }
  AlgoConfig cfg = AlgoConfig::make(sc.pattern, sc.params.tol, sc.params.scale_factor);
  WorldState w = init_world(sc);
  size_t n = w.positions.size();
  long limit = effective_round_limit(sc);

  Trace trace;
  trace.n = static_cast<int>(n);
  trace.seed = sc.params.seed;
  trace.round_limit = limit;
  trace.scale_factor = sc.params.scale_factor;
  trace.pattern_points = sc.pattern.points;
  trace.initial = sc.positions;
  trace.frames = w.frames;

  std::vector<Rng> rngs;
  rngs.reserve(n);
  for (size_t i = 0; i < n; ++i) rngs.push_back(Rng::child(sc.params.seed, i));

  RunOutcome out;
  out.status = RunStatus::RoundLimit;
  double minpair = 1e300;

  while (w.round < limit) {
    RoundRecord rec;
    auto err = step(w, cfg, rngs, rec);
    trace.rounds.push_back(rec);
    if (rec.min_move_dist < minpair) minpair = rec.min_move_dist;
    if (err) {
      out.status = *err;
      break;
    }

    bool all_done = true;
    int leader = -1;
    for (size_t i = 0; i < n; ++i) {
      if (w.memories[i].phase != Phase::Done) all_done = false;
      if (w.memories[i].is_leader.value_or(false)) leader = static_cast<int>(i);
    }
    if (all_done) {
      out.status = pattern_achieved(w.positions, sc.pattern, sc.params.match_tol)
                       ? RunStatus::PatternFormed
                       : RunStatus::Infeasible;
      break;
    }
    if (leader >= 0 && w.memories[leader].phase == Phase::Done &&
        pattern_achieved(w.positions, sc.pattern, sc.params.match_tol)) {
      out.status = RunStatus::PatternFormed;
      break;
    }
  }

  out.rounds = static_cast<long>(trace.rounds.size());
  out.min_pair_distance = minpair;
  for (const auto& rec : trace.rounds) {
    bool any_mv = false, any_le = false;
    for (Phase p : rec.phases) {
      any_mv |= p == Phase::MutualVisibility;
      any_le |= p == Phase::LeaderElection;
    }
    if (any_mv) ++out.mv_rounds;
    else if (any_le) ++out.le_rounds;
    else ++out.pf_rounds;
    for (const auto& e : rec.events) {
      if (e.type == "le_flip") ++out.le_iterations;
      if (e.type == "leader_elected") out.leader = e.robot;
    }
  }

  trace.outcome = out;
  trace.final_positions = w.positions;
  trace.final_memories = w.memories;
  return {std::move(trace), out};
}

struct AuditReport {
  double min_distance = 1e300;
  std::optional<long> offending_round;
};

// Recomputes the continuous pairwise minimum from the recorded before/after
// positions, independently of the engine's inline audit.
inline AuditReport collision_audit(const Trace& trace) {
  AuditReport rep;
  const std::vector<Point2>* prev = nullptr;
  for (const auto& rec : trace.rounds) {
    if (rec.before.size() != rec.after.size() || rec.before.empty())
      throw std::runtime_error("malformed trace");
    if (prev && rec.before.size() != prev->size()) throw std::runtime_error("malformed trace");
    if (prev)
      for (size_t i = 0; i < prev->size(); ++i)
        if (dist((*prev)[i], rec.before[i]) > 1e-9) throw std::runtime_error("malformed trace");
    size_t n = rec.before.size();
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) {
        double d =
            moving_points_min_distance(rec.before[i], rec.after[i], rec.before[j], rec.after[j]);
        rep.min_distance = std::min(rep.min_distance, d);
        if (d < 1.0 - 1e-9 && !rep.offending_round) rep.offending_round = rec.round;
      }
    prev = &rec.after;
  }
  return rep;
}

}  // namespace swarmpf
