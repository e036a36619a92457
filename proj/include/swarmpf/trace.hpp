#pragma once

// Trace persistence: JSONL with a versioned header line, one round record per
// line, and the run outcome as the final line. Serialization is byte-stable
// for identical runs (ordered keys, shortest round-trip doubles).

#include <istream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "swarmpf/memory.hpp"
#include "swarmpf/sim.hpp"

namespace swarmpf {

using Json = nlohmann::ordered_json;

inline Json point_json(Point2 p) { return Json::array({p.x, p.y}); }
inline Point2 point_from(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

// Fixed 16-slot layout; unset slots serialize as null. The slot list is
// independent of n, which the memory-boundedness test asserts.
inline Json memory_json(const Memory& m) {
  Json j;
  switch (m.phase) {
    case Phase::MutualVisibility: j["phase"] = "MV"; break;
    case Phase::LeaderElection: j["phase"] = "LE"; break;
    case Phase::PatternFormation: j["phase"] = "PF"; break;
    default: j["phase"] = "Done"; break;
  }
  j["mv_counter"] = m.mv_counter ? Json(*m.mv_counter) : Json(nullptr);
  j["mv_k"] = m.mv_k ? Json(*m.mv_k) : Json(nullptr);
  j["n_total"] = m.n_total ? Json(*m.n_total) : Json(nullptr);
  j["competing"] = m.competing ? Json(*m.competing) : Json(nullptr);
  j["saved_pos"] = m.saved_pos ? point_json(*m.saved_pos) : Json(nullptr);
  j["is_leader"] = m.is_leader ? Json(*m.is_leader) : Json(nullptr);
  j["le_stage"] = m.le_stage ? Json(*m.le_stage == LeStage::Flip ? "Flip" : "Evaluate")
                             : Json(nullptr);
  j["le_center"] = m.le_center ? point_json(*m.le_center) : Json(nullptr);
  j["le_radius"] = m.le_radius ? Json(*m.le_radius) : Json(nullptr);
  j["work_frame"] = m.work_frame ? Json({{"quarter_turns", m.work_frame->quarter_turns},
                                         {"reflect", m.work_frame->reflect}})
                                 : Json(nullptr);
  j["pf_stage"] = m.pf_stage ? Json(static_cast<int>(*m.pf_stage)) : Json(nullptr);
  j["placed_count"] = m.placed_count ? Json(*m.placed_count) : Json(nullptr);
  j["anchor"] = m.anchor ? point_json(*m.anchor) : Json(nullptr);
  {
    Json fs;
    fs["kind"] = m.follow_state.kind == FollowKind::Idle
                     ? "Idle"
                     : (m.follow_state.kind == FollowKind::Armed ? "Armed" : "Ready");
    fs["dir"] = point_json(m.follow_state.dir);
    fs["dist"] = m.follow_state.dist;
    j["follow_state"] = fs;
  }
  j["had_adjacent_prev"] = m.had_adjacent_prev;
  return j;
}

inline Json points_json(const std::vector<Point2>& pts) {
  Json a = Json::array();
  for (Point2 p : pts) a.push_back(point_json(p));
  return a;
}

inline std::string trace_to_jsonl(const Trace& t) {
  std::ostringstream out;
  {
    Json h;
    h["trace_version"] = 1;
    h["kind"] = "header";
    h["n"] = t.n;
    h["seed"] = t.seed;
    h["round_limit"] = t.round_limit;
    h["scale_factor"] = t.scale_factor;
    h["pattern"] = points_json(t.pattern_points);
    h["initial"] = points_json(t.initial);
    Json fr = Json::array();
    for (const Frame& f : t.frames)
      fr.push_back(Json({{"rotation", f.rotation}, {"reflect", f.reflect}}));
    h["frames"] = fr;
    out << h.dump() << "\n";
  }
  for (const auto& rec : t.rounds) {
    Json r;
    r["round"] = rec.round;
    r["before"] = points_json(rec.before);
    r["after"] = points_json(rec.after);
    Json ph = Json::array();
    for (Phase p : rec.phases) {
      switch (p) {
        case Phase::MutualVisibility: ph.push_back("MV"); break;
        case Phase::LeaderElection: ph.push_back("LE"); break;
        case Phase::PatternFormation: ph.push_back("PF"); break;
        default: ph.push_back("Done"); break;
      }
    }
    r["phases"] = ph;
    Json ev = Json::array();
    for (const auto& e : rec.events)
      ev.push_back(Json({{"type", e.type}, {"robot", e.robot}, {"value", e.value}}));
    r["events"] = ev;
    r["min_move_dist"] = rec.min_move_dist;
    out << r.dump() << "\n";
  }
  {
    Json o;
    o["kind"] = "outcome";
    o["outcome"] = to_string(t.outcome.status);
    o["rounds"] = t.outcome.rounds;
    o["mv_rounds"] = t.outcome.mv_rounds;
    o["le_rounds"] = t.outcome.le_rounds;
    o["pf_rounds"] = t.outcome.pf_rounds;
    o["le_iterations"] = t.outcome.le_iterations;
    o["leader"] = t.outcome.leader;
    o["min_pair_distance"] = t.outcome.min_pair_distance;
    out << o.dump() << "\n";
  }
  return out.str();
}

inline Phase phase_from(const std::string& s) {
  if (s == "MV") return Phase::MutualVisibility;
  if (s == "LE") return Phase::LeaderElection;
  if (s == "PF") return Phase::PatternFormation;
  return Phase::Done;
}

inline RunStatus status_from(const std::string& s) {
  if (s == "PatternFormed") return RunStatus::PatternFormed;
  if (s == "Infeasible") return RunStatus::Infeasible;
  if (s == "RoundLimit") return RunStatus::RoundLimit;
  if (s == "CollisionDetected") return RunStatus::CollisionDetected;
  return RunStatus::InternalError;
}

inline Trace trace_from_jsonl(std::istream& in) {
  Trace t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Json j = Json::parse(line);
    if (!have_header) {
      if (j.value("kind", "") != "header" || j.value("trace_version", 0) != 1)
        throw std::runtime_error("malformed trace: missing header");
      t.n = j.at("n").get<int>();
      t.seed = j.at("seed").get<std::uint64_t>();
      t.round_limit = j.at("round_limit").get<long>();
      t.scale_factor = j.at("scale_factor").get<double>();
      for (const auto& p : j.at("pattern")) t.pattern_points.push_back(point_from(p));
      for (const auto& p : j.at("initial")) t.initial.push_back(point_from(p));
      for (const auto& f : j.at("frames")) {
        Frame fr;
        fr.rotation = f.at("rotation").get<double>();
        fr.reflect = f.at("reflect").get<bool>();
        t.frames.push_back(fr);
      }
      have_header = true;
      continue;
    }
    if (j.value("kind", "") == "outcome") {
      t.outcome.status = status_from(j.at("outcome").get<std::string>());
      t.outcome.rounds = j.at("rounds").get<long>();
      t.outcome.mv_rounds = j.at("mv_rounds").get<long>();
      t.outcome.le_rounds = j.at("le_rounds").get<long>();
      t.outcome.pf_rounds = j.at("pf_rounds").get<long>();
      t.outcome.le_iterations = j.at("le_iterations").get<long>();
      t.outcome.leader = j.at("leader").get<int>();
      t.outcome.min_pair_distance = j.at("min_pair_distance").get<double>();
      continue;
    }
    RoundRecord rec;
    rec.round = j.at("round").get<long>();
    for (const auto& p : j.at("before")) rec.before.push_back(point_from(p));
    for (const auto& p : j.at("after")) rec.after.push_back(point_from(p));
    for (const auto& p : j.at("phases")) rec.phases.push_back(phase_from(p.get<std::string>()));
    for (const auto& e : j.at("events"))
      rec.events.push_back({e.at("type").get<std::string>(), e.at("robot").get<int>(),
                            e.at("value").get<double>()});
    rec.min_move_dist = j.at("min_move_dist").get<double>();
    t.rounds.push_back(std::move(rec));
    if (!t.rounds.empty()) t.final_positions = t.rounds.back().after;
  }
  if (!have_header) throw std::runtime_error("malformed trace: empty");
  return t;
}

}  // namespace swarmpf
