#pragma once

// Scenario file schema (JSON) and seeded scenario generators.
//
// {
//   "robots":  [{"x": 0.0, "y": 0.0, "frame": "random"}, ...
//               {"x": 1.5, "y": 0.0, "frame": {"rotation_deg": 90, "reflect": false}}],
//   "pattern": [[0, 0], [1, 0], ...],
//   "seed":    7,
//   "params":  {"eps_geom": 1e-9, "eps_adj": 5e-3, "clearance": 1.05,
//               "scale_factor": 5, "round_limit": 0}      // all optional
// }

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmpf/rng.hpp"
#include "swarmpf/sim.hpp"

namespace swarmpf {

inline Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario sc;
  for (const auto& r : j.at("robots")) {
    sc.positions.push_back({r.at("x").get<double>(), r.at("y").get<double>()});
    FrameSpec fs;
    if (r.contains("frame") && r.at("frame").is_object()) {
      fs.random = false;
      fs.rotation_deg = r.at("frame").value("rotation_deg", 0.0);
      fs.reflect = r.at("frame").value("reflect", false);
    }
    sc.frame_specs.push_back(fs);
  }
  for (const auto& p : j.at("pattern"))
    sc.pattern.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  sc.params.seed = j.value("seed", 1ULL);
  if (j.contains("params")) {
    const auto& p = j.at("params");
    sc.params.tol.eps_geom = p.value("eps_geom", sc.params.tol.eps_geom);
    sc.params.tol.eps_adj = p.value("eps_adj", sc.params.tol.eps_adj);
    sc.params.tol.clearance = p.value("clearance", sc.params.tol.clearance);
    sc.params.scale_factor = p.value("scale_factor", sc.params.scale_factor);
    sc.params.round_limit = p.value("round_limit", sc.params.round_limit);
  }
  return sc;
}

inline nlohmann::ordered_json scenario_to_json(const Scenario& sc) {
  nlohmann::ordered_json j;
  j["robots"] = nlohmann::ordered_json::array();
  for (size_t i = 0; i < sc.positions.size(); ++i) {
    nlohmann::ordered_json r;
    r["x"] = sc.positions[i].x;
    r["y"] = sc.positions[i].y;
    if (!sc.frame_specs.empty() && !sc.frame_specs[i].random) {
      r["frame"] = {{"rotation_deg", sc.frame_specs[i].rotation_deg},
                    {"reflect", sc.frame_specs[i].reflect}};
    } else {
      r["frame"] = "random";
    }
    j["robots"].push_back(r);
  }
  j["pattern"] = nlohmann::ordered_json::array();
  for (Point2 p : sc.pattern.points) j["pattern"].push_back({p.x, p.y});
  j["seed"] = sc.params.seed;
  j["params"] = {{"eps_geom", sc.params.tol.eps_geom},
                 {"eps_adj", sc.params.tol.eps_adj},
                 {"clearance", sc.params.tol.clearance},
                 {"scale_factor", sc.params.scale_factor},
                 {"round_limit", sc.params.round_limit}};
  return j;
}

// Unit-spaced grid pattern of k points; valid for any k >= 1.
inline TargetPattern grid_pattern(int k) {
  TargetPattern p;
  int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(k))));
  for (int i = 0; i < k; ++i)
    p.points.push_back({static_cast<double>(i % cols), -static_cast<double>(i / cols)});
  return p;
}

// Uniform positions in a square of side 4*sqrt(n), rejection-sampled for
// pairwise separation >= 1.
inline Scenario gen_random(int n, std::uint64_t seed, int pattern_k = 0) {
  Scenario sc;
  Rng rng = Rng::child(seed, 0xA11CE);
  double side = std::max(2.0, 4.0 * std::sqrt(static_cast<double>(n)));
  while (static_cast<int>(sc.positions.size()) < n) {
    Point2 cand{rng.uniform(0.0, side), rng.uniform(0.0, side)};
    bool ok = true;
    for (Point2 p : sc.positions)
      if (dist(p, cand) < 1.0) {
        ok = false;
        break;
      }
    if (ok) sc.positions.push_back(cand);
  }
  sc.pattern = grid_pattern(pattern_k > 0 ? pattern_k : n);
  sc.params.seed = seed;
  return sc;
}

// Exactly collinear on the x-axis with gaps in [1.1, 3).
inline Scenario gen_collinear(int n, std::uint64_t seed, int pattern_k = 0) {
  Scenario sc;
  Rng rng = Rng::child(seed, 0xC0111);
  double x = 0.0;
  for (int i = 0; i < n; ++i) {
    sc.positions.push_back({x, 0.0});
    x += rng.uniform(1.1, 3.0);
  }
  sc.pattern = grid_pattern(pattern_k > 0 ? pattern_k : n);
  sc.params.seed = seed;
  return sc;
}

// Strictly convex position: points on a circle at jittered regular angles.
// Each angle stays within the middle of its slot, so adjacent chords are
// bounded below by construction.
inline Scenario gen_convex(int n, std::uint64_t seed, int pattern_k = 0) {
  Scenario sc;
  Rng rng = Rng::child(seed, 0xC0F3E);
  if (n == 1) {
    sc.positions.push_back({0.0, 0.0});
  } else {
    double radius = std::max(2.0, 0.65 * static_cast<double>(n));
    double slot = 2.0 * M_PI / n;
    double spin = rng.uniform(0.0, 2.0 * M_PI);
    for (int i = 0; i < n; ++i) {
      double a = spin + slot * (i + 0.35 + 0.3 * rng.uniform01());
      sc.positions.push_back({radius * std::cos(a), radius * std::sin(a)});
    }
  }
  sc.pattern = grid_pattern(pattern_k > 0 ? pattern_k : n);
  sc.params.seed = seed;
  return sc;
}

inline Scenario gen_scenario(const std::string& kind, int n, std::uint64_t seed,
                             int pattern_k = 0) {
  if (kind == "random") return gen_random(n, seed, pattern_k);
  if (kind == "collinear") return gen_collinear(n, seed, pattern_k);
  if (kind == "convex") return gen_convex(n, seed, pattern_k);
  throw std::invalid_argument("unknown scenario kind: " + kind);
}

// Every robot exactly on a shared circle (regular n-gon): all of them compete
// in the election.
inline Scenario gen_shared_circle(int n, std::uint64_t seed, double radius, int pattern_k = 0) {
  Scenario sc;
  for (int i = 0; i < n; ++i) {
    double a = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
    sc.positions.push_back({radius * std::cos(a), radius * std::sin(a)});
  }
  sc.pattern = grid_pattern(pattern_k > 0 ? pattern_k : n);
  sc.params.seed = seed;
  return sc;
}

}  // namespace swarmpf
