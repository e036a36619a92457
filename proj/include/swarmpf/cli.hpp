#pragma once

// Command-line entry points: run, validate, audit, render, stats, gen.
// Exit codes: run maps the outcome (0 PatternFormed, 2 Infeasible,
// 3 RoundLimit, 4 CollisionDetected, 1 InternalError); validate/audit use
// 0/1; bad flags exit 64; malformed JSON exits 65.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "swarmpf/scenario.hpp"
#include "swarmpf/sim.hpp"
#include "swarmpf/svg.hpp"
#include "swarmpf/trace.hpp"

namespace swarmpf {

namespace clidetail {

constexpr int kExitUsage = 64;
constexpr int kExitBadJson = 65;

inline int outcome_exit(RunStatus s) {
  switch (s) {
    case RunStatus::PatternFormed: return 0;
    case RunStatus::Infeasible: return 2;
    case RunStatus::RoundLimit: return 3;
    case RunStatus::CollisionDetected: return 4;
    default: return 1;
  }
}

inline Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  nlohmann::json j = nlohmann::json::parse(in);  // throws parse_error -> 65
  return scenario_from_json(j);
}

inline Trace load_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  return trace_from_jsonl(in);
}

inline std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

}  // namespace clidetail

inline int cli_main(int argc, const char* const* argv) {
  using namespace clidetail;
  CLI::App app{"pattern formation simulator for unit-disk robot swarms"};
  app.require_subcommand(1);

  std::string scenario_path, trace_path, out_path, kind = "random", csv_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int n = 8, every = 1, trials = 20, pattern_k = 0;
  std::string n_list = "8,16,32,64";

  auto* c_run = app.add_subcommand("run", "run a scenario to completion");
  c_run->add_option("scenario", scenario_path, "scenario JSON file")->required();
  c_run->add_option("--trace", trace_path, "write the trace JSONL here");
  c_run->add_option("--seed", seed, "override the scenario seed");

  auto* c_val = app.add_subcommand("validate", "check a scenario file");
  c_val->add_option("scenario", scenario_path, "scenario JSON file")->required();

  auto* c_aud = app.add_subcommand("audit", "recompute the collision audit of a trace");
  c_aud->add_option("trace", trace_path, "trace JSONL file")->required();

  auto* c_ren = app.add_subcommand("render", "render SVG frames from a trace");
  c_ren->add_option("trace", trace_path, "trace JSONL file")->required();
  c_ren->add_option("--out", out_path, "output directory")->required();
  c_ren->add_option("--every", every, "render every K-th round");

  auto* c_sta = app.add_subcommand("stats", "round-count sweep over random scenarios");
  c_sta->add_option("--n", n_list, "comma-separated robot counts");
  c_sta->add_option("--trials", trials, "trials per robot count");
  c_sta->add_option("--seed", seed, "sweep master seed");
  c_sta->add_option("--csv", csv_path, "CSV output path")->required();

  auto* c_gen = app.add_subcommand("gen", "emit a scenario file");
  c_gen->add_option("--n", n, "robot count")->required();
  c_gen->add_option("--kind", kind, "random | collinear | convex");
  c_gen->add_option("--seed", seed, "generator seed");
  c_gen->add_option("--pattern-k", pattern_k, "pattern point count (default n)");
  c_gen->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }
  seed_set = c_run->count("--seed") > 0;

  try {
    if (c_run->parsed()) {
      Scenario sc = load_scenario_file(scenario_path);
      if (seed_set) sc.params.seed = seed;
      auto viol = validate_scenario(sc);
      if (!viol.empty()) {
        for (const auto& v : viol) std::cerr << "violation: " << v << "\n";
        return 1;
      }
      auto [trace, outcome] = run(sc);
      if (!trace_path.empty()) {
        std::ofstream out(trace_path);
        out << trace_to_jsonl(trace);
      }
      std::cout << to_string(outcome.status) << " rounds=" << outcome.rounds
                << " mv=" << outcome.mv_rounds << " le=" << outcome.le_rounds
                << " pf=" << outcome.pf_rounds << " le_iterations=" << outcome.le_iterations
                << " min_pair=" << outcome.min_pair_distance << "\n";
      return outcome_exit(outcome.status);
    }

    if (c_val->parsed()) {
      Scenario sc = load_scenario_file(scenario_path);
      auto viol = validate_scenario(sc);
      for (const auto& v : viol) std::cout << "violation: " << v << "\n";
      if (viol.empty()) std::cout << "ok\n";
      return viol.empty() ? 0 : 1;
    }

    if (c_aud->parsed()) {
      Trace t = load_trace_file(trace_path);
      AuditReport rep = collision_audit(t);
      std::cout << "min_distance=" << rep.min_distance;
      if (rep.offending_round) std::cout << " offending_round=" << *rep.offending_round;
      std::cout << "\n";
      return rep.min_distance >= 1.0 - 1e-9 ? 0 : 1;
    }

    if (c_ren->parsed()) {
      Trace t = load_trace_file(trace_path);
      int frames = render_trace(t, out_path, std::max(1, every));
      std::cout << "wrote " << frames << " frames to " << out_path << "\n";
      return 0;
    }

    if (c_sta->parsed()) {
      std::ofstream csv(csv_path);
      csv << "n,seed,mv_rounds,le_rounds,le_iterations,pf_rounds,total_rounds,outcome\n";
      for (int nn : parse_int_list(n_list)) {
        for (int t2 = 0; t2 < trials; ++t2) {
          std::uint64_t s = Rng::child(seed, (static_cast<std::uint64_t>(nn) << 20) + t2).next();
          Scenario sc = gen_random(nn, s);
          auto [trace, outcome] = run(sc);
          csv << nn << "," << s << "," << outcome.mv_rounds << "," << outcome.le_rounds << ","
              << outcome.le_iterations << "," << outcome.pf_rounds << "," << outcome.rounds << ","
              << to_string(outcome.status) << "\n";
        }
      }
      std::cout << "wrote " << csv_path << "\n";
      return 0;
    }

    if (c_gen->parsed()) {
      Scenario sc = gen_scenario(kind, n, seed, pattern_k);
      std::string text = scenario_to_json(sc).dump(2) + "\n";
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(out_path);
        out << text;
      }
      return 0;
    }
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "json error: " << e.what() << "\n";
    return kExitBadJson;
  } catch (const CLI::FileError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}

}  // namespace swarmpf
