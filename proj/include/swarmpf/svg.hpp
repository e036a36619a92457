#pragma once

// SVG frame rendering from traces: one file per K rounds with robot disks
// (phase-colored), the convex hull outline, and the leader highlighted.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "swarmpf/sim.hpp"

namespace swarmpf {

namespace svgdetail {

inline const char* phase_fill(Phase p) {
  switch (p) {
    case Phase::MutualVisibility: return "#9e9e9e";
    case Phase::LeaderElection: return "#ff9800";
    case Phase::PatternFormation: return "#42a5f5";
    default: return "#66bb6a";
  }
}

}  // namespace svgdetail

inline std::string render_frame_svg(const Trace& t, const RoundRecord& rec) {
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (Point2 p : rec.after) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  double margin = 3.0;
  x0 -= margin;
  y0 -= margin;
  x1 += margin;
  y1 += margin;
  double w = x1 - x0, h = y1 - y0;
  double px = 900.0, scale = px / std::max(w, h);

  std::ostringstream s;
  s << std::setprecision(10);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w * scale << "\" height=\""
    << h * scale << "\" viewBox=\"" << x0 << " " << -y1 << " " << w << " " << h << "\">\n";
  s << "<rect x=\"" << x0 << "\" y=\"" << -y1 << "\" width=\"" << w << "\" height=\"" << h
    << "\" fill=\"white\"/>\n";

  if (rec.after.size() >= 3) {
    Hull hull = convex_hull(rec.after);
    if (!hull.degenerate) {
      s << "<polygon points=\"";
      for (Point2 p : hull.vertices) s << p.x << "," << -p.y << " ";
      s << "\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"0.08\"/>\n";
    }
  }

  for (size_t i = 0; i < rec.after.size(); ++i) {
    Point2 p = rec.after[i];
    bool leader = t.outcome.leader == static_cast<int>(i) &&
                  rec.phases[i] != Phase::MutualVisibility &&
                  rec.phases[i] != Phase::LeaderElection;
    s << "<circle cx=\"" << p.x << "\" cy=\"" << -p.y << "\" r=\"0.5\" fill=\""
      << svgdetail::phase_fill(rec.phases[i]) << "\" stroke=\""
      << (leader ? "#d32f2f" : "#333333") << "\" stroke-width=\"" << (leader ? 0.12 : 0.04)
      << "\"/>\n";
  }
  s << "<text x=\"" << x0 + 0.5 << "\" y=\"" << -y0 - 0.5
    << "\" font-size=\"1.2\" fill=\"#333\">round " << rec.round << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

// Returns the number of frames written.
inline int render_trace(const Trace& t, const std::string& out_dir, int every = 1) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  int written = 0;
  for (size_t i = 0; i < t.rounds.size(); ++i) {
    if (every > 1 && (t.rounds[i].round % every) != 0 && i + 1 != t.rounds.size()) continue;
    std::ostringstream name;
    name << "frame_" << std::setw(6) << std::setfill('0') << t.rounds[i].round << ".svg";
    std::ofstream f(fs::path(out_dir) / name.str());
    f << render_frame_svg(t, t.rounds[i]);
    ++written;
  }
  return written;
}

}  // namespace swarmpf
