#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chainopt/errors.hpp"
#include "chainopt/optimize.hpp"
#include "chainopt/report.hpp"
#include "chainopt/workspace.hpp"

namespace chainopt {

namespace detail {

inline std::string fmt_svg(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline std::string rgb(int r, int g, int b) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

/// reach: 0 -> red, 1 -> green. Linear ramp.
inline std::string reach_color(double e_reach) {
  const double t = std::clamp(e_reach, 0.0, 1.0);
  return rgb(static_cast<int>(std::lround(255.0 * (1.0 - t))),
             static_cast<int>(std::lround(255.0 * t)), 0);
}

/// torque: 3.0 N m -> green, 10.0 N m -> red, clamped outside.
inline std::string torque_color(double e_torque) {
  const double t = std::clamp((e_torque - 3.0) / 7.0, 0.0, 1.0);
  return rgb(static_cast<int>(std::lround(255.0 * t)),
             static_cast<int>(std::lround(255.0 * (1.0 - t))), 0);
}

}  // namespace detail

/// Scatter of every trial in (reachability, torque) space, colored by joint
/// family, nondominated members ring-marked. Output is deterministic for a
/// fixed archive.
inline std::string emit_pareto_svg(const std::vector<Trial>& trials,
                                   const std::vector<int>& front,
                                   const std::string& provenance_hash) {
  if (trials.empty()) throw ValidationError("emit_pareto_svg: empty archive");
  using detail::fmt_svg;

  double x_lo = trials[0].e_reach(), x_hi = x_lo;
  double y_lo = trials[0].e_torque(), y_hi = y_lo;
  for (const Trial& t : trials) {
    x_lo = std::min(x_lo, t.e_reach());
    x_hi = std::max(x_hi, t.e_reach());
    y_lo = std::min(y_lo, t.e_torque());
    y_hi = std::max(y_hi, t.e_torque());
  }
  if (x_hi - x_lo < 1e-12) x_hi = x_lo + 1.0;
  if (y_hi - y_lo < 1e-12) y_hi = y_lo + 1.0;

  const double width = 720, height = 540;
  const double ml = 80, mr = 30, mt = 30, mb = 70;
  const auto sx = [&](double v) { return ml + (v - x_lo) / (x_hi - x_lo) * (width - ml - mr); };
  const auto sy = [&](double v) {
    return height - mb - (v - y_lo) / (y_hi - y_lo) * (height - mt - mb);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<!-- provenance " << provenance_hash << " -->\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

  // axes with five ticks each
  svg << "<line x1=\"" << ml << "\" y1=\"" << (height - mb) << "\" x2=\"" << (width - mr)
      << "\" y2=\"" << (height - mb) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << (height - mb) << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = x_lo + (x_hi - x_lo) * k / 4.0;
    const double fy = y_lo + (y_hi - y_lo) * k / 4.0;
    svg << "<line x1=\"" << fmt_svg(sx(fx)) << "\" y1=\"" << (height - mb) << "\" x2=\""
        << fmt_svg(sx(fx)) << "\" y2=\"" << (height - mb + 6) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fmt_svg(sx(fx)) << "\" y=\"" << (height - mb + 22)
        << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt_svg(fx) << "</text>\n";
    svg << "<line x1=\"" << (ml - 6) << "\" y1=\"" << fmt_svg(sy(fy)) << "\" x2=\"" << ml
        << "\" y2=\"" << fmt_svg(sy(fy)) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << (ml - 10) << "\" y=\"" << fmt_svg(sy(fy) + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">" << fmt_svg(fy) << "</text>\n";
  }
  svg << "<text x=\"" << (ml + (width - ml - mr) / 2) << "\" y=\"" << (height - 20)
      << "\" font-size=\"14\" text-anchor=\"middle\">reachability score (sum over voxels)"
      << "</text>\n";
  svg << "<text x=\"20\" y=\"" << (mt + (height - mt - mb) / 2)
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << (mt + (height - mt - mb) / 2) << ")\">torque score [N m]</text>\n";

  for (const Trial& t : trials) {
    const std::string color =
        t.genome.dof() >= 4 ? family_color(classify_family(t.genome)) : "gray";
    svg << "<circle class=\"trial\" cx=\"" << fmt_svg(sx(t.e_reach())) << "\" cy=\""
        << fmt_svg(sy(t.e_torque())) << "\" r=\"3\" fill=\"" << color
        << "\" fill-opacity=\"0.7\"/>\n";
  }
  for (int idx : front) {
    const Trial& t = trials[static_cast<std::size_t>(idx)];
    svg << "<circle class=\"front-ring\" cx=\"" << fmt_svg(sx(t.e_reach())) << "\" cy=\""
        << fmt_svg(sy(t.e_torque())) << "\" r=\"6\" fill=\"none\" stroke=\"black\""
        << " stroke-width=\"1.5\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

enum class VoxelMapMode { Reach, Torque };

/// One panel per z-layer; cells colored on the red/green ramps, voxels with
/// no reachable posture drawn gray in torque mode.
inline std::string emit_voxel_map_svg(const DesignScore& score, VoxelMapMode mode,
                                      const std::string& provenance_hash) {
  if (score.per_voxel.empty()) throw ValidationError("emit_voxel_map_svg: empty voxel list");
  using detail::fmt_svg;

  std::set<double> xs, ys, zs;
  for (const VoxelScore& v : score.per_voxel) {
    xs.insert(v.center.x());
    ys.insert(v.center.y());
    zs.insert(v.center.z());
  }
  const std::vector<double> x_vals(xs.begin(), xs.end());
  const std::vector<double> y_vals(ys.begin(), ys.end());
  const std::vector<double> z_vals(zs.begin(), zs.end());
  const auto index_of = [](const std::vector<double>& vals, double v) {
    return static_cast<int>(std::lower_bound(vals.begin(), vals.end(), v) - vals.begin());
  };

  const double cell = 28;
  const double pad = 24;
  const double panel_w = cell * static_cast<double>(x_vals.size());
  const double panel_h = cell * static_cast<double>(y_vals.size());
  const double width = pad + (panel_w + pad) * static_cast<double>(z_vals.size());
  const double height = panel_h + 2 * pad + 18;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt_svg(width)
      << "\" height=\"" << fmt_svg(height) << "\">\n";
  svg << "<!-- provenance " << provenance_hash << " -->\n";
  svg << "<rect width=\"" << fmt_svg(width) << "\" height=\"" << fmt_svg(height)
      << "\" fill=\"white\"/>\n";

  for (const VoxelScore& v : score.per_voxel) {
    const int ix = index_of(x_vals, v.center.x());
    const int iy = index_of(y_vals, v.center.y());
    const int iz = index_of(z_vals, v.center.z());
    const double px = pad + iz * (panel_w + pad) + ix * cell;
    // y axis points up in the panel
    const double py = pad + (static_cast<double>(y_vals.size()) - 1 - iy) * cell;
    std::string color;
    if (mode == VoxelMapMode::Reach) {
      color = detail::reach_color(v.e_reach);
    } else {
      color = v.e_torque ? detail::torque_color(*v.e_torque) : std::string("#808080");
    }
    svg << "<rect class=\"voxel\" x=\"" << fmt_svg(px) << "\" y=\"" << fmt_svg(py)
        << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"" << color
        << "\" stroke=\"#cccccc\"/>\n";
  }
  for (std::size_t iz = 0; iz < z_vals.size(); ++iz) {
    svg << "<text x=\"" << fmt_svg(pad + iz * (panel_w + pad) + panel_w / 2) << "\" y=\""
        << fmt_svg(pad + panel_h + 18) << "\" font-size=\"12\" text-anchor=\"middle\">z = "
        << fmt_svg(z_vals[iz]) << " m</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace chainopt
