#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chainopt/errors.hpp"
#include "chainopt/optimize.hpp"

namespace chainopt {

/// The first four canonical joint letters, the unit of structural analysis.
inline std::string classify_family(const DesignGenome& genome) {
  if (genome.dof() < 4) {
    throw ValidationError("classify_family requires at least 4 joints");
  }
  std::string family;
  for (std::size_t i = 0; i < 4; ++i) family += to_letter(genome.joints[i]);
  return family;
}

/// Named CSS colors for recurring families; everything else draws from a
/// fixed fallback palette keyed by family string so plots stay deterministic.
inline std::string family_color(const std::string& family) {
  static const std::map<std::string, std::string> named = {
      {"PRRY", "magenta"}, {"RPYP", "red"},   {"YPRY", "blue"}, {"RPPY", "cyan"},
      {"YPPY", "green"},   {"YPPP", "orange"}, {"YPRR", "cyan"}, {"YPYP", "red"},
      {"YPRP", "lime"},
  };
  const auto it = named.find(family);
  if (it != named.end()) return it->second;
  static const std::vector<std::string> fallback = {
      "steelblue", "darkgoldenrod", "teal",   "indigo",  "sienna",
      "olive",     "slategray",     "maroon", "darkcyan"};
  std::size_t h = 1469598103u;
  for (char c : family) h = (h ^ static_cast<unsigned char>(c)) * 16777619u;
  return fallback[h % fallback.size()];
}

namespace detail {

inline std::string fmt_report(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace detail

/// Markdown summary per joint family: trial counts, front membership, the
/// best-reachability member and mean link-length ratios.
inline std::string build_report(const std::vector<Trial>& trials, const std::vector<int>& front,
                                const std::string& provenance_hash) {
  if (trials.empty()) throw ValidationError("build_report: empty archive");

  struct FamilyStats {
    int count = 0;
    int on_front = 0;
    const Trial* best = nullptr;
    std::vector<double> ratio_sums;
  };
  std::set<int> front_set(front.begin(), front.end());
  std::map<std::string, FamilyStats> families;
  for (const Trial& t : trials) {
    const std::string fam = classify_family(t.genome);
    FamilyStats& fs = families[fam];
    ++fs.count;
    if (front_set.count(t.id)) ++fs.on_front;
    if (!fs.best || t.e_reach() > fs.best->e_reach()) fs.best = &t;
    const double total = std::accumulate(t.genome.lengths.begin(), t.genome.lengths.end(), 0.0);
    if (fs.ratio_sums.empty()) fs.ratio_sums.assign(t.genome.lengths.size(), 0.0);
    for (std::size_t i = 0; i < t.genome.lengths.size(); ++i) {
      fs.ratio_sums[i] += total > 0.0 ? t.genome.lengths[i] / total : 0.0;
    }
  }

  std::ostringstream md;
  md << "# Design search summary\n\n";
  md << "provenance: `" << provenance_hash << "`\n\n";
  md << "trials: " << trials.size() << ", nondominated: " << front.size() << "\n\n";
  md << "| family | trials | on front | best reach | torque at best | best id |\n";
  md << "|--------|-------:|---------:|-----------:|---------------:|--------:|\n";
  for (const auto& [fam, fs] : families) {
    md << "| " << fam << " | " << fs.count << " | " << fs.on_front << " | "
       << detail::fmt_report(fs.best->e_reach()) << " | "
       << detail::fmt_report(fs.best->e_torque()) << " | " << fs.best->id << " |\n";
  }

  md << "\n## Families with nondominated members\n\n";
  bool any = false;
  for (const auto& [fam, fs] : families) {
    if (fs.on_front > 0) {
      md << "- " << fam << " (" << fs.on_front << ")\n";
      any = true;
    }
  }
  if (!any) md << "- none\n";

  md << "\n## Mean link-length ratios\n\n";
  for (const auto& [fam, fs] : families) {
    md << "- " << fam << ":";
    for (double s : fs.ratio_sums) md << " " << detail::fmt_report(s / fs.count);
    md << "\n";
  }
  return md.str();
}

}  // namespace chainopt
