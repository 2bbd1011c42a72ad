#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "chainopt/errors.hpp"

namespace chainopt {

using Objective2 = std::array<double, 2>;

/// a dominates b: no worse in both coordinates, strictly better in one.
inline bool dominates(const Objective2& a, const Objective2& b) {
  return a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1]);
}

/// Successive nondominated fronts (indices into `points`), best first.
/// Each front is extracted with a sweep over points sorted by (f1, f2).
inline std::vector<std::vector<int>> nondominated_sort(const std::vector<Objective2>& points) {
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (points[a][0] != points[b][0]) return points[a][0] < points[b][0];
    return points[a][1] < points[b][1];
  });

  std::vector<std::vector<int>> fronts;
  std::vector<int> remaining = order;
  while (!remaining.empty()) {
    std::vector<int> front;
    std::vector<int> rest;
    double best_f2 = std::numeric_limits<double>::infinity();
    Objective2 last_front_point{std::numeric_limits<double>::quiet_NaN(),
                                std::numeric_limits<double>::quiet_NaN()};
    for (int idx : remaining) {
      const Objective2& p = points[idx];
      const bool duplicate_of_front =
          !front.empty() && p[0] == last_front_point[0] && p[1] == last_front_point[1];
      if (p[1] < best_f2 || duplicate_of_front) {
        front.push_back(idx);
        best_f2 = std::min(best_f2, p[1]);
        last_front_point = p;
      } else {
        rest.push_back(idx);
      }
    }
    fronts.push_back(std::move(front));
    remaining = std::move(rest);
  }
  return fronts;
}

/// Area between a 2-D minimization front and a reference point it dominates.
inline double hypervolume_2d(const std::vector<Objective2>& front, const Objective2& ref) {
  if (front.empty()) return 0.0;
  for (const Objective2& p : front) {
    if (!(p[0] <= ref[0] && p[1] <= ref[1])) {
      throw ValidationError("hypervolume_2d: point does not dominate the reference");
    }
  }
  std::vector<Objective2> pts = front;
  std::sort(pts.begin(), pts.end());
  double area = 0.0;
  double prev_f2 = ref[1];
  for (const Objective2& p : pts) {
    if (p[1] < prev_f2) {
      area += (ref[0] - p[0]) * (prev_f2 - p[1]);
      prev_f2 = p[1];
    }
  }
  return area;
}

/// Exclusive hypervolume contribution of each member of a mutually
/// nondominated set: the rectangle between a point and its front neighbors.
/// Duplicates contribute zero.
inline std::vector<double> hypervolume_contributions(const std::vector<Objective2>& front,
                                                     const Objective2& ref) {
  const std::size_t m = front.size();
  std::vector<double> contrib(m, 0.0);
  if (m == 0) return contrib;
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (front[a][0] != front[b][0]) return front[a][0] < front[b][0];
    return front[a][1] < front[b][1];
  });
  for (std::size_t k = 0; k < m; ++k) {
    const Objective2& p = front[order[k]];
    const bool dup_prev = k > 0 && front[order[k - 1]] == p;
    const bool dup_next = k + 1 < m && front[order[k + 1]] == p;
    if (dup_prev || dup_next) continue;
    const double next_f1 = (k + 1 < m) ? front[order[k + 1]][0] : ref[0];
    const double prev_f2 = (k > 0) ? front[order[k - 1]][1] : ref[1];
    contrib[order[k]] = (next_f1 - p[0]) * (prev_f2 - p[1]);
  }
  return contrib;
}

/// Reference point strictly worse than every observed objective. Matches
/// worst*1.1 when the worst value is positive and stays on the worse side
/// for zero or negative values.
inline Objective2 reference_for(const std::vector<Objective2>& points) {
  Objective2 ref{-std::numeric_limits<double>::infinity(),
                 -std::numeric_limits<double>::infinity()};
  for (const Objective2& p : points) {
    ref[0] = std::max(ref[0], p[0]);
    ref[1] = std::max(ref[1], p[1]);
  }
  for (double& c : ref) c += 0.1 * std::max(std::abs(c), 1e-6);
  return ref;
}

}  // namespace chainopt
