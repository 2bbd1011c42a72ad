#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "chainopt/chain.hpp"
#include "chainopt/kinematics.hpp"

namespace chainopt {

/// Closest distance between segments [p1,q1] and [p2,q2]; handles the
/// degenerate (point) cases by clamping the closest-point parameters.
inline double segment_distance(const Eigen::Vector3d& p1, const Eigen::Vector3d& q1,
                               const Eigen::Vector3d& p2, const Eigen::Vector3d& q2) {
  const Eigen::Vector3d d1 = q1 - p1;
  const Eigen::Vector3d d2 = q2 - p2;
  const Eigen::Vector3d r = p1 - p2;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  constexpr double eps = 1e-15;

  double s = 0.0;
  double t = 0.0;
  if (a <= eps && e <= eps) {
    return r.norm();
  }
  if (a <= eps) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= eps) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      if (denom > eps) {
        s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
      }
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return ((p1 + s * d1) - (p2 + t * d2)).norm();
}

struct CollisionReport {
  bool colliding = false;
  std::vector<std::pair<int, int>> pairs; // segment index pairs closer than 2r
};

/// Capsule self-collision over the chain's nonzero-length segments. A pair is
/// exempt when its capsules are already within the contact threshold in the
/// straight zero pose: segments joined at a joint, or separated only by links
/// whose combined length is under two radii, touch structurally no matter the
/// configuration. Every other pair collides when its axes come closer than
/// two link radii.
inline CollisionReport self_collision(const KinematicChain& chain, const Eigen::VectorXd& q) {
  const FkResult fk = forward_kinematics(chain, q);
  constexpr double kZeroLength = 1e-12;

  std::vector<int> solid;
  solid.reserve(chain.dof());
  for (std::size_t i = 0; i < chain.dof(); ++i) {
    if (chain.segments[i].length > kZeroLength) solid.push_back(static_cast<int>(i));
  }

  CollisionReport report;
  const double threshold = 2.0 * chain.link_radius;
  for (std::size_t a = 0; a + 2 <= solid.size(); ++a) {
    for (std::size_t b = a + 2; b < solid.size(); ++b) {
      const int i = solid[a];
      const int j = solid[b];
      double zero_pose_gap = 0.0;
      for (int k = i + 1; k < j; ++k) zero_pose_gap += chain.segments[k].length;
      if (zero_pose_gap < threshold) continue;
      const double d = segment_distance(fk.joint_origins[i], fk.joint_origins[i + 1],
                                        fk.joint_origins[j], fk.joint_origins[j + 1]);
      if (d < threshold) {
        report.colliding = true;
        report.pairs.emplace_back(i, j);
      }
    }
  }
  return report;
}

}  // namespace chainopt
