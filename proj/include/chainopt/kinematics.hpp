#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <cstddef>
#include <vector>

#include "chainopt/chain.hpp"

namespace chainopt {

struct Pose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
};

/// World-frame state of every link after applying a joint vector.
/// joint_origins[i] is where joint i sits; link_rotations[i] is the
/// orientation of link i (after joint i's own rotation); segment i spans
/// joint_origins[i] -> joint_origins[i+1], with joint_origins[n] the tip.
struct FkResult {
  std::vector<Eigen::Vector3d> joint_origins;     // size n+1, last entry = tip
  std::vector<Eigen::Quaterniond> link_rotations; // size n
  Pose tip;

  Eigen::Vector3d axis_world(const KinematicChain& chain, std::size_t i) const {
    return link_rotations[i] * chain.segments[i].axis;
  }
};

inline FkResult forward_kinematics(const KinematicChain& chain, const Eigen::VectorXd& q) {
  const std::size_t n = chain.dof();
  FkResult fk;
  fk.joint_origins.reserve(n + 1);
  fk.link_rotations.reserve(n);
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  Eigen::Quaterniond r = Eigen::Quaterniond::Identity();
  for (std::size_t i = 0; i < n; ++i) {
    fk.joint_origins.push_back(p);
    r = r * Eigen::Quaterniond(Eigen::AngleAxisd(q[static_cast<Eigen::Index>(i)],
                                                 chain.segments[i].axis));
    r.normalize();
    fk.link_rotations.push_back(r);
    p += r * Eigen::Vector3d(0.0, 0.0, chain.segments[i].length);
  }
  fk.joint_origins.push_back(p);
  fk.tip.position = p;
  fk.tip.orientation = r;
  return fk;
}

/// Geometric Jacobian at the tip: column i = [z_i x (p_tip - p_i); z_i].
inline Eigen::Matrix<double, 6, Eigen::Dynamic> jacobian(const KinematicChain& chain,
                                                         const Eigen::VectorXd& q) {
  const FkResult fk = forward_kinematics(chain, q);
  const std::size_t n = chain.dof();
  Eigen::Matrix<double, 6, Eigen::Dynamic> J(6, n);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector3d z = fk.axis_world(chain, i);
    const Eigen::Vector3d lever = fk.tip.position - fk.joint_origins[i];
    J.col(static_cast<Eigen::Index>(i)).head<3>() = z.cross(lever);
    J.col(static_cast<Eigen::Index>(i)).tail<3>() = z;
  }
  return J;
}

/// Rotation-vector error of the relative rotation target * current^-1,
/// expressed in the world frame. Magnitude is the geodesic angle.
inline Eigen::Vector3d orientation_error(const Eigen::Quaterniond& target,
                                         const Eigen::Quaterniond& current) {
  Eigen::Quaterniond rel = target * current.conjugate();
  rel.normalize();
  if (rel.w() < 0.0) rel.coeffs() = -rel.coeffs();
  const double vec_norm = rel.vec().norm();
  const double angle = 2.0 * std::atan2(vec_norm, rel.w());
  if (vec_norm < 1e-12) return Eigen::Vector3d::Zero();
  return (angle / vec_norm) * rel.vec();
}

}  // namespace chainopt
