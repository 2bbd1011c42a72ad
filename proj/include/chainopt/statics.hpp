#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <vector>

#include "chainopt/chain.hpp"
#include "chainopt/kinematics.hpp"

namespace chainopt {

/// Static joint torque holding a pose against gravity. For joint k with
/// world axis z_k at origin p_k, sums the gravity moments of every distal
/// mass: motors lumped at joint origins k+1..n and link masses at segment
/// midpoints k..n. Equals -dU/dq_k for the potential U = sum(m g z).
inline Eigen::VectorXd gravity_torque(const KinematicChain& chain, const Eigen::VectorXd& q) {
  const std::size_t n = chain.dof();
  const FkResult fk = forward_kinematics(chain, q);

  std::vector<Eigen::Vector3d> mass_pos;
  std::vector<double> mass_val;
  mass_pos.reserve(2 * n);
  mass_val.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    mass_pos.push_back(fk.joint_origins[i]);
    mass_val.push_back(chain.segments[i].motor_mass);
    mass_pos.push_back(0.5 * (fk.joint_origins[i] + fk.joint_origins[i + 1]));
    mass_val.push_back(chain.segments[i].link_mass);
  }

  Eigen::VectorXd tau = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::Vector3d z = fk.axis_world(chain, k);
    const Eigen::Vector3d pk = fk.joint_origins[k];
    double moment = 0.0;
    // Masses rigidly attached at or below joint k do not move with it; the
    // motor at joint k sits on the axis and contributes nothing either, so
    // summation starts at the link of segment k and the motor of joint k+1.
    for (std::size_t m = 2 * k + 1; m < mass_pos.size(); ++m) {
      const Eigen::Vector3d force(0.0, 0.0, -mass_val[m] * chain.gravity);
      moment += z.dot((mass_pos[m] - pk).cross(force));
    }
    tau[static_cast<Eigen::Index>(k)] = moment;
  }
  return tau;
}

inline double torque_norm(const Eigen::VectorXd& tau) { return tau.norm(); }

}  // namespace chainopt
