#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "chainopt/genome.hpp"

namespace chainopt {

/// Point masses and geometry shared by every link.
struct MassParams {
  double motor_mass = 0.5;    // kg, lumped at each joint origin
  double density = 1000.0;    // kg/m^3
  double link_radius = 0.015; // m
  double gravity = 9.81;      // m/s^2, acting along -z
};

inline constexpr double kDefaultJointLimit = 3.0 * std::numbers::pi / 4.0;

inline Eigen::Vector3d axis_of(JointType t) {
  switch (t) {
    case JointType::Roll: return Eigen::Vector3d::UnitX();
    case JointType::Pitch: return Eigen::Vector3d::UnitY();
    case JointType::Yaw: return Eigen::Vector3d::UnitZ();
  }
  return Eigen::Vector3d::UnitZ();
}

/// One revolute joint plus the link that follows it. The axis is expressed
/// in the parent link frame at the zero pose; the link extends along local z.
struct ChainSegment {
  Eigen::Vector3d axis;
  double length = 0.0;
  double motor_mass = 0.0; // at the joint origin
  double link_mass = 0.0;  // at the segment midpoint
};

/// Expanded physical model of a genome: the substrate every evaluation
/// (kinematics, statics, collision) runs on. Immutable after construction.
struct KinematicChain {
  std::vector<ChainSegment> segments;
  std::vector<std::array<double, 2>> joint_limits; // [lo, hi] radians per joint
  double link_radius = 0.015;
  double gravity = 9.81;

  std::size_t dof() const { return segments.size(); }

  double total_length() const {
    double sum = 0.0;
    for (const auto& s : segments) sum += s.length;
    return sum;
  }

  double total_mass() const {
    double sum = 0.0;
    for (const auto& s : segments) sum += s.motor_mass + s.link_mass;
    return sum;
  }
};

inline KinematicChain expand_genome(const DesignGenome& genome, const MassParams& masses,
                                    double joint_limit = kDefaultJointLimit) {
  KinematicChain chain;
  chain.link_radius = masses.link_radius;
  chain.gravity = masses.gravity;
  chain.segments.reserve(genome.dof());
  chain.joint_limits.assign(genome.dof(), {-joint_limit, joint_limit});
  const double section = std::numbers::pi * masses.link_radius * masses.link_radius;
  for (std::size_t i = 0; i < genome.dof(); ++i) {
    ChainSegment seg;
    seg.axis = axis_of(genome.joints[i]);
    seg.length = genome.lengths[i];
    seg.motor_mass = masses.motor_mass;
    seg.link_mass = section * seg.length * masses.density;
    chain.segments.push_back(seg);
  }
  return chain;
}

}  // namespace chainopt
