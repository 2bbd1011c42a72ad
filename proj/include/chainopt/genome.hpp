#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "chainopt/errors.hpp"

namespace chainopt {

/// Joint types of a serial chain, named after the motion they produce at the
/// zero pose (all links stacked along +z): Roll spins about local x, Pitch
/// about local y, Yaw about the link axis (local z).
enum class JointType { Roll, Pitch, Yaw };

inline char to_letter(JointType t) {
  switch (t) {
    case JointType::Roll: return 'R';
    case JointType::Pitch: return 'P';
    case JointType::Yaw: return 'Y';
  }
  return '?';
}

inline JointType joint_from_letter(char c) {
  switch (c) {
    case 'R': return JointType::Roll;
    case 'P': return JointType::Pitch;
    case 'Y': return JointType::Yaw;
    default: throw ValidationError(std::string("unknown joint letter '") + c + "'");
  }
}

inline std::string joints_to_string(const std::vector<JointType>& joints) {
  std::string s;
  s.reserve(joints.size());
  for (JointType t : joints) s += to_letter(t);
  return s;
}

/// Total-length budget and the static per-link sampling cap.
struct LengthConfig {
  double l_total = 0.6;
  double l_max_init = 0.3;
};

inline constexpr double kLengthSlack = 1e-9;

/// One candidate design: the joint-type sequence and the link lengths that
/// follow each joint. Lengths always sum to the total budget.
struct DesignGenome {
  std::vector<JointType> joints;
  std::vector<double> lengths;

  std::size_t dof() const { return joints.size(); }
};

/// Rewrites a raw joint sequence so that any joint directly after a Yaw
/// becomes Pitch. Single left-to-right sweep; idempotent.
inline std::vector<JointType> canonicalize_joints(std::vector<JointType> raw) {
  for (std::size_t i = 0; i + 1 < raw.size(); ++i) {
    if (raw[i] == JointType::Yaw) raw[i + 1] = JointType::Pitch;
  }
  return raw;
}

inline bool joints_are_canonical(const std::vector<JointType>& joints) {
  for (std::size_t i = 0; i + 1 < joints.size(); ++i) {
    if (joints[i] == JointType::Yaw && joints[i + 1] != JointType::Pitch) return false;
  }
  return true;
}

/// Upper bound for the next link length given the lengths already chosen:
/// min(l_max_init, remaining budget).
inline double length_bound(const std::vector<double>& lengths_so_far, const LengthConfig& cfg) {
  const double used = std::accumulate(lengths_so_far.begin(), lengths_so_far.end(), 0.0);
  if (used > cfg.l_total + kLengthSlack) {
    throw ValidationError("link lengths exceed the total budget: " + std::to_string(used) +
                          " > " + std::to_string(cfg.l_total));
  }
  return std::max(0.0, std::min(cfg.l_max_init, cfg.l_total - used));
}

/// Throws unless the genome satisfies the structural constraints: canonical
/// joint order, per-link bounds, and an exact total length.
inline void validate_genome(const DesignGenome& g, const LengthConfig& cfg) {
  if (g.joints.size() != g.lengths.size()) {
    throw ValidationError("genome joint/length count mismatch");
  }
  if (!joints_are_canonical(g.joints)) {
    throw ValidationError("genome joints are not canonical: " + joints_to_string(g.joints));
  }
  const std::size_t n = g.lengths.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double cap = (i + 1 < n) ? cfg.l_max_init : cfg.l_total;
    if (g.lengths[i] < -kLengthSlack || g.lengths[i] > cap + kLengthSlack) {
      throw ValidationError("link length " + std::to_string(i) + " out of range: " +
                            std::to_string(g.lengths[i]));
    }
  }
  const double total = std::accumulate(g.lengths.begin(), g.lengths.end(), 0.0);
  if (std::abs(total - cfg.l_total) > kLengthSlack) {
    throw ValidationError("link lengths sum to " + std::to_string(total) + ", expected " +
                          std::to_string(cfg.l_total));
  }
}

/// Completes a design from a canonical joint sequence and the first
/// n_joint-1 link lengths; the final link absorbs the remaining budget.
inline DesignGenome close_genome(const std::vector<JointType>& joints,
                                 const std::vector<double>& partial_lengths,
                                 const LengthConfig& cfg) {
  if (joints.empty() || partial_lengths.size() + 1 != joints.size()) {
    throw ValidationError("close_genome: expected n_joint-1 partial lengths");
  }
  if (!joints_are_canonical(joints)) {
    throw ValidationError("close_genome: joints must be canonical");
  }
  std::vector<double> prefix;
  prefix.reserve(partial_lengths.size());
  for (double len : partial_lengths) {
    const double cap = length_bound(prefix, cfg);
    if (len < -kLengthSlack || len > cap + kLengthSlack) {
      throw ValidationError("partial length " + std::to_string(len) +
                            " violates its dynamic bound " + std::to_string(cap));
    }
    prefix.push_back(len);
  }
  DesignGenome g;
  g.joints = joints;
  g.lengths = prefix;
  const double used = std::accumulate(prefix.begin(), prefix.end(), 0.0);
  g.lengths.push_back(std::max(0.0, cfg.l_total - used));
  return g;
}

}  // namespace chainopt
