#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "chainopt/chain.hpp"
#include "chainopt/errors.hpp"
#include "chainopt/ik.hpp"
#include "chainopt/parallel.hpp"
#include "chainopt/random.hpp"
#include "chainopt/statics.hpp"

namespace chainopt {

/// Axis-aligned workspace box, voxel pitch and the per-voxel posture budget.
struct WorkspaceSpec {
  double x_min = -0.5, x_max = 0.5;
  double y_min = -0.5, y_max = 0.5;
  double z_min = -0.1, z_max = 0.5;
  double d_voxel = 0.2;
  int n_rand = 30;
  std::uint64_t pose_seed = 0x9d2c5680ULL;
};

namespace detail {

inline int voxel_count_1d(double lo, double hi, double d) {
  // floor with slack so exact multiples of the pitch are not lost to
  // floating-point division error.
  return static_cast<int>(std::floor((hi - lo) / d + 1e-9));
}

}  // namespace detail

/// Voxel centers at lo + d*(k + 1/2) per axis, x varying fastest.
inline std::vector<Eigen::Vector3d> build_voxel_grid(const WorkspaceSpec& spec) {
  if (spec.d_voxel <= 0.0) throw ValidationError("d_voxel must be positive");
  const int nx = detail::voxel_count_1d(spec.x_min, spec.x_max, spec.d_voxel);
  const int ny = detail::voxel_count_1d(spec.y_min, spec.y_max, spec.d_voxel);
  const int nz = detail::voxel_count_1d(spec.z_min, spec.z_max, spec.d_voxel);
  if (nx <= 0 || ny <= 0 || nz <= 0) {
    throw ValidationError("workspace shorter than one voxel along an axis");
  }
  std::vector<Eigen::Vector3d> centers;
  centers.reserve(static_cast<std::size_t>(nx) * ny * nz);
  for (int kz = 0; kz < nz; ++kz) {
    for (int ky = 0; ky < ny; ++ky) {
      for (int kx = 0; kx < nx; ++kx) {
        centers.emplace_back(spec.x_min + spec.d_voxel * (kx + 0.5),
                             spec.y_min + spec.d_voxel * (ky + 0.5),
                             spec.z_min + spec.d_voxel * (kz + 0.5));
      }
    }
  }
  return centers;
}

/// Random end-effector postures at a voxel center: fixed position, uniformly
/// random orientations. The stream is derived from (seed, center), so every
/// design evaluated under the same spec sees identical targets.
inline std::vector<Pose> sample_poses(const Eigen::Vector3d& center, int n_rand,
                                      std::uint64_t seed) {
  if (n_rand < 1) throw ValidationError("n_rand must be at least 1");
  std::mt19937_64 rng(mix_seed(mix_seed(seed, double_bits(center.x()), double_bits(center.y())),
                               double_bits(center.z())));
  std::vector<Pose> poses(static_cast<std::size_t>(n_rand));
  for (auto& pose : poses) {
    pose.position = center;
    pose.orientation = uniform_rotation(rng);
  }
  return poses;
}

struct VoxelScore {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double e_reach = 0.0;                // successes / n_rand
  std::optional<double> e_torque;      // mean |tau| over successes; empty if none
  int successes = 0;
};

struct DesignScore {
  double e_reach_total = 0.0;
  double e_torque_total = 0.0;
  std::vector<VoxelScore> per_voxel;
};

/// Solves IK for every posture at one voxel; reachability is the success
/// fraction, torque the mean gravity-torque norm over the successes.
inline VoxelScore evaluate_voxel(const KinematicChain& chain, const std::vector<Pose>& poses,
                                 const IkConfig& cfg) {
  if (poses.empty()) throw ValidationError("evaluate_voxel: empty pose list");
  VoxelScore score;
  score.center = poses.front().position;
  double torque_sum = 0.0;
  for (std::size_t j = 0; j < poses.size(); ++j) {
    const Pose& pose = poses[j];
    std::mt19937_64 rng(mix_seed(mix_seed(cfg.restart_seed, double_bits(pose.position.x()),
                                          double_bits(pose.position.y())),
                                 double_bits(pose.position.z()), j));
    const IkResult ik = solve_ik(chain, pose, cfg, rng);
    if (ik.success) {
      ++score.successes;
      torque_sum += torque_norm(gravity_torque(chain, ik.q));
    }
  }
  score.e_reach = static_cast<double>(score.successes) / static_cast<double>(poses.size());
  if (score.successes > 0) score.e_torque = torque_sum / score.successes;
  return score;
}

struct EvalOptions {
  double joint_limit = kDefaultJointLimit;
  double empty_voxel_torque_penalty = 0.0; // added per voxel with zero successes
  int n_threads = 1;
};

/// Full design evaluation: expand the genome, score every voxel, sum. Voxels
/// run in parallel but land in fixed slots, so the result is bit-identical
/// for any thread count.
inline DesignScore evaluate_design(const DesignGenome& genome, const WorkspaceSpec& spec,
                                   const MassParams& masses, const IkConfig& ik_cfg,
                                   const EvalOptions& opts = {}) {
  const KinematicChain chain = expand_genome(genome, masses, opts.joint_limit);
  const std::vector<Eigen::Vector3d> centers = build_voxel_grid(spec);
  DesignScore score;
  score.per_voxel.resize(centers.size());
  parallel_for(centers.size(), opts.n_threads, [&](std::size_t i) {
    const std::vector<Pose> poses = sample_poses(centers[i], spec.n_rand, spec.pose_seed);
    score.per_voxel[i] = evaluate_voxel(chain, poses, ik_cfg);
  });
  for (const VoxelScore& v : score.per_voxel) {
    score.e_reach_total += v.e_reach;
    score.e_torque_total += v.e_torque.value_or(opts.empty_voxel_torque_penalty);
  }
  return score;
}

}  // namespace chainopt
