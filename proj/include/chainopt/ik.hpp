#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "chainopt/chain.hpp"
#include "chainopt/collision.hpp"
#include "chainopt/kinematics.hpp"

namespace chainopt {

struct IkConfig {
  int max_iters = 200;
  double damping = 0.1;
  double pos_tol = 0.005; // m
  double ori_tol = 0.05;  // rad
  int n_restarts = 5;     // total attempts, the first one from q = 0
  std::uint64_t restart_seed = 0;
};

struct IkResult {
  bool success = false;
  Eigen::VectorXd q;
  double pos_err = 0.0;
  double ori_err = 0.0;
  int restarts_used = 0;
  bool collision_free = false;
};

namespace detail {

/// Gradient magnitude of the joint-limit avoidance criterion used by the
/// weighted least-norm scheme; grows without bound at either limit.
inline double limit_gradient(double q, double lo, double hi) {
  const double range = hi - lo;
  const double margin = 1e-9 * std::max(range, 1.0);
  const double to_hi = std::max(hi - q, margin);
  const double to_lo = std::max(q - lo, margin);
  const double num = range * range * (2.0 * q - hi - lo);
  return std::abs(num / (4.0 * to_hi * to_hi * to_lo * to_lo));
}

/// Allocation-free forward pass reused across IK iterations.
struct FkScratch {
  std::vector<Eigen::Vector3d> origins;     // n+1, last = tip
  std::vector<Eigen::Quaterniond> rotations; // n

  void resize(std::size_t n) {
    origins.resize(n + 1);
    rotations.resize(n);
  }

  void run(const KinematicChain& chain, const Eigen::VectorXd& q) {
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    Eigen::Quaterniond r = Eigen::Quaterniond::Identity();
    for (std::size_t i = 0; i < chain.dof(); ++i) {
      origins[i] = p;
      r = r * Eigen::Quaterniond(Eigen::AngleAxisd(q[static_cast<Eigen::Index>(i)],
                                                   chain.segments[i].axis));
      r.normalize();
      rotations[i] = r;
      p += r * Eigen::Vector3d(0.0, 0.0, chain.segments[i].length);
    }
    origins[chain.dof()] = p;
  }
};

}  // namespace detail

/// Damped-least-squares IK with joint-limit-aware column weighting: joints
/// whose limit criterion is worsening get their motion penalized. Each failed
/// attempt restarts from a uniform random in-limit configuration drawn from
/// the caller's stream. Success requires pose tolerances, limit satisfaction
/// and a collision-free final configuration; unreachable targets return
/// success=false instead of throwing.
inline IkResult solve_ik(const KinematicChain& chain, const Pose& target, const IkConfig& cfg,
                         std::mt19937_64& rng) {
  const std::size_t n = chain.dof();
  const Eigen::Index ni = static_cast<Eigen::Index>(n);
  IkResult best;
  best.q = Eigen::VectorXd::Zero(ni);

  constexpr double kStepCap = 0.5;   // per-joint step bound, rad
  constexpr double kPosErrCap = 0.2; // clamp on the position error term
  constexpr double kOriErrCap = 1.0; // clamp on the orientation error term
  // An attempt has to keep shaving a few percent off its error within this
  // window or it cannot reach tolerance inside max_iters anyway.
  constexpr int kStallWindow = 15;
  constexpr double kStallImprovement = 0.03; // relative, per window

  detail::FkScratch fk;
  fk.resize(n);
  Eigen::VectorXd q(ni);
  Eigen::VectorXd prev_grad(ni);
  Eigen::VectorXd inv_sqrt_w(ni);
  Eigen::VectorXd dq(ni);
  Eigen::Matrix<double, 6, Eigen::Dynamic> J(6, ni);
  Eigen::Matrix<double, 6, Eigen::Dynamic> Jw(6, ni);

  for (int attempt = 0; attempt < std::max(1, cfg.n_restarts); ++attempt) {
    if (attempt == 0) {
      q.setZero();
    } else {
      for (Eigen::Index i = 0; i < ni; ++i) {
        std::uniform_real_distribution<double> in_limits(chain.joint_limits[i][0],
                                                         chain.joint_limits[i][1]);
        q[i] = in_limits(rng);
      }
    }

    prev_grad.setZero();
    double best_score = std::numeric_limits<double>::infinity();
    int since_improvement = 0;
    bool converged = false;
    double pos_err = 0.0;
    double ori_err = 0.0;

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
      fk.run(chain, q);
      const Eigen::Vector3d& tip = fk.origins[n];
      const Eigen::Quaterniond& tip_rot = fk.rotations[n - 1];
      const Eigen::Vector3d pos_delta = target.position - tip;
      const Eigen::Vector3d ori_delta = orientation_error(target.orientation, tip_rot);
      pos_err = pos_delta.norm();
      ori_err = ori_delta.norm();
      if (pos_err <= cfg.pos_tol && ori_err <= cfg.ori_tol) {
        converged = true;
        break;
      }

      const double score = pos_err / cfg.pos_tol + ori_err / cfg.ori_tol;
      if (score < best_score * (1.0 - kStallImprovement)) {
        best_score = score;
        since_improvement = 0;
      } else if (++since_improvement >= kStallWindow) {
        break; // stuck at a local minimum; hand over to the next restart
      }

      Eigen::Matrix<double, 6, 1> err;
      err.head<3>() = (pos_err > kPosErrCap) ? Eigen::Vector3d(pos_delta * (kPosErrCap / pos_err))
                                             : pos_delta;
      err.tail<3>() = (ori_err > kOriErrCap) ? Eigen::Vector3d(ori_delta * (kOriErrCap / ori_err))
                                             : ori_delta;

      for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector3d z = fk.rotations[i] * chain.segments[i].axis;
        J.col(static_cast<Eigen::Index>(i)).head<3>() =
            z.cross(Eigen::Vector3d(tip - fk.origins[i]));
        J.col(static_cast<Eigen::Index>(i)).tail<3>() = z;
      }

      for (Eigen::Index i = 0; i < ni; ++i) {
        const double grad = detail::limit_gradient(q[i], chain.joint_limits[i][0],
                                                   chain.joint_limits[i][1]);
        const double w = (grad > prev_grad[i]) ? 1.0 + grad : 1.0;
        prev_grad[i] = grad;
        inv_sqrt_w[i] = 1.0 / std::sqrt(w);
        Jw.col(i) = J.col(i) * inv_sqrt_w[i];
      }

      Eigen::Matrix<double, 6, 6> A;
      A.noalias() = Jw * Jw.transpose();
      A.diagonal().array() += cfg.damping * cfg.damping;
      const Eigen::Matrix<double, 6, 1> y = A.ldlt().solve(err);
      dq.noalias() = Jw.transpose() * y;
      dq.array() *= inv_sqrt_w.array();

      const double step = dq.cwiseAbs().maxCoeff();
      if (step > kStepCap) dq *= kStepCap / step;
      q += dq;
      for (Eigen::Index i = 0; i < ni; ++i) {
        q[i] = std::clamp(q[i], chain.joint_limits[i][0], chain.joint_limits[i][1]);
      }
    }

    const bool collision_free = !self_collision(chain, q).colliding;
    if (converged && collision_free) {
      IkResult out;
      out.success = true;
      out.q = q;
      out.pos_err = pos_err;
      out.ori_err = ori_err;
      out.restarts_used = attempt + 1;
      out.collision_free = true;
      return out;
    }
    best.q = q;
    best.pos_err = pos_err;
    best.ori_err = ori_err;
    best.restarts_used = attempt + 1;
    best.collision_free = collision_free;
  }
  best.success = false;
  return best;
}

}  // namespace chainopt
