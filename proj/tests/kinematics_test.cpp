#include "chainopt/kinematics.hpp"

#include <gtest/gtest.h>

#include <numbers>

#include "chainopt/ik.hpp"
#include "test_util.hpp"

using namespace chainopt;

namespace {

KinematicChain single_pitch_chain(double length = 0.6) {
  DesignGenome g;
  g.joints = {JointType::Pitch};
  g.lengths = {length};
  return expand_genome(g, MassParams{}, 3.0 * std::numbers::pi / 4.0);
}

KinematicChain two_pitch_chain() {
  DesignGenome g;
  g.joints = {JointType::Pitch, JointType::Pitch};
  g.lengths = {0.3, 0.3};
  return expand_genome(g, MassParams{});
}

}  // namespace

TEST(ForwardKinematics, ZeroPosePointsStraightUp) {
  auto rng = testutil::make_rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const DesignGenome g = testutil::random_genome(rng, 6, {0.6, 0.3});
    const KinematicChain chain = expand_genome(g, MassParams{});
    const FkResult fk = forward_kinematics(chain, Eigen::VectorXd::Zero(6));
    EXPECT_LT((fk.tip.position - Eigen::Vector3d(0, 0, 0.6)).norm(), 1e-12);
    EXPECT_NEAR(std::abs(fk.tip.orientation.w()), 1.0, 1e-12);
  }
}

TEST(ForwardKinematics, PitchQuarterTurnMapsUpToForward) {
  // Rotation about +y carries +z onto +x.
  const KinematicChain chain = single_pitch_chain();
  Eigen::VectorXd q(1);
  q << std::numbers::pi / 2.0;
  const FkResult fk = forward_kinematics(chain, q);
  EXPECT_LT((fk.tip.position - Eigen::Vector3d(0.6, 0, 0)).norm(), 1e-9);
}

TEST(ForwardKinematics, LeadingYawLeavesTipFixed) {
  DesignGenome g;
  g.joints = canonicalize_joints({JointType::Yaw, JointType::Pitch, JointType::Pitch,
                                  JointType::Roll, JointType::Pitch, JointType::Yaw});
  g.lengths = {0.1, 0.1, 0.1, 0.1, 0.1, 0.1};
  const KinematicChain chain = expand_genome(g, MassParams{});
  for (double q1 : {-2.0, -0.5, 0.7, 2.2}) {
    Eigen::VectorXd q = Eigen::VectorXd::Zero(6);
    q[0] = q1;
    const FkResult fk = forward_kinematics(chain, q);
    EXPECT_LT((fk.tip.position - Eigen::Vector3d(0, 0, 0.6)).norm(), 1e-12);
  }
}

TEST(ForwardKinematics, OrientationStaysUnitNorm) {
  auto rng = testutil::make_rng(22);
  const DesignGenome g = testutil::random_genome(rng, 6);
  const KinematicChain chain = expand_genome(g, MassParams{});
  double worst = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    const Eigen::VectorXd q = testutil::random_in_limit_q(rng, chain);
    const FkResult fk = forward_kinematics(chain, q);
    worst = std::max(worst, std::abs(fk.tip.orientation.norm() - 1.0));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Jacobian, LeadingYawColumnAtZero) {
  DesignGenome g;
  g.joints = canonicalize_joints({JointType::Yaw, JointType::Pitch, JointType::Pitch,
                                  JointType::Pitch, JointType::Pitch, JointType::Pitch});
  g.lengths = {0.1, 0.1, 0.1, 0.1, 0.1, 0.1};
  const KinematicChain chain = expand_genome(g, MassParams{});
  const auto J = jacobian(chain, Eigen::VectorXd::Zero(6));
  EXPECT_LT(J.col(0).head<3>().norm(), 1e-12);
  EXPECT_LT((J.col(0).tail<3>() - Eigen::Vector3d(0, 0, 1)).norm(), 1e-12);
}

TEST(Jacobian, SinglePitchColumnIsCrossProduct) {
  const KinematicChain chain = single_pitch_chain();
  const auto J = jacobian(chain, Eigen::VectorXd::Zero(1));
  const Eigen::Vector3d expected =
      Eigen::Vector3d(0, 1, 0).cross(Eigen::Vector3d(0, 0, 0.6));
  EXPECT_LT((J.col(0).head<3>() - expected).norm(), 1e-12);
}

TEST(Jacobian, MatchesCentralDifferences) {
  auto rng = testutil::make_rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const DesignGenome g = testutil::random_genome(rng, trial % 2 == 0 ? 6 : 7);
    const KinematicChain chain = expand_genome(g, MassParams{});
    const Eigen::VectorXd q = testutil::random_in_limit_q(rng, chain);
    const Eigen::MatrixXd J = jacobian(chain, q);
    const Eigen::MatrixXd Jfd = testutil::finite_difference_jacobian(chain, q);
    EXPECT_LT((J - Jfd).cwiseAbs().maxCoeff(), 1e-5);
  }
}

TEST(SolveIk, IdentityTargetConvergesImmediately) {
  auto rng = testutil::make_rng(24);
  const DesignGenome g = testutil::random_genome(rng, 6);
  const KinematicChain chain = expand_genome(g, MassParams{});
  const FkResult fk = forward_kinematics(chain, Eigen::VectorXd::Zero(6));
  std::mt19937_64 ik_rng(1);
  const IkResult res = solve_ik(chain, fk.tip, IkConfig{}, ik_rng);
  ASSERT_TRUE(res.success);
  EXPECT_EQ(res.restarts_used, 1);
  EXPECT_LT(res.pos_err, IkConfig{}.pos_tol);
  EXPECT_LT(res.q.cwiseAbs().maxCoeff(), 0.1);
}

TEST(SolveIk, UnreachableTargetFailsAfterAllRestarts) {
  auto rng = testutil::make_rng(25);
  const DesignGenome g = testutil::random_genome(rng, 6, {0.6, 0.3});
  const KinematicChain chain = expand_genome(g, MassParams{});
  Pose target;
  target.position = Eigen::Vector3d(1.0, 0.0, 0.0);
  std::mt19937_64 ik_rng(2);
  const IkResult res = solve_ik(chain, target, IkConfig{}, ik_rng);
  EXPECT_FALSE(res.success);
  EXPECT_EQ(res.restarts_used, 5);
}

TEST(SolveIk, TwoLinkMatchesAnalyticElbow) {
  const KinematicChain chain = two_pitch_chain();
  const auto sols = testutil::two_link_solutions(0.3, 0.3, 0.35, 0.25);
  ASSERT_EQ(sols.size(), 2u);

  // Target pose built from one analytic branch; a loose orientation
  // tolerance leaves the position problem in charge of the success test.
  Eigen::VectorXd q_star(2);
  q_star << sols[0][0], sols[0][1];
  const FkResult fk_star = forward_kinematics(chain, q_star);
  EXPECT_LT((fk_star.tip.position - Eigen::Vector3d(0.35, 0.0, 0.25)).norm(), 1e-12);

  IkConfig cfg;
  cfg.ori_tol = std::numbers::pi;
  cfg.pos_tol = 1e-5; // tight enough to pin the joint solution to 1e-3 rad
  cfg.max_iters = 500;
  std::mt19937_64 ik_rng(3);
  const IkResult res = solve_ik(chain, fk_star.tip, cfg, ik_rng);
  ASSERT_TRUE(res.success);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : sols) {
    best = std::min(best, std::max(std::abs(res.q[0] - s[0]), std::abs(res.q[1] - s[1])));
  }
  EXPECT_LT(best, 1e-3);
}

TEST(SolveIk, SuccessesRevalidateIndependently) {
  auto rng = testutil::make_rng(26);
  const IkConfig cfg;
  int successes = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const DesignGenome g = testutil::random_genome(rng, 6);
    const KinematicChain chain = expand_genome(g, MassParams{});
    // Reachable by construction: target poses come from random collision-free
    // configurations.
    Eigen::VectorXd q_goal = testutil::random_in_limit_q(rng, chain);
    for (int k = 0; k < 20 && self_collision(chain, q_goal).colliding; ++k) {
      q_goal = testutil::random_in_limit_q(rng, chain);
    }
    if (self_collision(chain, q_goal).colliding) continue;
    const FkResult fk_goal = forward_kinematics(chain, q_goal);
    std::mt19937_64 ik_rng(1000 + trial);
    const IkResult res = solve_ik(chain, fk_goal.tip, cfg, ik_rng);
    if (!res.success) continue;
    ++successes;
    const FkResult fk = forward_kinematics(chain, res.q);
    EXPECT_LE((fk.tip.position - fk_goal.tip.position).norm(), cfg.pos_tol);
    EXPECT_LE(orientation_error(fk_goal.tip.orientation, fk.tip.orientation).norm(), cfg.ori_tol);
    for (Eigen::Index i = 0; i < res.q.size(); ++i) {
      EXPECT_GE(res.q[i], chain.joint_limits[i][0] - 1e-12);
      EXPECT_LE(res.q[i], chain.joint_limits[i][1] + 1e-12);
    }
    EXPECT_FALSE(self_collision(chain, res.q).colliding);
    EXPECT_TRUE(res.collision_free);
  }
  EXPECT_GT(successes, 50);
}

TEST(SolveIk, DeterministicGivenSeed) {
  auto rng = testutil::make_rng(27);
  const DesignGenome g = testutil::random_genome(rng, 6);
  const KinematicChain chain = expand_genome(g, MassParams{});
  Pose target;
  target.position = Eigen::Vector3d(0.25, 0.1, 0.2);
  target.orientation = Eigen::Quaterniond(Eigen::AngleAxisd(0.9, Eigen::Vector3d(1, 2, 3).normalized()));
  std::mt19937_64 rng_a(42), rng_b(42);
  const IkResult a = solve_ik(chain, target, IkConfig{}, rng_a);
  const IkResult b = solve_ik(chain, target, IkConfig{}, rng_b);
  EXPECT_EQ(a.success, b.success);
  EXPECT_EQ(a.restarts_used, b.restarts_used);
  EXPECT_TRUE(a.q == b.q);
}
