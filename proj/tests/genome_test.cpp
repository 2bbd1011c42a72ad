#include "chainopt/genome.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "chainopt/chain.hpp"
#include "chainopt/urdf.hpp"
#include "test_util.hpp"

using namespace chainopt;

namespace {

std::vector<JointType> joints_of(const std::string& letters) {
  std::vector<JointType> out;
  for (char c : letters) out.push_back(joint_from_letter(c));
  return out;
}

}  // namespace

TEST(Canonicalize, RemapsAfterYaw) {
  EXPECT_EQ(joints_to_string(canonicalize_joints(joints_of("YRPPYR"))), "YPPPYP");
}

TEST(Canonicalize, CanonicalInputIsIdentity) {
  EXPECT_EQ(joints_to_string(canonicalize_joints(joints_of("PRRYPY"))), "PRRYPY");
}

TEST(Canonicalize, SingleSweepSemantics) {
  // One left-to-right pass: the remapped Pitch at index 1 shields index 2,
  // leaving a trailing Yaw that needs no successor.
  EXPECT_EQ(joints_to_string(canonicalize_joints(joints_of("YYY"))), "YPY");
}

TEST(Canonicalize, IdempotentAndNoYawYaw) {
  auto rng = testutil::make_rng(7);
  std::uniform_int_distribution<int> cat(0, 2);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<JointType> raw;
    for (int i = 0; i < 7; ++i) raw.push_back(static_cast<JointType>(cat(rng)));
    const auto once = canonicalize_joints(raw);
    EXPECT_EQ(canonicalize_joints(once), once);
    for (std::size_t i = 0; i + 1 < once.size(); ++i) {
      ASSERT_FALSE(once[i] == JointType::Yaw && once[i + 1] == JointType::Yaw);
      if (once[i] == JointType::Yaw) ASSERT_EQ(once[i + 1], JointType::Pitch);
    }
  }
}

TEST(LengthBound, InitialAndRunningBudget) {
  const LengthConfig cfg{0.6, 0.3};
  EXPECT_DOUBLE_EQ(length_bound({}, cfg), 0.3);
  EXPECT_DOUBLE_EQ(length_bound({0.25, 0.2}, cfg), 0.15);
  EXPECT_DOUBLE_EQ(length_bound({0.3, 0.3}, cfg), 0.0);
  EXPECT_THROW(length_bound({0.4, 0.3}, cfg), ValidationError);
}

TEST(CloseGenome, ClosureArithmetic) {
  const LengthConfig cfg{0.6, 0.3};
  const auto joints = joints_of("PPPPPP");
  const DesignGenome g = close_genome(joints, {0.3, 0.1, 0.05, 0.05, 0.05}, cfg);
  EXPECT_NEAR(g.lengths.back(), 0.05, 1e-12);
  EXPECT_NEAR(std::accumulate(g.lengths.begin(), g.lengths.end(), 0.0), 0.6, 1e-12);

  const DesignGenome zero_tail = close_genome(joints, {0.3, 0.3, 0.0, 0.0, 0.0}, cfg);
  EXPECT_DOUBLE_EQ(zero_tail.lengths.back(), 0.0);

  EXPECT_THROW(close_genome(joints, {0.3, 0.3, 0.01, 0.0, 0.0}, cfg), ValidationError);
}

TEST(CloseGenome, RandomPartialsAlwaysValid) {
  const LengthConfig cfg{0.6, 0.3};
  auto rng = testutil::make_rng(11);
  for (int trial = 0; trial < 5000; ++trial) {
    const DesignGenome g = testutil::random_genome(rng, 6, cfg);
    const double total = std::accumulate(g.lengths.begin(), g.lengths.end(), 0.0);
    ASSERT_NEAR(total, cfg.l_total, 1e-9);
    for (std::size_t i = 0; i + 1 < g.lengths.size(); ++i) {
      ASSERT_GE(g.lengths[i], 0.0);
      ASSERT_LE(g.lengths[i], cfg.l_max_init + 1e-12);
    }
    ASSERT_GE(g.lengths.back(), 0.0);
    ASSERT_LE(g.lengths.back(), cfg.l_total + 1e-12);
    EXPECT_NO_THROW(validate_genome(g, cfg));
  }
}

TEST(ExpandGenome, MassModel) {
  DesignGenome g;
  g.joints = joints_of("YPPPYP");
  g.lengths = {0.1, 0.1, 0.1, 0.1, 0.1, 0.1};
  const MassParams mp{0.5, 1000.0, 0.015, 9.81};
  const KinematicChain chain = expand_genome(g, mp);
  // Hand summation: 6 motors + tube mass over the full 0.6 m.
  const double expected = 6 * 0.5 + std::numbers::pi * 0.015 * 0.015 * 0.6 * 1000.0;
  EXPECT_NEAR(chain.total_mass(), expected, 1e-12);
  EXPECT_NEAR(chain.total_mass(), 3.4241, 1e-4);
  for (std::size_t i = 0; i < chain.dof(); ++i) {
    const double link = std::numbers::pi * 0.015 * 0.015 * g.lengths[i] * 1000.0;
    EXPECT_NEAR(chain.segments[i].link_mass, link, 1e-12 * std::max(link, 1.0));
  }
}

TEST(ExpandGenome, ZeroLengthLinkHasZeroMass) {
  DesignGenome g;
  g.joints = joints_of("PPP");
  g.lengths = {0.3, 0.0, 0.3};
  const KinematicChain chain = expand_genome(g, MassParams{});
  EXPECT_DOUBLE_EQ(chain.segments[1].link_mass, 0.0);
}

TEST(ExpandGenome, AxisConvention) {
  DesignGenome g;
  g.joints = joints_of("YPR");
  g.lengths = {0.2, 0.2, 0.2};
  const KinematicChain chain = expand_genome(g, MassParams{});
  EXPECT_TRUE(chain.segments[0].axis.isApprox(Eigen::Vector3d::UnitZ()));
  EXPECT_TRUE(chain.segments[1].axis.isApprox(Eigen::Vector3d::UnitY()));
  EXPECT_TRUE(chain.segments[2].axis.isApprox(Eigen::Vector3d::UnitX()));
  for (const auto& lim : chain.joint_limits) {
    EXPECT_NEAR(lim[0], -2.35619449019, 1e-9);
    EXPECT_NEAR(lim[1], 2.35619449019, 1e-9);
  }
}

TEST(Urdf, JointCountAndLimits) {
  auto rng = testutil::make_rng(3);
  const DesignGenome g = testutil::random_genome(rng, 6);
  const KinematicChain chain = expand_genome(g, MassParams{});
  const UrdfDocument doc = export_urdf(chain);
  std::size_t joints = 0, pos = 0;
  while ((pos = doc.xml_text.find("type=\"revolute\"", pos)) != std::string::npos) {
    ++joints;
    pos += 1;
  }
  EXPECT_EQ(joints, 6u);
  EXPECT_NE(doc.xml_text.find("lower=\"-2.35619449"), std::string::npos);
}

TEST(Urdf, RoundTripIsLossless) {
  auto rng = testutil::make_rng(4);
  for (int trial = 0; trial < 25; ++trial) {
    const DesignGenome g = testutil::random_genome(rng, trial % 2 == 0 ? 6 : 7);
    const KinematicChain chain = expand_genome(g, MassParams{});
    const KinematicChain back = parse_urdf(export_urdf(chain), chain.gravity);
    ASSERT_EQ(back.dof(), chain.dof());
    for (std::size_t i = 0; i < chain.dof(); ++i) {
      EXPECT_LT((back.segments[i].axis - chain.segments[i].axis).norm(), 1e-9);
      EXPECT_NEAR(back.segments[i].length, chain.segments[i].length, 1e-9);
      EXPECT_NEAR(back.segments[i].motor_mass, chain.segments[i].motor_mass, 1e-9);
      EXPECT_NEAR(back.segments[i].link_mass, chain.segments[i].link_mass, 1e-9);
      EXPECT_NEAR(back.joint_limits[i][0], chain.joint_limits[i][0], 1e-9);
      EXPECT_NEAR(back.joint_limits[i][1], chain.joint_limits[i][1], 1e-9);
    }
    EXPECT_NEAR(back.link_radius, chain.link_radius, 1e-12);
  }
}

TEST(Urdf, ZeroLengthLinkRoundTrips) {
  DesignGenome g;
  g.joints = joints_of("PYPPPP");
  g.lengths = {0.3, 0.0, 0.1, 0.1, 0.05, 0.05};
  const KinematicChain chain = expand_genome(g, MassParams{});
  const KinematicChain back = parse_urdf(export_urdf(chain));
  EXPECT_NEAR(back.segments[1].length, 0.0, 1e-12);
  EXPECT_NEAR(back.segments[1].link_mass, 0.0, 1e-12);
  EXPECT_NEAR(back.segments[1].motor_mass, 0.5, 1e-12);
}

TEST(Urdf, RejectsMalformedXml) {
  EXPECT_THROW(parse_urdf(UrdfDocument{"<robot><joint"}), ValidationError);
}

// The optimizer only ever proposes canonical sequences; the canonical set
// for six joints is small enough to enumerate outright.
TEST(Canonicalize, OutputsMatchEnumeratedFixedPoints) {
  std::set<std::string> canonical_images;
  std::set<std::string> fixed_points;
  for (int code = 0; code < 729; ++code) {
    int c = code;
    std::vector<JointType> raw;
    for (int i = 0; i < 6; ++i) {
      raw.push_back(static_cast<JointType>(c % 3));
      c /= 3;
    }
    const auto canon = canonicalize_joints(raw);
    canonical_images.insert(joints_to_string(canon));
    if (joints_to_string(canon) == joints_to_string(raw)) {
      fixed_points.insert(joints_to_string(raw));
    }
  }
  EXPECT_EQ(canonical_images, fixed_points);
  EXPECT_GT(canonical_images.size(), 100u);
  EXPECT_LT(canonical_images.size(), 729u);
}
