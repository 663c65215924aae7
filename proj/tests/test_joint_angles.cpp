#include <cmath>

#include <gtest/gtest.h>

#include "mfk/joint_angles.hpp"
#include "mfk/sampler.hpp"
#include "test_support.hpp"

using namespace mfk;
using mfk::test::bent_finger;

namespace {
const double kS3 = std::sqrt(3.0) / 2;

std::vector<FingerSolution> stock_solutions(std::size_t n = 200) {
  const auto f = bent_finger();
  SamplerConfig cfg;
  cfg.target_count = n;
  const Vec2 d{0.25, 0.15};
  return sample_finger(f, f.contact0() + d, norm(d), cfg).solutions;
}
}  // namespace

TEST(BaseAngle, Examples) {
  const auto f = FingerChain::from_points(0, {0, 0}, {1, 0}, {2, 0}, {3, 0});
  EXPECT_EQ(base_angle(f, {1, 0}).rad(), 0.0);
  EXPECT_NEAR(base_angle(f, {0, 1}).rad(), kPi / 2, 1e-12);
  EXPECT_NEAR(base_angle(f, {0.5, kS3}).rad(), kPi / 3, 1e-12);
  EXPECT_NEAR(base_angle(f, {0.5, -kS3}).rad(), -kPi / 3, 1e-12);
  try {
    base_angle(f, {0.5, 0.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OffCircle);
  }
}

TEST(InteriorAngle, Examples) {
  EXPECT_EQ(interior_angle({0, 0}, {1, 0}, {1, 0}, 1).rad(), 0.0);
  EXPECT_NEAR(interior_angle({0, 0}, {1, 0}, {0, 1}, 1).rad(), kPi / 2, 1e-12);
  EXPECT_NEAR(interior_angle({0, 0}, {1, 0}, {0.5, kS3}, 1).rad(), kPi / 3, 1e-12);
  EXPECT_THROW(interior_angle({0, 0}, {1, 0}, {0, 2}, 1), Error);
}

TEST(DistalAngle, Examples) {
  EXPECT_EQ(distal_angle({0, 0}, {1, 0}, {1, 0}, 1).rad(), 0.0);
  EXPECT_NEAR(distal_angle({0, 0}, {1, 0}, {0, 1}, 1).rad(), kPi / 2, 1e-12);
  EXPECT_NEAR(distal_angle({0, 0}, {1, 0}, {-1, 0}, 1).rad(), kPi, 1e-12);
}

TEST(DistalAngle, MatchesSignedTurnOnRandomTriangles) {
  Rng rng(41);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 q3{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const double l3 = rng.uniform(0.2, 3);
    const Vec2 c_old = q3 + l3 * unit(rng.angle());
    const Vec2 c_new = q3 + l3 * unit(rng.angle());
    EXPECT_NEAR(distal_angle(q3, c_old, c_new, l3).rad(), signed_turn(c_old - q3, c_new - q3).rad(), 1e-9);
  }
}

TEST(ForwardKinematics, Examples) {
  auto p = forward_kinematics({0, 0}, {0, 0, 0}, {1, 1, 1});
  EXPECT_NEAR(p.q2.x, 1, 1e-15);
  EXPECT_NEAR(p.q3.x, 2, 1e-15);
  EXPECT_NEAR(p.contact.x, 3, 1e-15);
  p = forward_kinematics({0, 0}, {kPi / 2, kPi / 2, kPi / 2}, {1, 1, 1});
  EXPECT_NEAR(p.contact.x, 0, 1e-15);
  EXPECT_NEAR(p.contact.y, 3, 1e-15);
  // Relative (0, pi/2, 0) is absolute (0, pi/2, pi/2).
  p = forward_kinematics({0, 0}, {0, kPi / 2, kPi / 2}, {1, 1, 1});
  EXPECT_NEAR(p.q2.x, 1, 1e-15);
  EXPECT_NEAR(p.q3.x, 1, 1e-15);
  EXPECT_NEAR(p.q3.y, 1, 1e-15);
  EXPECT_NEAR(p.contact.x, 1, 1e-15);
  EXPECT_NEAR(p.contact.y, 2, 1e-15);
}

TEST(RecoverAll, IdentityIsZeroByBothMethods) {
  const auto f = bent_finger();
  const FingerSolution s = initial_solution(f);
  for (auto m : {AngleMethod::PaperLawOfCosines, AngleMethod::DirectFromPositions}) {
    const auto a = recover_all(f, s, m);
    EXPECT_EQ(a.theta1.rad(), 0.0);
    EXPECT_EQ(a.theta2.rad(), 0.0);
    EXPECT_EQ(a.theta3.rad(), 0.0);
  }
}

TEST(RecoverAll, PureBaseRotation) {
  const auto f = FingerChain::from_points(0, {0, 0}, {1, 0}, {2, 0}, {3, 0});
  const double alpha = 0.4;
  FingerSolution s = initial_solution(f);
  s.q2 = rotate(f.q2(), alpha);
  s.q3 = rotate(f.q3(), alpha);
  s.contact = rotate(f.contact0(), alpha);
  const auto a = recover_all(f, s, AngleMethod::DirectFromPositions);
  EXPECT_NEAR(a.theta1.rad(), alpha, 1e-12);
  EXPECT_NEAR(a.theta2.rad(), 0.0, 1e-12);
  EXPECT_NEAR(a.theta3.rad(), 0.0, 1e-12);
}

TEST(RecoverAll, RoundTripThroughIndependentFk) {
  const auto f = bent_finger();
  const auto& l = f.lengths();
  const Vec2 b = f.base();
  const double h1 = std::atan2(f.q2().y - b.y, f.q2().x - b.x);
  const double h2 = std::atan2(f.q3().y - f.q2().y, f.q3().x - f.q2().x);
  const double h3 = std::atan2(f.contact0().y - f.q3().y, f.contact0().x - f.q3().x);
  const auto sols = stock_solutions();
  ASSERT_FALSE(sols.empty());
  for (const auto& s : sols) {
    const auto d = recover_all(f, s, AngleMethod::DirectFromPositions);
    const double a1 = h1 + d.theta1.rad();
    const double a2 = h2 + d.theta1.rad() + d.theta2.rad();
    const double a3 = h3 + d.theta1.rad() + d.theta2.rad() + d.theta3.rad();
    const auto pts = test::fk(b, a1, a2, a3, l);
    EXPECT_NEAR(pts[0].x, s.q2.x, 1e-9);
    EXPECT_NEAR(pts[0].y, s.q2.y, 1e-9);
    EXPECT_NEAR(pts[1].x, s.q3.x, 1e-9);
    EXPECT_NEAR(pts[1].y, s.q3.y, 1e-9);
    EXPECT_NEAR(pts[2].x, s.contact.x, 1e-9);
    EXPECT_NEAR(pts[2].y, s.contact.y, 1e-9);
    const auto lib = apply_joint_deltas(f, d);
    EXPECT_NEAR(distance(lib.contact, s.contact), 0.0, 1e-9);
  }
}

TEST(RecoverAll, BaseAngleMagnitudeMatchesDirect) {
  const auto f = bent_finger();
  for (const auto& s : stock_solutions()) {
    const auto paper = recover_all(f, s, AngleMethod::PaperLawOfCosines);
    const auto direct = recover_all(f, s, AngleMethod::DirectFromPositions);
    EXPECT_NEAR(std::abs(paper.theta1.rad()), std::abs(direct.theta1.rad()), 1e-9);
    EXPECT_NEAR(paper.theta1.rad(), direct.theta1.rad(), 1e-9);
  }
}

TEST(RecoverAll, AnglesStayAwayFromHalfTurn) {
  const auto f = bent_finger();
  for (const auto& s : stock_solutions()) {
    const auto d = recover_all(f, s, AngleMethod::DirectFromPositions);
    for (double t : {d.theta1.rad(), d.theta2.rad(), d.theta3.rad()}) {
      EXPECT_LT(std::abs(t), kPi - 1e-9);
    }
  }
}

TEST(RecoverAll, DistalAgreementWhenQ3Fixed) {
  // q3 unchanged: the contact rotates about q3 and both methods see the same
  // turn of the distal link relative to a fixed joint.
  const auto f = FingerChain::from_points(0, {0, 0}, {1, 0}, {1.6, 0.8}, {2.6, 0.8});
  FingerSolution s = initial_solution(f);
  s.contact = rotate_about(f.contact0(), f.q3(), Angle::radians(0.3));
  const auto paper = recover_all(f, s, AngleMethod::PaperLawOfCosines);
  const auto direct = recover_all(f, s, AngleMethod::DirectFromPositions);
  EXPECT_NEAR(std::abs(paper.theta3.rad()), std::abs(direct.theta3.rad()), 1e-12);
}

TEST(CompareIndexing, DivergenceIsRecorded) {
  const auto f = bent_finger();
  std::size_t out_of_domain = 0, differing = 0;
  for (const auto& s : stock_solutions()) {
    const auto cmp = compare_indexing(f, s);
    for (int j = 0; j < 3; ++j) {
      if (!cmp.literal_in_domain[j]) ++out_of_domain;
      else if (cmp.difference[j] > 1e-6) ++differing;
    }
  }
  // The own-displacement reading disagrees with the canonical one on sampler output.
  EXPECT_GT(out_of_domain + differing, 0u);
}
