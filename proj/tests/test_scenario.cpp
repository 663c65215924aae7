#include <cmath>

#include <gtest/gtest.h>

#include "mfk/io.hpp"
#include "mfk/scenario.hpp"
#include "test_support.hpp"

using namespace mfk;

namespace {
ScenarioSpec load(const std::string& name) { return io::parse_scenario(test::scenario_path(name)); }

const char* kTable3[] = {"ellipse_b2f", "sphere_b2f", "cylinder_b2f", "cone_b2f", "cube_b2f"};
}  // namespace

TEST(BuildScenario, Table3Rolls) {
  const double expected_deg[] = {12, 9, 6, 6, 7};
  for (int i = 0; i < 5; ++i) {
    const auto spec = load(kTable3[i]);
    const auto built = build_scenario(spec);
    ASSERT_FALSE(is_translate(built.task)) << kTable3[i];
    EXPECT_NEAR(std::get<Roll>(built.task).phi.deg(), expected_deg[i], 1e-9) << kTable3[i];
    EXPECT_EQ(built.scene.fingers().size(), 4u);
    EXPECT_EQ(built.scene.object0().position, (Vec2{spec.initial.x, spec.initial.y}));
  }
}

TEST(BuildScenario, IdentitySpecGivesZeroTask) {
  ScenarioSpec spec;
  spec.name = "still";
  spec.initial = spec.desired = Pose6{1, 2, 3, 4, 5, 6};
  const auto built = build_scenario(spec);
  EXPECT_TRUE(is_identity(built.task));
}

TEST(BuildScenario, TranslateAndRotateTogetherIsRejected) {
  ScenarioSpec spec;
  spec.desired.x = 1;
  spec.desired.beta = 5;
  EXPECT_THROW(build_scenario(spec), Error);
}

TEST(BuildScenario, ContactsOnBoundary) {
  for (ShapeKind kind : kAllShapes) {
    for (CaseLabel c : {CaseLabel::TwoFinger, CaseLabel::ThreeFinger, CaseLabel::BimanualTwoFinger}) {
      ScenarioSpec spec;
      spec.shape = kind == ShapeKind::Ellipse ? ObjectShape::ellipse(4, 2.5)
                   : kind == ShapeKind::Cone  ? ObjectShape::cone(6, 7)
                   : kind == ShapeKind::Cube  ? ObjectShape::cube(5)
                                              : ObjectShape{kind, 3, 3};
      spec.case_label = c;
      spec.initial = {10, -4, 0, 0, 33, 0};
      spec.desired = {10, -4, 0, 0, 40, 0};
      const auto built = build_scenario(spec);
      const ObjectPose& o = built.scene.object0();
      for (const auto& f : built.scene.fingers()) {
        const Vec2 local = rotate(f.contact0() - o.position, -o.orientation.rad());
        EXPECT_LT(spec.shape.boundary_residual(local), 1e-9) << to_string(kind) << " " << to_string(c);
      }
    }
  }
}

TEST(BuildScenario, InfeasibleGrasp) {
  ScenarioSpec spec;
  spec.shape = ObjectShape::sphere(3);
  spec.desired.x = 40;
  try {
    build_scenario(spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfeasibleGrasp);
  }
}

TEST(RigidFit, RecoversExactRigidMotion) {
  Rng rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    const Vec2 center{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const double theta = rng.uniform(-3, 3);
    const Vec2 t{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    std::vector<Vec2> before, after;
    const std::size_t n = 2 + rng.index(4);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 p{rng.uniform(-5, 5), rng.uniform(-5, 5)};
      before.push_back(p);
      const double c = std::cos(theta), s = std::sin(theta);
      const Vec2 r = p - center;
      after.push_back(center + Vec2{c * r.x - s * r.y, s * r.x + c * r.y} + t);
    }
    const RigidMotion m = rigid_fit(center, before, after);
    EXPECT_NEAR(m.rotation.rad(), theta, 1e-9);
    EXPECT_NEAR(m.translation.x, t.x, 1e-9);
    EXPECT_NEAR(m.translation.y, t.y, 1e-9);
  }
}

TEST(Evaluate, IdentityAndForcedFailure) {
  const auto built = build_scenario(load("identity_1f"));
  const RunMetrics ok = evaluate(try_plan(built.scene, built.task, PlannerConfig{}), built.task);
  EXPECT_TRUE(ok.success);
  EXPECT_EQ(ok.relative_error, 0.0);

  const auto ellipse = build_scenario(load("ellipse_b2f"));
  PlannerConfig cfg;
  cfg.sampler.max_attempts = 1;
  const RunMetrics bad = evaluate(try_plan(ellipse.scene, ellipse.task, cfg), ellipse.task);
  EXPECT_FALSE(bad.success);
  EXPECT_FALSE(bad.diagnostics.empty());
  ASSERT_TRUE(bad.failure.has_value());
  EXPECT_EQ(*bad.failure, ErrorCode::BudgetExhausted);
}

TEST(Evaluate, EllipseRollWithinBound) {
  const auto built = build_scenario(load("ellipse_b2f"));
  const RunMetrics m = evaluate(try_plan(built.scene, built.task, PlannerConfig{}), built.task);
  EXPECT_TRUE(m.success);
  EXPECT_LE(m.relative_error, 0.15);
  EXPECT_GT(m.attempts, 0u);
}

TEST(RunSuite, CellsAndDeterminism) {
  const auto spec = load("sphere_b2f");
  const auto one = run_suite({spec}, 1, 42, PlannerConfig{});
  ASSERT_EQ(one.cells.size(), 1u);
  EXPECT_EQ(one.cells[0].runs, 1u);

  std::vector<ScenarioSpec> specs;
  for (const char* n : kTable3) specs.push_back(load(n));
  const auto a = run_suite(specs, 3, 9, PlannerConfig{});
  const auto b = run_suite(specs, 3, 9, PlannerConfig{});
  ASSERT_EQ(a.cells.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(a.cells[i].runs, 3u);
    EXPECT_GE(a.cells[i].success_rate(), 0.0);
    EXPECT_LE(a.cells[i].success_rate(), 1.0);
    EXPECT_EQ(a.cells[i].mean_relative_error, b.cells[i].mean_relative_error);
    EXPECT_EQ(a.cells[i].mean_attempts, b.cells[i].mean_attempts);
  }
  EXPECT_THROW(run_suite({}, 1, 0, PlannerConfig{}), Error);
}

TEST(ShapeBoundary, RayHitsLieOnProfile) {
  Rng rng(2);
  for (const ObjectShape s : {ObjectShape::ellipse(4, 2.5), ObjectShape::sphere(3), ObjectShape::cone(6, 7),
                              ObjectShape::cube(5)}) {
    for (int i = 0; i < 500; ++i) {
      const double t = rng.angle();
      const Vec2 p = s.boundary_point(t);
      EXPECT_LT(s.boundary_residual(p), 1e-9);
      EXPECT_NEAR(std::atan2(p.y, p.x), t, 1e-9);
    }
  }
}
