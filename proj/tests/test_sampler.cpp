#include <cmath>

#include <gtest/gtest.h>

#include "mfk/sampler.hpp"
#include "test_support.hpp"

using namespace mfk;
using mfk::test::bent_finger;

namespace {
bool same(const std::vector<FingerSolution>& a, const std::vector<FingerSolution>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].q2 != b[i].q2 || a[i].q3 != b[i].q3 || a[i].cost != b[i].cost) return false;
  }
  return true;
}

// Independent acceptance audit: norms, closed form, conditioning.
void audit(const FingerChain& f, Vec2 target, double D, const FingerSolution& s, double eps_len,
           double eps_f) {
  const auto& l = f.lengths();
  EXPECT_EQ(s.q1, f.base());
  EXPECT_EQ(s.contact, target);
  EXPECT_LE(std::abs(std::hypot(s.q2.x - s.q1.x, s.q2.y - s.q1.y) - l[0]), eps_len * l[0]);
  EXPECT_LE(std::abs(std::hypot(s.q3.x - s.q2.x, s.q3.y - s.q2.y) - l[1]), eps_len * l[1]);
  EXPECT_LE(std::abs(std::hypot(target.x - s.q3.x, target.y - s.q3.y) - l[2]), eps_len * l[2]);
  const double e2 = std::hypot(s.q2.x - f.q2().x, s.q2.y - f.q2().y);
  const double e3 = std::hypot(s.q3.x - f.q3().x, s.q3.y - f.q3().y);
  const double cost = D / e2 * std::log(1 + e2 / e3);
  EXPECT_LE(std::abs(cost - 1), eps_f);
  const double floor = 1e-6 * f.total_length();
  EXPECT_GT(test::altitude(s.q1, s.q2, s.q3), floor);
  EXPECT_GT(test::altitude(s.q2, s.q3, s.contact), floor);
}
}  // namespace

TEST(SampleFinger, IdentityReturnsInitialConfiguration) {
  const auto f = bent_finger();
  const auto res = sample_finger(f, f.contact0(), 0.0, SamplerConfig{});
  ASSERT_EQ(res.solutions.size(), 1u);
  EXPECT_TRUE(res.ok());
  EXPECT_EQ(res.solutions[0].q2, f.q2());
  EXPECT_EQ(res.solutions[0].q3, f.q3());
  EXPECT_EQ(res.solutions[0].cost, 0.0);
}

TEST(SampleFinger, StraightChainSolutionsSatisfyConstraints) {
  const auto f = FingerChain::from_points(0, {0, 0}, {1, 0}, {2, 0}, {3, 0});
  SamplerConfig cfg;
  cfg.epsilon_f = 0.1;
  cfg.max_attempts = 200'000;
  const Vec2 target{2.5, 0};
  const auto res = sample_finger(f, target, 0.5, cfg);
  for (const auto& s : res.solutions) {
    EXPECT_NEAR(distance(s.q3, target), 1.0, 1e-12);
    EXPECT_NEAR(distance(s.q2, s.q3), 1.0, 1e-12);
    EXPECT_LE(std::abs(distance(s.q2, f.base()) - 1.0), cfg.effective_epsilon_len());
  }
  // The stock straight chain keeps its partial results and statistics.
  EXPECT_EQ(res.stats.accepted, res.solutions.size());
  EXPECT_EQ(res.stats.attempts, res.stats.accepted + res.stats.rejected_cost +
                                    res.stats.rejected_length + res.stats.rejected_singular);
}

TEST(SampleFinger, UnreachableTarget) {
  const auto f = FingerChain::from_points(0, {0, 0}, {1, 0}, {2, 0}, {3, 0});
  try {
    sample_finger(f, {3.5, 0}, 0.5, SamplerConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Unreachable);
  }
}

TEST(SampleFinger, ManifoldSolutionsPassIndependentAudit) {
  const auto f = bent_finger();
  SamplerConfig cfg;
  cfg.target_count = 300;
  for (Vec2 d : {Vec2{0.3, 0.1}, Vec2{-0.2, 0.25}, Vec2{0.1, -0.4}}) {
    const Vec2 target = f.contact0() + d;
    const auto res = sample_finger(f, target, norm(d), cfg);
    ASSERT_TRUE(res.ok());
    ASSERT_EQ(res.solutions.size(), 300u);
    for (const auto& s : res.solutions) {
      audit(f, target, norm(d), s, cfg.effective_epsilon_len(), cfg.epsilon_f);
      EXPECT_FALSE(check_solution(f, target, norm(d), s, cfg).has_value());
    }
  }
}

TEST(SampleFinger, ManifoldAcceptanceRatePositive) {
  const auto f = bent_finger();
  SamplerConfig cfg;
  cfg.max_attempts = 100'000;
  cfg.target_count = 100'000;
  const Vec2 target = f.contact0() + Vec2{0.2, 0.1};
  const auto res = sample_finger(f, target, norm(Vec2{0.2, 0.1}), cfg);
  EXPECT_EQ(res.stats.attempts, 100'000u);
  EXPECT_GT(res.stats.acceptance_rate(), 0.0);
  EXPECT_TRUE(res.budget_exhausted);
}

TEST(SampleFinger, PaperRejectionAcceptancesPassClosureDefinition) {
  const auto f = bent_finger();
  SamplerConfig cfg;
  cfg.strategy = SamplingStrategy::PaperRejection;
  cfg.epsilon_f = 0.1;
  cfg.box_radius = 0.05;
  cfg.max_attempts = 4'000'000;
  cfg.target_count = 3;
  const Vec2 d{0.02, 0.0};
  const Vec2 target = f.contact0() + d;
  const auto res = sample_finger(f, target, norm(d), cfg);
  ASSERT_GT(res.solutions.size(), 0u);
  SamplerConfig closure = cfg;
  closure.strategy = SamplingStrategy::ManifoldClosure;
  closure.epsilon_len = 1e-3;
  for (const auto& s : res.solutions) {
    audit(f, target, norm(d), s, 1e-3, cfg.epsilon_f);
    EXPECT_FALSE(check_solution(f, target, norm(d), s, closure).has_value());
  }
}

TEST(SampleFinger, BudgetExhaustedKeepsPartialList) {
  const auto f = bent_finger();
  SamplerConfig cfg;
  cfg.max_attempts = 5000;
  cfg.batch_size = 1000;
  cfg.target_count = 1000;
  const auto res = sample_finger(f, f.contact0() + Vec2{0.3, 0.1}, norm(Vec2{0.3, 0.1}), cfg);
  EXPECT_TRUE(res.budget_exhausted);
  EXPECT_EQ(res.stats.attempts, 5000u);
  EXPECT_EQ(res.stats.batches, 5u);
  EXPECT_EQ(res.stats.accepted, res.solutions.size());
}

TEST(SampleFinger, DeterministicAndWorkerIndependent) {
  const auto f = bent_finger();
  SamplerConfig cfg;
  cfg.target_count = 120;
  cfg.batch_size = 512;
  const Vec2 target = f.contact0() + Vec2{0.2, 0.2};
  const auto a = sample_finger(f, target, norm(Vec2{0.2, 0.2}), cfg);
  const auto b = sample_finger(f, target, norm(Vec2{0.2, 0.2}), cfg);
  cfg.workers = 3;
  const auto c = sample_finger(f, target, norm(Vec2{0.2, 0.2}), cfg);
  EXPECT_TRUE(same(a.solutions, b.solutions));
  EXPECT_TRUE(same(a.solutions, c.solutions));
  EXPECT_EQ(a.stats.attempts, c.stats.attempts);
  cfg.seed = 8;
  EXPECT_FALSE(same(a.solutions, sample_finger(f, target, norm(Vec2{0.2, 0.2}), cfg).solutions));
}

TEST(SampleFinger, SingularityFilterCountsRejections) {
  const auto f = bent_finger();
  SamplerConfig cfg;
  cfg.target_count = 50;
  cfg.singularity_ratio = 0.2;  // generous floor so the filter bites
  const Vec2 target = f.contact0() + Vec2{0.3, 0.1};
  const auto res = sample_finger(f, target, norm(Vec2{0.3, 0.1}), cfg);
  EXPECT_GT(res.stats.rejected_singular, 0u);
  for (const auto& s : res.solutions) {
    EXPECT_GT(test::altitude(s.q1, s.q2, s.q3), 0.2 * f.total_length());
    EXPECT_GT(test::altitude(s.q2, s.q3, s.contact), 0.2 * f.total_length());
  }
}

TEST(SamplerConfig, Validation) {
  SamplerConfig cfg;
  cfg.epsilon_f = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.target_count = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.epsilon_len = -1;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(WorkspaceSweep, IdentityTaskGivesInitialConfiguration) {
  const auto f = bent_finger();
  const auto cloud = workspace_sweep(f, {{3.5, 0.3}, {}}, {Translate{}}, ContactUpdateMode::Geometric, {});
  ASSERT_EQ(cloud.points.size(), 1u);
  EXPECT_EQ(cloud.points[0].solution.q2, f.q2());
  EXPECT_EQ(cloud.points[0].task_index, 0u);
}

TEST(WorkspaceSweep, RollFamilyOnCircleObject) {
  // Finger touching a circle of radius 1.2 centered past its tip.
  const auto f = bent_finger();
  const ObjectPose obj{f.contact0() + Vec2{1.2, 0}, {}};
  std::vector<MotionTask> tasks;
  for (int deg = -10; deg <= 10; ++deg) tasks.push_back(Roll{Angle::degrees(deg)});
  SamplerConfig cfg;
  const auto a = workspace_sweep(f, obj, tasks, ContactUpdateMode::Geometric, cfg);
  const auto b = workspace_sweep(f, obj, tasks, ContactUpdateMode::Geometric, cfg);
  ASSERT_EQ(a.tasks.size(), 21u);
  EXPECT_GE(a.points.size(), 100u);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_EQ(a.points[i].task_index, b.points[i].task_index);
    EXPECT_EQ(a.points[i].solution.q2, b.points[i].solution.q2);
  }
  EXPECT_THROW(workspace_sweep(f, obj, {}, ContactUpdateMode::Geometric, cfg), Error);
}

TEST(WorkspaceSweep, PerTaskErrorsAreAnnotated) {
  const auto f = bent_finger();
  const ObjectPose obj{f.contact0() + Vec2{1, 0}, {}};
  const auto cloud = workspace_sweep(f, obj, {Translate{{10, 0}}, Translate{}},
                                     ContactUpdateMode::Geometric, {});
  ASSERT_EQ(cloud.tasks.size(), 2u);
  ASSERT_TRUE(cloud.tasks[0].error.has_value());
  EXPECT_EQ(*cloud.tasks[0].error, ErrorCode::Unreachable);
  EXPECT_FALSE(cloud.tasks[1].error.has_value());
  EXPECT_EQ(cloud.points.size(), 1u);
}
