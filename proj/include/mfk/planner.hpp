#ifndef MFK_PLANNER_HPP
#define MFK_PLANNER_HPP

// Multi-finger planning: move the object, sample each finger, allocate the
// per-finger strategy weights, recover joint angles, then cluster and pick
// one configuration per finger.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mfk/cost.hpp"
#include "mfk/error.hpp"
#include "mfk/joint_angles.hpp"
#include "mfk/kmeans.hpp"
#include "mfk/model.hpp"
#include "mfk/sampler.hpp"

namespace mfk {

/// Weights gamma_i with sum_i gamma_i f_i = gamma |dP|.
struct WeightAllocation {
  double gamma = 1.0;
  std::vector<double> gammas;
  std::vector<double> costs;
  double delta_norm = 0.0;

  double residual() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < gammas.size(); ++i) sum += gammas[i] * costs[i];
    return sum - gamma * delta_norm;
  }
};

/// Minimum-norm solution of the single linear constraint
/// sum_i gamma_i f_i = gamma |dP|, i.e. gamma_i = gamma |dP| f_i / sum_j f_j^2.
/// A zero-motion task gets all-zero weights.
inline WeightAllocation allocate_weights(const std::vector<double>& costs, double delta_norm,
                                         double gamma = 1.0) {
  if (costs.empty()) throw Error(ErrorCode::NoFingers, "no finger costs to weight");
  WeightAllocation w{gamma, std::vector<double>(costs.size(), 0.0), costs, delta_norm};
  if (delta_norm == 0.0) return w;
  double sum_sq = 0.0;
  for (double f : costs) {
    if (!std::isfinite(f) || f < 0.0) {
      throw Error(ErrorCode::DegenerateCosts, "finger costs must be finite and nonnegative");
    }
    sum_sq += f * f;
  }
  if (sum_sq < 1e-18) throw Error(ErrorCode::DegenerateCosts, "finger costs are all ~0");
  for (std::size_t i = 0; i < costs.size(); ++i) w.gammas[i] = gamma * delta_norm * costs[i] / sum_sq;
  return w;
}

/// Row of `samples` nearest the centroid of the most populated cluster.
/// Ties go to the lowest cluster index, then the lowest sample index.
inline std::size_t select_strategy(const std::vector<Point>& samples, const ClusterModel& model) {
  const auto sizes = model.cluster_sizes();
  const std::size_t biggest =
      static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double d = squared_distance(samples[i], model.centroids[biggest]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

enum class ClusterSpace {
  /// Weight vectors for multi-finger scenes, joint positions for one finger.
  Auto,
  Weights,
  /// (q2, q3) of the first finger, flattened to 4 coordinates.
  Joints,
};

struct PlannerConfig {
  SamplerConfig sampler;
  std::size_t k = 4;
  ContactUpdateMode mode = ContactUpdateMode::Geometric;
  ClusterSpace space = ClusterSpace::Auto;
  SeedMode seeding = SeedMode::TaskInterpolated;
  double gamma = 1.0;
};

struct ManipulationPlan {
  GraspScene scene;
  MotionTask task;
  ObjectPose target_pose;
  ContactUpdateMode mode = ContactUpdateMode::Geometric;
  /// |dP| for translations; mean contact chord for rolls.
  double motion_norm = 0.0;
  std::vector<Vec2> contact_targets{};
  /// Accepted configurations, one list per finger, angles filled in.
  std::vector<std::vector<FingerSolution>> per_finger{};
  std::vector<SamplerStats> stats{};
  /// Configurations dropped because angle recovery failed, per finger.
  std::vector<std::size_t> dropped{};
  /// Weights from each finger's minimum-cost configuration.
  WeightAllocation weights{};
  /// Weight vector of each configuration row (row s takes configuration s
  /// of every finger).
  std::vector<Point> weight_samples{};
  ClusterSpace cluster_space = ClusterSpace::Weights;
  std::vector<Point> cluster_samples{};
  std::optional<ClusterModel> clusters{};
  /// Selected configuration index per finger.
  std::vector<std::size_t> selected{};

  const FingerSolution& selected_solution(std::size_t finger) const {
    return per_finger[finger][selected[finger]];
  }
};

/// Motion magnitude entering the weight equation.
inline double motion_norm(const MotionTask& task, const GraspScene& scene,
                          const std::vector<Vec2>& targets) {
  if (const auto* t = std::get_if<Translate>(&task)) return norm(t->delta);
  double sum = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    sum += distance(targets[i], scene.fingers()[i].contact0());
  }
  return sum / static_cast<double>(targets.size());
}

inline Point joint_features(const FingerSolution& s) { return {s.q2.x, s.q2.y, s.q3.x, s.q3.y}; }

/// Sample, weight, recover and cluster. Throws Error(Unreachable) or
/// Error(BudgetExhausted) naming the finger that failed.
inline ManipulationPlan plan(const GraspScene& scene, const MotionTask& task,
                             const PlannerConfig& cfg) {
  ManipulationPlan out{scene, task, object_target(scene.object0(), task)};
  out.mode = cfg.mode;
  const auto& fingers = scene.fingers();

  for (const auto& f : fingers) {
    const Vec2 target = contact_target(f, scene.object0(), task, cfg.mode);
    if (!reachability_check(f, target)) {
      throw Error(ErrorCode::Unreachable,
                  "finger " + std::to_string(f.id()) + ": contact target (" +
                      std::to_string(target.x) + ", " + std::to_string(target.y) +
                      ") is outside the finger workspace");
    }
    out.contact_targets.push_back(target);
  }
  out.motion_norm = motion_norm(task, scene, out.contact_targets);

  for (std::size_t i = 0; i < fingers.size(); ++i) {
    const auto& f = fingers[i];
    SamplerConfig scfg = cfg.sampler;
    scfg.seed = derive_seed(cfg.sampler.seed, i);
    const Vec2 target = out.contact_targets[i];
    SampleResult res = sample_finger(f, target, distance(target, f.contact0()), scfg);
    if (res.budget_exhausted) {
      throw Error(ErrorCode::BudgetExhausted,
                  "finger " + std::to_string(f.id()) + ": " + std::to_string(res.solutions.size()) +
                      " of " + std::to_string(scfg.target_count) + " configurations after " +
                      std::to_string(res.stats.attempts) + " attempts (cost rejections " +
                      std::to_string(res.stats.rejected_cost) + ", length rejections " +
                      std::to_string(res.stats.rejected_length) + ", singular rejections " +
                      std::to_string(res.stats.rejected_singular) + ")");
    }
    std::vector<FingerSolution> kept;
    std::size_t dropped = 0;
    for (auto& s : res.solutions) {
      try {
        s.paper_angles = recover_all(f, s, AngleMethod::PaperLawOfCosines);
        s.direct_angles = recover_all(f, s, AngleMethod::DirectFromPositions);
        kept.push_back(s);
      } catch (const Error&) {
        ++dropped;
      }
    }
    if (kept.empty()) {
      throw Error(ErrorCode::BudgetExhausted,
                  "finger " + std::to_string(f.id()) + ": no configuration survived angle recovery");
    }
    out.per_finger.push_back(std::move(kept));
    out.stats.push_back(res.stats);
    out.dropped.push_back(dropped);
  }

  std::vector<double> best_costs;
  for (const auto& list : out.per_finger) {
    best_costs.push_back(std::min_element(list.begin(), list.end(), [](const auto& a, const auto& b) {
                           return a.cost < b.cost;
                         })->cost);
  }
  out.weights = allocate_weights(best_costs, out.motion_norm, cfg.gamma);

  std::size_t rows = out.per_finger.front().size();
  for (const auto& list : out.per_finger) rows = std::min(rows, list.size());
  for (std::size_t s = 0; s < rows; ++s) {
    std::vector<double> costs;
    for (const auto& list : out.per_finger) costs.push_back(list[s].cost);
    out.weight_samples.push_back(allocate_weights(costs, out.motion_norm, cfg.gamma).gammas);
  }

  out.cluster_space = cfg.space;
  if (out.cluster_space == ClusterSpace::Auto) {
    out.cluster_space = fingers.size() > 1 ? ClusterSpace::Weights : ClusterSpace::Joints;
  }
  if (out.cluster_space == ClusterSpace::Weights) {
    out.cluster_samples = out.weight_samples;
  } else {
    for (std::size_t s = 0; s < rows; ++s) {
      out.cluster_samples.push_back(joint_features(out.per_finger.front()[s]));
    }
  }

  const std::size_t k = std::min(cfg.k, count_distinct(out.cluster_samples));
  std::optional<TaskAnchors> anchors;
  anchors = TaskAnchors{scene.object0().position, out.target_pose.position};
  out.clusters = kmeans(out.cluster_samples, k, cfg.seeding,
                        derive_seed(cfg.sampler.seed, 0xc1057e5ULL), anchors);
  const std::size_t row = select_strategy(out.cluster_samples, *out.clusters);
  out.selected.assign(fingers.size(), row);
  return out;
}

}  // namespace mfk

#endif  // MFK_PLANNER_HPP
