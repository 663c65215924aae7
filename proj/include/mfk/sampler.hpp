#ifndef MFK_SAMPLER_HPP
#define MFK_SAMPLER_HPP

// Monte Carlo search for finger configurations: draw candidate joint
// positions, keep those whose displacements satisfy the cost band and whose
// links keep their lengths, reject near-singular chains.

#include <algorithm>
#include <array>
#include <cstdint>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mfk/cost.hpp"
#include "mfk/error.hpp"
#include "mfk/geometry.hpp"
#include "mfk/model.hpp"
#include "mfk/random.hpp"
#include "mfk/solution.hpp"

namespace mfk {

enum class SamplingStrategy {
  /// q2 and q3 drawn uniformly in disks around their initial positions;
  /// all three link lengths tested against a relative tolerance.
  PaperRejection,
  /// q3 drawn on the circle of radius l3 about the contact target, q2 on the
  /// circle of radius l2 about q3 and moved to the nearest point where the
  /// base link closes; only the closure residual remains to test.
  ManifoldClosure,
};

struct SamplerConfig {
  SamplingStrategy strategy = SamplingStrategy::ManifoldClosure;
  double epsilon_f = kDefaultCostBand;
  /// Relative link-length tolerance; strategy default when unset.
  std::optional<double> epsilon_len;
  std::uint64_t max_attempts = 1'000'000;
  std::size_t target_count = 50;
  std::uint64_t seed = 7;
  /// PaperRejection disk radius; twice the finger length when unset.
  std::optional<double> box_radius;
  /// Minimum triangle altitude over consecutive joint triples, as a
  /// fraction of the total finger length.
  double singularity_ratio = 1e-6;
  /// Concurrent batches; 0 picks the hardware concurrency. Output does not
  /// depend on this value.
  unsigned workers = 1;
  std::uint64_t batch_size = 4096;

  double effective_epsilon_len() const {
    if (epsilon_len) return *epsilon_len;
    return strategy == SamplingStrategy::PaperRejection ? 1e-3 : 1e-6;
  }

  double effective_box_radius(const FingerChain& finger) const {
    return box_radius ? *box_radius : 2.0 * finger.total_length();
  }

  void validate() const {
    auto bad = [](const std::string& what) { throw Error(ErrorCode::ValidationError, what); };
    if (!(epsilon_f > 0.0)) bad("epsilon_f must be positive");
    if (!(effective_epsilon_len() > 0.0)) bad("epsilon_len must be positive");
    if (box_radius && !(*box_radius > 0.0)) bad("box_radius must be positive");
    if (!(singularity_ratio >= 0.0)) bad("singularity_ratio must be nonnegative");
    if (max_attempts == 0) bad("max_attempts must be positive");
    if (target_count == 0) bad("target_count must be at least 1");
    if (batch_size == 0) bad("batch_size must be positive");
  }
};

struct SamplerStats {
  std::uint64_t attempts = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected_cost = 0;
  std::uint64_t rejected_length = 0;
  std::uint64_t rejected_singular = 0;
  std::uint64_t batches = 0;

  SamplerStats& operator+=(const SamplerStats& o) {
    attempts += o.attempts;
    accepted += o.accepted;
    rejected_cost += o.rejected_cost;
    rejected_length += o.rejected_length;
    rejected_singular += o.rejected_singular;
    batches += o.batches;
    return *this;
  }

  double acceptance_rate() const {
    return attempts == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(attempts);
  }
};

struct SampleResult {
  std::vector<FingerSolution> solutions;
  SamplerStats stats;
  /// Set when the attempt budget ran out before target_count acceptances;
  /// `solutions` then holds the partial list.
  bool budget_exhausted = false;

  bool ok() const { return !budget_exhausted; }
};

/// Whether the chain (base, q2, q3, contact) is kinematically well
/// conditioned: no consecutive joint triple is near collinear.
inline bool well_conditioned(Vec2 base, Vec2 q2, Vec2 q3, Vec2 contact, double total_length,
                             double ratio) {
  const double floor = ratio * total_length;
  return min_altitude(base, q2, q3) > floor && min_altitude(q2, q3, contact) > floor;
}

inline FingerSolution initial_solution(const FingerChain& finger) {
  FingerSolution s;
  s.finger_id = finger.id();
  s.q1 = finger.base();
  s.q2 = finger.q2();
  s.q3 = finger.q3();
  s.contact = finger.contact0();
  return s;
}

namespace detail {

/// Point on the circle of radius `l2` about `q3` nearest (in angle) to the
/// drawn angle `psi` whose distance from `base` is `l1`. Empty when the two
/// circles do not meet.
inline std::optional<Vec2> close_base_link(Vec2 base, Vec2 q3, double l1, double l2, double psi) {
  const Vec2 w = q3 - base;
  const double wn = norm(w);
  if (wn == 0.0) return std::nullopt;
  const double arg = (l1 * l1 - wn * wn - l2 * l2) / (2.0 * l2 * wn);
  if (arg < -1.0 || arg > 1.0) return std::nullopt;
  const double offset = std::acos(arg);
  const double axis = heading(w);
  const double a = axis + offset;
  const double b = axis - offset;
  const double da = std::abs(normalize_angle(psi - a));
  const double db = std::abs(normalize_angle(psi - b));
  return q3 + l2 * unit(da <= db ? a : b);
}

inline SampleResult run_batch(const FingerChain& finger, Vec2 target, double delta_norm,
                              const SamplerConfig& cfg, std::uint64_t batch,
                              std::uint64_t attempts) {
  SampleResult out;
  Rng rng(derive_seed(cfg.seed, batch));
  const auto& l = finger.lengths();
  const double eps_len = cfg.effective_epsilon_len();
  const double radius = cfg.effective_box_radius(finger);
  const Vec2 base = finger.base();
  out.stats.batches = 1;

  for (std::uint64_t i = 0; i < attempts && out.solutions.size() < cfg.target_count; ++i) {
    ++out.stats.attempts;
    Vec2 q2, q3;
    bool lengths_ok = true;
    if (cfg.strategy == SamplingStrategy::ManifoldClosure) {
      q3 = rng.on_circle(target, l[2]);
      const double psi = rng.angle();
      const auto closed = close_base_link(base, q3, l[0], l[1], psi);
      if (!closed) {
        ++out.stats.rejected_length;
        continue;
      }
      q2 = *closed;
      lengths_ok = std::abs(distance(q2, base) - l[0]) <= eps_len * l[0];
    } else {
      q2 = rng.in_disk(finger.q2(), radius);
      q3 = rng.in_disk(finger.q3(), radius);
    }

    const Displacement e = displacement(finger, q2, q3);
    const CostInput ci{delta_norm, e.e3, e.e2};
    if (!accepts(ci, cfg.epsilon_f)) {
      ++out.stats.rejected_cost;
      continue;
    }
    if (cfg.strategy == SamplingStrategy::PaperRejection) {
      lengths_ok = std::abs(distance(q3, target) - l[2]) <= eps_len * l[2] &&
                   std::abs(distance(q3, q2) - l[1]) <= eps_len * l[1] &&
                   std::abs(distance(q2, base) - l[0]) <= eps_len * l[0];
    }
    if (!lengths_ok) {
      ++out.stats.rejected_length;
      continue;
    }
    if (!well_conditioned(base, q2, q3, target, finger.total_length(), cfg.singularity_ratio)) {
      ++out.stats.rejected_singular;
      continue;
    }
    FingerSolution s;
    s.finger_id = finger.id();
    s.q1 = base;
    s.q2 = q2;
    s.q3 = q3;
    s.contact = target;
    s.e2 = e.e2;
    s.e3 = e.e3;
    s.cost = cost_closed_form(ci);
    out.solutions.push_back(s);
    ++out.stats.accepted;
  }
  return out;
}

}  // namespace detail

/// Samples up to `cfg.target_count` configurations of `finger` that place
/// its tip at `target` while moving the object by `delta_norm`.
///
/// Attempts are split into fixed-size batches, each with its own derived
/// seed; batches may run concurrently but are merged in batch order, so the
/// result depends only on the inputs and the seed. A zero-motion request
/// returns the initial configuration unchanged.
inline SampleResult sample_finger(const FingerChain& finger, Vec2 target, double delta_norm,
                                  const SamplerConfig& cfg) {
  cfg.validate();
  if (!reachability_check(finger, target)) {
    throw Error(ErrorCode::Unreachable,
                "finger " + std::to_string(finger.id()) + ": contact target at distance " +
                    std::to_string(distance(target, finger.base())) + " is outside reach [" +
                    std::to_string(finger.min_reach()) + ", " +
                    std::to_string(finger.total_length()) + "]");
  }

  SampleResult result;
  if (delta_norm == 0.0 && target == finger.contact0()) {
    result.solutions.push_back(initial_solution(finger));
    result.stats.accepted = 1;
    return result;
  }

  const unsigned workers =
      cfg.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.workers;
  const std::uint64_t total_batches = (cfg.max_attempts + cfg.batch_size - 1) / cfg.batch_size;
  auto batch_attempts = [&](std::uint64_t b) {
    return std::min(cfg.batch_size, cfg.max_attempts - b * cfg.batch_size);
  };

  std::uint64_t next = 0;
  while (next < total_batches && result.solutions.size() < cfg.target_count) {
    const std::uint64_t wave_end = std::min<std::uint64_t>(total_batches, next + workers);
    std::vector<SampleResult> wave;
    if (workers == 1) {
      wave.push_back(detail::run_batch(finger, target, delta_norm, cfg, next, batch_attempts(next)));
    } else {
      std::vector<std::future<SampleResult>> futures;
      for (std::uint64_t b = next; b < wave_end; ++b) {
        futures.push_back(std::async(std::launch::async, [&, b] {
          return detail::run_batch(finger, target, delta_norm, cfg, b, batch_attempts(b));
        }));
      }
      for (auto& f : futures) wave.push_back(f.get());
    }
    for (auto& batch : wave) {
      if (result.solutions.size() >= cfg.target_count) break;
      result.stats += batch.stats;
      for (auto& s : batch.solutions) {
        if (result.solutions.size() >= cfg.target_count) break;
        result.solutions.push_back(s);
      }
    }
    next += wave.size();
  }
  result.stats.accepted = result.solutions.size();
  result.budget_exhausted = result.solutions.size() < cfg.target_count;
  return result;
}

/// Re-checks a stored configuration against the sampler's acceptance rules.
/// Returns the first violated rule, or nothing when the solution holds.
inline std::optional<std::string> check_solution(const FingerChain& finger, Vec2 target,
                                                 double delta_norm, const FingerSolution& s,
                                                 const SamplerConfig& cfg) {
  const auto& l = finger.lengths();
  const double eps_len = cfg.effective_epsilon_len();
  const double pos_tol = 1e-9 * finger.total_length();
  if (s.finger_id != finger.id()) return "finger id mismatch";
  if (distance(s.q1, finger.base()) > pos_tol) return "palm joint moved";
  if (distance(s.contact, target) > pos_tol) return "tip is not at the contact target";
  const std::array<double, 3> got = {distance(s.q1, s.q2), distance(s.q2, s.q3),
                                     distance(s.q3, s.contact)};
  for (std::size_t j = 0; j < 3; ++j) {
    if (std::abs(got[j] - l[j]) > eps_len * l[j]) return "link " + std::to_string(j + 1) + " length";
  }
  const Displacement e = displacement(finger, s.q2, s.q3);
  if (std::abs(e.e2 - s.e2) > pos_tol || std::abs(e.e3 - s.e3) > pos_tol) {
    return "stored displacements disagree with joint positions";
  }
  if (delta_norm == 0.0 && e.e2 == 0.0 && e.e3 == 0.0) return std::nullopt;
  if (!accepts({delta_norm, e.e3, e.e2}, cfg.epsilon_f)) return "cost outside band";
  if (!well_conditioned(s.q1, s.q2, s.q3, s.contact, finger.total_length(), cfg.singularity_ratio)) {
    return "near-singular chain";
  }
  return std::nullopt;
}

struct SweepPoint {
  std::size_t task_index = 0;
  FingerSolution solution;
};

struct SweepAnnotation {
  std::size_t task_index = 0;
  std::optional<ErrorCode> error;
  std::string message;
  SamplerStats stats;
};

struct SweepCloud {
  std::vector<SweepPoint> points;
  std::vector<SweepAnnotation> tasks;
};

/// Accepted configurations of one finger across a family of tasks. Each task
/// samples with its own derived seed; per-task failures are recorded in the
/// annotations and do not stop the sweep.
inline SweepCloud workspace_sweep(const FingerChain& finger, const ObjectPose& object0,
                                  const std::vector<MotionTask>& tasks, ContactUpdateMode mode,
                                  const SamplerConfig& cfg) {
  if (tasks.empty()) throw Error(ErrorCode::ValidationError, "sweep needs at least one task");
  SweepCloud cloud;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    SweepAnnotation note;
    note.task_index = t;
    try {
      const Vec2 target = contact_target(finger, object0, tasks[t], mode);
      SamplerConfig task_cfg = cfg;
      task_cfg.seed = derive_seed(cfg.seed, t);
      auto res = sample_finger(finger, target, distance(target, finger.contact0()), task_cfg);
      note.stats = res.stats;
      if (res.budget_exhausted) {
        note.error = ErrorCode::BudgetExhausted;
        note.message = std::to_string(res.solutions.size()) + " of " +
                       std::to_string(cfg.target_count) + " configurations found";
      }
      for (auto& s : res.solutions) cloud.points.push_back({t, s});
    } catch (const Error& e) {
      note.error = e.code();
      note.message = e.what();
    }
    cloud.tasks.push_back(std::move(note));
  }
  return cloud;
}

}  // namespace mfk

#endif  // MFK_SAMPLER_HPP
