#ifndef MFK_SCENARIO_HPP
#define MFK_SCENARIO_HPP

// Experimental scenarios: object profiles, 6-DOF pose settings projected to
// the working plane, grasp synthesis for 2F / 3F / B2F hands, and the
// kinematic error and success metrics.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mfk/error.hpp"
#include "mfk/geometry.hpp"
#include "mfk/joint_angles.hpp"
#include "mfk/model.hpp"
#include "mfk/planner.hpp"
#include "mfk/random.hpp"

namespace mfk {

enum class ShapeKind { Ellipse, Sphere, Cylinder, Cone, Cube };

inline constexpr std::array kAllShapes = {ShapeKind::Ellipse, ShapeKind::Sphere,
                                          ShapeKind::Cylinder, ShapeKind::Cone, ShapeKind::Cube};

inline std::string to_string(ShapeKind k) {
  switch (k) {
    case ShapeKind::Ellipse: return "Ellipse";
    case ShapeKind::Sphere: return "Sphere";
    case ShapeKind::Cylinder: return "Cylinder";
    case ShapeKind::Cone: return "Cone";
    case ShapeKind::Cube: return "Cube";
  }
  return "?";
}

/// Planar cross-section of an object in its own frame, centered on the
/// point the object rolls about. Ellipse: (a, b) semi-axes. Sphere and
/// Cylinder: circle of radius `a`. Cone: isosceles triangle with base `a`
/// and height `b`, centroid at the origin, apex along +y. Cube: square of
/// side `a`.
struct ObjectShape {
  ShapeKind kind = ShapeKind::Sphere;
  double a = 1.0;
  double b = 1.0;

  static ObjectShape ellipse(double semi_a, double semi_b) { return {ShapeKind::Ellipse, semi_a, semi_b}; }
  static ObjectShape sphere(double r) { return {ShapeKind::Sphere, r, r}; }
  static ObjectShape cylinder(double r) { return {ShapeKind::Cylinder, r, r}; }
  static ObjectShape cone(double base, double height) { return {ShapeKind::Cone, base, height}; }
  static ObjectShape cube(double side) { return {ShapeKind::Cube, side, side}; }

  void validate() const {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a + b)) {
      throw Error(ErrorCode::ValidationError, "shape dimensions must be positive");
    }
  }

  /// Polygon vertices (counter-clockwise) for Cone and Cube; empty otherwise.
  std::vector<Vec2> polygon() const {
    if (kind == ShapeKind::Cone) return {{-a / 2, -b / 3}, {a / 2, -b / 3}, {0.0, 2 * b / 3}};
    if (kind == ShapeKind::Cube) return {{-a / 2, -a / 2}, {a / 2, -a / 2}, {a / 2, a / 2}, {-a / 2, a / 2}};
    return {};
  }

  bool is_round() const { return kind == ShapeKind::Sphere || kind == ShapeKind::Cylinder; }

  /// Boundary point hit by the ray from the origin at `radians` (local frame).
  Vec2 boundary_point(double radians) const {
    const Vec2 d = unit(radians);
    if (is_round()) return a * d;
    if (kind == ShapeKind::Ellipse) {
      const double r = 1.0 / std::sqrt(d.x * d.x / (a * a) + d.y * d.y / (b * b));
      return r * d;
    }
    const auto poly = polygon();
    double best = kInfinity;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec2 p = poly[i];
      const Vec2 e = poly[(i + 1) % poly.size()] - p;
      const double den = cross(d, e);
      if (std::abs(den) < 1e-15) continue;
      const double t = cross(p, e) / den;      // along the ray
      const double s = cross(p, d) / den;      // along the edge
      if (t > 0.0 && s >= -1e-12 && s <= 1.0 + 1e-12) best = std::min(best, t);
    }
    return best * d;
  }

  /// Distance-like residual of a local-frame point from the boundary.
  double boundary_residual(Vec2 p) const {
    if (is_round()) return std::abs(norm(p) - a);
    if (kind == ShapeKind::Ellipse) {
      return std::abs(std::sqrt(p.x * p.x / (a * a) + p.y * p.y / (b * b)) - 1.0) * std::min(a, b);
    }
    const auto poly = polygon();
    double best = kInfinity;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec2 s0 = poly[i];
      const Vec2 e = poly[(i + 1) % poly.size()] - s0;
      const double t = std::clamp(dot(p - s0, e) / dot(e, e), 0.0, 1.0);
      best = std::min(best, distance(p, s0 + t * e));
    }
    return best;
  }
};

enum class CaseLabel { TwoFinger, ThreeFinger, BimanualTwoFinger };

inline std::string to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::TwoFinger: return "2F";
    case CaseLabel::ThreeFinger: return "3F";
    case CaseLabel::BimanualTwoFinger: return "B2F";
  }
  return "?";
}

/// 6-DOF object setting: position in cm, orientation angles in degrees.
struct Pose6 {
  double x = 0, y = 0, z = 0;
  double rho = 0, beta = 0, gamma = 0;
};

enum class PlaneAxes { XY, XZ, YZ };
enum class OrientationAxis { Rho, Beta, Gamma };

struct Projection {
  PlaneAxes position = PlaneAxes::XY;
  OrientationAxis orientation = OrientationAxis::Beta;

  Vec2 position_of(const Pose6& p) const {
    switch (position) {
      case PlaneAxes::XY: return {p.x, p.y};
      case PlaneAxes::XZ: return {p.x, p.z};
      case PlaneAxes::YZ: return {p.y, p.z};
    }
    return {p.x, p.y};
  }
  double orientation_deg(const Pose6& p) const {
    switch (orientation) {
      case OrientationAxis::Rho: return p.rho;
      case OrientationAxis::Beta: return p.beta;
      case OrientationAxis::Gamma: return p.gamma;
    }
    return p.beta;
  }
};

/// Parameters for synthesized fingers.
struct HandParams {
  std::array<double, 3> link_lengths{5.0, 4.0, 3.0};
  /// Initial bend of joints 2 and 3, degrees.
  double bend_deg = 40.0;
  /// Half-angle between the two contacts of one hand in B2F grasps, degrees.
  double spread_deg = 20.0;
};

/// A finger given point by point instead of synthesized.
struct ExplicitFinger {
  int id = 0;
  Vec2 base, q2, q3, contact;
};

struct ScenarioSpec {
  std::string name;
  ObjectShape shape;
  CaseLabel case_label = CaseLabel::TwoFinger;
  Pose6 initial;
  Pose6 desired;
  Projection projection;
  HandParams hand;
  std::vector<ExplicitFinger> fingers;
};

struct BuiltScenario {
  GraspScene scene;
  MotionTask task;
};

/// Contact directions in the object frame for each case, degrees.
inline std::vector<double> contact_directions(CaseLabel c, double spread_deg) {
  switch (c) {
    case CaseLabel::TwoFinger: return {0.0, 180.0};
    case CaseLabel::ThreeFinger: return {90.0, 210.0, 330.0};
    case CaseLabel::BimanualTwoFinger:
      return {-spread_deg, spread_deg, 180.0 - spread_deg, 180.0 + spread_deg};
  }
  return {};
}

inline MotionTask task_from_poses(const ScenarioSpec& spec) {
  const Vec2 dp = spec.projection.position_of(spec.desired) - spec.projection.position_of(spec.initial);
  const double dphi = spec.projection.orientation_deg(spec.desired) -
                      spec.projection.orientation_deg(spec.initial);
  const bool moves = dp != Vec2{};
  const bool turns = normalize_angle(deg_to_rad(dphi)) != 0.0;
  if (moves && turns) {
    throw Error(ErrorCode::ValidationError,
                spec.name + ": desired pose both translates and rotates; plan them as separate tasks");
  }
  if (turns) return Roll{Angle::degrees(dphi)};
  return Translate{dp};
}

/// Finger whose tip touches `contact`, approaching along -`outward`.
inline FingerChain synthesize_finger(int id, Vec2 contact, Vec2 outward, const HandParams& hand,
                                     double bend_sign) {
  const auto& l = hand.link_lengths;
  const double bend = bend_sign * deg_to_rad(hand.bend_deg);
  const ChainPoints local = forward_kinematics({0, 0}, {0.0, bend, 2.0 * bend}, l);
  const double turn = heading(-outward) - heading(local.contact);
  const Vec2 base = contact - rotate(local.contact, turn);
  return FingerChain(id, base, {base + rotate(local.q2, turn), base + rotate(local.q3, turn)},
                     contact, l);
}

inline BuiltScenario build_scenario(const ScenarioSpec& spec) {
  spec.shape.validate();
  const Vec2 center = spec.projection.position_of(spec.initial);
  const ObjectPose object0{center, Angle::degrees(spec.projection.orientation_deg(spec.initial))};
  const MotionTask task = task_from_poses(spec);

  std::vector<FingerChain> fingers;
  if (!spec.fingers.empty()) {
    for (const auto& f : spec.fingers) {
      fingers.push_back(FingerChain::from_points(f.id, f.base, f.q2, f.q3, f.contact));
    }
    return {GraspScene(object0, std::move(fingers)), task};
  }

  for (double l : spec.hand.link_lengths) {
    if (!(l > 0.0)) throw Error(ErrorCode::ValidationError, "link lengths must be positive");
  }
  const auto dirs = contact_directions(spec.case_label, spec.hand.spread_deg);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const double local = deg_to_rad(dirs[i]);
    const Vec2 contact = center + rotate(spec.shape.boundary_point(local), object0.orientation.rad());
    const Vec2 outward = contact - center;
    // Curl toward the side the contact moves to; the cost band is out of
    // reach on the closure curve of a finger bent the other way.
    const FingerChain probe = synthesize_finger(static_cast<int>(i), contact, outward, spec.hand, 1.0);
    const Vec2 target = contact_target(probe, object0, task, ContactUpdateMode::Geometric);
    const double side = cross(outward, target - contact);
    double bend_sign = (i % 2 == 0) ? 1.0 : -1.0;
    if (std::abs(side) > 1e-12 * norm(outward) * norm(target - contact)) bend_sign = side > 0 ? 1.0 : -1.0;
    FingerChain f = synthesize_finger(static_cast<int>(i), contact, outward, spec.hand, bend_sign);
    if (!reachability_check(f, target)) {
      throw Error(ErrorCode::InfeasibleGrasp,
                  spec.name + ": finger " + std::to_string(i) + " cannot reach its contact target");
    }
    fingers.push_back(f);
  }
  return {GraspScene(object0, std::move(fingers)), task};
}

/// Planar rigid motion x -> center + R(rotation) (x - center) + translation.
struct RigidMotion {
  Vec2 translation;
  Angle rotation;
};

/// Least-squares rigid motion taking `before` onto `after`, expressed about
/// `center`. With fewer than two distinct points the rotation is zero and
/// the translation is the mean displacement.
inline RigidMotion rigid_fit(Vec2 center, const std::vector<Vec2>& before,
                             const std::vector<Vec2>& after) {
  const std::size_t n = before.size();
  Vec2 mb, ma;
  for (std::size_t i = 0; i < n; ++i) {
    mb += before[i];
    ma += after[i];
  }
  mb = mb / static_cast<double>(n);
  ma = ma / static_cast<double>(n);
  double sc = 0.0, sd = 0.0, spread = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 u = before[i] - mb;
    const Vec2 v = after[i] - ma;
    sc += cross(u, v);
    sd += dot(u, v);
    spread += dot(u, u);
  }
  const double theta = spread > 1e-24 ? std::atan2(sc, sd) : 0.0;
  const Vec2 t = ma - center - rotate(mb - center, theta);
  return {t, Angle::radians(theta)};
}

inline constexpr double kDefaultErrorThreshold = 0.15;

struct RunMetrics {
  double relative_error = 0.0;
  /// Plan produced and relative error within the threshold. A kinematic
  /// proxy: no dynamics, so no falls are simulated.
  bool success = false;
  std::uint64_t attempts = 0;
  double acceptance_rate = 0.0;
  double wall_time_ms = 0.0;
  Vec2 achieved_translation;
  Angle achieved_rotation;
  std::optional<ErrorCode> failure;
  std::string diagnostics;
};

/// A plan, or the error that prevented one.
struct PlanOutcome {
  std::optional<ManipulationPlan> plan;
  std::optional<ErrorCode> failure;
  std::string diagnostics;
  double wall_time_ms = 0.0;
};

inline PlanOutcome try_plan(const GraspScene& scene, const MotionTask& task, const PlannerConfig& cfg) {
  PlanOutcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    out.plan = plan(scene, task, cfg);
  } catch (const Error& e) {
    out.failure = e.code();
    out.diagnostics = e.what();
  }
  out.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

/// Object motion achieved by the selected configurations: each finger's
/// joint deltas are replayed through forward kinematics and the resulting
/// contact set is rigidly fitted against the initial contacts.
inline RigidMotion achieved_motion(const ManipulationPlan& p) {
  const auto& fingers = p.scene.fingers();
  std::vector<Vec2> before, after;
  for (std::size_t i = 0; i < fingers.size(); ++i) {
    const auto& s = p.selected_solution(i);
    const JointAngles d = s.direct_angles ? *s.direct_angles
                                          : recover_all(fingers[i], s, AngleMethod::DirectFromPositions);
    before.push_back(fingers[i].contact0());
    after.push_back(apply_joint_deltas(fingers[i], d).contact);
  }
  const Vec2 center = p.scene.object0().position;
  if (before.size() == 1 && !is_translate(p.task)) {
    return {{}, signed_turn(before[0] - center, after[0] - center)};
  }
  return rigid_fit(center, before, after);
}

inline RunMetrics evaluate(const PlanOutcome& outcome, const MotionTask& task,
                           double threshold = kDefaultErrorThreshold) {
  RunMetrics m;
  m.wall_time_ms = outcome.wall_time_ms;
  if (!outcome.plan) {
    // No plan: the object does not move, so the achieved motion is zero.
    m.relative_error = is_identity(task) ? 0.0 : 1.0;
    m.success = false;
    m.failure = outcome.failure;
    m.diagnostics = outcome.diagnostics;
    return m;
  }
  const auto& p = *outcome.plan;
  for (const auto& s : p.stats) {
    m.attempts += s.attempts;
    m.acceptance_rate += static_cast<double>(s.accepted);
  }
  m.acceptance_rate = m.attempts == 0 ? 1.0 : m.acceptance_rate / static_cast<double>(m.attempts);

  const RigidMotion got = achieved_motion(p);
  m.achieved_translation = got.translation;
  m.achieved_rotation = got.rotation;
  if (is_identity(task)) {
    m.relative_error = 0.0;
  } else if (const auto* t = std::get_if<Translate>(&task)) {
    m.relative_error = distance(got.translation, t->delta) / norm(t->delta);
  } else {
    const double phi = std::get<Roll>(task).phi.rad();
    m.relative_error = std::abs(normalize_angle(got.rotation.rad() - phi)) / std::abs(phi);
  }
  m.success = m.relative_error <= threshold;
  if (!m.success) m.diagnostics = "relative error above threshold";
  return m;
}

struct SuiteCell {
  std::string scenario;
  ShapeKind shape = ShapeKind::Sphere;
  CaseLabel case_label = CaseLabel::TwoFinger;
  std::size_t runs = 0;
  std::size_t successes = 0;
  std::size_t failures = 0;  ///< runs without a plan
  double mean_relative_error = 0.0;
  double max_relative_error = 0.0;
  double mean_attempts = 0.0;
  std::vector<std::string> diagnostics;

  double success_rate() const {
    return runs == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(runs);
  }
};

struct SuiteReport {
  std::size_t repetitions = 0;
  std::uint64_t base_seed = 0;
  std::vector<SuiteCell> cells;
};

/// Runs every scenario `repetitions` times with derived seeds and folds the
/// metrics into one cell per scenario. Errors are recorded, never thrown.
inline SuiteReport run_suite(const std::vector<ScenarioSpec>& specs, std::size_t repetitions,
                             std::uint64_t base_seed, const PlannerConfig& cfg,
                             double threshold = kDefaultErrorThreshold) {
  if (specs.empty()) throw Error(ErrorCode::ValidationError, "suite needs at least one scenario");
  if (repetitions == 0) throw Error(ErrorCode::ValidationError, "repetitions must be positive");
  SuiteReport report{repetitions, base_seed, {}};
  for (std::size_t i = 0; i < specs.size(); ++i) {
    SuiteCell cell;
    cell.scenario = specs[i].name;
    cell.shape = specs[i].shape.kind;
    cell.case_label = specs[i].case_label;
    std::optional<BuiltScenario> built;
    std::string build_error;
    try {
      built = build_scenario(specs[i]);
    } catch (const Error& e) {
      build_error = e.what();
    }
    double err_sum = 0.0, att_sum = 0.0;
    for (std::size_t r = 0; r < repetitions; ++r) {
      RunMetrics m;
      if (built) {
        PlannerConfig run_cfg = cfg;
        run_cfg.sampler.seed = derive_seed(derive_seed(base_seed, i), r);
        m = evaluate(try_plan(built->scene, built->task, run_cfg), built->task, threshold);
      } else {
        m.relative_error = 1.0;
        m.failure = ErrorCode::InfeasibleGrasp;
        m.diagnostics = build_error;
      }
      ++cell.runs;
      cell.successes += m.success ? 1 : 0;
      cell.failures += m.failure ? 1 : 0;
      err_sum += m.relative_error;
      att_sum += static_cast<double>(m.attempts);
      cell.max_relative_error = std::max(cell.max_relative_error, m.relative_error);
      if (!m.diagnostics.empty() && cell.diagnostics.size() < 5) cell.diagnostics.push_back(m.diagnostics);
    }
    cell.mean_relative_error = err_sum / static_cast<double>(repetitions);
    cell.mean_attempts = att_sum / static_cast<double>(repetitions);
    report.cells.push_back(std::move(cell));
  }
  return report;
}

}  // namespace mfk

#endif  // MFK_SCENARIO_HPP
