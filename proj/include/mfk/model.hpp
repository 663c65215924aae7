#ifndef MFK_MODEL_HPP
#define MFK_MODEL_HPP

// The hand-object plane: finger chains, object pose, motion tasks, and the
// target object/contact positions for translation and rolling tasks.

#include <algorithm>
#include <array>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "mfk/error.hpp"
#include "mfk/geometry.hpp"

namespace mfk {

/// Relative tolerance for stored link lengths against stored joint positions.
inline constexpr double kChainLengthTolerance = 1e-9;

/// One three-link planar finger. The palm joint `base` never moves.
class FingerChain {
 public:
  FingerChain(int id, Vec2 base, std::array<Vec2, 2> joints0, Vec2 contact0,
              std::array<double, 3> lengths)
      : id_(id), base_(base), joints0_(joints0), contact0_(contact0), lengths_(lengths) {
    validate();
  }

  /// Builds a chain whose stored lengths are measured from the joints.
  static FingerChain from_points(int id, Vec2 base, Vec2 q2, Vec2 q3, Vec2 contact) {
    return FingerChain(id, base, {q2, q3}, contact,
                       {distance(base, q2), distance(q2, q3), distance(q3, contact)});
  }

  int id() const { return id_; }
  Vec2 base() const { return base_; }
  Vec2 q2() const { return joints0_[0]; }
  Vec2 q3() const { return joints0_[1]; }
  const std::array<Vec2, 2>& joints0() const { return joints0_; }
  Vec2 contact0() const { return contact0_; }
  const std::array<double, 3>& lengths() const { return lengths_; }
  double total_length() const { return lengths_[0] + lengths_[1] + lengths_[2]; }

  /// Smallest base-to-tip distance the chain can realize.
  double min_reach() const {
    const double longest = *std::max_element(lengths_.begin(), lengths_.end());
    return std::max(0.0, 2.0 * longest - total_length());
  }

 private:
  void validate() const {
    const std::string who = "finger " + std::to_string(id_);
    if (!is_finite(base_) || !is_finite(joints0_[0]) || !is_finite(joints0_[1]) ||
        !is_finite(contact0_)) {
      throw Error(ErrorCode::InvalidChain, who + ": non-finite coordinates");
    }
    const std::array<double, 3> measured = {distance(base_, joints0_[0]),
                                            distance(joints0_[0], joints0_[1]),
                                            distance(joints0_[1], contact0_)};
    for (std::size_t k = 0; k < 3; ++k) {
      if (!(lengths_[k] > 0.0) || !std::isfinite(lengths_[k])) {
        throw Error(ErrorCode::InvalidChain,
                    who + ": link " + std::to_string(k + 1) + " length must be positive");
      }
      if (std::abs(measured[k] - lengths_[k]) > kChainLengthTolerance * lengths_[k]) {
        throw Error(ErrorCode::InvalidChain,
                    who + ": link " + std::to_string(k + 1) + " length " +
                        std::to_string(lengths_[k]) + " disagrees with joint spacing " +
                        std::to_string(measured[k]));
      }
    }
  }

  int id_;
  Vec2 base_;
  std::array<Vec2, 2> joints0_;
  Vec2 contact0_;
  std::array<double, 3> lengths_;
};

struct ObjectPose {
  Vec2 position;
  Angle orientation;
};

struct Translate {
  Vec2 delta;
};

struct Roll {
  Angle phi;
};

using MotionTask = std::variant<Translate, Roll>;

inline bool is_translate(const MotionTask& task) {
  return std::holds_alternative<Translate>(task);
}

inline bool is_identity(const MotionTask& task) {
  if (const auto* t = std::get_if<Translate>(&task)) return t->delta == Vec2{};
  return std::get<Roll>(task).phi.rad() == 0.0;
}

/// How a rolling task moves each contact.
enum class ContactUpdateMode {
  /// c = c(0) + |P - c(0)| [cos phi, sin phi]. It does not preserve |c - P|.
  PaperLiteral,
  /// Rigid rotation of c(0) about P by phi.
  Geometric,
};

class GraspScene {
 public:
  GraspScene(ObjectPose object0, std::vector<FingerChain> fingers)
      : object0_(object0), fingers_(std::move(fingers)) {
    if (fingers_.empty()) throw Error(ErrorCode::NoFingers, "scene has no fingers");
    if (fingers_.size() > 4) {
      throw Error(ErrorCode::InvalidChain, "scene supports at most 4 fingers");
    }
    std::set<int> ids;
    for (const auto& f : fingers_) {
      if (!ids.insert(f.id()).second) {
        throw Error(ErrorCode::InvalidChain, "duplicate finger id " + std::to_string(f.id()));
      }
      const double reach = distance(f.contact0(), f.base());
      if (reach > f.total_length() * (1.0 + kChainLengthTolerance)) {
        throw Error(ErrorCode::InvalidChain,
                    "finger " + std::to_string(f.id()) + ": contact beyond reach");
      }
    }
  }

  const ObjectPose& object0() const { return object0_; }
  const std::vector<FingerChain>& fingers() const { return fingers_; }

 private:
  ObjectPose object0_;
  std::vector<FingerChain> fingers_;
};

inline ObjectPose object_target(const ObjectPose& object0, const MotionTask& task) {
  if (const auto* t = std::get_if<Translate>(&task)) {
    return {object0.position + t->delta, object0.orientation};
  }
  return {object0.position, object0.orientation + std::get<Roll>(task).phi};
}

inline Vec2 contact_target(const FingerChain& finger, const ObjectPose& object0,
                           const MotionTask& task, ContactUpdateMode mode) {
  const Vec2 c0 = finger.contact0();
  if (const auto* t = std::get_if<Translate>(&task)) return c0 + t->delta;

  const Angle phi = std::get<Roll>(task).phi;
  const Vec2 center = object0.position;
  const double radius = distance(center, c0);
  if (radius == 0.0) {
    throw Error(ErrorCode::ContactAtCenter,
                "finger " + std::to_string(finger.id()) + ": contact coincides with object center");
  }
  if (mode == ContactUpdateMode::PaperLiteral) return c0 + radius * unit(phi.rad());
  return rotate_about(c0, center, phi);
}

struct Displacement {
  double e2 = 0.0;
  double e3 = 0.0;
};

inline Displacement displacement(const FingerChain& finger, Vec2 q2, Vec2 q3) {
  return {distance(q2, finger.q2()), distance(q3, finger.q3())};
}

/// Whether the tip of the chain can be placed at `target` with the base fixed.
inline bool reachability_check(const FingerChain& finger, Vec2 target) {
  const double r = distance(target, finger.base());
  const double slack = 1e-12 * finger.total_length();
  return r >= finger.min_reach() - slack && r <= finger.total_length() + slack;
}

}  // namespace mfk

#endif  // MFK_MODEL_HPP
