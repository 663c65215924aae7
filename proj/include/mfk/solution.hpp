#ifndef MFK_SOLUTION_HPP
#define MFK_SOLUTION_HPP

#include <optional>

#include "mfk/geometry.hpp"

namespace mfk {

enum class AngleMethod {
  /// Chord / law-of-cosines magnitudes with cross-product signs.
  PaperLawOfCosines,
  /// Exact change of each relative joint angle of the planar chain.
  DirectFromPositions,
};

/// Signed joint rotations relative to the initial configuration, base to tip.
struct JointAngles {
  Angle theta1;
  Angle theta2;
  Angle theta3;
  AngleMethod method = AngleMethod::DirectFromPositions;
};

/// One accepted finger configuration.
struct FingerSolution {
  int finger_id = 0;
  Vec2 q1;  ///< palm joint, equal to the chain base
  Vec2 q2;
  Vec2 q3;
  Vec2 contact;
  double e2 = 0.0;
  double e3 = 0.0;
  double cost = 0.0;
  std::optional<JointAngles> paper_angles;
  std::optional<JointAngles> direct_angles;
};

}  // namespace mfk

#endif  // MFK_SOLUTION_HPP
