#ifndef MFK_JOINT_ANGLES_HPP
#define MFK_JOINT_ANGLES_HPP

// Joint rotations from joint positions, plus planar forward kinematics to
// check them.
//
// The law-of-cosines route measures each rotation at the joint's new
// position, between the old and new positions of the next point down the
// chain. For the palm joint that is the chord angle of q2 on its circle
// about the base. The direct route compares relative link angles of the old
// and new chains and is exact for any rigid-link configuration.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "mfk/error.hpp"
#include "mfk/geometry.hpp"
#include "mfk/model.hpp"
#include "mfk/solution.hpp"

namespace mfk {

/// Relative tolerance on link lengths for the angle-recovery preconditions.
inline constexpr double kOnCircleTolerance = 1e-6;

namespace detail {

inline void require_on_circle(Vec2 center, Vec2 p, double radius, const char* what) {
  const double r = distance(center, p);
  if (std::abs(r - radius) > kOnCircleTolerance * radius) {
    throw Error(ErrorCode::OffCircle, std::string(what) + ": point at distance " +
                                          std::to_string(r) + ", link length " +
                                          std::to_string(radius));
  }
}

inline Angle signed_magnitude(Angle magnitude, Vec2 from_dir, Vec2 to_dir) {
  if (magnitude.rad() == 0.0) return magnitude;
  const double turn = signed_turn(from_dir, to_dir).rad();
  return turn < 0.0 ? -magnitude : magnitude;
}

}  // namespace detail

inline Angle base_angle(const FingerChain& finger, Vec2 q2_new) {
  const double l1 = finger.lengths()[0];
  detail::require_on_circle(finger.base(), q2_new, l1, "base_angle");
  const Angle magnitude = chord_angle(distance(q2_new, finger.q2()), l1);
  return detail::signed_magnitude(magnitude, finger.q2() - finger.base(), q2_new - finger.base());
}

inline Angle interior_angle(Vec2 q_j_new, Vec2 q_next_old, Vec2 q_next_new, double link_length) {
  detail::require_on_circle(q_j_new, q_next_new, link_length, "interior_angle");
  const Angle magnitude = triangle_angle(distance(q_next_old, q_j_new), link_length,
                                         distance(q_next_new, q_next_old));
  return detail::signed_magnitude(magnitude, q_next_old - q_j_new, q_next_new - q_j_new);
}

inline Angle distal_angle(Vec2 q3_new, Vec2 contact_old, Vec2 contact_new, double l3) {
  detail::require_on_circle(q3_new, contact_new, l3, "distal_angle");
  const Angle magnitude =
      triangle_angle(distance(contact_old, q3_new), l3, distance(contact_new, contact_old));
  return detail::signed_magnitude(magnitude, contact_old - q3_new, contact_new - q3_new);
}

/// Absolute headings of the three links of (base, q2, q3, contact).
inline std::array<double, 3> link_headings(Vec2 base, Vec2 q2, Vec2 q3, Vec2 contact) {
  return {heading(q2 - base), heading(q3 - q2), heading(contact - q3)};
}

inline JointAngles recover_all(const FingerChain& finger, const FingerSolution& s,
                               AngleMethod method) {
  const auto& l = finger.lengths();
  if (method == AngleMethod::PaperLawOfCosines) {
    return {base_angle(finger, s.q2), interior_angle(s.q2, finger.q3(), s.q3, l[1]),
            distal_angle(s.q3, finger.contact0(), s.contact, l[2]), method};
  }
  const Vec2 b = finger.base();
  const std::array<Vec2, 3> old_links = {finger.q2() - b, finger.q3() - finger.q2(),
                                         finger.contact0() - finger.q3()};
  const std::array<Vec2, 3> new_links = {s.q2 - b, s.q3 - s.q2, s.contact - s.q3};
  const Angle t1 = signed_turn(old_links[0], new_links[0]);
  const Angle t2 =
      signed_turn(new_links[0], new_links[1]) - signed_turn(old_links[0], old_links[1]);
  const Angle t3 =
      signed_turn(new_links[1], new_links[2]) - signed_turn(old_links[1], old_links[2]);
  return {t1, t2, t3, method};
}

struct ChainPoints {
  Vec2 q2;
  Vec2 q3;
  Vec2 contact;
};

/// Planar chain from absolute cumulative link headings.
inline ChainPoints forward_kinematics(Vec2 base, const std::array<double, 3>& headings,
                                      const std::array<double, 3>& lengths) {
  const Vec2 q2 = base + lengths[0] * unit(headings[0]);
  const Vec2 q3 = q2 + lengths[1] * unit(headings[1]);
  return {q2, q3, q3 + lengths[2] * unit(headings[2])};
}

/// Applies joint-angle deltas to the initial chain and runs forward
/// kinematics: the round trip of recover_all(DirectFromPositions).
inline ChainPoints apply_joint_deltas(const FingerChain& finger, const JointAngles& delta) {
  auto h = link_headings(finger.base(), finger.q2(), finger.q3(), finger.contact0());
  const double d1 = delta.theta1.rad();
  const double d2 = d1 + delta.theta2.rad();
  const double d3 = d2 + delta.theta3.rad();
  return forward_kinematics(finger.base(), {h[0] + d1, h[1] + d2, h[2] + d3}, finger.lengths());
}

/// Comparison of the canonical law-of-cosines angles with the reading that
/// uses each joint's own displacement as the opposite side.
struct IndexingComparison {
  /// arccos arguments under the own-displacement reading, base to tip.
  std::array<double, 3> literal_argument{};
  std::array<bool, 3> literal_in_domain{};
  /// |literal - canonical| magnitude where the literal argument is valid.
  std::array<double, 3> difference{};
  std::array<double, 3> canonical{};
};

inline IndexingComparison compare_indexing(const FingerChain& finger, const FingerSolution& s) {
  IndexingComparison cmp;
  const auto& l = finger.lengths();
  const std::array<Vec2, 3> joint_new = {finger.base(), s.q2, s.q3};
  const std::array<Vec2, 3> next_old = {finger.q2(), finger.q3(), finger.contact0()};
  const std::array<double, 3> own_disp = {0.0, distance(s.q2, finger.q2()),
                                          distance(s.q3, finger.q3())};
  const JointAngles canon = recover_all(finger, s, AngleMethod::PaperLawOfCosines);
  cmp.canonical = {std::abs(canon.theta1.rad()), std::abs(canon.theta2.rad()),
                   std::abs(canon.theta3.rad())};
  for (std::size_t j = 0; j < 3; ++j) {
    const double d = distance(next_old[j], joint_new[j]);
    const double arg = (d * d - own_disp[j] * own_disp[j] + l[j] * l[j]) / (2.0 * d * l[j]);
    cmp.literal_argument[j] = arg;
    cmp.literal_in_domain[j] = arg >= -1.0 && arg <= 1.0;
    cmp.difference[j] = cmp.literal_in_domain[j]
                            ? std::abs(std::acos(arg) - cmp.canonical[j])
                            : std::nan("");
  }
  return cmp;
}

}  // namespace mfk

#endif  // MFK_JOINT_ANGLES_HPP
