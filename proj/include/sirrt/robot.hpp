#pragma once

#include <vector>

#include "sirrt/geometry.hpp"

namespace sirrt {

/// Joint angles in radians, one per joint.
using Configuration = std::vector<double>;

struct JointSpec {
    Vec3 axis;         // unit rotation axis in the parent frame
    Vec3 translation;  // fixed translation to the next frame, applied after the rotation
    double lo = -3.14159265358979323846;
    double hi = 3.14159265358979323846;
};

/// Serial revolute chain with one collision capsule per link. Link capsule i
/// is expressed in the frame obtained after applying joint i's rotation (its
/// origin is joint i's origin).
struct RobotModel {
    std::vector<JointSpec> joints;
    std::vector<Capsule> link_capsules;
    Transform base_pose = Transform::identity();

    std::size_t dof() const { return joints.size(); }
    bool within_limits(const Configuration& q) const;
    void validate() const;  // throws std::invalid_argument on a malformed model
};

/// World-frame capsule per link. Throws std::invalid_argument on dimension
/// mismatch or an angle outside the joint limits.
std::vector<Capsule> forward_kinematics(const RobotModel& model, const Configuration& q);

/// Same composition of rigid transforms without the limit check; used where
/// out-of-limit configurations must still be posed (e.g. to report both a
/// limit violation and a collision in the same validation pass).
void forward_kinematics_unchecked(const RobotModel& model, const Configuration& q,
                                  std::vector<Capsule>& out);

double configuration_distance(const Configuration& a, const Configuration& b);

/// Bundled 6-joint approximation of a desk-scale arm with ~0.7 m reach.
RobotModel make_default_robot();

}  // namespace sirrt
