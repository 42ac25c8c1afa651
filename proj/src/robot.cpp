#include "sirrt/robot.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sirrt {

bool RobotModel::within_limits(const Configuration& q) const {
    if (q.size() != joints.size()) return false;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!(q[i] >= joints[i].lo && q[i] <= joints[i].hi)) return false;
    }
    return true;
}

void RobotModel::validate() const {
    if (joints.empty()) throw std::invalid_argument("robot model: no joints");
    if (link_capsules.size() != joints.size())
        throw std::invalid_argument("robot model: expected one link capsule per joint");
    for (std::size_t i = 0; i < joints.size(); ++i) {
        if (!(joints[i].lo < joints[i].hi))
            throw std::invalid_argument("robot model: joint " + std::to_string(i) +
                                        " limits must satisfy lo < hi");
        if (joints[i].axis.squared_norm() == 0.0)
            throw std::invalid_argument("robot model: joint " + std::to_string(i) +
                                        " axis is zero");
        if (!(link_capsules[i].radius > 0.0))
            throw std::invalid_argument("robot model: link " + std::to_string(i) +
                                        " capsule radius must be positive");
        if (!link_capsules[i].a.finite() || !link_capsules[i].b.finite() ||
            !joints[i].translation.finite())
            throw std::invalid_argument("robot model: non-finite geometry");
    }
}

void forward_kinematics_unchecked(const RobotModel& model, const Configuration& q,
                                  std::vector<Capsule>& out) {
    out.resize(model.joints.size());
    Transform frame = model.base_pose;
    for (std::size_t i = 0; i < model.joints.size(); ++i) {
        const JointSpec& joint = model.joints[i];
        const Transform rotated{frame.rot * Mat3::axis_angle(joint.axis, q[i]), frame.pos};
        const Capsule& local = model.link_capsules[i];
        out[i] = Capsule{rotated.apply(local.a), rotated.apply(local.b), local.radius};
        frame = Transform{rotated.rot, rotated.rot * joint.translation + rotated.pos};
    }
}

std::vector<Capsule> forward_kinematics(const RobotModel& model, const Configuration& q) {
    if (q.size() != model.joints.size())
        throw std::invalid_argument("forward_kinematics: configuration has " +
                                    std::to_string(q.size()) + " angles, robot has " +
                                    std::to_string(model.joints.size()) + " joints");
    if (!model.within_limits(q))
        throw std::invalid_argument("forward_kinematics: angle outside joint limits");
    std::vector<Capsule> out;
    forward_kinematics_unchecked(model, q, out);
    return out;
}

double configuration_distance(const Configuration& a, const Configuration& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

RobotModel make_default_robot() {
    // Six revolute joints, link lengths summing to 0.70 m.
    RobotModel m;
    const Vec3 z{0, 0, 1};
    const Vec3 y{0, 1, 0};
    const Vec3 x{1, 0, 0};
    struct Row {
        Vec3 axis;
        Vec3 link_end;
        double radius;
    };
    const Row rows[] = {
        {z, {0.0, 0.0, 0.12}, 0.060},
        {y, {0.0, 0.0, 0.24}, 0.050},
        {y, {0.0, 0.0, 0.20}, 0.045},
        {x, {0.08, 0.0, 0.0}, 0.040},
        {y, {0.04, 0.0, 0.0}, 0.035},
        {x, {0.02, 0.0, 0.0}, 0.030},
    };
    for (const Row& r : rows) {
        m.joints.push_back(JointSpec{r.axis, r.link_end});
        m.link_capsules.push_back(Capsule{{0, 0, 0}, r.link_end, r.radius});
    }
    m.validate();
    return m;
}

}  // namespace sirrt
