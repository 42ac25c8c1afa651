#include "sirrt/geometry.hpp"

#include <algorithm>

namespace sirrt {

Mat3 Mat3::axis_angle(const Vec3& axis, double angle) {
    const Vec3 u = axis.normalized();
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double t = 1.0 - c;
    Mat3 r;
    r.m[0] = c + u.x * u.x * t;
    r.m[1] = u.x * u.y * t - u.z * s;
    r.m[2] = u.x * u.z * t + u.y * s;
    r.m[3] = u.y * u.x * t + u.z * s;
    r.m[4] = c + u.y * u.y * t;
    r.m[5] = u.y * u.z * t - u.x * s;
    r.m[6] = u.z * u.x * t - u.y * s;
    r.m[7] = u.z * u.y * t + u.x * s;
    r.m[8] = c + u.z * u.z * t;
    return r;
}

namespace {

bool lex_less(const Vec3& a, const Vec3& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
}

// Ericson, "Real-Time Collision Detection", closest point between segments.
// Arguments are canonicalized first so the result is exactly symmetric.
double segment_segment_dist2_ordered(const Vec3& p1, const Vec3& q1, const Vec3& p2,
                                     const Vec3& q2) {
    const Vec3 d1 = q1 - p1;
    const Vec3 d2 = q2 - p2;
    const Vec3 r = p1 - p2;
    const double a = d1.squared_norm();
    const double e = d2.squared_norm();
    const double f = d2.dot(r);

    double s = 0.0;
    double t = 0.0;
    if (a == 0.0 && e == 0.0) {
        // both segments are points
    } else if (a == 0.0) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = d1.dot(r);
        if (e == 0.0) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = d1.dot(d2);
            const double denom = a * e - b * b;
            if (denom != 0.0) {
                s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
            }
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    const Vec3 c1 = p1 + d1 * s;
    const Vec3 c2 = p2 + d2 * t;
    return (c1 - c2).squared_norm();
}

double segment_segment_dist2(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
    // orient each segment, then order the two segments
    const Vec3& p1 = lex_less(a0, a1) ? a0 : a1;
    const Vec3& q1 = lex_less(a0, a1) ? a1 : a0;
    const Vec3& p2 = lex_less(b0, b1) ? b0 : b1;
    const Vec3& q2 = lex_less(b0, b1) ? b1 : b0;
    const bool ab = lex_less(p1, p2) || (!lex_less(p2, p1) && !lex_less(q2, q1));
    return ab ? segment_segment_dist2_ordered(p1, q1, p2, q2)
              : segment_segment_dist2_ordered(p2, q2, p1, q1);
}

}  // namespace

double segment_segment_distance(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
    return std::sqrt(segment_segment_dist2(a0, a1, b0, b1));
}

bool capsule_capsule_collides(const Capsule& c1, const Capsule& c2) {
    const double rsum = c1.radius + c2.radius;
    return segment_segment_dist2(c1.a, c1.b, c2.a, c2.b) <= rsum * rsum;
}

Aabb aabb_of(const Capsule& c, double inflation) {
    const double r = c.radius + inflation;
    return {{std::min(c.a.x, c.b.x) - r, std::min(c.a.y, c.b.y) - r, std::min(c.a.z, c.b.z) - r},
            {std::max(c.a.x, c.b.x) + r, std::max(c.a.y, c.b.y) + r, std::max(c.a.z, c.b.z) + r}};
}

Aabb aabb_of(const Sphere& s, double inflation) {
    const double r = s.radius + inflation;
    return {{s.center.x - r, s.center.y - r, s.center.z - r},
            {s.center.x + r, s.center.y + r, s.center.z + r}};
}

}  // namespace sirrt
