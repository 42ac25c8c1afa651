#pragma once

#include <cmath>
#include <cstddef>

namespace sirrt {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }

    constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    constexpr Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    constexpr double squared_norm() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(squared_norm()); }
    Vec3 normalized() const {
        const double n = norm();
        return n > 0.0 ? Vec3{x / n, y / n, z / n} : Vec3{0.0, 0.0, 0.0};
    }
    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// Row-major 3x3 matrix; only used for rigid rotations.
struct Mat3 {
    double m[9] = {1, 0, 0, 0, 1, 0, 0, 0, 1};

    static constexpr Mat3 identity() { return {}; }

    /// Rodrigues rotation about a unit axis.
    static Mat3 axis_angle(const Vec3& axis, double angle);

    Vec3 operator*(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r.m[3 * i + j] = m[3 * i + 0] * o.m[j] + m[3 * i + 1] * o.m[3 + j] +
                                 m[3 * i + 2] * o.m[6 + j];
        return r;
    }
};

/// Rigid transform: p -> rot * p + pos.
struct Transform {
    Mat3 rot;
    Vec3 pos;

    static constexpr Transform identity() { return {}; }

    Vec3 apply(const Vec3& p) const { return rot * p + pos; }

    Transform operator*(const Transform& o) const { return {rot * o.rot, rot * o.pos + pos}; }
};

/// Swept sphere between two endpoints. endpoint_a == endpoint_b degenerates
/// to a sphere and is legal.
struct Capsule {
    Vec3 a;
    Vec3 b;
    double radius = 0.0;
};

struct Sphere {
    Vec3 center;
    double radius = 0.0;
};

struct Aabb {
    Vec3 min;
    Vec3 max;

    bool overlaps(const Aabb& o) const {
        return min.x <= o.max.x && o.min.x <= max.x && min.y <= o.max.y && o.min.y <= max.y &&
               min.z <= o.max.z && o.min.z <= max.z;
    }
    bool contains(const Vec3& p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z &&
               p.z <= max.z;
    }
    Aabb inflated(double r) const {
        return {{min.x - r, min.y - r, min.z - r}, {max.x + r, max.y + r, max.z + r}};
    }
};

/// Squared distance from point p to segment [a, b].
///
/// This is the scalar reference for the batched narrow-phase kernels in
/// kernels.hpp; the vector variants replicate its operation order exactly so
/// scalar and SIMD paths produce bitwise-identical results. Keep the
/// arithmetic sequence in sync when editing.
inline double point_segment_dist2(const Vec3& p, const Vec3& a, const Vec3& b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double dz = b.z - a.z;
    const double dd = (dx * dx + dy * dy) + dz * dz;
    double t;
    if (dd == 0.0) {
        t = 0.0;
    } else {
        const double rx = p.x - a.x;
        const double ry = p.y - a.y;
        const double rz = p.z - a.z;
        t = ((rx * dx + ry * dy) + rz * dz) / dd;
        t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
    }
    const double cx = a.x + t * dx;
    const double cy = a.y + t * dy;
    const double cz = a.z + t * dz;
    const double ex = p.x - cx;
    const double ey = p.y - cy;
    const double ez = p.z - cz;
    return (ex * ex + ey * ey) + ez * ez;
}

/// Minimum Euclidean distance between segments [a0,a1] and [b0,b1].
/// Degenerate segments (zero length) are handled as points.
double segment_segment_distance(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1);

/// Tangency (distance exactly equal to the radius sum) counts as collision.
inline bool capsule_sphere_collides(const Capsule& c, const Sphere& s) {
    const double rsum = c.radius + s.radius;
    return point_segment_dist2(s.center, c.a, c.b) <= rsum * rsum;
}

bool capsule_capsule_collides(const Capsule& c1, const Capsule& c2);

Aabb aabb_of(const Capsule& c, double inflation);
Aabb aabb_of(const Sphere& s, double inflation);

}  // namespace sirrt
