#include "sirrt/kernels.hpp"

#include <stdexcept>
#include <string>

namespace sirrt::kernels {

namespace detail {

void dist2_scalar(const Vec3& a, const Vec3& b, const double* px, const double* py,
                  const double* pz, std::size_t n, double* out_d2) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double dz = b.z - a.z;
    const double dd = (dx * dx + dy * dy) + dz * dz;
    if (dd == 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            const double ex = px[i] - a.x;
            const double ey = py[i] - a.y;
            const double ez = pz[i] - a.z;
            out_d2[i] = (ex * ex + ey * ey) + ez * ez;
        }
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double rx = px[i] - a.x;
        const double ry = py[i] - a.y;
        const double rz = pz[i] - a.z;
        double t = ((rx * dx + ry * dy) + rz * dz) / dd;
        t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
        const double cx = a.x + t * dx;
        const double cy = a.y + t * dy;
        const double cz = a.z + t * dz;
        const double ex = px[i] - cx;
        const double ey = py[i] - cy;
        const double ez = pz[i] - cz;
        out_d2[i] = (ex * ex + ey * ey) + ez * ez;
    }
}

void collide_scalar(const Capsule& c, const double* px, const double* py, const double* pz,
                    const double* pr, std::size_t n, std::uint8_t* out) {
    const double dx = c.b.x - c.a.x;
    const double dy = c.b.y - c.a.y;
    const double dz = c.b.z - c.a.z;
    const double dd = (dx * dx + dy * dy) + dz * dz;
    for (std::size_t i = 0; i < n; ++i) {
        const double rx = px[i] - c.a.x;
        const double ry = py[i] - c.a.y;
        const double rz = pz[i] - c.a.z;
        double t;
        if (dd == 0.0) {
            t = 0.0;
        } else {
            t = ((rx * dx + ry * dy) + rz * dz) / dd;
            t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
        }
        const double cx = c.a.x + t * dx;
        const double cy = c.a.y + t * dy;
        const double cz = c.a.z + t * dz;
        const double ex = px[i] - cx;
        const double ey = py[i] - cy;
        const double ez = pz[i] - cz;
        const double d2 = (ex * ex + ey * ey) + ez * ez;
        const double rsum = c.radius + pr[i];
        out[i] = d2 <= rsum * rsum ? 1 : 0;
    }
}

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_supported() { return __builtin_cpu_supports("avx2") != 0; }
#else
bool avx2_supported() { return false; }
#endif

}  // namespace detail

namespace {

struct Table {
    Dist2Fn dist2;
    CollideFn collide;
    Impl impl;
};

Table pick_default() {
#if defined(__x86_64__) || defined(_M_X64)
    if (detail::avx2_supported()) return {detail::dist2_avx2, detail::collide_avx2, Impl::avx2};
#endif
    return {detail::dist2_scalar, detail::collide_scalar, Impl::scalar};
}

Table& table() {
    static Table t = pick_default();
    return t;
}

}  // namespace

Impl active_impl() { return table().impl; }

const char* impl_name(Impl impl) {
    switch (impl) {
        case Impl::scalar: return "scalar";
        case Impl::avx2: return "avx2";
    }
    return "?";
}

bool impl_supported(Impl impl) {
    if (impl == Impl::scalar) return true;
    return detail::avx2_supported();
}

void force_impl(Impl impl) {
    if (!impl_supported(impl))
        throw std::runtime_error(std::string("kernel implementation not supported here: ") +
                                 impl_name(impl));
    if (impl == Impl::scalar) {
        table() = {detail::dist2_scalar, detail::collide_scalar, Impl::scalar};
        return;
    }
#if defined(__x86_64__) || defined(_M_X64)
    table() = {detail::dist2_avx2, detail::collide_avx2, Impl::avx2};
#endif
}

void point_segment_dist2_batch(const Vec3& a, const Vec3& b, const double* px, const double* py,
                               const double* pz, std::size_t n, double* out_d2) {
    table().dist2(a, b, px, py, pz, n, out_d2);
}

void capsule_spheres_collide_batch(const Capsule& c, const double* px, const double* py,
                                   const double* pz, const double* pr, std::size_t n,
                                   std::uint8_t* out) {
    table().collide(c, px, py, pz, pr, n, out);
}

}  // namespace sirrt::kernels
