// AVX2 variants of the narrow-phase batch kernels. Operation order matches
// the scalar reference in kernels.cpp / point_segment_dist2 exactly: only
// individually rounded mul/add/sub/div/min/max are used (no FMA), so results
// are bitwise identical to the scalar path lane by lane.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "sirrt/kernels.hpp"

namespace sirrt::kernels::detail {

namespace {

inline __m256d clamp01(__m256d t) {
    t = _mm256_min_pd(t, _mm256_set1_pd(1.0));
    return _mm256_max_pd(t, _mm256_setzero_pd());
}

}  // namespace

void dist2_avx2(const Vec3& a, const Vec3& b, const double* px, const double* py, const double* pz,
                std::size_t n, double* out_d2) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double dz = b.z - a.z;
    const double dd = (dx * dx + dy * dy) + dz * dz;

    const __m256d ax = _mm256_set1_pd(a.x);
    const __m256d ay = _mm256_set1_pd(a.y);
    const __m256d az = _mm256_set1_pd(a.z);
    const __m256d vdx = _mm256_set1_pd(dx);
    const __m256d vdy = _mm256_set1_pd(dy);
    const __m256d vdz = _mm256_set1_pd(dz);
    const __m256d vdd = _mm256_set1_pd(dd);

    const std::size_t vec_n = n & ~std::size_t{3};
    for (std::size_t i = 0; i < vec_n; i += 4) {
        const __m256d x = _mm256_loadu_pd(px + i);
        const __m256d y = _mm256_loadu_pd(py + i);
        const __m256d z = _mm256_loadu_pd(pz + i);
        const __m256d rx = _mm256_sub_pd(x, ax);
        const __m256d ry = _mm256_sub_pd(y, ay);
        const __m256d rz = _mm256_sub_pd(z, az);
        __m256d t;
        if (dd == 0.0) {
            t = _mm256_setzero_pd();
        } else {
            const __m256d dot = _mm256_add_pd(
                _mm256_add_pd(_mm256_mul_pd(rx, vdx), _mm256_mul_pd(ry, vdy)),
                _mm256_mul_pd(rz, vdz));
            t = clamp01(_mm256_div_pd(dot, vdd));
        }
        const __m256d cx = _mm256_add_pd(ax, _mm256_mul_pd(t, vdx));
        const __m256d cy = _mm256_add_pd(ay, _mm256_mul_pd(t, vdy));
        const __m256d cz = _mm256_add_pd(az, _mm256_mul_pd(t, vdz));
        const __m256d ex = _mm256_sub_pd(x, cx);
        const __m256d ey = _mm256_sub_pd(y, cy);
        const __m256d ez = _mm256_sub_pd(z, cz);
        const __m256d d2 = _mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(ex, ex), _mm256_mul_pd(ey, ey)), _mm256_mul_pd(ez, ez));
        _mm256_storeu_pd(out_d2 + i, d2);
    }
    if (vec_n < n)
        dist2_scalar(a, b, px + vec_n, py + vec_n, pz + vec_n, n - vec_n, out_d2 + vec_n);
}

void collide_avx2(const Capsule& c, const double* px, const double* py, const double* pz,
                  const double* pr, std::size_t n, std::uint8_t* out) {
    const double dx = c.b.x - c.a.x;
    const double dy = c.b.y - c.a.y;
    const double dz = c.b.z - c.a.z;
    const double dd = (dx * dx + dy * dy) + dz * dz;

    const __m256d ax = _mm256_set1_pd(c.a.x);
    const __m256d ay = _mm256_set1_pd(c.a.y);
    const __m256d az = _mm256_set1_pd(c.a.z);
    const __m256d vdx = _mm256_set1_pd(dx);
    const __m256d vdy = _mm256_set1_pd(dy);
    const __m256d vdz = _mm256_set1_pd(dz);
    const __m256d vdd = _mm256_set1_pd(dd);
    const __m256d rc = _mm256_set1_pd(c.radius);

    const std::size_t vec_n = n & ~std::size_t{3};
    for (std::size_t i = 0; i < vec_n; i += 4) {
        const __m256d x = _mm256_loadu_pd(px + i);
        const __m256d y = _mm256_loadu_pd(py + i);
        const __m256d z = _mm256_loadu_pd(pz + i);
        const __m256d rx = _mm256_sub_pd(x, ax);
        const __m256d ry = _mm256_sub_pd(y, ay);
        const __m256d rz = _mm256_sub_pd(z, az);
        __m256d t;
        if (dd == 0.0) {
            t = _mm256_setzero_pd();
        } else {
            const __m256d dot = _mm256_add_pd(
                _mm256_add_pd(_mm256_mul_pd(rx, vdx), _mm256_mul_pd(ry, vdy)),
                _mm256_mul_pd(rz, vdz));
            t = clamp01(_mm256_div_pd(dot, vdd));
        }
        const __m256d cx = _mm256_add_pd(ax, _mm256_mul_pd(t, vdx));
        const __m256d cy = _mm256_add_pd(ay, _mm256_mul_pd(t, vdy));
        const __m256d cz = _mm256_add_pd(az, _mm256_mul_pd(t, vdz));
        const __m256d ex = _mm256_sub_pd(x, cx);
        const __m256d ey = _mm256_sub_pd(y, cy);
        const __m256d ez = _mm256_sub_pd(z, cz);
        const __m256d d2 = _mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(ex, ex), _mm256_mul_pd(ey, ey)), _mm256_mul_pd(ez, ez));
        const __m256d rsum = _mm256_add_pd(rc, _mm256_loadu_pd(pr + i));
        const __m256d cmp = _mm256_cmp_pd(d2, _mm256_mul_pd(rsum, rsum), _CMP_LE_OQ);
        const int mask = _mm256_movemask_pd(cmp);
        out[i + 0] = (mask >> 0) & 1;
        out[i + 1] = (mask >> 1) & 1;
        out[i + 2] = (mask >> 2) & 1;
        out[i + 3] = (mask >> 3) & 1;
    }
    if (vec_n < n)
        collide_scalar(c, px + vec_n, py + vec_n, pz + vec_n, pr + vec_n, n - vec_n, out + vec_n);
}

}  // namespace sirrt::kernels::detail

#endif  // x86_64
