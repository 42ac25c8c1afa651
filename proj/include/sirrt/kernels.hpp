#pragma once

#include <cstddef>
#include <cstdint>

#include "sirrt/geometry.hpp"

namespace sirrt::kernels {

/// Batched narrow-phase primitives over structure-of-arrays sphere data.
/// All variants replicate the operation order of point_segment_dist2 in
/// geometry.hpp; scalar and SIMD results are bitwise identical, which the
/// kernel tests assert. Inputs need no particular alignment.

/// Squared distance from each point (px[i], py[i], pz[i]) to segment [a, b].
using Dist2Fn = void (*)(const Vec3& a, const Vec3& b, const double* px, const double* py,
                         const double* pz, std::size_t n, double* out_d2);

/// out[i] = 1 iff sphere i (center + radius pr[i]) intersects the capsule,
/// tangency included.
using CollideFn = void (*)(const Capsule& c, const double* px, const double* py, const double* pz,
                           const double* pr, std::size_t n, std::uint8_t* out);

enum class Impl { scalar, avx2 };

Impl active_impl();
const char* impl_name(Impl impl);
bool impl_supported(Impl impl);

/// Overrides the runtime-selected implementation (tests exercise both paths
/// on the same machine). Throws std::runtime_error if unsupported here.
void force_impl(Impl impl);

void point_segment_dist2_batch(const Vec3& a, const Vec3& b, const double* px, const double* py,
                               const double* pz, std::size_t n, double* out_d2);

void capsule_spheres_collide_batch(const Capsule& c, const double* px, const double* py,
                                   const double* pz, const double* pr, std::size_t n,
                                   std::uint8_t* out);

namespace detail {
void dist2_scalar(const Vec3& a, const Vec3& b, const double* px, const double* py,
                  const double* pz, std::size_t n, double* out_d2);
void collide_scalar(const Capsule& c, const double* px, const double* py, const double* pz,
                    const double* pr, std::size_t n, std::uint8_t* out);
#if defined(__x86_64__) || defined(_M_X64)
void dist2_avx2(const Vec3& a, const Vec3& b, const double* px, const double* py, const double* pz,
                std::size_t n, double* out_d2);
void collide_avx2(const Capsule& c, const double* px, const double* py, const double* pz,
                  const double* pr, std::size_t n, std::uint8_t* out);
#endif
}  // namespace detail

}  // namespace sirrt::kernels
