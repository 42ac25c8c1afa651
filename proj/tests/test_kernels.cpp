#include <cstring>
#include <vector>

#include "doctest.h"
#include "sirrt/geometry.hpp"
#include "sirrt/kernels.hpp"
#include "sirrt/rng.hpp"

using namespace sirrt;

namespace {

struct Batch {
    std::vector<double> x, y, z, r;
    std::size_t size() const { return x.size(); }
};

Batch random_batch(Rng& rng, std::size_t n, double scale = 1.5) {
    Batch b;
    for (std::size_t i = 0; i < n; ++i) {
        b.x.push_back(rng.uniform(-scale, scale));
        b.y.push_back(rng.uniform(-scale, scale));
        b.z.push_back(rng.uniform(-scale, scale));
        b.r.push_back(rng.uniform(0.01, 0.3));
    }
    return b;
}

}  // namespace

TEST_CASE("scalar batch kernel reproduces the single-point reference bitwise") {
    Rng rng(21);
    const Vec3 a{0.1, -0.2, 0.3}, b{0.7, 0.8, -0.9};
    const Batch batch = random_batch(rng, 257);
    std::vector<double> out(batch.size());
    kernels::detail::dist2_scalar(a, b, batch.x.data(), batch.y.data(), batch.z.data(),
                                  batch.size(), out.data());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const double ref = point_segment_dist2({batch.x[i], batch.y[i], batch.z[i]}, a, b);
        CHECK(out[i] == ref);
    }
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("avx2 and scalar kernels are bitwise identical") {
    if (!kernels::impl_supported(kernels::Impl::avx2)) {
        MESSAGE("avx2 not supported on this machine; skipping");
        return;
    }
    Rng rng(22);
    // sizes straddling the vector width, including remainders
    for (const std::size_t n : {std::size_t{1}, std::size_t{3}, std::size_t{4}, std::size_t{5},
                                std::size_t{8}, std::size_t{17}, std::size_t{301},
                                std::size_t{1024}}) {
        const Vec3 a{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const Vec3 b{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const Batch batch = random_batch(rng, n);
        std::vector<double> scalar_d2(n), avx_d2(n);
        kernels::detail::dist2_scalar(a, b, batch.x.data(), batch.y.data(), batch.z.data(), n,
                                      scalar_d2.data());
        kernels::detail::dist2_avx2(a, b, batch.x.data(), batch.y.data(), batch.z.data(), n,
                                    avx_d2.data());
        CHECK(std::memcmp(scalar_d2.data(), avx_d2.data(), n * sizeof(double)) == 0);

        const Capsule cap{a, b, 0.15};
        std::vector<std::uint8_t> scalar_hit(n), avx_hit(n);
        kernels::detail::collide_scalar(cap, batch.x.data(), batch.y.data(), batch.z.data(),
                                        batch.r.data(), n, scalar_hit.data());
        kernels::detail::collide_avx2(cap, batch.x.data(), batch.y.data(), batch.z.data(),
                                      batch.r.data(), n, avx_hit.data());
        CHECK(scalar_hit == avx_hit);
    }
}
#endif

TEST_CASE("kernel variants agree on degenerate segments and tangency") {
#if defined(__x86_64__) || defined(_M_X64)
    const bool has_avx2 = kernels::impl_supported(kernels::Impl::avx2);
#else
    const bool has_avx2 = false;
#endif

    // degenerate capsule (single sphere)
    const Vec3 p{0.25, 0.25, 0.25};
    Batch batch;
    for (int i = 0; i < 9; ++i) {
        batch.x.push_back(0.05 * i);
        batch.y.push_back(0.0);
        batch.z.push_back(0.0);
        batch.r.push_back(0.05);
    }
    std::vector<double> scalar_d2(batch.size()), avx_d2(batch.size());
    kernels::detail::dist2_scalar(p, p, batch.x.data(), batch.y.data(), batch.z.data(),
                                  batch.size(), scalar_d2.data());
    for (std::size_t i = 0; i < batch.size(); ++i)
        CHECK(scalar_d2[i] == point_segment_dist2({batch.x[i], batch.y[i], batch.z[i]}, p, p));
#if defined(__x86_64__) || defined(_M_X64)
    if (has_avx2) {
        kernels::detail::dist2_avx2(p, p, batch.x.data(), batch.y.data(), batch.z.data(),
                                    batch.size(), avx_d2.data());
        CHECK(scalar_d2 == avx_d2);
    }
#endif

    // exact tangency: |center - axis| == radius sum must collide
    const Capsule cap{{0, 0, 0}, {0, 0, 1}, 0.1};
    Batch tangent;
    tangent.x = {0.15, 0.15000000000000002, 0.15000000000000013};
    tangent.y = {0.0, 0.0, 0.0};
    tangent.z = {0.5, 0.5, 0.5};
    tangent.r = {0.05, 0.05, 0.05};
    std::vector<std::uint8_t> hits(3);
    kernels::detail::collide_scalar(cap, tangent.x.data(), tangent.y.data(), tangent.z.data(),
                                    tangent.r.data(), 3, hits.data());
    CHECK(hits[0] == 1);
    for (std::size_t i = 0; i < 3; ++i) {
        const Sphere s{{tangent.x[i], tangent.y[i], tangent.z[i]}, tangent.r[i]};
        CHECK(hits[i] == (capsule_sphere_collides(cap, s) ? 1 : 0));
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (has_avx2) {
        std::vector<std::uint8_t> avx_hits(3);
        kernels::detail::collide_avx2(cap, tangent.x.data(), tangent.y.data(), tangent.z.data(),
                                      tangent.r.data(), 3, avx_hits.data());
        CHECK(hits == avx_hits);
    }
#endif
}

TEST_CASE("runtime dispatch can be forced to either implementation") {
    const kernels::Impl original = kernels::active_impl();
    kernels::force_impl(kernels::Impl::scalar);
    CHECK(kernels::active_impl() == kernels::Impl::scalar);

    Rng rng(23);
    const Batch batch = random_batch(rng, 33);
    const Capsule cap{{0, 0, 0}, {0.4, 0.4, 0.4}, 0.2};
    std::vector<std::uint8_t> via_scalar(batch.size());
    kernels::capsule_spheres_collide_batch(cap, batch.x.data(), batch.y.data(), batch.z.data(),
                                           batch.r.data(), batch.size(), via_scalar.data());

    if (kernels::impl_supported(kernels::Impl::avx2)) {
        kernels::force_impl(kernels::Impl::avx2);
        CHECK(kernels::active_impl() == kernels::Impl::avx2);
        std::vector<std::uint8_t> via_avx(batch.size());
        kernels::capsule_spheres_collide_batch(cap, batch.x.data(), batch.y.data(), batch.z.data(),
                                               batch.r.data(), batch.size(), via_avx.data());
        CHECK(via_scalar == via_avx);
    }
    kernels::force_impl(original);
}
