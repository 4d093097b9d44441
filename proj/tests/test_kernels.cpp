#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "projlat/kernels.hpp"
#include "projlat/rng.hpp"

using namespace projlat;
using kernels::cplx;

namespace {

std::vector<cplx> random_buf(Rng& rng, std::size_t n) {
    std::vector<cplx> v(n);
    for (auto& z : v) z = rng.gaussian_cplx();
    return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

const kernels::KernelTable* simd() {
    const kernels::KernelTable* t = kernels::avx2_table();
    if (t == nullptr || !kernels::cpu_supports_avx2_fma()) return nullptr;
    return t;
}

}  // namespace

// The SIMD variants must agree with the scalar reference to rounding noise
// (FMA contraction changes the last bits, nothing more).
TEST_CASE("gemm_acc scalar/simd equivalence") {
    const kernels::KernelTable* t = simd();
    if (t == nullptr) {
        MESSAGE("AVX2 kernels unavailable on this host; skipping");
        return;
    }
    Rng rng(101);
    for (std::size_t m : {1, 2, 3, 5, 8}) {
        for (std::size_t k : {1, 3, 7}) {
            for (std::size_t n : {1, 2, 5, 9, 16}) {
                auto a = random_buf(rng, m * k);
                auto b = random_buf(rng, k * n);
                auto c0 = random_buf(rng, m * n);
                auto c1 = c0;
                kernels::scalar_table.gemm_acc(m, k, n, a.data(), b.data(), c0.data());
                t->gemm_acc(m, k, n, a.data(), b.data(), c1.data());
                CHECK(max_diff(c0, c1) < 1e-12);
            }
        }
    }
}

TEST_CASE("axpy/scal/rot scalar/simd equivalence") {
    const kernels::KernelTable* t = simd();
    if (t == nullptr) {
        MESSAGE("AVX2 kernels unavailable on this host; skipping");
        return;
    }
    Rng rng(202);
    for (std::size_t n : {1, 2, 3, 8, 17, 64}) {
        const cplx alpha = rng.gaussian_cplx();
        auto x = random_buf(rng, n);
        auto y0 = random_buf(rng, n);
        auto y1 = y0;
        kernels::scalar_table.axpy(n, alpha, x.data(), y0.data());
        t->axpy(n, alpha, x.data(), y1.data());
        CHECK(max_diff(y0, y1) < 1e-13);

        auto z0 = random_buf(rng, n);
        auto z1 = z0;
        kernels::scalar_table.scal(n, alpha, z0.data());
        t->scal(n, alpha, z1.data());
        CHECK(max_diff(z0, z1) < 1e-13);

        const double c = std::cos(0.7);
        const cplx s = std::sin(0.7) * rng.gaussian_cplx() / std::abs(rng.gaussian_cplx());
        auto p0 = random_buf(rng, n);
        auto q0 = random_buf(rng, n);
        auto p1 = p0;
        auto q1 = q0;
        kernels::scalar_table.rot(n, c, s, p0.data(), q0.data());
        t->rot(n, c, s, p1.data(), q1.data());
        CHECK(max_diff(p0, p1) < 1e-13);
        CHECK(max_diff(q0, q1) < 1e-13);
    }
}

TEST_CASE("dotc/nrm2sq scalar/simd equivalence") {
    const kernels::KernelTable* t = simd();
    if (t == nullptr) {
        MESSAGE("AVX2 kernels unavailable on this host; skipping");
        return;
    }
    Rng rng(303);
    for (std::size_t n : {1, 2, 5, 31, 64, 129}) {
        auto x = random_buf(rng, n);
        auto y = random_buf(rng, n);
        const cplx d0 = kernels::scalar_table.dotc(n, x.data(), y.data());
        const cplx d1 = t->dotc(n, x.data(), y.data());
        CHECK(std::abs(d0 - d1) < 1e-11 * (1.0 + std::abs(d0)));
        const double s0 = kernels::scalar_table.nrm2sq(n, x.data());
        const double s1 = t->nrm2sq(n, x.data());
        CHECK(std::abs(s0 - s1) < 1e-11 * (1.0 + s0));
    }
}

TEST_CASE("gemm matches naive ijk reference") {
    Rng rng(404);
    const std::size_t m = 6, k = 5, n = 7;
    auto a = random_buf(rng, m * k);
    auto b = random_buf(rng, k * n);
    std::vector<cplx> c(m * n, cplx{0.0, 0.0});
    kernels::gemm_acc(m, k, n, a.data(), b.data(), c.data());
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cplx acc{0.0, 0.0};
            for (std::size_t l = 0; l < k; ++l) acc += a[i * k + l] * b[l * n + j];
            CHECK(std::abs(acc - c[i * n + j]) < 1e-12);
        }
    }
}

TEST_CASE("dispatch reports an implementation") {
    const char* name = kernels::active().name;
    CHECK((std::string(name) == "scalar" || std::string(name) == "avx2"));
}
