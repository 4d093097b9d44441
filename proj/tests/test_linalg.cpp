#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "projlat/decompositions.hpp"
#include "projlat/rng.hpp"
#include "test_support.hpp"

using namespace projlat;
using namespace projlat_test;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const Tolerance kTol{};
}  // namespace

TEST_CASE("operator_norm fixed values") {
    CHECK(operator_norm(CMatrix::zero(2, 2)) == 0.0);
    CHECK(operator_norm(CMatrix::identity(5)) == doctest::Approx(1.0).epsilon(1e-12));

    // diag(1,0) - (1/2)*ones has eigenvalues +-1/sqrt(2)
    CMatrix a = mat2(0.5, -0.5, -0.5, -0.5);
    CHECK(operator_norm(a) == doctest::Approx(kInvSqrt2).epsilon(1e-12));
}

TEST_CASE("operator_norm rejects empty matrices") {
    CMatrix empty;
    CHECK_THROWS_AS(operator_norm(empty), Error);
}

TEST_CASE("operator_norm equals adjoint norm and power-iteration oracle") {
    Rng rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t m = 1 + rng.uniform_below(8);
        const std::size_t n = 1 + rng.uniform_below(8);
        CMatrix a = rng.gaussian_matrix(m, n);
        const double x = operator_norm(a);
        const double y = operator_norm(a.adjoint());
        CHECK(std::abs(x - y) < 1e-10);
        const double z = opnorm_power_iteration(a, rng);
        CHECK(std::abs(x - z) < 1e-6 * (1.0 + x));
    }
}

TEST_CASE("polar_decompose fixed values") {
    {
        CMatrix x = mat2(2.0, 0.0, 0.0, 0.0);
        Polar p = polar_decompose(x);
        CHECK(diff_norm(p.v, mat2(1.0, 0.0, 0.0, 0.0)) < 1e-12);
        CHECK(diff_norm(p.absx, x) < 1e-12);
    }
    {
        CMatrix x = mat2(0.0, 0.5, 0.0, 0.0);
        Polar p = polar_decompose(x);
        CHECK(diff_norm(p.v, mat2(0.0, 1.0, 0.0, 0.0)) < 1e-12);
        CHECK(diff_norm(p.absx, mat2(0.0, 0.0, 0.0, 0.5)) < 1e-12);
    }
    {
        Polar p = polar_decompose(CMatrix::zero(3, 3));
        CHECK(operator_norm(p.v) < 1e-14);
        CHECK(operator_norm(p.absx) < 1e-14);
    }
}

TEST_CASE("polar_decompose contracts on random matrices") {
    Rng rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + rng.uniform_below(9);
        CMatrix x = rng.gaussian_matrix(n, n);
        if (trial % 3 == 0) {
            // make it rank deficient: zero two columns
            for (std::size_t i = 0; i < n; ++i) x(i, 0) = 0.0;
        }
        Polar p = polar_decompose(x);
        const double scale = operator_norm(x);
        CHECK(operator_norm(x - p.v * p.absx) <= 10 * kTol.eq_abs * (scale + 1.0));
        CHECK(operator_norm(p.v * p.v.adjoint() * x - x) <= 10 * kTol.eq_abs * (scale + 1.0));
        CMatrix init = p.v.adjoint() * p.v;
        CHECK(diff_norm(init, range_projection(p.absx)) <= kTol.eq_abs);
    }
}

TEST_CASE("range_projection fixed values") {
    CMatrix ones = mat2(1.0, 1.0, 1.0, 1.0);
    CHECK(diff_norm(range_projection(ones), mat2(0.5, 0.5, 0.5, 0.5)) < 1e-12);
    CHECK(operator_norm(range_projection(CMatrix::zero(3, 2))) == 0.0);
    CHECK(diff_norm(range_projection(CMatrix::identity(4)), CMatrix::identity(4)) < 1e-12);
}

TEST_CASE("range_projection is a projection fixing the range") {
    Rng rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t m = 1 + rng.uniform_below(7);
        const std::size_t n = 1 + rng.uniform_below(7);
        CMatrix a = rng.gaussian_matrix(m, n);
        CMatrix p = range_projection(a);
        CHECK(diff_norm(p * p, p) <= kTol.eq_abs);
        CHECK(diff_norm(p, p.adjoint()) <= kTol.eq_abs);
        CHECK(operator_norm(p * a - a) <= 10 * kTol.eq_abs * (operator_norm(a) + 1.0));
    }
}

TEST_CASE("hermitian_sqrt fixed values") {
    {
        CMatrix a = mat2(4.0, 0.0, 0.0, 1.0);
        CHECK(diff_norm(hermitian_sqrt(a), mat2(2.0, 0.0, 0.0, 1.0)) < 1e-12);
    }
    {
        CMatrix a = 0.5 * CMatrix::identity(2);
        CHECK(diff_norm(hermitian_sqrt(a), kInvSqrt2 * CMatrix::identity(2)) < 1e-12);
    }
    {
        // half of the rank-1 projection P = (1/2)[[1,1],[1,1]]:
        // sqrt((1/2) P) = (1/sqrt 2) P
        CMatrix a = mat2(0.25, 0.25, 0.25, 0.25);
        CMatrix expect = mat2(1.0, 1.0, 1.0, 1.0) * cplx{1.0 / (2.0 * std::sqrt(2.0)), 0.0};
        CHECK(diff_norm(hermitian_sqrt(a), expect) < 1e-12);
        // and the projection itself is its own square root
        CMatrix p = mat2(0.5, 0.5, 0.5, 0.5);
        CHECK(diff_norm(hermitian_sqrt(p), p) < 1e-12);
    }
}

TEST_CASE("hermitian_sqrt rejects bad inputs") {
    CMatrix notherm = mat2(1.0, 1.0, 0.0, 1.0);
    CHECK_THROWS_AS(hermitian_sqrt(notherm), Error);
    CMatrix neg = mat2(-1.0, 0.0, 0.0, 1.0);
    CHECK_THROWS_AS(hermitian_sqrt(neg), Error);
}

TEST_CASE("hermitian_sqrt squares back") {
    Rng rng(14);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 1 + rng.uniform_below(8);
        CMatrix g = rng.gaussian_matrix(n, n);
        CMatrix a = (g * g.adjoint()).hermitian_part();
        CMatrix b = hermitian_sqrt(a);
        CHECK(operator_norm(b * b - a) <= 10 * kTol.eq_abs * (operator_norm(a) + 1.0));
    }
}

TEST_CASE("hermitian_eig reconstructs and matches trace invariants") {
    Rng rng(15);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 1 + rng.uniform_below(10);
        CMatrix g = rng.gaussian_matrix(n, n);
        CMatrix a = g.hermitian_part();
        HermitianEig e = hermitian_eig(a);
        // unitary eigenvectors
        CHECK(diff_norm(e.vectors.adjoint() * e.vectors, CMatrix::identity(n)) < 1e-12);
        // reconstruction
        CMatrix d(n, n);
        for (std::size_t i = 0; i < n; ++i) d(i, i) = e.values[i];
        CHECK(operator_norm(e.vectors * d * e.vectors.adjoint() - a) < 1e-12 * (1.0 + operator_norm(a)));
        // eigenvalue sums against trace invariants
        double s1 = 0.0, s2 = 0.0;
        for (double lam : e.values) {
            s1 += lam;
            s2 += lam * lam;
        }
        CHECK(std::abs(s1 - a.trace().real()) < 1e-10 * (1.0 + std::abs(s1)));
        const double fro = a.frobenius_norm();
        CHECK(std::abs(s2 - fro * fro) < 1e-10 * (1.0 + s2));
        // ascending order
        for (std::size_t i = 0; i + 1 < n; ++i) CHECK(e.values[i] <= e.values[i + 1]);
    }
}

TEST_CASE("svd reconstructs with orthonormal factors") {
    Rng rng(16);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t m = 1 + rng.uniform_below(9);
        const std::size_t n = 1 + rng.uniform_below(9);
        CMatrix a = rng.gaussian_matrix(m, n);
        Svd s = svd(a);
        const std::size_t r = s.sigma.size();
        REQUIRE(r == std::min(m, n));
        CMatrix d(r, r);
        for (std::size_t i = 0; i < r; ++i) d(i, i) = s.sigma[i];
        CHECK(operator_norm(s.u * d * s.v.adjoint() - a) < 1e-12 * (1.0 + operator_norm(a)));
        CHECK(diff_norm(s.v.adjoint() * s.v, CMatrix::identity(r)) < 1e-12);
        for (std::size_t i = 0; i + 1 < r; ++i) CHECK(s.sigma[i] >= s.sigma[i + 1]);
    }
}
