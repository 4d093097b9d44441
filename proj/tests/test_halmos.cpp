#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "projlat/halmos.hpp"
#include "projlat/sampling.hpp"
#include "test_support.hpp"

using namespace projlat;
using namespace projlat_test;

namespace {

const Tolerance kTol{};
const double kPi = std::numbers::pi;

Projection proj2(cplx a, cplx b, cplx c, cplx d) {
    Operator op(AlgebraShape{{2}});
    op.blocks[0] = mat2(a, b, c, d);
    return validate_projection(op);
}

AlgebraShape random_shape(Rng& rng, std::size_t max_blocks, std::size_t max_dim) {
    AlgebraShape s;
    const std::size_t nb = 1 + rng.uniform_below(max_blocks);
    for (std::size_t b = 0; b < nb; ++b) s.block_dims.push_back(1 + rng.uniform_below(max_dim));
    return s;
}

}  // namespace

TEST_CASE("equal projections put everything in the corners") {
    Rng rng(31);
    Projection p = random_projection(GrassmannSignature{AlgebraShape{{4}}, {2}}, rng);
    HalmosData h = halmos_decompose(p, p);
    CHECK(h.e1.is_zero());
    CHECK(h.e2.is_zero());
    CHECK(distance(h.p_and_q, p) <= kTol.eq_abs);
    CHECK(h.angles.empty());
    CHECK(distance_via_halmos(h) == 0.0);
}

TEST_CASE("the pi/4 pair decomposes in closed form") {
    Projection p = proj2(1.0, 0.0, 0.0, 0.0);
    Projection q = proj2(0.5, 0.5, 0.5, 0.5);
    HalmosData h = halmos_decompose(p, q);

    CHECK(h.p_and_q.is_zero());
    CHECK(h.p_and_qperp.is_zero());
    CHECK(h.pperp_and_q.is_zero());
    CHECK(h.pperp_and_qperp.is_zero());
    CHECK(diff_norm(h.e1.op.blocks[0], mat2(1.0, 0.0, 0.0, 0.0)) <= 1e-10);
    CHECK(diff_norm(h.e2.op.blocks[0], mat2(0.0, 0.0, 0.0, 1.0)) <= 1e-10);
    CHECK(diff_norm(h.v.blocks[0], mat2(0.0, 1.0, 0.0, 0.0)) <= 1e-10);
    CHECK(diff_norm(h.a.blocks[0] * h.a.blocks[0], mat2(0.5, 0.0, 0.0, 0.0)) <= 1e-10);
    CHECK(diff_norm(h.b.blocks[0] * h.b.blocks[0], mat2(0.5, 0.0, 0.0, 0.0)) <= 1e-10);

    REQUIRE(h.angles.size() == 1);
    CHECK(h.angles[0] == doctest::Approx(kPi / 4.0).epsilon(1e-10));
    CHECK(distance_via_halmos(h) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));

    auto [p2, q2] = halmos_reconstruct(h);
    CHECK(distance(p2, p) <= 1e-10);
    CHECK(distance(q2, q) <= 1e-10);
}

TEST_CASE("orthogonal rank-1 pair is pure corners") {
    Projection p = proj2(1.0, 0.0, 0.0, 0.0);
    Projection q = proj2(0.0, 0.0, 0.0, 1.0);
    HalmosData h = halmos_decompose(p, q);
    CHECK(distance(h.p_and_qperp, p) <= kTol.eq_abs);
    CHECK(distance(h.pperp_and_q, q) <= kTol.eq_abs);
    CHECK(h.e1.is_zero());
    CHECK(h.e2.is_zero());
    CHECK(distance_via_halmos(h) == 1.0);
}

TEST_CASE("commuting case reconstructs q from corners") {
    Rng rng(32);
    CMatrix u = haar_unitary(5, rng);
    auto embed = [&](std::size_t first, std::size_t count) {
        CMatrix m(5, 5);
        for (std::size_t c = first; c < first + count; ++c)
            for (std::size_t i = 0; i < 5; ++i)
                for (std::size_t j = 0; j < 5; ++j) m(i, j) += u(i, c) * std::conj(u(j, c));
        Operator op(AlgebraShape{{5}});
        op.blocks[0] = m.hermitian_part();
        return validate_projection(op);
    };
    Projection p = embed(0, 3);  // coords 0,1,2
    Projection q = embed(2, 2);  // coords 2,3
    HalmosData h = halmos_decompose(p, q);
    CHECK(h.e1.is_zero());
    Operator q_rebuilt = h.p_and_q.op + h.pperp_and_q.op;
    CHECK(op_norm(q_rebuilt - q.op) <= 1e-8);
}

TEST_CASE("two planar rotations give angles pi/6 and pi/3") {
    Operator op_p(AlgebraShape{{4}});
    Operator op_q(AlgebraShape{{4}});
    CMatrix& p = op_p.blocks[0];
    CMatrix& q = op_q.blocks[0];
    p(0, 0) = 1.0;
    p(2, 2) = 1.0;
    auto put_line = [&](CMatrix& m, std::size_t base, double theta) {
        const double c = std::cos(theta), s = std::sin(theta);
        m(base, base) = c * c;
        m(base, base + 1) = c * s;
        m(base + 1, base) = c * s;
        m(base + 1, base + 1) = s * s;
    };
    put_line(q, 0, kPi / 6.0);
    put_line(q, 2, kPi / 3.0);

    HalmosData h = halmos_decompose(validate_projection(op_p), validate_projection(op_q));
    REQUIRE(h.angles.size() == 2);
    CHECK(h.angles[0] == doctest::Approx(kPi / 6.0).epsilon(1e-10));
    CHECK(h.angles[1] == doctest::Approx(kPi / 3.0).epsilon(1e-10));
    CHECK(distance_via_halmos(h) == doctest::Approx(std::sin(kPi / 3.0)).epsilon(1e-10));
}

TEST_CASE("round-trip, resolution and distance oracle on random pairs") {
    Rng rng(33);
    for (int trial = 0; trial < 60; ++trial) {
        AlgebraShape shape = random_shape(rng, 3, 12);
        TwoProjectionSample s = (trial % 2 == 0)
                                    ? random_projection_pair_structured(shape, rng)
                                    : random_projection_pair_generic(shape, rng);

        HalmosData h = halmos_decompose(s.p, s.q);

        Operator resolution = h.p_and_q.op + h.p_and_qperp.op + h.pperp_and_q.op +
                              h.pperp_and_qperp.op + h.e1.op + h.e2.op;
        CHECK(op_norm(resolution - Operator::identity(shape)) <= kTol.eq_abs);
        CHECK(op_norm(h.a * h.a + h.b * h.b - h.e1.op) <= 1e-8);

        auto [p2, q2] = halmos_reconstruct(h);
        CHECK(distance(p2, s.p) <= 1e-8);
        CHECK(distance(q2, s.q) <= 1e-8);

        CHECK(std::abs(distance_via_halmos(h) - distance(s.p, s.q)) <= 1e-8);
    }
}

TEST_CASE("principal angles are unitarily invariant") {
    Rng rng(34);
    for (int trial = 0; trial < 20; ++trial) {
        AlgebraShape shape = random_shape(rng, 2, 8);
        TwoProjectionSample s = random_projection_pair_structured(shape, rng);
        std::vector<double> base = halmos_decompose(s.p, s.q).angles;

        Operator u = haar_block_unitary(shape, rng);
        Projection pu = validate_projection(u * s.p.op * u.adjoint());
        Projection qu = validate_projection(u * s.q.op * u.adjoint());
        std::vector<double> conj = halmos_decompose(pu, qu).angles;

        REQUIRE(base.size() == conj.size());
        for (std::size_t i = 0; i < base.size(); ++i)
            CHECK(std::abs(base[i] - conj[i]) <= 1e-7);
    }
}
