#include "projlat/halmos.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace projlat {

namespace {

constexpr double kAngleTol = 1e-7;

// Re-validate an operator that must be a projection by construction;
// failure here is a numerical breakdown, not a caller mistake.
Projection revalidate(const Operator& op, const Tolerance& tol, const char* what) {
    Operator herm = op.hermitian_part();
    for (std::size_t b = 0; b < herm.blocks.size(); ++b) {
        const CMatrix& blk = herm.blocks[b];
        if (operator_norm(blk * blk - blk) > 100.0 * tol.eq_abs)
            throw_invariant(std::string("halmos: ") + what + " failed to be a projection");
    }
    return projection_unchecked(std::move(herm));
}

void check_residual(double res, double limit, const char* what) {
    if (res > limit) throw_invariant(std::string("halmos: residual too large in ") + what);
}

}  // namespace

std::vector<double> principal_angles_of(const Operator& a, const Projection& e1) {
    std::vector<double> angles;
    for (std::size_t blk = 0; blk < a.blocks.size(); ++blk) {
        const std::size_t r = e1.ranks[blk];
        if (r == 0) continue;
        CMatrix basis = range_basis(e1.op.blocks[blk], r);
        CMatrix compressed = basis.adjoint() * a.blocks[blk] * basis;
        HermitianEig e = hermitian_eig(compressed);
        for (double lam : e.values) {
            const double c = std::clamp(lam, -1.0, 1.0);
            const double theta = std::acos(c);
            if (theta > kAngleTol && theta < std::numbers::pi / 2.0 - kAngleTol)
                angles.push_back(theta);
        }
    }
    std::sort(angles.begin(), angles.end());
    return angles;
}

HalmosData halmos_decompose(const Projection& p, const Projection& q, const Tolerance& tol) {
    p.op.check_shape(q.op, "halmos_decompose");

    HalmosData h;
    const Projection pc = complement(p);
    const Projection qc = complement(q);
    h.p_and_q = meet(p, q, tol);
    h.p_and_qperp = meet(p, qc, tol);
    h.pperp_and_q = meet(pc, q, tol);
    h.pperp_and_qperp = meet(pc, qc, tol);

    h.e1 = revalidate(p.op - h.p_and_q.op - h.p_and_qperp.op, tol, "e1 = p - p^q - p^q'");
    h.e2 = revalidate(pc.op - h.pperp_and_q.op - h.pperp_and_qperp.op, tol, "e2 = p' - p'^q - p'^q'");

    // generic part of q and its corner coupling x = e1 (q - p^q - p'^q) e2
    const Operator q0 = q.op - h.p_and_q.op - h.pperp_and_q.op;
    const Operator x = h.e1.op * q0 * h.e2.op;

    h.v = Operator::zero(p.shape());
    h.a = Operator::zero(p.shape());
    h.b = Operator::zero(p.shape());
    for (std::size_t blk = 0; blk < x.blocks.size(); ++blk) {
        // The polar isometry of x has prescribed rank: range(x) = e1. Keep
        // exactly rank(e1) singular directions; a relative cutoff would
        // promote noise when x is (numerically) zero.
        const std::size_t r = h.e1.ranks[blk];
        const std::size_t n = x.blocks[blk].rows();
        CMatrix vblk(n, n);
        if (r > 0) {
            Svd s = svd(x.blocks[blk]);
            for (std::size_t c = 0; c < r; ++c)
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        vblk(i, j) += s.u(i, c) * std::conj(s.v(j, c));
        }
        h.v.blocks[blk] = std::move(vblk);
        h.a.blocks[blk] = hermitian_sqrt((h.e1.op.blocks[blk] * q0.blocks[blk] * h.e1.op.blocks[blk]).hermitian_part(), tol);
        h.b.blocks[blk] = hermitian_sqrt((h.v.blocks[blk] * q0.blocks[blk] * h.v.blocks[blk].adjoint()).hermitian_part(), tol);
    }

    // keep a^2 + b^2 = e1 exactly representable
    if (op_norm(h.a * h.a + h.b * h.b - h.e1.op) > tol.eq_abs)
        for (std::size_t blk = 0; blk < x.blocks.size(); ++blk)
            h.b.blocks[blk] = hermitian_sqrt(
                (h.e1.op.blocks[blk] - h.a.blocks[blk] * h.a.blocks[blk]).hermitian_part(), tol);

    const double limit = 100.0 * tol.eq_abs;
    check_residual(op_norm(h.v * h.v.adjoint() - h.e1.op), limit, "v v* = e1");
    check_residual(op_norm(h.v.adjoint() * h.v - h.e2.op), limit, "v* v = e2");
    check_residual(op_norm(h.a * h.a + h.b * h.b - h.e1.op), limit, "a^2 + b^2 = e1");
    check_residual(op_norm(h.a * h.b - h.b * h.a), limit, "[a, b] = 0");
    Operator resolution = h.p_and_q.op + h.p_and_qperp.op + h.pperp_and_q.op +
                          h.pperp_and_qperp.op + h.e1.op + h.e2.op;
    check_residual(op_norm(resolution - Operator::identity(p.shape())), limit,
                   "five-term resolution of identity");

    h.angles = principal_angles_of(h.a, h.e1);
    return h;
}

std::pair<Projection, Projection> halmos_reconstruct(const HalmosData& h, const Tolerance& tol) {
    const Operator p_op = h.p_and_qperp.op + h.p_and_q.op + h.e1.op;
    const Operator generic = h.a * h.a + h.a * h.b * h.v + h.v.adjoint() * h.b * h.a +
                             h.v.adjoint() * h.b * h.b * h.v;
    const Operator q_op = h.pperp_and_q.op + h.p_and_q.op + generic;

    Projection p = revalidate(p_op, tol, "reconstructed p");
    Projection q = revalidate(q_op, tol, "reconstructed q");
    return {std::move(p), std::move(q)};
}

std::vector<double> principal_angles(const HalmosData& h) {
    return principal_angles_of(h.a, h.e1);
}

double distance_via_halmos(const HalmosData& h) {
    if (!h.p_and_qperp.is_zero() || !h.pperp_and_q.is_zero()) return 1.0;
    if (h.e1.is_zero()) return 0.0;
    return op_norm(h.b);
}

}  // namespace projlat
