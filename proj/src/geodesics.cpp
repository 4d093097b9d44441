#include "projlat/geodesics.hpp"

#include <cmath>
#include <numbers>

#include "projlat/halmos.hpp"
#include "projlat/sampling.hpp"

namespace projlat {

namespace {

constexpr double kMidpointTol = 1e-8;
constexpr double kGridTol = 1e-8;
constexpr double kLoopAmplitude = 0.1;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void require_equal_signatures(const Projection& a, const Projection& b, const char* who) {
    a.op.check_shape(b.op, who);
    if (a.ranks != b.ranks) throw_invalid(std::string(who) + ": signature mismatch");
}

// Oriented copy: identity on orient-true blocks, complement elsewhere.
Projection orient_projection(const Projection& p, const CentralProjection& orient) {
    Projection out = p;
    for (std::size_t b = 0; b < p.op.block_count(); ++b) {
        if (orient.mask[b]) continue;
        const std::size_t n = p.shape().block_dims[b];
        out.op.blocks[b] = CMatrix::identity(n) - p.op.blocks[b];
        out.ranks[b] = n - p.ranks[b];
    }
    return out;
}

// Builds the oriented frame shared by geodesic_through and the midpoint
// sampler: working endpoints, the connecting partial isometry, no unitary.
// Orientation prefers the direct (p _|_ q) reading per block; blocks where
// only p' _|_ q' holds are complemented.
GeodesicFrame base_frame(const Projection& p, const Projection& q, const Tolerance& tol) {
    GeodesicFrame frame;
    frame.orient.shape = p.shape();
    frame.orient.mask.resize(p.op.block_count());
    for (std::size_t b = 0; b < p.op.block_count(); ++b) {
        const std::size_t n = p.shape().block_dims[b];
        if (operator_norm(p.op.blocks[b] * q.op.blocks[b]) <= tol.eq_abs) {
            frame.orient.mask[b] = true;
        } else if (operator_norm((CMatrix::identity(n) - p.op.blocks[b]) *
                                 (CMatrix::identity(n) - q.op.blocks[b])) <= tol.eq_abs) {
            frame.orient.mask[b] = false;
        } else {
            throw_invalid("geodesic: p and q are not in the triangle relation");
        }
    }
    frame.e = orient_projection(p, frame.orient);
    frame.f = orient_projection(q, frame.orient);
    frame.v = partial_isometry_between(frame.e, frame.f, tol);
    frame.u = frame.e.op;  // corner identity
    frame.fixed_part = Operator::zero(p.shape());
    return frame;
}

void check_unit_speed_grid(const GeodesicFrame& frame, const Tolerance& tol) {
    constexpr int kGridPoints = 9;
    std::vector<Projection> pts;
    std::vector<double> thetas;
    pts.reserve(kGridPoints);
    for (int j = 0; j < kGridPoints; ++j) {
        const double theta = j * std::numbers::pi / 16.0;
        thetas.push_back(theta);
        pts.push_back(geodesic_eval(frame, theta, tol));
    }
    for (int a = 0; a < kGridPoints; ++a)
        for (int b = a + 1; b < kGridPoints; ++b) {
            const double d = distance(pts[a], pts[b]);
            if (std::abs(d - std::sin(thetas[b] - thetas[a])) > kGridTol)
                throw_invariant("geodesic: sin|t1-t2| metric identity failed on the grid");
        }
}

}  // namespace

bool is_midpoint(const Projection& e, const Projection& p, const Projection& q,
                 const Tolerance&) {
    require_equal_signatures(e, p, "is_midpoint");
    require_equal_signatures(e, q, "is_midpoint");
    return std::abs(distance(e, p) - kInvSqrt2) <= kMidpointTol &&
           std::abs(distance(e, q) - kInvSqrt2) <= kMidpointTol;
}

Projection midpoint_from_unitary(const Projection& p, const Projection& q, const Operator& v,
                                 const Operator& u, const Tolerance& tol) {
    p.op.check_shape(q.op, "midpoint_from_unitary");
    if (op_norm(p.op * q.op) > tol.eq_abs)
        throw_invalid("midpoint_from_unitary: p and q are not orthogonal");
    if (op_norm(v * v.adjoint() - p.op) > 10 * tol.eq_abs ||
        op_norm(v.adjoint() * v - q.op) > 10 * tol.eq_abs)
        throw_invalid("midpoint_from_unitary: v is not a partial isometry from q onto p");
    if (op_norm(u * u.adjoint() - p.op) > 10 * tol.eq_abs ||
        op_norm(u.adjoint() * u - p.op) > 10 * tol.eq_abs)
        throw_invalid("midpoint_from_unitary: u is not unitary in the corner pMp");

    Operator m = p.op + u * v + (u * v).adjoint() + q.op;
    m *= cplx{0.5, 0.0};
    return validate_projection(m, tol);
}

Operator unitary_from_midpoint(const Projection& p, const Projection& q, const Operator& v,
                               const Projection& e, const Tolerance& tol) {
    p.op.check_shape(q.op, "unitary_from_midpoint");
    Operator pq = p.op + q.op;
    if (op_norm(pq * e.op - e.op) > 10 * tol.eq_abs)
        throw_invalid("unitary_from_midpoint: e is not dominated by p + q");

    Operator u = cplx{2.0, 0.0} * (p.op * e.op * v.adjoint());
    if (op_norm(u * u.adjoint() - p.op) > 100 * tol.eq_abs ||
        op_norm(u.adjoint() * u - p.op) > 100 * tol.eq_abs)
        throw_invalid("unitary_from_midpoint: e is not a midpoint under p + q");
    return u;
}

Projection geodesic_eval(const GeodesicFrame& frame, double theta, const Tolerance&) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi / 2.0 + 1e-12))
        throw_invalid("geodesic_eval: theta outside [0, pi/2]");

    const double c = std::cos(theta);
    const double s = std::sin(theta);

    Operator uv = frame.u * frame.v;
    Operator core = cplx{c * c, 0.0} * frame.e.op + cplx{c * s, 0.0} * (uv + uv.adjoint()) +
                    cplx{s * s, 0.0} * frame.f.op + frame.fixed_part;

    if (frame.loop) {
        const GeodesicLoop& lp = *frame.loop;
        const double g = lp.amplitude * std::sin(4.0 * theta);
        const double cg = std::cos(g);
        const double sg = std::sin(g);
        core += cplx{cg * cg, 0.0} * lp.p1.op + cplx{cg * sg, 0.0} * (lp.w + lp.w.adjoint()) +
                cplx{sg * sg, 0.0} * lp.q1.op;
    }

    for (std::size_t b = 0; b < core.block_count(); ++b) {
        if (frame.orient.mask[b]) continue;
        core.blocks[b] = CMatrix::identity(core.shape.block_dims[b]) - core.blocks[b];
    }
    return projection_unchecked(std::move(core));
}

GeodesicFrame geodesic_through(const Projection& p, const Projection& q, const Projection& p0,
                               const Tolerance& tol) {
    require_equal_signatures(p, q, "geodesic_through");
    require_equal_signatures(p, p0, "geodesic_through");
    if (!triangle_relation(p, q, tol))
        throw_invalid("geodesic_through: p and q are not in the triangle relation");
    if (!is_midpoint(p0, p, q, tol))
        throw_invalid("geodesic_through: p0 is not a midpoint of p and q");

    GeodesicFrame frame = base_frame(p, q, tol);
    const Projection m0 = orient_projection(p0, frame.orient);
    frame.u = cplx{2.0, 0.0} * (frame.e.op * m0.op * frame.v.adjoint());
    if (op_norm(frame.u * frame.u.adjoint() - frame.e.op) > 100 * tol.eq_abs ||
        op_norm(frame.u.adjoint() * frame.u - frame.e.op) > 100 * tol.eq_abs)
        throw_invalid("geodesic_through: p0 does not parameterize a corner unitary");

    if (distance(geodesic_eval(frame, std::numbers::pi / 4.0, tol), p0) > kGridTol)
        throw_invariant("geodesic_through: gamma(pi/4) does not reproduce p0");
    check_unit_speed_grid(frame, tol);
    return frame;
}

std::optional<TriangleWitness> triangle_relation(const Projection& p, const Projection& q,
                                                 const Tolerance& tol) {
    p.op.check_shape(q.op, "triangle_relation");
    const std::size_t nblocks = p.op.block_count();
    if (nblocks > 16)
        throw_capacity("triangle_relation: more than 16 blocks in the central mask search");

    std::vector<bool> orth(nblocks), coorth(nblocks);
    for (std::size_t b = 0; b < nblocks; ++b) {
        const std::size_t n = p.shape().block_dims[b];
        const CMatrix pc = CMatrix::identity(n) - p.op.blocks[b];
        const CMatrix qc = CMatrix::identity(n) - q.op.blocks[b];
        orth[b] = operator_norm(p.op.blocks[b] * q.op.blocks[b]) <= tol.eq_abs;
        coorth[b] = operator_norm(pc * qc) <= tol.eq_abs;
    }

    // lexicographic over (mask[0], mask[1], ...), false < true
    const std::size_t total = std::size_t{1} << nblocks;
    for (std::size_t code = 0; code < total; ++code) {
        bool ok = true;
        std::vector<bool> mask(nblocks);
        for (std::size_t b = 0; b < nblocks && ok; ++b) {
            mask[b] = (code >> (nblocks - 1 - b)) & 1;
            ok = mask[b] ? orth[b] : coorth[b];
        }
        if (ok) return TriangleWitness{CentralProjection{p.shape(), std::move(mask)}};
    }
    return std::nullopt;
}

bool sharp_relation(const Projection& p1, const Projection& p2, const Tolerance& tol) {
    p1.op.check_shape(p2.op, "sharp_relation");
    if (op_norm(p1.op * p2.op) > tol.eq_abs) return false;
    Projection rest = projection_unchecked(Operator::identity(p1.shape()) - p1.op - p2.op);
    const MvRelation rel = mv_compare(p1, rest);
    return rel == MvRelation::less || rel == MvRelation::equivalent;
}

std::pair<GeodesicFrame, GeodesicFrame> nonuniqueness_witness(const Projection& p,
                                                              const Projection& q,
                                                              const Projection& p1,
                                                              const Projection& q1,
                                                              const Tolerance& tol) {
    require_equal_signatures(p, q, "nonuniqueness_witness");
    if (op_norm(p.op * q.op - q.op * p.op) > tol.eq_abs)
        throw_invalid("nonuniqueness_witness: p and q do not commute");

    const Projection corner11 = meet(p, q, tol);
    const Projection corner00 = meet(complement(p), complement(q), tol);
    const Projection moving_e = meet(p, complement(q), tol);
    const Projection moving_f = meet(complement(p), q, tol);

    if (p1.is_zero() || q1.is_zero())
        throw_invalid("nonuniqueness_witness: p1 and q1 must be nonzero");
    if (op_norm(corner11.op * p1.op - p1.op) > 10 * tol.eq_abs)
        throw_invalid("nonuniqueness_witness: p1 is not dominated by p^q");
    if (op_norm(corner00.op * q1.op - q1.op) > 10 * tol.eq_abs)
        throw_invalid("nonuniqueness_witness: q1 is not dominated by p'^q'");
    if (mv_compare(p1, q1) != MvRelation::equivalent)
        throw_invalid("nonuniqueness_witness: p1 and q1 are not equivalent");
    if (moving_e.is_zero())
        throw_invalid("nonuniqueness_witness: p^q' vanishes, the rotating part is empty");

    GeodesicFrame first;
    first.orient = CentralProjection{p.shape(), std::vector<bool>(p.op.block_count(), true)};
    first.e = moving_e;
    first.f = moving_f;
    first.v = partial_isometry_between(moving_e, moving_f, tol);
    first.u = moving_e.op;
    first.fixed_part = corner11.op;

    GeodesicFrame second = first;
    second.fixed_part = corner11.op - p1.op;
    second.loop = GeodesicLoop{p1, q1, partial_isometry_between(p1, q1, tol), kLoopAmplitude};

    check_unit_speed_grid(first, tol);
    check_unit_speed_grid(second, tol);

    const double pi8 = std::numbers::pi / 8.0;
    const double sep = distance(geodesic_eval(first, pi8, tol), geodesic_eval(second, pi8, tol));
    if (sep <= 1e-3)
        throw_invariant("nonuniqueness_witness: the two paths are not separated at pi/8");
    return {std::move(first), std::move(second)};
}

MidpointEnclosure midpoint_enclosure(const Projection& p1, const Projection& p2,
                                     const Tolerance& tol) {
    require_equal_signatures(p1, p2, "midpoint_enclosure");

    const HalmosData h = halmos_decompose(p1, p2, tol);
    if (!h.p_and_qperp.is_zero() || !h.pperp_and_q.is_zero())
        throw_invalid("midpoint_enclosure: |p1 - p2| must be < 1");
    const HalmosData hc = halmos_decompose(complement(p1), complement(p2), tol);

    MidpointEnclosure out;
    out.orient.shape = p1.shape();
    out.orient.mask.resize(p1.op.block_count());

    Operator e_op = Operator::zero(p1.shape());
    Operator f_op = Operator::zero(p1.shape());
    const cplx half{0.5, 0.0};
    const cplx ihalf{0.0, 0.5};

    for (std::size_t b = 0; b < p1.op.block_count(); ++b) {
        const bool direct = h.p_and_q.ranks[b] <= h.pperp_and_qperp.ranks[b];
        out.orient.mask[b] = direct;
        const HalmosData& src = direct ? h : hc;

        // partial isometry from a subspace of the large corner onto the small one
        const std::size_t r = src.p_and_q.ranks[b];
        const std::size_t n = p1.shape().block_dims[b];
        CMatrix viso(n, n);
        if (r > 0) {
            CMatrix u_small = range_basis(src.p_and_q.op.blocks[b], r);
            CMatrix u_large = range_basis(src.pperp_and_qperp.op.blocks[b],
                                          src.pperp_and_qperp.ranks[b]);
            CMatrix u_part(n, r);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < r; ++j) u_part(i, j) = u_large(i, j);
            viso = u_small * u_part.adjoint();
        }

        const CMatrix& m11 = src.p_and_q.op.blocks[b];
        const CMatrix& e1b = src.e1.op.blocks[b];
        const CMatrix& e2b = src.e2.op.blocks[b];
        const CMatrix& w = src.v.blocks[b];
        const CMatrix wskew = w - w.adjoint();
        const CMatrix vv = viso.adjoint() * viso;

        CMatrix eb = half * (m11 + viso + viso.adjoint() + vv) + half * (e1b + e2b) + ihalf * wskew;
        CMatrix fb = half * (m11 - viso - viso.adjoint() + vv) + half * (e1b + e2b) - ihalf * wskew;
        if (!direct) {
            eb = CMatrix::identity(n) - eb;
            fb = CMatrix::identity(n) - fb;
        }
        e_op.blocks[b] = eb.hermitian_part();
        f_op.blocks[b] = fb.hermitian_part();
    }

    out.e = validate_projection(e_op, tol);
    out.f = validate_projection(f_op, tol);

    for (std::size_t b = 0; b < p1.op.block_count(); ++b) {
        const std::size_t n = p1.shape().block_dims[b];
        const CMatrix& eb = out.e.op.blocks[b];
        const CMatrix& fb = out.f.op.blocks[b];
        const double res = out.orient.mask[b]
                               ? operator_norm(eb * fb)
                               : operator_norm((CMatrix::identity(n) - eb) *
                                               (CMatrix::identity(n) - fb));
        if (res > 10 * tol.eq_abs)
            throw_invariant("midpoint_enclosure: endpoints failed orthogonality");
    }
    if (!is_midpoint(p1, out.e, out.f, tol) || !is_midpoint(p2, out.e, out.f, tol))
        throw_invariant("midpoint_enclosure: inputs are not midpoints of the enclosure");
    return out;
}

std::vector<Projection> sample_midpoints(const Projection& p, const Projection& q,
                                         std::size_t count, Rng& rng, const Tolerance& tol) {
    require_equal_signatures(p, q, "sample_midpoints");
    GeodesicFrame frame = base_frame(p, q, tol);
    const std::vector<CMatrix> bases = range_bases(frame.e);

    std::vector<Projection> out;
    out.reserve(count);
    for (std::size_t trial = 0; trial < count; ++trial) {
        Operator u = Operator::zero(p.shape());
        for (std::size_t b = 0; b < u.block_count(); ++b) {
            const std::size_t r = frame.e.ranks[b];
            if (r == 0) continue;
            CMatrix small = haar_unitary(r, rng);
            u.blocks[b] = bases[b] * small * bases[b].adjoint();
        }
        GeodesicFrame sampled = frame;
        sampled.u = std::move(u);
        out.push_back(geodesic_eval(sampled, std::numbers::pi / 4.0, tol));
    }
    return out;
}

Operator frame_unitary_from_point(const GeodesicFrame& frame, const Projection& x, double theta) {
    const double cs = std::cos(theta) * std::sin(theta);
    if (cs <= 0.0) throw_invalid("frame_unitary_from_point: theta must lie strictly in (0, pi/2)");
    Projection oriented = orient_projection(x, frame.orient);
    Operator u = frame.e.op * oriented.op * frame.v.adjoint();
    u *= cplx{1.0 / cs, 0.0};
    return u;
}

}  // namespace projlat
