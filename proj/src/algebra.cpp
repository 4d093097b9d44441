#include "projlat/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace projlat {

namespace {

// Threshold for the spectral meet: eigenvalues of p + q within
// this distance of 2 span range(p) ^ range(q).
constexpr double kMeetEigenThreshold = 1e-8;

std::size_t projection_block_rank(const CMatrix& block) {
    // For a (numerical) projection the spectrum clusters at {0, 1};
    // counting eigenvalues above 1/2 is the stable rank decision.
    HermitianEig e = hermitian_eig(block);
    std::size_t r = 0;
    for (double lam : e.values)
        if (lam > 0.5) ++r;
    return r;
}

}  // namespace

double op_norm(const Operator& x) {
    double m = 0.0;
    for (const CMatrix& b : x.blocks) m = std::max(m, operator_norm(b));
    return m;
}

Projection CentralProjection::to_projection() const {
    Projection p;
    p.op = to_operator();
    p.ranks.resize(mask.size());
    for (std::size_t b = 0; b < mask.size(); ++b) p.ranks[b] = mask[b] ? shape.block_dims[b] : 0;
    return p;
}

GrassmannSignature signature_of(const Projection& p) {
    return GrassmannSignature{p.shape(), p.ranks};
}

const char* to_string(MvRelation r) {
    switch (r) {
        case MvRelation::less: return "less";
        case MvRelation::equivalent: return "equivalent";
        case MvRelation::greater: return "greater";
        case MvRelation::incomparable: return "incomparable";
    }
    return "?";
}

Projection validate_projection(const Operator& op, const Tolerance& tol) {
    op.shape.validate();
    for (const CMatrix& b : op.blocks) b.require_finite("validate_projection");

    Operator herm = op.hermitian_part();
    if (op_norm(op - op.adjoint()) > tol.eq_abs)
        throw_invalid("validate_projection: operator is not hermitian within eq_abs");

    Projection p;
    p.op = std::move(herm);
    p.ranks.resize(op.block_count());
    for (std::size_t b = 0; b < p.op.blocks.size(); ++b) {
        const CMatrix& blk = p.op.blocks[b];
        if (operator_norm(blk * blk - blk) > tol.eq_abs)
            throw_invalid("validate_projection: operator is not idempotent within eq_abs");
        p.ranks[b] = projection_block_rank(blk);
    }
    return p;
}

Projection projection_unchecked(Operator op) {
    Projection p;
    p.op = op.hermitian_part();
    p.ranks.resize(p.op.block_count());
    for (std::size_t b = 0; b < p.op.blocks.size(); ++b)
        p.ranks[b] = projection_block_rank(p.op.blocks[b]);
    return p;
}

Projection complement(const Projection& p) {
    Projection c;
    c.op = Operator::identity(p.shape()) - p.op;
    c.ranks.resize(p.ranks.size());
    for (std::size_t b = 0; b < p.ranks.size(); ++b)
        c.ranks[b] = p.shape().block_dims[b] - p.ranks[b];
    return c;
}

Projection meet(const Projection& p, const Projection& q, const Tolerance&) {
    p.op.check_shape(q.op, "meet");
    Projection m;
    m.op = Operator::zero(p.shape());
    m.ranks.assign(p.op.block_count(), 0);
    for (std::size_t b = 0; b < p.op.blocks.size(); ++b) {
        const std::size_t n = p.shape().block_dims[b];
        HermitianEig e = hermitian_eig(p.op.blocks[b] + q.op.blocks[b]);
        CMatrix& out = m.op.blocks[b];
        std::size_t r = 0;
        for (std::size_t c = 0; c < n; ++c) {
            if (std::abs(e.values[c] - 2.0) >= kMeetEigenThreshold) continue;
            ++r;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    out(i, j) += e.vectors(i, c) * std::conj(e.vectors(j, c));
        }
        out = out.hermitian_part();
        m.ranks[b] = r;
    }
    return m;
}

Projection join(const Projection& p, const Projection& q, const Tolerance& tol) {
    p.op.check_shape(q.op, "join");
    return complement(meet(complement(p), complement(q), tol));
}

CentralProjection central_support(const Projection& p) {
    CentralProjection z;
    z.shape = p.shape();
    z.mask.resize(p.ranks.size());
    for (std::size_t b = 0; b < p.ranks.size(); ++b) z.mask[b] = p.ranks[b] > 0;
    return z;
}

MvRelation mv_compare(const Projection& p, const Projection& q) {
    p.op.check_shape(q.op, "mv_compare");
    bool some_less = false;
    bool some_greater = false;
    for (std::size_t b = 0; b < p.ranks.size(); ++b) {
        if (p.ranks[b] < q.ranks[b]) some_less = true;
        if (p.ranks[b] > q.ranks[b]) some_greater = true;
    }
    if (some_less && some_greater) return MvRelation::incomparable;
    if (some_less) return MvRelation::less;
    if (some_greater) return MvRelation::greater;
    return MvRelation::equivalent;
}

CMatrix range_basis(const CMatrix& proj_block, std::size_t rank) {
    const std::size_t n = proj_block.rows();
    if (rank == 0) return CMatrix();
    HermitianEig e = hermitian_eig(proj_block);
    CMatrix basis(n, rank);
    // eigenvalues ascending: the range eigenvectors are the last `rank`
    for (std::size_t c = 0; c < rank; ++c) {
        const std::size_t src = n - rank + c;
        for (std::size_t i = 0; i < n; ++i) basis(i, c) = e.vectors(i, src);
    }
    return basis;
}

std::vector<CMatrix> range_bases(const Projection& p) {
    std::vector<CMatrix> out(p.op.block_count());
    for (std::size_t b = 0; b < p.op.blocks.size(); ++b)
        out[b] = range_basis(p.op.blocks[b], p.ranks[b]);
    return out;
}

Operator mv_witness(const Projection& p, const Projection& q, const Tolerance&) {
    p.op.check_shape(q.op, "mv_witness");
    const MvRelation rel = mv_compare(p, q);
    if (rel != MvRelation::less && rel != MvRelation::equivalent)
        throw_invalid("mv_witness: p is not subequivalent to q");
    Operator v = Operator::zero(p.shape());
    for (std::size_t b = 0; b < p.op.blocks.size(); ++b) {
        const std::size_t r = p.ranks[b];
        if (r == 0) continue;
        CMatrix up = range_basis(p.op.blocks[b], r);
        CMatrix uq = range_basis(q.op.blocks[b], q.ranks[b]);
        CMatrix uq_r(uq.rows(), r);
        for (std::size_t i = 0; i < uq.rows(); ++i)
            for (std::size_t j = 0; j < r; ++j) uq_r(i, j) = uq(i, j);
        v.blocks[b] = up * uq_r.adjoint();
    }
    return v;
}

Operator partial_isometry_between(const Projection& p, const Projection& q, const Tolerance& tol) {
    if (p.ranks != q.ranks) throw_invalid("partial_isometry_between: signatures differ");
    return mv_witness(p, q, tol);
}

ProperizeResult properize(const GrassmannSignature& sig) {
    sig.validate();
    ProperizeResult out;
    out.mask.shape = sig.shape;
    out.mask.mask.resize(sig.k.size());
    for (std::size_t b = 0; b < sig.k.size(); ++b)
        out.mask.mask[b] = sig.k[b] > 0 && sig.k[b] < sig.shape.block_dims[b];

    for (std::size_t b = 0; b < sig.k.size(); ++b) {
        if (!out.mask.mask[b]) continue;
        out.restricted.shape.block_dims.push_back(sig.shape.block_dims[b]);
        out.restricted.k.push_back(sig.k[b]);
    }
    out.degenerate = out.restricted.shape.block_dims.empty();
    return out;
}

double distance(const Projection& p, const Projection& q) {
    p.op.check_shape(q.op, "distance");
    return op_norm(p.op - q.op);
}

}  // namespace projlat
