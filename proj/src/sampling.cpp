#include "projlat/sampling.hpp"

#include <cmath>
#include <numbers>

#include "projlat/kernels.hpp"

namespace projlat {

namespace {

// Modified Gram-Schmidt with one reorthogonalization pass. The column
// norms (the R diagonal) come out real positive, which is exactly the
// phase correction that makes the Q factor Haar-distributed.
CMatrix orthonormalize_columns(CMatrix a) {
    const std::size_t n = a.rows();
    std::vector<cplx> col(n);
    std::vector<std::vector<cplx>> q;
    q.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = a(i, j);
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& prev : q) {
                const cplx proj = kernels::dotc(n, prev.data(), col.data());
                kernels::axpy(n, -proj, prev.data(), col.data());
            }
        }
        double norm = std::sqrt(kernels::nrm2sq(n, col.data()));
        if (norm == 0.0) {
            // measure-zero event for Gaussian input; restart direction
            col.assign(n, cplx{0.0, 0.0});
            col[j % n] = 1.0;
            norm = 1.0;
        }
        kernels::scal(n, cplx{1.0 / norm, 0.0}, col.data());
        q.push_back(col);
    }
    CMatrix u(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) u(i, j) = q[j][i];
    return u;
}

}  // namespace

CMatrix haar_unitary(std::size_t n, Rng& rng) {
    if (n == 0) throw_invalid("haar_unitary: n must be positive");
    return orthonormalize_columns(rng.gaussian_matrix(n, n));
}

CMatrix haar_unitary(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return haar_unitary(n, rng);
}

Operator haar_block_unitary(const AlgebraShape& shape, Rng& rng) {
    Operator u(shape);
    for (std::size_t b = 0; b < shape.block_count(); ++b)
        u.blocks[b] = haar_unitary(shape.block_dims[b], rng);
    return u;
}

Projection random_projection(const GrassmannSignature& sig, Rng& rng) {
    sig.validate();
    Projection p;
    p.op = Operator::zero(sig.shape);
    p.ranks = sig.k;
    for (std::size_t b = 0; b < sig.shape.block_count(); ++b) {
        const std::size_t n = sig.shape.block_dims[b];
        const std::size_t k = sig.k[b];
        if (k == 0) continue;
        if (k == n) {
            p.op.blocks[b] = CMatrix::identity(n);
            continue;
        }
        CMatrix u = haar_unitary(n, rng);
        CMatrix& out = p.op.blocks[b];
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    out(i, j) += u(i, c) * std::conj(u(j, c));
        out = out.hermitian_part();
    }
    return p;
}

Projection random_projection(const GrassmannSignature& sig, std::uint64_t seed) {
    Rng rng(seed);
    return random_projection(sig, rng);
}

GrassmannSignature random_signature(const AlgebraShape& shape, Rng& rng) {
    GrassmannSignature sig;
    sig.shape = shape;
    sig.k.resize(shape.block_count());
    for (std::size_t b = 0; b < shape.block_count(); ++b)
        sig.k[b] = rng.uniform_below(shape.block_dims[b] + 1);
    return sig;
}

TwoProjectionSample random_projection_pair_structured(const AlgebraShape& shape, Rng& rng) {
    TwoProjectionSample out;
    out.p.op = Operator::zero(shape);
    out.q.op = Operator::zero(shape);
    out.p.ranks.assign(shape.block_count(), 0);
    out.q.ranks.assign(shape.block_count(), 0);

    for (std::size_t blk = 0; blk < shape.block_count(); ++blk) {
        const std::size_t n = shape.block_dims[blk];
        const std::size_t planes = rng.uniform_below(n / 2 + 1);
        std::size_t corners[4] = {0, 0, 0, 0};  // p^q, p^q', p'^q, p'^q'
        for (std::size_t rest = n - 2 * planes; rest > 0; --rest) ++corners[rng.uniform_below(4)];

        CMatrix p_blk(n, n);
        CMatrix q_blk(n, n);
        std::size_t idx = 0;
        auto put = [](CMatrix& m, const std::vector<cplx>& x) {
            const std::size_t d = m.rows();
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) m(i, j) += x[i] * std::conj(x[j]);
        };
        for (std::size_t c = 0; c < corners[0]; ++c, ++idx) {
            p_blk(idx, idx) += 1.0;
            q_blk(idx, idx) += 1.0;
        }
        for (std::size_t c = 0; c < corners[1]; ++c, ++idx) p_blk(idx, idx) += 1.0;
        for (std::size_t c = 0; c < corners[2]; ++c, ++idx) q_blk(idx, idx) += 1.0;
        idx += corners[3];
        for (std::size_t g = 0; g < planes; ++g, idx += 2) {
            // p keeps the first leg of the plane, q a copy rotated by theta
            const double theta = 0.05 + rng.uniform() * (std::numbers::pi / 2.0 - 0.1);
            std::vector<cplx> x(n, cplx{0.0, 0.0}), y(n, cplx{0.0, 0.0});
            x[idx] = 1.0;
            y[idx] = std::cos(theta);
            y[idx + 1] = std::sin(theta);
            put(p_blk, x);
            put(q_blk, y);
        }

        CMatrix u = haar_unitary(n, rng);
        out.p.op.blocks[blk] = (u * p_blk * u.adjoint()).hermitian_part();
        out.q.op.blocks[blk] = (u * q_blk * u.adjoint()).hermitian_part();
        out.p.ranks[blk] = corners[0] + corners[1] + planes;
        out.q.ranks[blk] = corners[0] + corners[2] + planes;
    }
    return out;
}

TwoProjectionSample random_projection_pair_generic(const AlgebraShape& shape, Rng& rng) {
    TwoProjectionSample out;
    out.p = random_projection(random_signature(shape, rng), rng);
    out.q = random_projection(random_signature(shape, rng), rng);
    return out;
}

TwoProjectionSample random_triangle_pair(const AlgebraShape& shape, Rng& rng) {
    if (shape.block_dims.empty() || shape.block_dims[0] < 2)
        throw_invalid("random_triangle_pair: block 0 must have dimension >= 2");

    TwoProjectionSample out;
    out.p.op = Operator::zero(shape);
    out.q.op = Operator::zero(shape);
    out.p.ranks.assign(shape.block_count(), 0);
    out.q.ranks.assign(shape.block_count(), 0);

    for (std::size_t blk = 0; blk < shape.block_count(); ++blk) {
        const std::size_t n = shape.block_dims[blk];
        const bool direct = rng.uniform_below(2) == 0;
        // direct: p q = 0 needs 2k <= n; complemented: p' q' = 0 needs 2k >= n
        std::size_t k;
        if (n < 2) {
            k = direct ? 0 : 1;
        } else if (direct) {
            const std::size_t lo = blk == 0 ? 1 : 0;
            k = lo + rng.uniform_below(n / 2 - lo + 1);
        } else {
            const std::size_t hi = blk == 0 ? n - 1 : n;
            k = (n + 1) / 2 + rng.uniform_below(hi - (n + 1) / 2 + 1);
        }
        CMatrix p_blk(n, n);
        CMatrix q_blk(n, n);
        if (direct) {
            for (std::size_t i = 0; i < k; ++i) p_blk(i, i) = 1.0;
            for (std::size_t i = k; i < 2 * k; ++i) q_blk(i, i) = 1.0;
        } else {
            for (std::size_t i = 0; i < k; ++i) p_blk(i, i) = 1.0;
            for (std::size_t i = n - k; i < n; ++i) q_blk(i, i) = 1.0;
        }
        CMatrix u = haar_unitary(n, rng);
        out.p.op.blocks[blk] = (u * p_blk * u.adjoint()).hermitian_part();
        out.q.op.blocks[blk] = (u * q_blk * u.adjoint()).hermitian_part();
        out.p.ranks[blk] = k;
        out.q.ranks[blk] = k;
    }
    return out;
}

}  // namespace projlat
