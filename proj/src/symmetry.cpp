#include "projlat/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "projlat/kernels.hpp"

namespace projlat {

namespace {

constexpr double kRecoveryTol = 1e-7;
constexpr double kMeetEigenThreshold = 1e-8;

CMatrix outer(const std::vector<cplx>& x) {
    CMatrix m(x.size(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) m(i, j) = x[i] * std::conj(x[j]);
    return m;
}

// Projection onto the span of orthonormal vectors.
CMatrix span_block(std::size_t n, const std::vector<std::vector<cplx>>& vecs) {
    CMatrix m(n, n);
    for (const auto& v : vecs) m += outer(v);
    return m.hermitian_part();
}

std::vector<cplx> coord_vec(std::size_t n, std::size_t i) {
    std::vector<cplx> v(n, cplx{0.0, 0.0});
    v[i] = 1.0;
    return v;
}

// Member of the source Grassmann space that is the coordinate projection
// onto the first k_l coordinates in every block.
Projection filler_projection(const GrassmannSignature& sig) {
    Projection p;
    p.op = Operator::zero(sig.shape);
    p.ranks = sig.k;
    for (std::size_t b = 0; b < sig.shape.block_count(); ++b)
        for (std::size_t i = 0; i < sig.k[b]; ++i) p.op.blocks[b](i, i) = 1.0;
    return p;
}

// Spectral meet of two projection blocks.
CMatrix block_meet(const CMatrix& a, const CMatrix& b) {
    const std::size_t n = a.rows();
    HermitianEig e = hermitian_eig(a + b);
    CMatrix out(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        if (std::abs(e.values[c] - 2.0) >= kMeetEigenThreshold) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out(i, j) += e.vectors(i, c) * std::conj(e.vectors(j, c));
    }
    return out.hermitian_part();
}

// Extracts the generating column of a rank-1 projection; empty on failure.
std::vector<cplx> rank1_column(const CMatrix& p) {
    const std::size_t n = p.rows();
    if (std::abs(p.trace().real() - 1.0) > 1e-6) return {};
    if (operator_norm(p * p - p) > 1e-6) return {};
    std::size_t best = 0;
    double best_norm = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += std::norm(p(i, j));
        if (s > best_norm) {
            best_norm = s;
            best = j;
        }
    }
    if (best_norm <= 0.0) return {};
    std::vector<cplx> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = p(i, best);
    const double inv = 1.0 / std::sqrt(best_norm);
    for (auto& z : col) z *= inv;
    return col;
}

struct Structure {
    std::vector<std::size_t> perm;  // source block -> target block
    std::vector<bool> r_mask;       // per target block, preferred on ties
    std::vector<bool> ambiguous;    // per source block (k = n/2)
};


Structure detect_structure(MapOracle& oracle, const Tolerance&) {
    const GrassmannSignature& src = oracle.source_sig();
    const GrassmannSignature& tgt = oracle.target_sig();
    if (!src.proper())
        throw_invalid("factorize: source Grassmann space must be proper (0 < k < n per block)");
    const std::size_t nblocks = src.shape.block_count();
    if (tgt.shape.block_count() != nblocks)
        throw_invariant("factorize: inconsistent-oracle (block counts differ)");

    const Projection base = filler_projection(src);
    const Projection base_out = oracle.query(base);

    Structure st;
    st.perm.assign(nblocks, 0);
    st.ambiguous.assign(nblocks, false);
    st.r_mask.assign(nblocks, true);
    std::vector<bool> hit(nblocks, false);

    for (std::size_t i = 0; i < nblocks; ++i) {
        const std::size_t n = src.shape.block_dims[i];
        const std::size_t k = src.k[i];
        Projection varied = base;
        varied.op.blocks[i] = CMatrix(n, n);
        for (std::size_t c = n - k; c < n; ++c) varied.op.blocks[i](c, c) = 1.0;
        const Projection out = oracle.query(varied);

        std::size_t found = nblocks;
        for (std::size_t j = 0; j < nblocks; ++j) {
            if (operator_norm(out.op.blocks[j] - base_out.op.blocks[j]) < 1e-6) continue;
            if (found != nblocks)
                throw_invariant("factorize: inconsistent-oracle (probe changed two target blocks)");
            found = j;
        }
        if (found == nblocks)
            throw_invariant("factorize: inconsistent-oracle (probe changed no target block)");
        if (hit[found])
            throw_invariant("factorize: inconsistent-oracle (target block hit twice)");
        if (tgt.shape.block_dims[found] != n)
            throw_invariant("factorize: inconsistent-oracle (block dimensions differ)");
        hit[found] = true;
        st.perm[i] = found;

        const std::size_t kt = tgt.k[found];
        if (2 * k == n) {
            if (kt != k)
                throw_invariant("factorize: inconsistent-oracle (target rank fits no normal form)");
            st.ambiguous[i] = true;
            st.r_mask[found] = true;  // prefer no complement
        } else if (kt == k) {
            st.r_mask[found] = true;
        } else if (kt == n - k) {
            st.r_mask[found] = false;
        } else {
            throw_invariant("factorize: inconsistent-oracle (target rank fits no normal form)");
        }
    }
    return st;
}

// Recovery of one block under a complement-flag hypothesis. The working
// map S(y) = J(y) is probed on rank-w inputs, w = min(k, n-k): the source
// leg is complemented when k > n/2 and the output leg whenever the
// hypothesis and the source leg disagree.
struct BlockRecovery {
    bool antilinear = false;
    CMatrix u;
};

std::optional<BlockRecovery> recover_block(MapOracle& oracle, const Structure& st,
                                           std::size_t blk, bool r_flag) {
    const GrassmannSignature& src = oracle.source_sig();
    const std::size_t n = src.shape.block_dims[blk];
    const std::size_t k = src.k[blk];
    const std::size_t j = st.perm[blk];
    const bool src_flip = 2 * k > n;
    const std::size_t w = std::min(k, n - k);
    const bool out_flip = r_flag ? src_flip : !src_flip;

    const Projection filler = filler_projection(src);

    auto probe = [&](const std::vector<std::vector<cplx>>& vecs) -> CMatrix {
        CMatrix y = span_block(n, vecs);
        Projection in = filler;
        in.op.blocks[blk] = src_flip ? (CMatrix::identity(n) - y).hermitian_part() : y;
        Projection out = oracle.query(in);
        CMatrix img = out.op.blocks[j];
        if (out_flip) img = (CMatrix::identity(n) - img).hermitian_part();
        return img;
    };

    // tails avoiding the support of the probe line
    auto tails = [&](const std::vector<std::size_t>& avoid) {
        std::vector<std::vector<cplx>> a, b;
        std::size_t c = 0;
        auto next = [&]() {
            while (std::find(avoid.begin(), avoid.end(), c) != avoid.end()) ++c;
            return c++;
        };
        for (std::size_t t = 0; t + 1 < w; ++t) a.push_back(coord_vec(n, next()));
        for (std::size_t t = 0; t + 1 < w; ++t) b.push_back(coord_vec(n, next()));
        return std::pair(a, b);
    };

    auto line_image = [&](const std::vector<cplx>& x,
                          const std::vector<std::size_t>& avoid) -> std::vector<cplx> {
        auto [ta, tb] = tails(avoid);
        std::vector<std::vector<cplx>> va = ta, vb = tb;
        va.push_back(x);
        CMatrix img = probe(va);
        if (w > 1) {
            vb.push_back(x);
            img = block_meet(img, probe(vb));
        }
        return rank1_column(img);
    };

    // coordinate lines give the columns up to phase
    std::vector<std::vector<cplx>> cols(n);
    for (std::size_t m = 0; m < n; ++m) {
        cols[m] = line_image(coord_vec(n, m), {m});
        if (cols[m].empty()) return std::nullopt;
    }

    // phases from (e_0 + e_m)/sqrt2
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CMatrix u(n, n);
    for (std::size_t i = 0; i < n; ++i) u(i, 0) = cols[0][i];
    for (std::size_t m = 1; m < n; ++m) {
        std::vector<cplx> x(n, cplx{0.0, 0.0});
        x[0] = inv_sqrt2;
        x[m] = inv_sqrt2;
        std::vector<cplx> z = line_image(x, {0, m});
        if (z.empty()) return std::nullopt;
        const cplx b0 = kernels::dotc(n, cols[0].data(), z.data());
        const cplx bm = kernels::dotc(n, cols[m].data(), z.data());
        if (std::abs(b0) < 0.3 || std::abs(bm) < 0.3) return std::nullopt;
        const cplx phase = (bm / b0) / std::abs(bm / b0);
        for (std::size_t i = 0; i < n; ++i) u(i, m) = cols[m][i] * phase;
    }

    // antilinear decision from (e_0 + i e_1)/sqrt2
    BlockRecovery rec;
    {
        std::vector<cplx> x(n, cplx{0.0, 0.0});
        x[0] = inv_sqrt2;
        x[1] = cplx{0.0, inv_sqrt2};
        std::vector<cplx> z = line_image(x, {0, 1});
        if (z.empty()) return std::nullopt;
        std::vector<cplx> c0(n), c1(n);
        for (std::size_t i = 0; i < n; ++i) {
            c0[i] = u(i, 0);
            c1[i] = u(i, 1);
        }
        const cplx g0 = kernels::dotc(n, c0.data(), z.data());
        const cplx g1 = kernels::dotc(n, c1.data(), z.data());
        if (std::abs(g0) < 0.3) return std::nullopt;
        const cplx rho = g1 / g0;
        const cplx iunit{0.0, 1.0};
        if (std::abs(rho - iunit) < 1e-3)
            rec.antilinear = false;
        else if (std::abs(rho + iunit) < 1e-3)
            rec.antilinear = true;
        else
            return std::nullopt;
    }

    if (operator_norm(u.adjoint() * u - CMatrix::identity(n)) > kRecoveryTol) return std::nullopt;

    // global phase: first sizable entry of column 0 made real positive
    for (std::size_t i = 0; i < n; ++i) {
        const cplx z = u(i, 0);
        if (std::abs(z) > 1e-7) {
            u *= std::conj(z / std::abs(z));
            break;
        }
    }

    // certify the hypothesis on a few random working-rank probes
    Rng rng(0xABCD0000u ^ (0x9E3779B9u * (blk + 1)) ^ (r_flag ? 0x5555u : 0));
    for (int trial = 0; trial < 3; ++trial) {
        CMatrix g = rng.gaussian_matrix(n, w);
        // orthonormalize the w columns and form the projection
        std::vector<std::vector<cplx>> vecs;
        for (std::size_t c = 0; c < w; ++c) {
            std::vector<cplx> v(n);
            for (std::size_t i = 0; i < n; ++i) v[i] = g(i, c);
            for (const auto& prev : vecs) {
                const cplx pr = kernels::dotc(n, prev.data(), v.data());
                kernels::axpy(n, -pr, prev.data(), v.data());
            }
            const double norm = std::sqrt(kernels::nrm2sq(n, v.data()));
            if (norm < 1e-8) return std::nullopt;
            kernels::scal(n, cplx{1.0 / norm, 0.0}, v.data());
            vecs.push_back(std::move(v));
        }
        CMatrix y = span_block(n, vecs);
        CMatrix expect = rec.antilinear ? u * y.conjugate() * u.adjoint() : u * y * u.adjoint();
        if (operator_norm(probe(vecs) - expect) > kRecoveryTol) return std::nullopt;
    }

    rec.u = std::move(u);
    return rec;
}

// Rank bookkeeping cannot decide the complement flag on k = n/2 blocks;
// certify a flag there by attempting the full block recovery, preferring
// no complement.
void resolve_ambiguous_flags(MapOracle& oracle, Structure& st) {
    for (std::size_t i = 0; i < st.ambiguous.size(); ++i) {
        if (!st.ambiguous[i]) continue;
        if (recover_block(oracle, st, i, true)) {
            st.r_mask[st.perm[i]] = true;
        } else if (recover_block(oracle, st, i, false)) {
            st.r_mask[st.perm[i]] = false;
        } else {
            throw_invariant("normalize_oracle: inconsistent-oracle (no normal form fits block " +
                            std::to_string(i) + ")");
        }
    }
}

}  // namespace

AlgebraShape Factorization::target_shape() const {
    AlgebraShape t;
    t.block_dims.assign(source_shape.block_count(), 0);
    for (std::size_t i = 0; i < block_maps.size(); ++i)
        t.block_dims[block_maps[i].target_block] = source_shape.block_dims[i];
    return t;
}

void Factorization::validate(const Tolerance& tol) const {
    source_shape.validate();
    if (block_maps.size() != source_shape.block_count())
        throw_invalid("Factorization: one block map per source block required");
    std::vector<bool> hit(block_maps.size(), false);
    for (std::size_t i = 0; i < block_maps.size(); ++i) {
        const BlockSymmetry& bs = block_maps[i];
        if (bs.target_block >= block_maps.size())
            throw_invalid("Factorization: target block out of range");
        if (hit[bs.target_block]) throw_invalid("Factorization: targets are not a permutation");
        hit[bs.target_block] = true;
        const std::size_t n = source_shape.block_dims[i];
        if (bs.u.rows() != n || bs.u.cols() != n)
            throw_invalid("Factorization: conjugator dimensions do not match the block");
        if (operator_norm(bs.u.adjoint() * bs.u - CMatrix::identity(n)) > 100 * tol.eq_abs)
            throw_invalid("Factorization: conjugator is not unitary");
    }
    if (!(r.shape == target_shape()) || r.mask.size() != block_maps.size())
        throw_invalid("Factorization: central projection does not live on the target shape");
}

Factorization Factorization::identity(const AlgebraShape& shape) {
    Factorization f;
    f.source_shape = shape;
    f.block_maps.resize(shape.block_count());
    for (std::size_t i = 0; i < shape.block_count(); ++i) {
        f.block_maps[i].target_block = i;
        f.block_maps[i].antilinear = false;
        f.block_maps[i].u = CMatrix::identity(shape.block_dims[i]);
    }
    f.r = CentralProjection{shape, std::vector<bool>(shape.block_count(), true)};
    return f;
}

Projection apply_factorization(const Factorization& f, const Projection& p, const Tolerance&) {
    if (!(p.shape() == f.source_shape))
        throw_invalid("apply_factorization: projection does not match the source shape");
    const AlgebraShape tshape = f.target_shape();
    Projection out;
    out.op = Operator::zero(tshape);
    out.ranks.assign(tshape.block_count(), 0);
    for (std::size_t i = 0; i < f.block_maps.size(); ++i) {
        const BlockSymmetry& bs = f.block_maps[i];
        const std::size_t n = f.source_shape.block_dims[i];
        CMatrix img = bs.antilinear ? bs.u * p.op.blocks[i].conjugate() * bs.u.adjoint()
                                    : bs.u * p.op.blocks[i] * bs.u.adjoint();
        if (f.r.mask[bs.target_block]) {
            out.op.blocks[bs.target_block] = img.hermitian_part();
            out.ranks[bs.target_block] = p.ranks[i];
        } else {
            out.op.blocks[bs.target_block] = (CMatrix::identity(n) - img).hermitian_part();
            out.ranks[bs.target_block] = n - p.ranks[i];
        }
    }
    return out;
}

MapOracle::MapOracle(GrassmannSignature source, GrassmannSignature target, QueryFn query)
    : source_(std::move(source)), target_(std::move(target)), query_(std::move(query)),
      budget_(default_budget(source_.shape)) {
    source_.validate();
    target_.validate();
}

std::size_t MapOracle::default_budget(const AlgebraShape& shape) {
    std::size_t s = shape.block_count();
    for (std::size_t d : shape.block_dims) s += d * d;
    return 10 * s;
}

Projection MapOracle::query(const Projection& p) {
    if (calls_ >= budget_) throw_budget("MapOracle: call budget exceeded");
    ++calls_;
    if (!(p.shape() == source_.shape))
        throw_invalid("MapOracle: query shape does not match the source");
    if (p.ranks != source_.k)
        throw_invalid("MapOracle: query lies outside the source Grassmann space");
    Projection out = query_(p);
    if (!(out.shape() == target_.shape) || out.ranks != target_.k)
        throw_invariant("MapOracle: oracle returned a projection outside the target space");
    return out;
}

MapOracle induce_oracle(const Factorization& f, const GrassmannSignature& sig) {
    f.validate();
    sig.validate();
    if (!(sig.shape == f.source_shape))
        throw_invalid("induce_oracle: signature does not match the factorization source");

    GrassmannSignature target;
    target.shape = f.target_shape();
    target.k.assign(sig.k.size(), 0);
    for (std::size_t i = 0; i < f.block_maps.size(); ++i) {
        const std::size_t t = f.block_maps[i].target_block;
        target.k[t] = f.r.mask[t] ? sig.k[i] : f.source_shape.block_dims[i] - sig.k[i];
    }

    Factorization copy = f;
    return MapOracle(sig, target,
                     [copy](const Projection& p) { return apply_factorization(copy, p); });
}

FactorizeResult factorize(MapOracle& oracle, const Tolerance& tol) {
    // log every probe so the recovered form can be verified against all of them
    std::vector<std::pair<Projection, Projection>> log;
    MapOracle logged(oracle.source_sig(), oracle.target_sig(),
                     [&oracle, &log](const Projection& p) {
                         Projection out = oracle.query(p);
                         log.emplace_back(p, out);
                         return out;
                     });
    logged.set_call_budget(std::numeric_limits<std::size_t>::max());

    const std::size_t calls_before = oracle.calls_used();
    const Structure st = detect_structure(logged, tol);
    const std::size_t nblocks = oracle.source_sig().shape.block_count();

    FactorizeResult result;
    result.factorization.source_shape = oracle.source_sig().shape;
    result.factorization.block_maps.resize(nblocks);
    result.factorization.r = CentralProjection{
        AlgebraShape{}, std::vector<bool>(nblocks, true)};

    std::vector<bool> final_mask(nblocks, true);
    for (std::size_t i = 0; i < nblocks; ++i) {
        const bool preferred = st.r_mask[st.perm[i]];
        std::vector<bool> flags = st.ambiguous[i] ? std::vector<bool>{true, false}
                                                  : std::vector<bool>{preferred};
        std::optional<BlockRecovery> rec;
        bool chosen_flag = preferred;
        for (bool flag : flags) {
            rec = recover_block(logged, st, i, flag);
            if (rec) {
                chosen_flag = flag;
                break;
            }
        }
        if (!rec)
            throw_invariant("factorize: inconsistent-oracle (no normal form fits block " +
                            std::to_string(i) + ")");
        if (st.ambiguous[i]) {
            // does the opposite flag also admit a normal form?
            if (recover_block(logged, st, i, !chosen_flag)) ++result.alternative_count;
        }
        result.factorization.block_maps[i] =
            BlockSymmetry{st.perm[i], rec->antilinear, std::move(rec->u)};
        final_mask[st.perm[i]] = chosen_flag;
    }

    result.factorization.r =
        CentralProjection{result.factorization.target_shape(), std::move(final_mask)};
    result.factorization.validate(tol);

    for (const auto& [in, out] : log) {
        const Projection expect = apply_factorization(result.factorization, in, tol);
        result.max_probe_residual =
            std::max(result.max_probe_residual, op_norm(expect.op - out.op));
    }
    if (result.max_probe_residual > kRecoveryTol)
        throw_invariant("factorize: inconsistent-oracle (recovered form contradicts probes)");

    result.oracle_calls = oracle.calls_used() - calls_before;
    return result;
}

VerifyReport verify_factorization(MapOracle& oracle, const Factorization& f, std::size_t trials,
                                  std::uint64_t seed, const Tolerance& tol) {
    f.validate(tol);
    VerifyReport report;
    for (std::size_t t = 0; t < trials; ++t) {
        const Projection p = random_projection(oracle.source_sig(), seed + t);
        const Projection out = oracle.query(p);
        const Projection expect = apply_factorization(f, p, tol);
        report.max_residual = std::max(report.max_residual, op_norm(out.op - expect.op));
    }
    report.pass = report.max_residual <= kRecoveryTol;
    return report;
}

NormalizedOracle normalize_oracle(MapOracle& oracle, const Tolerance& tol) {
    Structure st = detect_structure(oracle, tol);
    resolve_ambiguous_flags(oracle, st);
    const GrassmannSignature& src = oracle.source_sig();
    const std::size_t nblocks = src.shape.block_count();

    GrassmannSignature norm_target;
    norm_target.shape = oracle.target_sig().shape;
    norm_target.k.assign(nblocks, 0);
    for (std::size_t i = 0; i < nblocks; ++i) norm_target.k[st.perm[i]] = src.k[i];

    std::vector<bool> mask = st.r_mask;
    MapOracle wrapped(src, norm_target, [&oracle, mask](const Projection& p) {
        Projection out = oracle.query(p);
        for (std::size_t j = 0; j < mask.size(); ++j) {
            if (mask[j]) continue;
            const std::size_t n = out.shape().block_dims[j];
            out.op.blocks[j] = (CMatrix::identity(n) - out.op.blocks[j]).hermitian_part();
            out.ranks[j] = n - out.ranks[j];
        }
        return out;
    });
    wrapped.set_call_budget(std::numeric_limits<std::size_t>::max());

    return NormalizedOracle{std::move(wrapped), st.perm,
                            CentralProjection{oracle.target_sig().shape, st.r_mask}};
}

Projection t1_eval(MapOracle& oracle, const Projection& e, const Projection& p0,
                   const Projection& f, const Tolerance& tol) {
    const GrassmannSignature& src = oracle.source_sig();
    if (!(e.shape() == src.shape)) throw_invalid("t1_eval: shape mismatch");
    if (p0.ranks != src.k) throw_invalid("t1_eval: p0 is not in the source Grassmann space");
    if (op_norm(p0.op * e.op - e.op) > 10 * tol.eq_abs)
        throw_invalid("t1_eval: e is not dominated by p0");
    if (f.ranks != e.ranks) throw_invalid("t1_eval: f is not equivalent to e");
    if (op_norm(p0.op * f.op) > 10 * tol.eq_abs)
        throw_invalid("t1_eval: f is not orthogonal to p0");

    Projection mid = validate_projection(p0.op - e.op + f.op, tol);

    const Projection big = oracle.query(p0);
    const Projection swapped = oracle.query(mid);

    if (op_norm(big.op * swapped.op - swapped.op * big.op) > 100 * tol.eq_abs)
        throw_invariant("t1_eval: oracle images do not commute, map is not orthogonality-compatible");

    Operator res = big.op - big.op * swapped.op;
    res = res.hermitian_part();
    for (const CMatrix& blk : res.blocks)
        if (operator_norm(blk * blk - blk) > 100 * tol.eq_abs)
            throw_invariant("t1_eval: result is not a projection, map is not orthogonality-compatible");
    return projection_unchecked(std::move(res));
}

namespace {

struct T1Choice {
    Projection p0;
    Projection f;
};

// Completes a chunk e to a Grassmann member p0 >= e and picks f ~ e inside
// p0', both from the deterministic null-space basis of e; `reversed`
// traverses that pool backwards, yielding an independent second choice.
T1Choice t1_choice(const Projection& e, const GrassmannSignature& sig, bool reversed) {
    T1Choice out;
    out.p0.op = Operator::zero(sig.shape);
    out.p0.ranks = sig.k;
    out.f.op = Operator::zero(sig.shape);
    out.f.ranks = e.ranks;

    for (std::size_t b = 0; b < sig.shape.block_count(); ++b) {
        const std::size_t n = sig.shape.block_dims[b];
        const std::size_t r = e.ranks[b];
        const std::size_t k = sig.k[b];
        HermitianEig eig = hermitian_eig(e.op.blocks[b]);
        // null-space vectors hold the n-r smallest eigenvalues
        std::vector<std::size_t> pool(n - r);
        for (std::size_t t = 0; t < n - r; ++t) pool[t] = reversed ? (n - r - 1 - t) : t;

        CMatrix p0b = e.op.blocks[b];
        for (std::size_t t = 0; t < k - r; ++t) {
            const std::size_t c = pool[t];
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j2 = 0; j2 < n; ++j2)
                    p0b(i, j2) += eig.vectors(i, c) * std::conj(eig.vectors(j2, c));
        }
        CMatrix fb(n, n);
        for (std::size_t t = k - r; t < k; ++t) {
            const std::size_t c = pool[t];
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j2 = 0; j2 < n; ++j2)
                    fb(i, j2) += eig.vectors(i, c) * std::conj(eig.vectors(j2, c));
        }
        out.p0.op.blocks[b] = p0b.hermitian_part();
        out.f.op.blocks[b] = fb.hermitian_part();
    }
    return out;
}

bool same_operator(const Operator& a, const Operator& b) { return op_norm(a - b) < 1e-12; }

}  // namespace

Projection t2_eval(MapOracle& oracle, const Projection& p, const Tolerance& tol) {
    const GrassmannSignature& src = oracle.source_sig();
    if (!(p.shape() == src.shape)) throw_invalid("t2_eval: shape mismatch");

    NormalizedOracle norm = normalize_oracle(oracle, tol);
    MapOracle& compat = norm.oracle;

    // spectral basis of p, chunked to blockwise rank <= min(k, n-k)
    const std::size_t nblocks = src.shape.block_count();
    std::vector<CMatrix> bases(nblocks);
    std::vector<std::size_t> used(nblocks, 0);
    for (std::size_t b = 0; b < nblocks; ++b) bases[b] = range_basis(p.op.blocks[b], p.ranks[b]);

    Projection result;
    result.op = Operator::zero(norm.oracle.target_sig().shape);
    result.ranks.assign(nblocks, 0);

    while (true) {
        Projection chunk;
        chunk.op = Operator::zero(src.shape);
        chunk.ranks.assign(nblocks, 0);
        bool any = false;
        for (std::size_t b = 0; b < nblocks; ++b) {
            const std::size_t n = src.shape.block_dims[b];
            const std::size_t cap = std::min(src.k[b], n - src.k[b]);
            const std::size_t take = std::min(cap, p.ranks[b] - used[b]);
            if (take == 0) continue;
            any = true;
            CMatrix& cb = chunk.op.blocks[b];
            for (std::size_t t = 0; t < take; ++t) {
                const std::size_t c = used[b] + t;
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        cb(i, j) += bases[b](i, c) * std::conj(bases[b](j, c));
            }
            cb = cb.hermitian_part();
            chunk.ranks[b] = take;
            used[b] += take;
        }
        if (!any) break;

        const T1Choice first = t1_choice(chunk, src, false);
        const Projection g = t1_eval(compat, chunk, first.p0, first.f, tol);

        const T1Choice second = t1_choice(chunk, src, true);
        if (!(same_operator(first.p0.op, second.p0.op) && same_operator(first.f.op, second.f.op))) {
            const Projection g2 = t1_eval(compat, chunk, second.p0, second.f, tol);
            if (op_norm(g.op - g2.op) > kRecoveryTol)
                throw_invariant("t2_eval: inconsistent-oracle (t1 choices disagree)");
        }
        result = join(result, g, tol);
    }
    return result;
}

Factorization random_factorization(const AlgebraShape& shape, Rng& rng) {
    shape.validate();
    const std::size_t nblocks = shape.block_count();

    // random permutation within groups of equal dimension
    std::vector<std::size_t> target(nblocks);
    for (std::size_t i = 0; i < nblocks; ++i) target[i] = i;
    for (std::size_t i = 0; i < nblocks; ++i) {
        for (std::size_t j = i + 1; j < nblocks; ++j) {
            if (shape.block_dims[target[i]] != shape.block_dims[target[j]]) continue;
            if (rng.uniform_below(2) == 0) std::swap(target[i], target[j]);
        }
    }

    Factorization f;
    f.source_shape = shape;
    f.block_maps.resize(nblocks);
    std::vector<bool> mask(nblocks);
    for (std::size_t i = 0; i < nblocks; ++i) {
        f.block_maps[i].target_block = target[i];
        f.block_maps[i].antilinear = rng.uniform_below(2) == 0;
        f.block_maps[i].u = haar_unitary(shape.block_dims[i], rng);
        mask[target[i]] = rng.uniform_below(2) == 0;
    }
    f.r = CentralProjection{f.target_shape(), std::move(mask)};
    return f;
}

Factorization jordan_part(const Factorization& f) {
    Factorization j = f;
    j.r.mask.assign(j.r.mask.size(), true);
    return j;
}

}  // namespace projlat
