#ifndef PROJLAT_ALGEBRA_HPP
#define PROJLAT_ALGEBRA_HPP

//
// Finite-dimensional von Neumann algebras as direct sums of full matrix
// blocks. The center is spanned by block indicators, so central
// projections are boolean masks and Murray-von Neumann comparison reduces
// to blockwise rank comparison.
//

#include <cstddef>
#include <string>
#include <vector>

#include "projlat/complex_matrix.hpp"
#include "projlat/decompositions.hpp"
#include "projlat/tolerance.hpp"

namespace projlat {

struct AlgebraShape {
    std::vector<std::size_t> block_dims;

    std::size_t block_count() const { return block_dims.size(); }
    std::size_t total_dim() const {
        std::size_t n = 0;
        for (std::size_t d : block_dims) n += d;
        return n;
    }
    bool empty() const { return block_dims.empty(); }

    void validate() const {
        if (block_dims.empty()) throw_invalid("AlgebraShape: needs at least one block");
        for (std::size_t d : block_dims)
            if (d == 0) throw_invalid("AlgebraShape: block dimensions must be positive");
    }

    bool operator==(const AlgebraShape&) const = default;
};

// An element of the algebra: one square matrix per block.
struct Operator {
    AlgebraShape shape;
    std::vector<CMatrix> blocks;

    Operator() = default;
    explicit Operator(AlgebraShape s) : shape(std::move(s)) {
        shape.validate();
        blocks.reserve(shape.block_count());
        for (std::size_t d : shape.block_dims) blocks.emplace_back(d, d);
    }

    static Operator zero(const AlgebraShape& s) { return Operator(s); }
    static Operator identity(const AlgebraShape& s) {
        Operator op(s);
        for (std::size_t b = 0; b < op.blocks.size(); ++b)
            op.blocks[b] = CMatrix::identity(s.block_dims[b]);
        return op;
    }

    std::size_t block_count() const { return blocks.size(); }

    void check_shape(const Operator& o, const char* who) const {
        if (!(shape == o.shape)) throw_invalid(std::string(who) + ": shape mismatch");
    }

    Operator& operator+=(const Operator& o) {
        check_shape(o, "Operator+=");
        for (std::size_t b = 0; b < blocks.size(); ++b) blocks[b] += o.blocks[b];
        return *this;
    }
    Operator& operator-=(const Operator& o) {
        check_shape(o, "Operator-=");
        for (std::size_t b = 0; b < blocks.size(); ++b) blocks[b] -= o.blocks[b];
        return *this;
    }
    Operator& operator*=(cplx a) {
        for (auto& blk : blocks) blk *= a;
        return *this;
    }

    friend Operator operator+(Operator a, const Operator& b) { return a += b; }
    friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
    friend Operator operator*(cplx a, Operator m) { return m *= a; }
    friend Operator operator*(Operator m, cplx a) { return m *= a; }

    friend Operator operator*(const Operator& a, const Operator& b) {
        a.check_shape(b, "Operator*");
        Operator c(a.shape);
        for (std::size_t i = 0; i < a.blocks.size(); ++i) c.blocks[i] = a.blocks[i] * b.blocks[i];
        return c;
    }

    Operator adjoint() const {
        Operator t(shape);
        for (std::size_t b = 0; b < blocks.size(); ++b) t.blocks[b] = blocks[b].adjoint();
        return t;
    }
    Operator conjugate() const {
        Operator t(shape);
        for (std::size_t b = 0; b < blocks.size(); ++b) t.blocks[b] = blocks[b].conjugate();
        return t;
    }
    Operator hermitian_part() const {
        Operator t(shape);
        for (std::size_t b = 0; b < blocks.size(); ++b) t.blocks[b] = blocks[b].hermitian_part();
        return t;
    }
};

// Operator norm of an algebra element: max over blocks.
double op_norm(const Operator& x);

// Self-adjoint idempotent with its per-block rank signature.
struct Projection {
    Operator op;
    std::vector<std::size_t> ranks;

    const AlgebraShape& shape() const { return op.shape; }
    std::size_t rank_total() const {
        std::size_t r = 0;
        for (std::size_t k : ranks) r += k;
        return r;
    }
    bool is_zero() const { return rank_total() == 0; }
};

struct CentralProjection {
    AlgebraShape shape;
    std::vector<bool> mask;

    Operator to_operator() const {
        Operator op(shape);
        for (std::size_t b = 0; b < mask.size(); ++b)
            if (mask[b]) op.blocks[b] = CMatrix::identity(shape.block_dims[b]);
        return op;
    }
    Projection to_projection() const;
    bool all() const {
        for (bool m : mask)
            if (!m) return false;
        return true;
    }
    bool none() const {
        for (bool m : mask)
            if (m) return false;
        return true;
    }
};

// Unitary-equivalence class data of a projection: blockwise ranks.
struct GrassmannSignature {
    AlgebraShape shape;
    std::vector<std::size_t> k;

    void validate() const {
        shape.validate();
        if (k.size() != shape.block_count())
            throw_invalid("GrassmannSignature: rank list does not match shape");
        for (std::size_t b = 0; b < k.size(); ++b)
            if (k[b] > shape.block_dims[b])
                throw_invalid("GrassmannSignature: rank exceeds block dimension");
    }
    bool proper() const {
        for (std::size_t b = 0; b < k.size(); ++b)
            if (k[b] == 0 || k[b] == shape.block_dims[b]) return false;
        return true;
    }
    bool operator==(const GrassmannSignature&) const = default;
};

GrassmannSignature signature_of(const Projection& p);

enum class MvRelation { less, equivalent, greater, incomparable };

const char* to_string(MvRelation r);

// Symmetrizes (op + op*)/2, verifies idempotence within tol.eq_abs and
// computes blockwise ranks. Throws invalid-input when op is not a
// projection within tolerance.
Projection validate_projection(const Operator& op, const Tolerance& tol = Tolerance{});

// Trusted constructor for operators that are projections by construction;
// symmetrizes and counts ranks without the idempotence gate.
Projection projection_unchecked(Operator op);

Projection complement(const Projection& p);

// Range intersection, computed blockwise as the spectral projection of
// p + q for eigenvalues within 1e-8 of 2.
Projection meet(const Projection& p, const Projection& q, const Tolerance& tol = Tolerance{});

// p v q = 1 - ((1-p) ^ (1-q))
Projection join(const Projection& p, const Projection& q, const Tolerance& tol = Tolerance{});

CentralProjection central_support(const Projection& p);

// Blockwise rank comparison; `incomparable` needs B >= 2.
MvRelation mv_compare(const Projection& p, const Projection& q);

// Explicit partial isometry certifying p <~ q: v v* = p, v* v <= q.
// Requires mv_compare(p, q) in {less, equivalent}.
Operator mv_witness(const Projection& p, const Projection& q, const Tolerance& tol = Tolerance{});

// Partial isometry with v v* = p and v* v = q; requires equal signatures.
Operator partial_isometry_between(const Projection& p, const Projection& q,
                                  const Tolerance& tol = Tolerance{});

struct ProperizeResult {
    CentralProjection mask;        // blocks with 0 < k < n
    GrassmannSignature restricted; // signature on the masked sub-algebra
    bool degenerate;               // true when the mask is all-false
};

ProperizeResult properize(const GrassmannSignature& sig);

double distance(const Projection& p, const Projection& q);

// Orthonormal basis of the range of a projection block (n x rank matrix).
CMatrix range_basis(const CMatrix& proj_block, std::size_t rank);

// Blockwise range bases of a projection.
std::vector<CMatrix> range_bases(const Projection& p);

}  // namespace projlat

#endif
