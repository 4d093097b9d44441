#ifndef PROJLAT_SYMMETRY_HPP
#define PROJLAT_SYMMETRY_HPP

//
// Normal form of a Grassmann-space isometry, T(p) = J(p) r + J(p') r',
// with J a blockwise (anti)unitary conjugation composed with a block
// permutation and r a central projection on the target: apply it, recover
// it from an oracle by Wigner-style probing, verify it, and extend an
// orthogonality-compatible oracle to the full projection lattice through
// the closed form T1(e) = T(p0) - T(p0) T((p0-e)+f).
//

#include <functional>
#include <optional>
#include <vector>

#include "projlat/algebra.hpp"
#include "projlat/sampling.hpp"

namespace projlat {

// One block of the Jordan part: p |-> u p u* (linear) or u conj(p) u*
// (antilinear), landing in target_block.
struct BlockSymmetry {
    std::size_t target_block = 0;
    bool antilinear = false;
    CMatrix u;
};

struct Factorization {
    AlgebraShape source_shape;
    std::vector<BlockSymmetry> block_maps;  // one per source block
    CentralProjection r;                    // on the target shape

    AlgebraShape target_shape() const;
    void validate(const Tolerance& tol = Tolerance{}) const;

    static Factorization identity(const AlgebraShape& shape);
};

// Per source block i with image block t: J_i(p_i) if r masks t, else
// 1 - J_i(p_i). Defined for any projection of the source shape.
Projection apply_factorization(const Factorization& f, const Projection& p,
                               const Tolerance& tol = Tolerance{});

// Black-box map between Grassmann spaces with a call budget. Queries are
// sequential; inputs must carry the source signature and outputs are
// checked against the target signature.
class MapOracle {
  public:
    using QueryFn = std::function<Projection(const Projection&)>;

    MapOracle(GrassmannSignature source, GrassmannSignature target, QueryFn query);

    const GrassmannSignature& source_sig() const { return source_; }
    const GrassmannSignature& target_sig() const { return target_; }

    Projection query(const Projection& p);

    std::size_t calls_used() const { return calls_; }
    std::size_t call_budget() const { return budget_; }
    void set_call_budget(std::size_t budget) { budget_ = budget; }

    static std::size_t default_budget(const AlgebraShape& shape);

  private:
    GrassmannSignature source_;
    GrassmannSignature target_;
    QueryFn query_;
    std::size_t calls_ = 0;
    std::size_t budget_;
};

MapOracle induce_oracle(const Factorization& f, const GrassmannSignature& sig);

struct FactorizeResult {
    Factorization factorization;
    // number of ambiguous blocks (k = n/2) where the opposite complement
    // flag also admits a certified normal form
    std::size_t alternative_count = 0;
    double max_probe_residual = 0.0;
    std::size_t oracle_calls = 0;
};

// Wigner-style recovery: block permutation and complement mask from rank
// probes, then per block the images of coordinate lines via meets of two
// tailed probes, phases from (e_1 + e_m)/sqrt2 lines, the antilinear
// decision from (e_1 + i e_2)/sqrt2, and a global phase canonicalization.
// Prefers r = true on ambiguous blocks.
FactorizeResult factorize(MapOracle& oracle, const Tolerance& tol = Tolerance{});

struct VerifyReport {
    double max_residual = 0.0;
    bool pass = false;
};

// Samples `trials` Haar-random projections (seeds seed+0 .. seed+trials-1)
// and compares oracle to factorization; passes at 1e-7.
VerifyReport verify_factorization(MapOracle& oracle, const Factorization& f, std::size_t trials,
                                  std::uint64_t seed, const Tolerance& tol = Tolerance{});

// Oracle normalized to the orthogonality-compatible form: target blocks
// whose rank signature demands it are complemented, so the wrapped map is
// a pure Jordan conjugation J~ across the recovered permutation. The
// wrapper borrows `oracle` by reference and must not outlive it.
struct NormalizedOracle {
    MapOracle oracle;
    std::vector<std::size_t> permutation;  // source block -> target block
    CentralProjection mask;                // recovered complement mask
};

NormalizedOracle normalize_oracle(MapOracle& oracle, const Tolerance& tol = Tolerance{});

// T1(e) = T(p0) - T(p0) T((p0-e)+f) for e <= p0, f ~ e, f <= p0'.
// The oracle must be orthogonality-compatible; a non-projection result is
// reported as an error.
Projection t1_eval(MapOracle& oracle, const Projection& e, const Projection& p0,
                   const Projection& f, const Tolerance& tol = Tolerance{});

// Orthoisomorphism extension: splits p into spectral-basis chunks of
// blockwise rank <= min(k, n-k), evaluates t1 on each chunk with two
// independently constructed (p0, f) choices, and joins the results. The
// oracle is normalized first; disagreement between choices is reported as
// an inconsistent oracle.
Projection t2_eval(MapOracle& oracle, const Projection& p, const Tolerance& tol = Tolerance{});

// Haar conjugators, random antilinear flags and complement masks, and a
// random permutation among equal-dimension blocks.
Factorization random_factorization(const AlgebraShape& shape, Rng& rng);

// The Jordan part: same block maps with the complement mask forced true.
Factorization jordan_part(const Factorization& f);

}  // namespace projlat

#endif
