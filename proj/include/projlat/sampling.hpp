#ifndef PROJLAT_SAMPLING_HPP
#define PROJLAT_SAMPLING_HPP

#include <cstdint>

#include "projlat/algebra.hpp"
#include "projlat/rng.hpp"

namespace projlat {

// Haar-distributed unitary via QR of a complex Gaussian matrix with the
// R-diagonal made real positive. Deterministic for a fixed seed.
CMatrix haar_unitary(std::size_t n, Rng& rng);
CMatrix haar_unitary(std::size_t n, std::uint64_t seed);

// One independent Haar unitary per block.
Operator haar_block_unitary(const AlgebraShape& shape, Rng& rng);

// Per block: u * diag(1 x k, 0 x (n-k)) * u^H with Haar u.
Projection random_projection(const GrassmannSignature& sig, Rng& rng);
Projection random_projection(const GrassmannSignature& sig, std::uint64_t seed);

// Uniform signature: each rank uniform in [0, n_b].
GrassmannSignature random_signature(const AlgebraShape& shape, Rng& rng);

struct TwoProjectionSample {
    Projection p;
    Projection q;
};

// Pair with prescribed joint structure: per block, random corner
// multiplicities (p^q, p^q', p'^q, p'^q') plus generic planes at random
// angles bounded away from 0 and pi/2, conjugated by a Haar unitary.
TwoProjectionSample random_projection_pair_structured(const AlgebraShape& shape, Rng& rng);

// Independent Haar projections with uniformly sampled signatures.
TwoProjectionSample random_projection_pair_generic(const AlgebraShape& shape, Rng& rng);

// Equal-signature pair in the triangle relation: per block either p q = 0
// or p' q' = 0, conjugated by a Haar unitary. Block 0 (which must have
// dimension >= 2) is always nontrivial so midpoint sets are nonempty.
TwoProjectionSample random_triangle_pair(const AlgebraShape& shape, Rng& rng);

}  // namespace projlat

#endif
