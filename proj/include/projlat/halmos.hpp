#ifndef PROJLAT_HALMOS_HPP
#define PROJLAT_HALMOS_HPP

//
// Canonical two-projection decomposition. A pair (p, q) splits into four
// commuting corner projections plus a generic part carried by e1, e2, a
// partial isometry v (v v* = e1, v* v = e2) and commuting positives a, b
// with a^2 + b^2 = e1; the spectrum of a on e1 encodes the principal
// angles, and q - p^q - p'^q = a^2 + abv + v*ba + v*b^2 v.
//

#include <utility>
#include <vector>

#include "projlat/algebra.hpp"

namespace projlat {

struct HalmosData {
    Projection p_and_q;
    Projection p_and_qperp;
    Projection pperp_and_q;
    Projection pperp_and_qperp;
    Projection e1;
    Projection e2;
    Operator v;  // partial isometry, v v* = e1, v* v = e2
    Operator a;  // positive, supported on e1
    Operator b;  // positive, supported on e1
    std::vector<double> angles;  // ascending, strictly inside (0, pi/2)
};

// Eigenvalues of `a` on the range of e1, mapped through arccos, sorted
// ascending; values within 1e-7 of 0 or pi/2 are excluded (they belong to
// the corners by construction).
std::vector<double> principal_angles_of(const Operator& a, const Projection& e1);

HalmosData halmos_decompose(const Projection& p, const Projection& q,
                            const Tolerance& tol = Tolerance{});

// p = p^q' + p^q + e1;  q = p'^q + p^q + (a^2 + abv + v*ba + v*b^2v).
std::pair<Projection, Projection> halmos_reconstruct(const HalmosData& h,
                                                     const Tolerance& tol = Tolerance{});

std::vector<double> principal_angles(const HalmosData& h);

// 1 when p^q' or p'^q is nonzero, otherwise |b| = sin(largest angle),
// and 0 when the generic part is empty.
double distance_via_halmos(const HalmosData& h);

}  // namespace projlat

#endif
