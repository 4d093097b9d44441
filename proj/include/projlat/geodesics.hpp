#ifndef PROJLAT_GEODESICS_HPP
#define PROJLAT_GEODESICS_HPP

//
// Midpoint sets m(p,q), unit-speed geodesics, the triangle relation
// (existence of a central r with pr _|_ qr and p'r' _|_ q'r'), the sharp
// relation, and the two-path witness for non-uniqueness.
//
// A frame evaluates per block to
//   core(t) = cos^2(t) e + cos(t)sin(t) (u v + v* u*) + sin^2(t) f + fixed
// and blocks with orient=false are complemented (the e' _|_ f' case is
// reduced to the orthogonal case by passing to complements). A frame may
// carry a closed-loop component that rotates an equivalent pair p1 ~ q1
// by g(t) = amplitude * sin(4t); since |g| stays small the loop never
// breaks the sin|t1 - t2| metric, which is exactly what makes the second
// path of the non-uniqueness witness possible.
//

#include <optional>
#include <utility>
#include <vector>

#include "projlat/algebra.hpp"
#include "projlat/rng.hpp"

namespace projlat {

struct GeodesicLoop {
    Projection p1;     // subprojection of the fixed corner
    Projection q1;     // equivalent subprojection of the opposite corner
    Operator w;        // w w* = p1, w* w = q1
    double amplitude;  // loop angle g(t) = amplitude * sin(4 t)
};

struct GeodesicFrame {
    CentralProjection orient;  // true: direct block, false: complemented block
    Projection e;              // working endpoints, e _|_ f
    Projection f;
    Operator v;                // v v* = e, v* v = f
    Operator u;                // unitary in eMe
    Operator fixed_part;       // projection orthogonal to e + f, carried unchanged
    std::optional<GeodesicLoop> loop;
};

struct TriangleWitness {
    CentralProjection r;
};

struct MidpointEnclosure {
    Projection e;
    Projection f;
    CentralProjection orient;  // blocks where e _|_ f directly
};

// Membership in m(p,q): both distances within 1e-8 of 1/sqrt(2).
// Signature mismatch between e, p, q is an error.
bool is_midpoint(const Projection& e, const Projection& p, const Projection& q,
                 const Tolerance& tol = Tolerance{});

// (p + uv + v*u* + q)/2 for orthogonal p, q, v v* = p, v* v = q and u
// unitary in pMp.
Projection midpoint_from_unitary(const Projection& p, const Projection& q, const Operator& v,
                                 const Operator& u, const Tolerance& tol = Tolerance{});

// Inverse of the above: u = 2 p e v*, for e in m(p,q) with e <= p+q.
Operator unitary_from_midpoint(const Projection& p, const Projection& q, const Operator& v,
                               const Projection& e, const Tolerance& tol = Tolerance{});

Projection geodesic_eval(const GeodesicFrame& frame, double theta,
                         const Tolerance& tol = Tolerance{});

// Unique unit-speed path with gamma(0)=p, gamma(pi/2)=q, gamma(pi/4)=p0.
// Requires p triangle q (not-triangle error otherwise) and p0 in m(p,q);
// the sin|t1-t2| identity is checked on a 9-point grid before returning.
GeodesicFrame geodesic_through(const Projection& p, const Projection& q, const Projection& p0,
                               const Tolerance& tol = Tolerance{});

// Exhaustive search over the 2^B central masks, lexicographic order,
// block 0 most significant; B > 16 is a capacity error.
std::optional<TriangleWitness> triangle_relation(const Projection& p, const Projection& q,
                                                 const Tolerance& tol = Tolerance{});

// p1 # p2: p1 _|_ p2 and p1 is subequivalent to 1 - p1 - p2.
bool sharp_relation(const Projection& p1, const Projection& p2,
                    const Tolerance& tol = Tolerance{});

// Two distinct unit-speed paths through gamma(0)=p, gamma(pi/4)=p0,
// gamma(pi/2)=q for commuting p, q, where p0 = (p^q' + v + v* + p'^q)/2
// + p^q. The second path rotates the equivalent pair p1 ~ q1 through a
// closed loop while the first holds it fixed; the paths are separated by
// more than 1e-3 at theta = pi/8.
std::pair<GeodesicFrame, GeodesicFrame> nonuniqueness_witness(const Projection& p,
                                                              const Projection& q,
                                                              const Projection& p1,
                                                              const Projection& q1,
                                                              const Tolerance& tol = Tolerance{});

// Encloses two projections with |p1 - p2| < 1 between endpoints e, f with
// e triangle f and p1, p2 in m(e, f), via the explicit construction
// (1/2)[[1, v],[v*, v*v]] (+) (1/2)[[1, i],[-i, 1]] on the Halmos blocks,
// complemented blockwise when the corner ranks demand it.
MidpointEnclosure midpoint_enclosure(const Projection& p1, const Projection& p2,
                                     const Tolerance& tol = Tolerance{});

// Haar samples from m(p,q) for a triangle pair, via random corner unitaries.
std::vector<Projection> sample_midpoints(const Projection& p, const Projection& q,
                                         std::size_t count, Rng& rng,
                                         const Tolerance& tol = Tolerance{});

// Recovers the corner unitary of a frame from a point x = gamma(theta),
// 0 < theta < pi/2: u = e x v* / (cos(theta) sin(theta)) blockwise.
Operator frame_unitary_from_point(const GeodesicFrame& frame, const Projection& x, double theta);

}  // namespace projlat

#endif
