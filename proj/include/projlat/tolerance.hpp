#ifndef PROJLAT_TOLERANCE_HPP
#define PROJLAT_TOLERANCE_HPP

#include "projlat/errors.hpp"

namespace projlat {

// Single tolerance policy shared by the whole library.
//
// rank_rel : relative singular-value cutoff for rank decisions. A singular
//            value counts toward the rank when it exceeds
//            rank_rel * sigma_max * max(rows, cols).
// eq_abs   : absolute operator-norm cutoff for equality, hermiticity and
//            idempotence checks.
struct Tolerance {
    double rank_rel = 1e-9;
    double eq_abs = 1e-8;

    void validate() const {
        if (!(rank_rel > 0.0 && rank_rel < 1e-3))
            throw_invalid("Tolerance: rank_rel must lie in (0, 1e-3)");
        if (!(eq_abs > 0.0 && eq_abs < 1e-3))
            throw_invalid("Tolerance: eq_abs must lie in (0, 1e-3)");
    }
};

}  // namespace projlat

#endif
