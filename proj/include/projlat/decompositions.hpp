#ifndef PROJLAT_DECOMPOSITIONS_HPP
#define PROJLAT_DECOMPOSITIONS_HPP

#include <vector>

#include "projlat/complex_matrix.hpp"
#include "projlat/tolerance.hpp"

namespace projlat {

// A = vectors * diag(values) * vectors^H, values ascending, vectors unitary.
struct HermitianEig {
    std::vector<double> values;
    CMatrix vectors;
};

// A ~= u * diag(sigma) * v^H with sigma descending, u (m x r), v (n x r),
// r = min(m, n). Columns of u belonging to sigma == 0 are zero.
struct Svd {
    CMatrix u;
    std::vector<double> sigma;
    CMatrix v;
};

// Polar decomposition x = v * absx with absx = (x^H x)^{1/2} >= 0 and v a
// partial isometry vanishing on ker(absx): v^H v equals the range
// projection of absx, v v^H the range projection of x.
struct Polar {
    CMatrix v;
    CMatrix absx;
};

// Cyclic complex Jacobi; input is symmetrized internally to (A + A^H)/2.
HermitianEig hermitian_eig(const CMatrix& a);

// One-sided Jacobi on columns; accurate small singular values.
Svd svd(const CMatrix& a);

// Largest singular value; 0 for the zero matrix.
double operator_norm(const CMatrix& a);

// Orthogonal projection onto the column space of a. Rank is decided by
// singular values exceeding rank_rel * sigma_max * max(rows, cols).
CMatrix range_projection(const CMatrix& a, const Tolerance& tol = Tolerance{});

Polar polar_decompose(const CMatrix& x, const Tolerance& tol = Tolerance{});

// Unique positive square root of a positive semidefinite hermitian matrix;
// eigenvalues in [-eq_abs, 0) are clipped to 0, anything lower is an error.
CMatrix hermitian_sqrt(const CMatrix& a, const Tolerance& tol = Tolerance{});

std::size_t numerical_rank(const CMatrix& a, const Tolerance& tol = Tolerance{});

}  // namespace projlat

#endif
