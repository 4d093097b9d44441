#include "projlat/decompositions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "projlat/kernels.hpp"

namespace projlat {

namespace {

constexpr int kMaxSweeps = 60;

// Rotation R = [[c, s], [-conj(s), c]] (c real) chosen so that
// R^H [[alpha, beta], [conj(beta), gamma]] R is diagonal.
struct JacobiRot {
    double c;
    cplx s;
};

JacobiRot make_rotation(double alpha, double gamma, cplx beta) {
    const double absb = std::abs(beta);
    const cplx phase = beta / absb;
    const double tau = (gamma - alpha) / (2.0 * absb);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    return {c, (t * c) * phase};
}

}  // namespace

HermitianEig hermitian_eig(const CMatrix& input) {
    input.require_finite("hermitian_eig");
    if (!input.square()) throw_invalid("hermitian_eig: matrix not square");
    const std::size_t n = input.rows();

    CMatrix a = input.hermitian_part();
    CMatrix u = CMatrix::identity(n);

    if (n > 1) {
        const double thresh = 4e-16 * std::max(a.frobenius_norm(), 1e-300);
        for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
            bool rotated = false;
            for (std::size_t p = 0; p + 1 < n; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    const cplx beta = a(p, q);
                    if (std::abs(beta) <= thresh) continue;
                    rotated = true;
                    const JacobiRot r = make_rotation(a(p, p).real(), a(q, q).real(), beta);
                    const cplx sc = std::conj(r.s);
                    // A <- A * R (columns p, q)
                    for (std::size_t i = 0; i < n; ++i) {
                        const cplx ap = a(i, p);
                        const cplx aq = a(i, q);
                        a(i, p) = r.c * ap - sc * aq;
                        a(i, q) = r.s * ap + r.c * aq;
                    }
                    // A <- R^H * A (rows p, q)
                    kernels::rot(n, r.c, -r.s, a.row(p), a.row(q));
                    // U <- U * R
                    for (std::size_t i = 0; i < n; ++i) {
                        const cplx up = u(i, p);
                        const cplx uq = u(i, q);
                        u(i, p) = r.c * up - sc * uq;
                        u(i, q) = r.s * up + r.c * uq;
                    }
                }
            }
            if (!rotated) break;
        }
    }

    HermitianEig out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i).real();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return out.values[x] < out.values[y]; });

    HermitianEig sorted;
    sorted.values.resize(n);
    sorted.vectors = CMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        sorted.values[j] = out.values[order[j]];
        for (std::size_t i = 0; i < n; ++i) sorted.vectors(i, j) = u(i, order[j]);
    }
    return sorted;
}

Svd svd(const CMatrix& a) {
    a.require_finite("svd");
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();

    if (m < n) {
        Svd t = svd(a.adjoint());
        return Svd{std::move(t.v), std::move(t.sigma), std::move(t.u)};
    }

    // Column-major working copies; one-sided rotations act on whole columns.
    std::vector<cplx> w(m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) w[j * m + i] = a(i, j);
    std::vector<cplx> v(n * n, cplx{0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) v[j * n + j] = 1.0;

    if (n > 1) {
        for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
            bool rotated = false;
            for (std::size_t p = 0; p + 1 < n; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    cplx* wp = w.data() + p * m;
                    cplx* wq = w.data() + q * m;
                    const double hpp = kernels::nrm2sq(m, wp);
                    const double hqq = kernels::nrm2sq(m, wq);
                    if (hpp == 0.0 || hqq == 0.0) continue;
                    const cplx hpq = kernels::dotc(m, wp, wq);
                    if (std::abs(hpq) <= 1e-15 * std::sqrt(hpp * hqq)) continue;
                    rotated = true;
                    const JacobiRot r = make_rotation(hpp, hqq, hpq);
                    const cplx s2 = -std::conj(r.s);
                    kernels::rot(m, r.c, s2, wp, wq);
                    kernels::rot(n, r.c, s2, v.data() + p * n, v.data() + q * n);
                }
            }
            if (!rotated) break;
        }
    }

    std::vector<double> sig(n);
    for (std::size_t j = 0; j < n; ++j) sig[j] = std::sqrt(kernels::nrm2sq(m, w.data() + j * m));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sig[x] > sig[y]; });

    Svd out;
    out.sigma.resize(n);
    out.u = CMatrix(m, n);
    out.v = CMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.sigma[j] = sig[src];
        const cplx* col = w.data() + src * m;
        if (sig[src] > 0.0) {
            const double inv = 1.0 / sig[src];
            for (std::size_t i = 0; i < m; ++i) out.u(i, j) = col[i] * inv;
        }
        const cplx* vcol = v.data() + src * n;
        for (std::size_t i = 0; i < n; ++i) out.v(i, j) = vcol[i];
    }
    return out;
}

double operator_norm(const CMatrix& a) {
    a.require_finite("operator_norm");
    if (a.rows() == 1 && a.cols() == 1) return std::abs(a(0, 0));
    Svd s = svd(a);
    return s.sigma.empty() ? 0.0 : s.sigma.front();
}

std::size_t numerical_rank(const CMatrix& a, const Tolerance& tol) {
    a.require_finite("numerical_rank");
    const Svd s = svd(a);
    if (s.sigma.empty() || s.sigma.front() == 0.0) return 0;
    const double cutoff =
        tol.rank_rel * s.sigma.front() * static_cast<double>(std::max(a.rows(), a.cols()));
    std::size_t r = 0;
    while (r < s.sigma.size() && s.sigma[r] > cutoff) ++r;
    return r;
}

CMatrix range_projection(const CMatrix& a, const Tolerance& tol) {
    a.require_finite("range_projection");
    const Svd s = svd(a);
    CMatrix p(a.rows(), a.rows());
    if (s.sigma.empty() || s.sigma.front() == 0.0) return p;
    const double cutoff =
        tol.rank_rel * s.sigma.front() * static_cast<double>(std::max(a.rows(), a.cols()));
    for (std::size_t r = 0; r < s.sigma.size() && s.sigma[r] > cutoff; ++r) {
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.rows(); ++j)
                p(i, j) += s.u(i, r) * std::conj(s.u(j, r));
    }
    return p.hermitian_part();
}

Polar polar_decompose(const CMatrix& x, const Tolerance& tol) {
    x.require_finite("polar_decompose");
    const Svd s = svd(x);
    const std::size_t m = x.rows();
    const std::size_t n = x.cols();

    CMatrix v(m, n);
    CMatrix absx(n, n);
    if (!s.sigma.empty() && s.sigma.front() > 0.0) {
        const double cutoff =
            tol.rank_rel * s.sigma.front() * static_cast<double>(std::max(m, n));
        for (std::size_t r = 0; r < s.sigma.size(); ++r) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    absx(i, j) += s.sigma[r] * s.v(i, r) * std::conj(s.v(j, r));
            if (s.sigma[r] > cutoff) {
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        v(i, j) += s.u(i, r) * std::conj(s.v(j, r));
            }
        }
        absx = absx.hermitian_part();
    }
    return Polar{std::move(v), std::move(absx)};
}

CMatrix hermitian_sqrt(const CMatrix& a, const Tolerance& tol) {
    a.require_finite("hermitian_sqrt");
    if (!a.square()) throw_invalid("hermitian_sqrt: matrix not square");
    if (operator_norm(a - a.adjoint()) > tol.eq_abs)
        throw_invalid("hermitian_sqrt: matrix not hermitian within eq_abs");

    HermitianEig e = hermitian_eig(a);
    const std::size_t n = a.rows();
    for (double lam : e.values)
        if (lam < -tol.eq_abs)
            throw_invalid("hermitian_sqrt: eigenvalue below -eq_abs, not positive semidefinite");

    CMatrix b(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        const double lam = std::max(e.values[r], 0.0);
        if (lam == 0.0) continue;
        const double s = std::sqrt(lam);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                b(i, j) += s * e.vectors(i, r) * std::conj(e.vectors(j, r));
    }
    return b.hermitian_part();
}

}  // namespace projlat
