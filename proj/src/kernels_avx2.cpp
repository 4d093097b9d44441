//
// AVX2+FMA kernels for interleaved complex<double> buffers.
// Each __m256d holds two complex values [re0, im0, re1, im1].
// This translation unit is compiled with -mavx2 -mfma; callers must
// consult the runtime dispatcher before using avx2_table().
//

#include "projlat/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace projlat::kernels {

namespace {

// Accumulate a*b into acc for two complex lanes.
//   a broadcast as (ar, ai); b = [br0, bi0, br1, bi1]
//   a*b = [ar*br - ai*bi, ar*bi + ai*br] per lane -> fmaddsub pattern.
inline __m256d cmul_acc(__m256d ar, __m256d ai, __m256d b, __m256d acc) {
    const __m256d bswap = _mm256_permute_pd(b, 0x5);
    const __m256d t = _mm256_mul_pd(ai, bswap);
    return _mm256_add_pd(acc, _mm256_fmaddsub_pd(ar, b, t));
}

void gemm_acc_avx2(std::size_t m, std::size_t k, std::size_t n,
                   const cplx* A, const cplx* B, cplx* C) {
    const std::size_t n2 = n & ~std::size_t{1};
    for (std::size_t i = 0; i < m; ++i) {
        double* c_row = reinterpret_cast<double*>(C + i * n);
        const cplx* a_row = A + i * k;
        for (std::size_t l = 0; l < k; ++l) {
            const cplx a = a_row[l];
            if (a == cplx{0.0, 0.0}) continue;
            const __m256d ar = _mm256_set1_pd(a.real());
            const __m256d ai = _mm256_set1_pd(a.imag());
            const double* b_row = reinterpret_cast<const double*>(B + l * n);
            std::size_t j = 0;
            for (; j < n2; j += 2) {
                const __m256d bv = _mm256_loadu_pd(b_row + 2 * j);
                __m256d cv = _mm256_loadu_pd(c_row + 2 * j);
                cv = cmul_acc(ar, ai, bv, cv);
                _mm256_storeu_pd(c_row + 2 * j, cv);
            }
            if (j < n) {
                const cplx* b_tail = B + l * n + j;
                cplx* c_tail = C + i * n + j;
                *c_tail += a * (*b_tail);
            }
        }
    }
}

void axpy_avx2(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    const double* xd = reinterpret_cast<const double*>(x);
    double* yd = reinterpret_cast<double*>(y);
    const std::size_t n2 = n & ~std::size_t{1};
    std::size_t i = 0;
    for (; i < n2; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        yv = cmul_acc(ar, ai, xv, yv);
        _mm256_storeu_pd(yd + 2 * i, yv);
    }
    if (i < n) y[i] += alpha * x[i];
}

void scal_avx2(std::size_t n, cplx alpha, cplx* x) {
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    double* xd = reinterpret_cast<double*>(x);
    const std::size_t n2 = n & ~std::size_t{1};
    std::size_t i = 0;
    for (; i < n2; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        const __m256d xswap = _mm256_permute_pd(xv, 0x5);
        const __m256d t = _mm256_mul_pd(ai, xswap);
        _mm256_storeu_pd(xd + 2 * i, _mm256_fmaddsub_pd(ar, xv, t));
    }
    if (i < n) x[i] *= alpha;
}

cplx dotc_avx2(std::size_t n, const cplx* x, const cplx* y) {
    // conj(x)*y: re parts accumulate xr*yr + xi*yi, im parts xr*yi - xi*yr.
    const __m256d sgn = _mm256_set_pd(-1.0, 1.0, -1.0, 1.0);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    const double* xd = reinterpret_cast<const double*>(x);
    const double* yd = reinterpret_cast<const double*>(y);
    const std::size_t n2 = n & ~std::size_t{1};
    std::size_t i = 0;
    for (; i < n2; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        acc_re = _mm256_fmadd_pd(xv, yv, acc_re);
        const __m256d yswap = _mm256_permute_pd(yv, 0x5);
        const __m256d q = _mm256_mul_pd(xv, yswap);
        acc_im = _mm256_fmadd_pd(q, sgn, acc_im);
    }
    alignas(32) double re4[4], im4[4];
    _mm256_store_pd(re4, acc_re);
    _mm256_store_pd(im4, acc_im);
    cplx acc{re4[0] + re4[1] + re4[2] + re4[3], im4[0] + im4[1] + im4[2] + im4[3]};
    for (; i < n; ++i) acc += std::conj(x[i]) * y[i];
    return acc;
}

double nrm2sq_avx2(std::size_t n, const cplx* x) {
    __m256d acc = _mm256_setzero_pd();
    const double* xd = reinterpret_cast<const double*>(x);
    const std::size_t n2 = n & ~std::size_t{1};
    std::size_t i = 0;
    for (; i < n2; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        acc = _mm256_fmadd_pd(xv, xv, acc);
    }
    alignas(32) double a4[4];
    _mm256_store_pd(a4, acc);
    double s = a4[0] + a4[1] + a4[2] + a4[3];
    for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

void rot_avx2(std::size_t n, double c, cplx s, cplx* x, cplx* y) {
    const __m256d cb = _mm256_set1_pd(c);
    const __m256d sr = _mm256_set1_pd(s.real());
    const __m256d si = _mm256_set1_pd(s.imag());
    const __m256d mr = _mm256_set1_pd(-s.real());  // -conj(s) = (-sr) + i*si
    double* xd = reinterpret_cast<double*>(x);
    double* yd = reinterpret_cast<double*>(y);
    const std::size_t n2 = n & ~std::size_t{1};
    std::size_t i = 0;
    for (; i < n2; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        const __m256d yswap = _mm256_permute_pd(yv, 0x5);
        const __m256d xswap = _mm256_permute_pd(xv, 0x5);
        // s*y, then x' = c*x + s*y
        const __m256d sy = _mm256_fmaddsub_pd(sr, yv, _mm256_mul_pd(si, yswap));
        _mm256_storeu_pd(xd + 2 * i, _mm256_fmadd_pd(cb, xv, sy));
        // (-conj s)*x, then y' = c*y + (-conj s)*x
        const __m256d mx = _mm256_fmaddsub_pd(mr, xv, _mm256_mul_pd(si, xswap));
        _mm256_storeu_pd(yd + 2 * i, _mm256_fmadd_pd(cb, yv, mx));
    }
    if (i < n) {
        const cplx xi = x[i];
        const cplx yi = y[i];
        x[i] = c * xi + s * yi;
        y[i] = -std::conj(s) * xi + c * yi;
    }
}

const KernelTable avx2_impl = {
    gemm_acc_avx2, axpy_avx2, scal_avx2, dotc_avx2, nrm2sq_avx2, rot_avx2,
    "avx2",
};

}  // namespace

const KernelTable* avx2_table() { return &avx2_impl; }

}  // namespace projlat::kernels

#else

namespace projlat::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace projlat::kernels

#endif
