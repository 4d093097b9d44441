//
// Scalar reference kernels. These define the semantics the SIMD variants
// must reproduce (same accumulation order, no fused contractions beyond
// what the compiler does at -O2 without -ffast-math).
//

#include "projlat/kernels.hpp"

namespace projlat::kernels {

namespace {

void gemm_acc_scalar(std::size_t m, std::size_t k, std::size_t n,
                     const cplx* A, const cplx* B, cplx* C) {
    for (std::size_t i = 0; i < m; ++i) {
        cplx* c_row = C + i * n;
        const cplx* a_row = A + i * k;
        for (std::size_t l = 0; l < k; ++l) {
            const cplx a = a_row[l];
            if (a == cplx{0.0, 0.0}) continue;
            const cplx* b_row = B + l * n;
            for (std::size_t j = 0; j < n; ++j) c_row[j] += a * b_row[j];
        }
    }
}

void axpy_scalar(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scal_scalar(std::size_t n, cplx alpha, cplx* x) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

cplx dotc_scalar(std::size_t n, const cplx* x, const cplx* y) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) acc += std::conj(x[i]) * y[i];
    return acc;
}

double nrm2sq_scalar(std::size_t n, const cplx* x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return acc;
}

void rot_scalar(std::size_t n, double c, cplx s, cplx* x, cplx* y) {
    const cplx sc = std::conj(s);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx xi = x[i];
        const cplx yi = y[i];
        x[i] = c * xi + s * yi;
        y[i] = -sc * xi + c * yi;
    }
}

}  // namespace

const KernelTable scalar_table = {
    gemm_acc_scalar, axpy_scalar, scal_scalar, dotc_scalar, nrm2sq_scalar, rot_scalar,
    "scalar",
};

}  // namespace projlat::kernels
