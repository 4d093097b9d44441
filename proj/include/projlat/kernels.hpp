#ifndef PROJLAT_KERNELS_HPP
#define PROJLAT_KERNELS_HPP

//
// Low-level arithmetic kernels on interleaved complex<double> buffers.
//
// Every dense inner loop of the library funnels through this table:
// a scalar reference implementation always exists, and an AVX2/FMA
// variant is selected at runtime when the CPU supports it. The two
// variants are equivalence-tested against each other in the test suite.
//
// Buffers are arrays of std::complex<double> (re,im interleaved). All
// kernels are pure and thread-safe; dispatch is initialized once.
//

#include <complex>
#include <cstddef>

namespace projlat::kernels {

using cplx = std::complex<double>;

struct KernelTable {
    // C (m x n) += A (m x k) * B (k x n), all row-major, contiguous.
    void (*gemm_acc)(std::size_t m, std::size_t k, std::size_t n,
                     const cplx* A, const cplx* B, cplx* C);
    // y += alpha * x
    void (*axpy)(std::size_t n, cplx alpha, const cplx* x, cplx* y);
    // x *= alpha
    void (*scal)(std::size_t n, cplx alpha, cplx* x);
    // sum conj(x[i]) * y[i]
    cplx (*dotc)(std::size_t n, const cplx* x, const cplx* y);
    // sum |x[i]|^2
    double (*nrm2sq)(std::size_t n, const cplx* x);
    // plane rotation, c real, s complex:
    //   (x[i], y[i]) <- (c*x[i] + s*y[i], -conj(s)*x[i] + c*y[i])
    void (*rot)(std::size_t n, double c, cplx s, cplx* x, cplx* y);

    const char* name;
};

// Scalar reference kernels (always available).
extern const KernelTable scalar_table;

// AVX2+FMA kernels; null on builds/targets without support.
const KernelTable* avx2_table();

// Runtime CPU capability check (false on non-x86).
bool cpu_supports_avx2_fma();

// Active table. Chosen once: AVX2 when the CPU supports it, unless the
// environment variable PROJLAT_KERNELS=scalar|avx2 forces a choice.
const KernelTable& active();

inline void gemm_acc(std::size_t m, std::size_t k, std::size_t n,
                     const cplx* A, const cplx* B, cplx* C) {
    active().gemm_acc(m, k, n, A, B, C);
}
inline void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
    active().axpy(n, alpha, x, y);
}
inline void scal(std::size_t n, cplx alpha, cplx* x) { active().scal(n, alpha, x); }
inline cplx dotc(std::size_t n, const cplx* x, const cplx* y) { return active().dotc(n, x, y); }
inline double nrm2sq(std::size_t n, const cplx* x) { return active().nrm2sq(n, x); }
inline void rot(std::size_t n, double c, cplx s, cplx* x, cplx* y) {
    active().rot(n, c, s, x, y);
}

}  // namespace projlat::kernels

#endif
