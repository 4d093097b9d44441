#ifndef PROJLAT_RNG_HPP
#define PROJLAT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "projlat/complex_matrix.hpp"

namespace projlat {

// Seeded generator with a self-contained gaussian sampler so that fixed
// seeds reproduce identical streams on every platform (std::normal_distribution
// is implementation-defined).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    std::uint64_t uniform_below(std::uint64_t n) {
        // Desk-scale modulo draw; bias is negligible for n << 2^64.
        return engine_() % n;
    }

    // Standard normal via Box-Muller.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    cplx gaussian_cplx() {
        const double re = gaussian();
        const double im = gaussian();
        return {re, im};
    }

    CMatrix gaussian_matrix(std::size_t rows, std::size_t cols) {
        CMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = gaussian_cplx();
        return m;
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace projlat

#endif
