#ifndef PROJLAT_COMPLEX_MATRIX_HPP
#define PROJLAT_COMPLEX_MATRIX_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "projlat/errors.hpp"
#include "projlat/kernels.hpp"

namespace projlat {

using cplx = std::complex<double>;

// Dense complex matrix, row-major, value semantics. Entries are pairs of
// 64-bit floats. A default-constructed matrix is the empty (0x0) sentinel;
// all operations reject it.
class CMatrix {
  public:
    CMatrix() = default;

    CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
        if (rows == 0 || cols == 0) throw_invalid("CMatrix: dimensions must be positive");
    }

    static CMatrix zero(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }
    cplx* row(std::size_t i) { return data_.data() + i * cols_; }
    const cplx* row(std::size_t i) const { return data_.data() + i * cols_; }

    bool finite() const {
        for (const cplx& z : data_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    void require_finite(const char* who) const {
        if (empty()) throw_invalid(std::string(who) + ": empty matrix");
        if (!finite()) throw_invalid(std::string(who) + ": non-finite entries");
    }

    CMatrix& operator+=(const CMatrix& o) {
        check_same_dims(o, "operator+=");
        kernels::axpy(data_.size(), cplx{1.0, 0.0}, o.data(), data());
        return *this;
    }
    CMatrix& operator-=(const CMatrix& o) {
        check_same_dims(o, "operator-=");
        kernels::axpy(data_.size(), cplx{-1.0, 0.0}, o.data(), data());
        return *this;
    }
    CMatrix& operator*=(cplx a) {
        kernels::scal(data_.size(), a, data());
        return *this;
    }

    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(cplx a, CMatrix m) { return m *= a; }
    friend CMatrix operator*(CMatrix m, cplx a) { return m *= a; }

    friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
        if (a.cols_ != b.rows_) throw_invalid("CMatrix: incompatible shapes in product");
        CMatrix c(a.rows_, b.cols_);
        kernels::gemm_acc(a.rows_, a.cols_, b.cols_, a.data(), b.data(), c.data());
        return c;
    }

    CMatrix adjoint() const {
        CMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
        return t;
    }

    CMatrix conjugate() const {
        CMatrix t(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) t.data_[i] = std::conj(data_[i]);
        return t;
    }

    CMatrix transpose() const {
        CMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    cplx trace() const {
        cplx s{0.0, 0.0};
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
        return s;
    }

    double frobenius_norm() const { return std::sqrt(kernels::nrm2sq(data_.size(), data())); }

    double max_abs() const {
        double m = 0.0;
        for (const cplx& z : data_) m = std::max(m, std::abs(z));
        return m;
    }

    // (A + A*)/2; square matrices only.
    CMatrix hermitian_part() const {
        if (!square()) throw_invalid("hermitian_part: matrix not square");
        CMatrix h = adjoint();
        h += *this;
        h *= cplx{0.5, 0.0};
        return h;
    }

  private:
    void check_same_dims(const CMatrix& o, const char* who) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw_invalid(std::string(who) + ": dimension mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

}  // namespace projlat

#endif
