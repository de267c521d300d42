#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "svb/antenna_set.hpp"

namespace svb {

using cxd = std::complex<double>;

struct NotPositiveDefinite : std::domain_error {
  NotPositiveDefinite() : std::domain_error("matrix not positive definite") {}
};

// Dense complex matrix, row-major.  Every matrix in this codebase is tiny
// (antenna counts <= 8), so we keep a plain value type with unsophisticated
// O(n^3) kernels rather than pulling in a full linear-algebra dependency.
class CMat {
 public:
  CMat() = default;
  CMat(int rows, int cols) : rows_(rows), cols_(cols), v_(static_cast<size_t>(rows) * cols) {}

  static CMat identity(int n) {
    CMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  cxd& operator()(int r, int c) { return v_[static_cast<size_t>(r) * cols_ + c]; }
  const cxd& operator()(int r, int c) const { return v_[static_cast<size_t>(r) * cols_ + c]; }

  CMat adjoint() const {
    CMat a(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) a(c, r) = std::conj((*this)(r, c));
    return a;
  }

  CMat operator*(const CMat& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("CMat multiply: dimension mismatch");
    CMat p(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const cxd a = (*this)(i, k);
        if (a == 0.0) continue;
        for (int j = 0; j < o.cols_; ++j) p(i, j) += a * o(k, j);
      }
    return p;
  }

  CMat operator+(const CMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("CMat add: dimension mismatch");
    CMat s = *this;
    for (size_t i = 0; i < v_.size(); ++i) s.v_[i] += o.v_[i];
    return s;
  }

  // Submatrix formed by the selected columns, in ascending index order.
  CMat columns(AntennaSet s) const {
    CMat out(rows_, s.size());
    int j = 0;
    for (int c : s.indices()) {
      for (int r = 0; r < rows_; ++r) out(r, j) = (*this)(r, c);
      ++j;
    }
    return out;
  }

  bool all_finite() const {
    for (const cxd& z : v_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<cxd> v_;
};

// I + H * H^H  (Hermitian, positive definite by construction; eigenvalues >= 1).
CMat gram_plus_identity(const CMat& h);

// Lower-triangular L with L * L^H = M, for Hermitian positive definite M.
// Throws NotPositiveDefinite when a pivot is not strictly positive.
CMat cholesky_pd(const CMat& m);

// log2(det(M)) for Hermitian positive definite M, via the Cholesky factor.
double logdet2_pd(const CMat& m);

// M^-1 for Hermitian positive definite M, via forward/back substitution on
// the Cholesky factor.
CMat inverse_pd(const CMat& m);

}  // namespace svb
