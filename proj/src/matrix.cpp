#include "svb/matrix.hpp"

#include <cmath>

namespace svb {

CMat gram_plus_identity(const CMat& h) {
  const int m = h.rows();
  CMat g(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      cxd s = (i == j) ? 1.0 : 0.0;
      for (int k = 0; k < h.cols(); ++k) s += h(i, k) * std::conj(h(j, k));
      g(i, j) = s;
    }
  }
  return g;
}

CMat cholesky_pd(const CMat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("cholesky_pd: square matrix required");
  const int n = m.rows();
  CMat l(n, n);
  for (int j = 0; j < n; ++j) {
    double d = std::real(m(j, j));
    for (int k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!std::isfinite(d) || d <= 0.0) throw NotPositiveDefinite();
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      cxd s = m(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  return l;
}

double logdet2_pd(const CMat& m) {
  const CMat l = cholesky_pd(m);
  double ld = 0.0;
  for (int j = 0; j < m.rows(); ++j) ld += std::log2(std::real(l(j, j)));
  return 2.0 * ld;
}

CMat inverse_pd(const CMat& m) {
  const CMat l = cholesky_pd(m);
  const int n = m.rows();
  CMat inv(n, n);
  std::vector<cxd> y(n), x(n);
  for (int c = 0; c < n; ++c) {
    // Forward substitution: L y = e_c.
    for (int i = 0; i < n; ++i) {
      cxd s = (i == c) ? 1.0 : 0.0;
      for (int k = 0; k < i; ++k) s -= l(i, k) * y[k];
      y[i] = s / std::real(l(i, i));
    }
    // Back substitution: L^H x = y.
    for (int i = n - 1; i >= 0; --i) {
      cxd s = y[i];
      for (int k = i + 1; k < n; ++k) s -= std::conj(l(k, i)) * x[k];
      x[i] = s / std::real(l(i, i));
    }
    for (int i = 0; i < n; ++i) inv(i, c) = x[i];
  }
  return inv;
}

}  // namespace svb
