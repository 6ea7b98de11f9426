#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "sfsync/error.hpp"
#include "sfsync/matrix.hpp"

namespace sfsync {

/// Eigenpairs of a real symmetric matrix, eigenvalues ascending.
/// Row i of `vectors` is the unit eigenvector for `values[i]`.
struct SymmetricEigen {
  std::vector<double> values;
  std::optional<DenseMatrix> vectors;
};

namespace detail {

// Householder reduction to tridiagonal form, in place. On return `diag`/`off` hold T
// (off[i] = T(i+1,i)); row k of `a` holds the reflector for step k beyond column k and
// beta[k] its scale (0 when the step was skipped).
inline void tridiagonalize(DenseMatrix& a, std::vector<double>& diag, std::vector<double>& off,
                           std::vector<double>& beta) {
  const std::size_t n = a.size();
  diag.assign(n, 0.0);
  off.assign(n > 0 ? n - 1 : 0, 0.0);
  beta.assign(n, 0.0);
  std::vector<double> p(n), w(n);

  for (std::size_t k = 0; k + 2 < n; ++k) {
    diag[k] = a(k, k);
    double* x = a.row(k).data() + k + 1;
    const std::size_t m = n - k - 1;
    double sigma = 0.0;
    for (std::size_t i = 1; i < m; ++i) sigma += x[i] * x[i];
    if (sigma == 0.0) {
      off[k] = x[0];
      continue;
    }
    const double norm = std::sqrt(x[0] * x[0] + sigma);
    const double alpha = x[0] <= 0.0 ? norm : -norm;
    x[0] -= alpha;
    const double b = 2.0 / (x[0] * x[0] + sigma);
    beta[k] = b;
    off[k] = alpha;

    // p = b * A_sub * v
    double vp = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double* ai = a.row(k + 1 + i).data() + k + 1;
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += ai[j] * x[j];
      p[i] = b * s;
      vp += x[i] * p[i];
    }
    const double kk = 0.5 * b * vp;
    for (std::size_t i = 0; i < m; ++i) w[i] = p[i] - kk * x[i];
    // A_sub -= v w^T + w v^T
    for (std::size_t i = 0; i < m; ++i) {
      double* ai = a.row(k + 1 + i).data() + k + 1;
      const double vi = x[i], wi = w[i];
      for (std::size_t j = 0; j < m; ++j) ai[j] -= vi * w[j] + wi * x[j];
    }
  }
  if (n >= 2) {
    diag[n - 2] = a(n - 2, n - 2);
    off[n - 2] = a(n - 1, n - 2);
  }
  if (n >= 1) diag[n - 1] = a(n - 1, n - 1);
}

// Implicit-shift QL on a symmetric tridiagonal matrix. `rows`, when given, starts as the
// identity and accumulates the rotations so row i ends as the eigenvector for diag[i].
inline void tridiagonal_ql(std::vector<double>& diag, std::vector<double> off, DenseMatrix* rows) {
  const std::size_t n = diag.size();
  if (n == 0) return;
  off.resize(n, 0.0);
  off[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  double shift_total = 0.0;
  double tst1 = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(diag[l]) + std::abs(off[l]));
    std::size_t m = l;
    while (m < n && std::abs(off[m]) > eps * tst1) ++m;
    if (m == n) m = n - 1;
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 100) throw Error(ErrorCode::Capacity, "QL iteration did not converge");
        double g = diag[l];
        double p = (diag[l + 1] - g) / (2.0 * off[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        diag[l] = off[l] / (p + r);
        diag[l + 1] = off[l] * (p + r);
        const double dl1 = diag[l + 1];
        double h = g - diag[l];
        for (std::size_t i = l + 2; i < n; ++i) diag[i] -= h;
        shift_total += h;

        p = diag[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = off[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * off[ii];
          h = c * p;
          r = std::hypot(p, off[ii]);
          off[ii + 1] = s * r;
          s = off[ii] / r;
          c = p / r;
          p = c * diag[ii] - s * g;
          diag[ii + 1] = h + s * (c * g + s * diag[ii]);
          if (rows) {
            double* zi = rows->row(ii).data();
            double* zj = rows->row(ii + 1).data();
            for (std::size_t k = 0; k < n; ++k) {
              const double t = zj[k];
              zj[k] = s * zi[k] + c * t;
              zi[k] = c * zi[k] - s * t;
            }
          }
        }
        p = -s * s2 * c3 * el1 * off[l] / dl1;
        off[l] = s * p;
        diag[l] = c * p;
      } while (std::abs(off[l]) > eps * tst1);
    }
    diag[l] += shift_total;
    off[l] = 0.0;
  }
}

}  // namespace detail

/// Dense symmetric eigendecomposition (Householder tridiagonalization + implicit QL).
inline SymmetricEigen symmetric_eigen(DenseMatrix a, bool want_vectors) {
  const std::size_t n = a.size();
  std::vector<double> diag, off, beta;
  detail::tridiagonalize(a, diag, off, beta);

  SymmetricEigen out;
  if (!want_vectors) {
    detail::tridiagonal_ql(diag, off, nullptr);
    std::sort(diag.begin(), diag.end());
    out.values = std::move(diag);
    return out;
  }

  DenseMatrix z = DenseMatrix::identity(n);
  detail::tridiagonal_ql(diag, off, &z);

  // Back-transform: u^T = z^T H_{n-3} ... H_0.
  for (std::size_t k = n >= 2 ? n - 2 : 0; k-- > 0;) {
    if (beta[k] == 0.0) continue;
    const double* v = a.row(k).data() + k + 1;
    const std::size_t m = n - k - 1;
    for (std::size_t r = 0; r < n; ++r) {
      double* zr = z.row(r).data() + k + 1;
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += zr[j] * v[j];
      s *= beta[k];
      for (std::size_t j = 0; j < m; ++j) zr[j] -= s * v[j];
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return diag[i] < diag[j]; });
  out.values.resize(n);
  DenseMatrix sorted(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = diag[order[i]];
    std::copy_n(z.row(order[i]).data(), n, sorted.row(i).data());
  }
  out.vectors = std::move(sorted);
  return out;
}

}  // namespace sfsync
