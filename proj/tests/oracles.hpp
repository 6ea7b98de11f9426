#pragma once

// Test-only reference computations. Nothing here calls the library's eigensolver,
// perturbation estimators or integrators.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline std::vector<double> complete_spectrum(int n) {
  std::vector<double> v(n, static_cast<double>(n));
  v[0] = 0.0;
  return v;
}

inline std::vector<double> star_spectrum(int n) {
  std::vector<double> v(n, 1.0);
  v[0] = 0.0;
  if (n >= 2) v[n - 1] = n;
  return v;
}

inline std::vector<double> path_spectrum(int n) {
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = 2.0 - 2.0 * std::cos(std::numbers::pi * k / n);
  std::sort(v.begin(), v.end());
  return v;
}

inline std::vector<double> cycle_spectrum(int n) {
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * k / n);
  std::sort(v.begin(), v.end());
  return v;
}

/// Cyclic Jacobi rotations on a dense symmetric matrix (row-major); eigenvalues ascending.
inline std::vector<double> jacobi_eigenvalues(std::vector<double> a, int n) {
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-26) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Central finite-difference Jacobian, row-major.
inline std::vector<double> fd_jacobian(const std::function<void(const std::vector<double>&, std::vector<double>&)>& f,
                                       const std::vector<double>& x, double h = 1e-6) {
  const std::size_t n = x.size();
  std::vector<double> jac(n * n), fp(n), fm(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    f(xp, fp);
    f(xm, fm);
    for (std::size_t i = 0; i < n; ++i) jac[i * n + j] = (fp[i] - fm[i]) / (2.0 * h);
  }
  return jac;
}

/// Classical RK4 on std::vector state, separate from the library integrator.
inline void rk4(const std::function<void(const std::vector<double>&, std::vector<double>&)>& f,
                std::vector<double>& x, double dt) {
  const std::size_t n = x.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), t(n);
  f(x, k1);
  for (std::size_t i = 0; i < n; ++i) t[i] = x[i] + 0.5 * dt * k1[i];
  f(t, k2);
  for (std::size_t i = 0; i < n; ++i) t[i] = x[i] + 0.5 * dt * k2[i];
  f(t, k3);
  for (std::size_t i = 0; i < n; ++i) t[i] = x[i] + dt * k3[i];
  f(t, k4);
  for (std::size_t i = 0; i < n; ++i) x[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
}

/// Largest Lyapunov exponent from two nearby nonlinear trajectories with periodic
/// rescaling of their separation (no Jacobian involved).
inline double two_trajectory_lyapunov(const std::function<void(const std::vector<double>&, std::vector<double>&)>& f,
                                      std::vector<double> x, double dt, double transient, double duration,
                                      double d0 = 1e-8, double renorm = 1.0) {
  for (long s = 0; s < std::lround(transient / dt); ++s) rk4(f, x, dt);
  auto y = x;
  y[0] += d0;
  const long per = std::lround(renorm / dt);
  const long rounds = std::lround(duration / renorm);
  double acc = 0.0;
  for (long r = 0; r < rounds; ++r) {
    for (long s = 0; s < per; ++s) {
      rk4(f, x, dt);
      rk4(f, y, dt);
    }
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d += (y[i] - x[i]) * (y[i] - x[i]);
    d = std::sqrt(d);
    acc += std::log(d / d0);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + (y[i] - x[i]) * d0 / d;
  }
  return acc / (rounds * renorm);
}

}  // namespace oracle
