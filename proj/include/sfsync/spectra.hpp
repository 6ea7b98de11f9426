#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sfsync/eigen.hpp"
#include "sfsync/error.hpp"
#include "sfsync/graph.hpp"

namespace sfsync {

/// Largest graph the dense solver accepts.
inline constexpr int kDenseLimit = 4000;

/// Position of the Fiedler pair in the ascending spectrum.
inline constexpr int kFiedlerMode = 1;

/// Eigenvalues within this relative gap of lambda2 count towards its multiplicity.
inline constexpr double kMultiplicityTolerance = 1e-8;

/// Laplacian spectrum of one graph.
struct SpectralSummary {
  std::vector<double> eigenvalues;  // ascending
  double fiedler_value = 0.0;
  std::vector<double> fiedler_vector;  // unit norm, orthogonal to the all-ones vector
  double max_value = 0.0;
  int fiedler_multiplicity = 1;
  DenseMatrix modes;  // row i is the unit eigenvector of eigenvalues[i]

  std::span<const double> mode(int i) const {
    if (i == kFiedlerMode) return fiedler_vector;
    return modes.row(static_cast<std::size_t>(i));
  }
};

namespace detail {

inline void check_dense_capacity(const Graph& g) {
  if (g.node_count() > kDenseLimit)
    throw Error(ErrorCode::Capacity, "graph has " + std::to_string(g.node_count()) +
                                         " nodes; dense limit is " + std::to_string(kDenseLimit));
}

inline void fix_sign(std::span<double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  if (!v.empty() && v[best] < 0)
    for (double& x : v) x = -x;
}

}  // namespace detail

/// All eigenvalues of L, ascending. Cheaper than eigen_full when vectors are not needed.
inline std::vector<double> laplacian_eigenvalues(const Graph& g) {
  detail::check_dense_capacity(g);
  return symmetric_eigen(laplacian(g), false).values;
}

inline SpectralSummary eigen_full(const Graph& g) {
  detail::check_dense_capacity(g);
  const std::size_t n = static_cast<std::size_t>(g.node_count());
  SymmetricEigen eig = symmetric_eigen(laplacian(g), true);

  SpectralSummary s;
  s.eigenvalues = std::move(eig.values);
  s.modes = std::move(*eig.vectors);
  for (std::size_t i = 0; i < n; ++i) detail::fix_sign(s.modes.row(i));
  s.max_value = s.eigenvalues.back();
  if (n < 2) return s;

  s.fiedler_value = s.eigenvalues[1];
  const double tol = kMultiplicityTolerance * std::max(1.0, s.fiedler_value);
  int mult = 0;
  for (double lam : s.eigenvalues)
    if (std::abs(lam - s.fiedler_value) <= tol) ++mult;
  s.fiedler_multiplicity = mult;

  // For a connected graph row 1 is already orthogonal to 1. Otherwise lambda2 sits in the
  // null space together with 1, so project 1 out and renormalize.
  std::vector<double> v(s.modes.row(1).begin(), s.modes.row(1).end());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(n);
  for (double& x : v) x -= mean;
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm < 1e-12) {
    // Row 1 was (close to) the constant vector; row 0 then carries the other direction.
    v.assign(s.modes.row(0).begin(), s.modes.row(0).end());
    mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);
    for (double& x : v) x -= mean;
    norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
  }
  for (double& x : v) x /= norm;
  detail::fix_sign(v);
  s.fiedler_vector = std::move(v);
  return s;
}

/// lambda_N / lambda_2. Throws Disconnected when lambda_2 vanishes.
inline double eigenratio(std::span<const double> eigenvalues) {
  if (eigenvalues.size() < 2 || eigenvalues[1] <= 1e-9)
    throw Error(ErrorCode::Disconnected, "lambda2 is zero; eigenratio undefined");
  return eigenvalues.back() / eigenvalues[1];
}

inline double eigenratio(const Graph& g) {
  if (!g.connected()) throw Error(ErrorCode::Disconnected, "eigenratio needs a connected graph");
  return eigenratio(laplacian_eigenvalues(g));
}

/// First-order shift of eigenvalue `mode` when edge e=(k,m) is deleted:
/// -(xi_k - xi_m)^2, using the unperturbed eigenvector.
inline double delta_lambda_removal(const Graph& g, const SpectralSummary& summary, Edge e,
                                   int mode = kFiedlerMode) {
  if (!g.has_edge(e.u, e.v)) {
    std::ostringstream msg;
    msg << "edge " << e << " does not exist";
    throw Error(ErrorCode::InvalidEdge, msg.str());
  }
  if (mode < 0 || mode >= static_cast<int>(summary.eigenvalues.size()))
    throw Error(ErrorCode::InvalidParameter, "mode index out of range");
  const auto xi = summary.mode(mode);
  const double diff = xi[e.u] - xi[e.v];
  return -diff * diff;
}

}  // namespace sfsync
