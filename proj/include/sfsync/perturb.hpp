#pragma once

#include <limits>
#include <optional>
#include <string>

#include "sfsync/error.hpp"
#include "sfsync/graph.hpp"

namespace sfsync {

enum class EstimateTarget { Lambda2, LambdaMax };

inline const char* to_string(EstimateTarget t) {
  return t == EstimateTarget::Lambda2 ? "lambda2" : "lambdaN";
}

/// Perturbative estimate of an extreme Laplacian eigenvalue.
///
/// For lambdaN: first_order = k_max, second_order = k_max + sum_j 1/(k_max - k_j) over the
/// hub's neighbours (absent when the hub degree is shared), simple = k_max + 1.
///
/// For lambda2: first_order = k_min - 1 (the unperturbed value after cutting one link),
/// second_order = the minimised estimate, argmin_node = the node achieving it.
/// `k_min` doubles as the zeroth-order comparison baseline lambda2 <~ k_min.
struct EigenEstimate {
  EstimateTarget target = EstimateTarget::Lambda2;
  double first_order = 0.0;
  std::optional<double> second_order;
  std::optional<double> simple;
  std::optional<int> argmin_node;
  bool degenerate = false;
  int k_min = 0;
  int k_max = 0;
};

/// First-order eigenvalue correction -<k> A_ii. Always zero for a graph without self-loops.
inline double first_order_correction(const Graph& g, int i) {
  return g.has_edge(i, i) ? -g.mean_degree() : 0.0;
}

/// sum over neighbours j of 1/(k_eff - k_j), where k_eff = deg_override or k_i.
/// Throws DegenerateTermError when some neighbour has degree k_eff.
inline double second_order_term(const Graph& g, int i, std::optional<int> deg_override = {}) {
  if (i < 0 || i >= g.node_count())
    throw Error(ErrorCode::InvalidParameter, "node " + std::to_string(i) + " out of range");
  const int k_eff = deg_override.value_or(g.degree(i));
  double sum = 0.0;
  for (int j : g.neighbours(i)) {
    const int denom = k_eff - g.degree(j);
    if (denom == 0) throw DegenerateTermError(i, j);
    sum += 1.0 / denom;
  }
  return sum;
}

inline EigenEstimate estimate_lambda_max(const Graph& g) {
  if (!g.connected()) throw Error(ErrorCode::Disconnected, "estimate needs a connected graph");
  EigenEstimate est;
  est.target = EstimateTarget::LambdaMax;
  est.k_min = g.min_degree();
  est.k_max = g.max_degree();
  est.first_order = est.k_max;
  est.simple = est.k_max + 1.0;

  int hub = -1;
  int hubs = 0;
  for (int i = 0; i < g.node_count(); ++i) {
    if (g.degree(i) == est.k_max) {
      if (hub < 0) hub = i;
      ++hubs;
    }
  }
  if (hubs > 1) {
    est.degenerate = true;
    return est;
  }
  est.second_order = est.k_max + first_order_correction(g, hub) + second_order_term(g, hub);
  return est;
}

/// Value of the lambda2 estimator at one node: (k_i - 1) + sum_j 1/((k_i - 1) - k_j).
inline double lambda2_node_estimate(const Graph& g, int i) {
  const int reduced = g.degree(i) - 1;
  return reduced + first_order_correction(g, i) + second_order_term(g, i, reduced);
}

/// Minimises the link-removal estimate over all minimum-degree nodes. No graph is mutated.
inline EigenEstimate estimate_lambda2(const Graph& g) {
  if (!g.connected()) throw Error(ErrorCode::Disconnected, "estimate needs a connected graph");
  const int kmin = g.min_degree();
  if (kmin < 2)
    throw Error(ErrorCode::Precondition,
                "lambda2 estimate needs minimum degree >= 2, got " + std::to_string(kmin));
  EigenEstimate est;
  est.target = EstimateTarget::Lambda2;
  est.k_min = kmin;
  est.k_max = g.max_degree();
  est.first_order = kmin - 1.0;

  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.node_count(); ++i) {
    if (g.degree(i) != kmin) continue;
    const double value = lambda2_node_estimate(g, i);
    if (value < best) {
      best = value;
      est.argmin_node = i;
    }
  }
  est.second_order = best;
  return est;
}

}  // namespace sfsync
