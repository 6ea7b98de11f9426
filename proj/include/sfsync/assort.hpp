#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "sfsync/error.hpp"
#include "sfsync/graph.hpp"

namespace sfsync {

/// Mean absolute degree difference between node i and its neighbours.
inline double theta(const Graph& g, int i) {
  const int ki = g.degree(i);
  if (ki == 0) throw Error(ErrorCode::UndefinedTheta, "node " + std::to_string(i) + " is isolated");
  long long sum = 0;
  for (int j : g.neighbours(i)) sum += std::abs(ki - g.degree(j));
  return static_cast<double>(sum) / ki;
}

struct GlobalAssortativity {
  double r = 0.0;
  bool regular = false;  // zero degree variance over edge ends; r reported as 0
};

/// Degree-degree Pearson correlation over edge endpoints, both orientations counted.
inline GlobalAssortativity global_assortativity(const Graph& g) {
  const double m = static_cast<double>(g.edge_count());
  if (m == 0) throw Error(ErrorCode::Precondition, "assortativity needs at least one edge");
  double sum_prod = 0.0, sum_half = 0.0, sum_sq_half = 0.0;
  for (const Edge& e : g.edges()) {
    const double j = g.degree(e.u), k = g.degree(e.v);
    sum_prod += j * k;
    sum_half += 0.5 * (j + k);
    sum_sq_half += 0.5 * (j * j + k * k);
  }
  const double mean = sum_half / m;
  const double num = sum_prod / m - mean * mean;
  const double den = sum_sq_half / m - mean * mean;
  // Degrees are integers, so a genuinely non-constant sequence gives den >= 1/(4m^2).
  if (den <= 1e-12 * std::max(1.0, mean * mean)) return {0.0, true};
  return {std::clamp(num / den, -1.0, 1.0), false};
}

/// Per-node profile rho_i = (r + 1)/N - theta_i / sum(theta).
struct AssortativityProfile {
  double r = 0.0;
  std::vector<int> degree;
  std::vector<double> theta;
  std::vector<double> theta_bar;
  std::vector<double> rho;
  double theta_sum = 0.0;
  bool degenerate = false;  // sum(theta) == 0; theta_bar set to 0 and rho to (r+1)/N
};

inline AssortativityProfile local_assortativity(const Graph& g) {
  if (!g.connected())
    throw Error(ErrorCode::Disconnected, "local assortativity needs a connected graph");
  const int n = g.node_count();
  AssortativityProfile p;
  p.r = g.edge_count() > 0 ? global_assortativity(g).r : 0.0;
  p.degree = g.degrees();
  p.theta.resize(n);
  for (int i = 0; i < n; ++i) {
    p.theta[i] = theta(g, i);
    p.theta_sum += p.theta[i];
  }
  p.theta_bar.assign(n, 0.0);
  const double base = (p.r + 1.0) / n;
  p.rho.assign(n, base);
  if (p.theta_sum == 0.0) {
    p.degenerate = true;
    return p;
  }
  for (int i = 0; i < n; ++i) {
    p.theta_bar[i] = p.theta[i] / p.theta_sum;
    p.rho[i] = base - p.theta_bar[i];
  }
  return p;
}

inline double theta_sum(const Graph& g) {
  double s = 0.0;
  for (int i = 0; i < g.node_count(); ++i) s += theta(g, i);
  return s;
}

struct ThetaDelta {
  double theta = 0.0;      // theta_i(after) - theta_i(before)
  double theta_sum = 0.0;  // sum theta (after) - sum theta (before)
  double theta_bar = 0.0;  // theta_bar_i(after) - theta_bar_i(before)
};

inline ThetaDelta delta_theta_report(const Graph& before, const Graph& after, int i) {
  if (before.node_count() != after.node_count())
    throw Error(ErrorCode::Mismatch, "graphs have different node sets");
  const double t0 = theta(before, i), t1 = theta(after, i);
  const double s0 = theta_sum(before), s1 = theta_sum(after);
  const double bar0 = s0 > 0 ? t0 / s0 : 0.0;
  const double bar1 = s1 > 0 ? t1 / s1 : 0.0;
  return {t1 - t0, s1 - s0, bar1 - bar0};
}

}  // namespace sfsync
