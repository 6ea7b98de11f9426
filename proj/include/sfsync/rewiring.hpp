#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "sfsync/graph.hpp"

namespace sfsync {

struct RewireStep {
  Graph graph;
  RewirePlan plan;
};

/// One similar-connection swap at `node`: its highest-degree neighbour b is traded for a
/// low-degree partner c (drawn at random from the lowest available degree class), c giving
/// up one of its higher-degree neighbours d. The result holds edges (node,c) and (b,d).
/// Returns nullopt when no valid connected swap exists at `node`.
inline std::optional<RewireStep> similar_rewire_step(const Graph& g, int node, std::mt19937_64& rng) {
  const int ka = g.degree(node);
  std::vector<int> heavy;
  for (int b : g.neighbours(node))
    if (g.degree(b) > ka) heavy.push_back(b);
  std::stable_sort(heavy.begin(), heavy.end(), [&](int x, int y) { return g.degree(x) > g.degree(y); });
  if (heavy.empty()) return std::nullopt;

  std::vector<int> partners;
  for (int c = 0; c < g.node_count(); ++c)
    if (c != node && !g.has_edge(node, c)) partners.push_back(c);
  std::shuffle(partners.begin(), partners.end(), rng);
  std::stable_sort(partners.begin(), partners.end(), [&](int x, int y) { return g.degree(x) < g.degree(y); });

  for (int b : heavy) {
    for (int c : partners) {
      if (c == b || g.degree(c) > g.degree(b)) break;
      std::vector<int> far(g.neighbours(c).begin(), g.neighbours(c).end());
      std::stable_sort(far.begin(), far.end(), [&](int x, int y) { return g.degree(x) > g.degree(y); });
      for (int d : far) {
        if (d == b || d == node || g.has_edge(b, d)) continue;
        RewirePlan plan;
        try {
          plan = plan_similar_rewire(g, Edge::of(node, b), Edge::of(c, d));
        } catch (const Error&) {
          continue;
        }
        if (plan.added[0] != Edge::of(node, c)) continue;
        Graph out = g.with_changes(plan.removed, plan.added);
        if (!out.connected()) continue;
        return RewireStep{std::move(out), plan};
      }
    }
  }
  return std::nullopt;
}

/// Among similar-connection swaps between two minimum-degree nodes a and c (each trading
/// its highest-degree neighbour, b and d, so that (a,c) and (b,d) appear), returns the
/// connected result with the smallest `score`. Returns nullopt when no swap is available.
inline std::optional<RewireStep> greedy_similar_rewire_step(
    const Graph& g, const std::function<double(const Graph&)>& score) {
  const int kmin = g.min_degree();
  auto heaviest = [&](int x, int exclude) {
    int best = -1;
    for (int y : g.neighbours(x))
      if (y != exclude && g.degree(y) > kmin && (best < 0 || g.degree(y) > g.degree(best))) best = y;
    return best;
  };
  std::optional<RewireStep> best;
  double best_score = std::numeric_limits<double>::infinity();
  for (int a = 0; a < g.node_count(); ++a) {
    if (g.degree(a) != kmin) continue;
    const int b = heaviest(a, -1);
    if (b < 0) continue;
    for (int c = 0; c < g.node_count(); ++c) {
      if (c == a || g.degree(c) != kmin || g.has_edge(a, c)) continue;
      int d = -1;
      for (int y : g.neighbours(c))
        if (y != b && y != a && g.degree(y) > kmin && !g.has_edge(b, y) &&
            (d < 0 || g.degree(y) > g.degree(d)))
          d = y;
      if (d < 0) continue;
      const RewirePlan plan = plan_similar_rewire(g, Edge::of(a, b), Edge::of(c, d));
      Graph out = g.with_changes(plan.removed, plan.added);
      if (!out.connected()) continue;
      const double s = score(out);
      if (s < best_score) {
        best_score = s;
        best = RewireStep{std::move(out), plan};
      }
    }
  }
  return best;
}

}  // namespace sfsync
