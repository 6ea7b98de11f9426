#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sfsync/error.hpp"
#include "sfsync/matrix.hpp"

namespace sfsync {

/// Undirected edge stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;

  static Edge of(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

  auto operator<=>(const Edge&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, const Edge& e) {
  return os << '(' << e.u << ',' << e.v << ')';
}

/// Simple undirected graph. Immutable once built; every mutation returns a new graph.
class Graph {
 public:
  Graph() = default;

  /// Throws InvalidEdge on self-loops, out-of-range endpoints or repeated edges.
  Graph(int n, std::span<const Edge> edges) : adjacency_(static_cast<std::size_t>(n)) {
    if (n < 1) throw Error(ErrorCode::InvalidParameter, "node count must be positive");
    for (const Edge& raw : edges) {
      if (raw.u == raw.v)
        throw Error(ErrorCode::InvalidEdge, "self-loop at node " + std::to_string(raw.u));
      const Edge e = Edge::of(raw.u, raw.v);
      if (e.u < 0 || e.v >= n)
        throw Error(ErrorCode::InvalidEdge, "endpoint out of range in edge (" +
                                                std::to_string(raw.u) + "," +
                                                std::to_string(raw.v) + ")");
      adjacency_[e.u].push_back(e.v);
      adjacency_[e.v].push_back(e.u);
    }
    for (auto& nbrs : adjacency_) {
      std::sort(nbrs.begin(), nbrs.end());
      if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end())
        throw Error(ErrorCode::InvalidEdge, "duplicate edge");
    }
    edge_count_ = edges.size();
  }

  Graph(int n, std::initializer_list<Edge> edges)
      : Graph(n, std::span<const Edge>(edges.begin(), edges.size())) {}

  int node_count() const noexcept { return static_cast<int>(adjacency_.size()); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  int degree(int i) const { return static_cast<int>(adjacency_.at(i).size()); }

  std::vector<int> degrees() const {
    std::vector<int> out(adjacency_.size());
    for (std::size_t i = 0; i < adjacency_.size(); ++i) out[i] = static_cast<int>(adjacency_[i].size());
    return out;
  }

  /// Sorted ascending.
  std::span<const int> neighbours(int i) const { return adjacency_.at(i); }

  bool has_edge(int a, int b) const {
    if (a < 0 || b < 0 || a >= node_count() || b >= node_count()) return false;
    const auto& nbrs = adjacency_[a];
    return std::binary_search(nbrs.begin(), nbrs.end(), b);
  }

  /// Canonical form: u < v, lexicographically sorted.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (int u = 0; u < node_count(); ++u)
      for (int v : adjacency_[u])
        if (u < v) out.push_back({u, v});
    return out;
  }

  int min_degree() const {
    int k = degree(0);
    for (int i = 1; i < node_count(); ++i) k = std::min(k, degree(i));
    return k;
  }

  int max_degree() const {
    int k = degree(0);
    for (int i = 1; i < node_count(); ++i) k = std::max(k, degree(i));
    return k;
  }

  /// <k> = 2|E| / N.
  double mean_degree() const { return 2.0 * static_cast<double>(edge_count_) / node_count(); }

  /// Expansion parameter 1/<k> of the degree-matrix perturbation series.
  double expansion_parameter() const { return 1.0 / mean_degree(); }

  bool connected() const {
    const int n = node_count();
    if (n == 0) return true;
    std::vector<char> seen(n, 0);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      for (int v : adjacency_[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          ++reached;
          frontier.push(v);
        }
      }
    }
    return reached == n;
  }

  /// New graph with `removed` deleted and `added` inserted.
  Graph with_changes(std::span<const Edge> removed, std::span<const Edge> added) const {
    Graph out = *this;
    for (const Edge& e : removed) {
      if (!has_edge(e.u, e.v)) {
        std::ostringstream msg;
        msg << "edge " << e << " does not exist";
        throw Error(ErrorCode::InvalidEdge, msg.str());
      }
      out.erase_half(e.u, e.v);
      out.erase_half(e.v, e.u);
      --out.edge_count_;
    }
    for (const Edge& raw : added) {
      const Edge e = Edge::of(raw.u, raw.v);
      if (e.u == e.v || e.u < 0 || e.v >= node_count() || out.has_edge(e.u, e.v)) {
        std::ostringstream msg;
        msg << "cannot add edge " << e;
        throw Error(ErrorCode::InvalidEdge, msg.str());
      }
      out.insert_half(e.u, e.v);
      out.insert_half(e.v, e.u);
      ++out.edge_count_;
    }
    return out;
  }

  bool operator==(const Graph&) const = default;

 private:
  void erase_half(int a, int b) {
    auto& nbrs = adjacency_[a];
    nbrs.erase(std::lower_bound(nbrs.begin(), nbrs.end(), b));
  }
  void insert_half(int a, int b) {
    auto& nbrs = adjacency_[a];
    nbrs.insert(std::lower_bound(nbrs.begin(), nbrs.end(), b), b);
  }

  std::vector<std::vector<int>> adjacency_;
  std::size_t edge_count_ = 0;
};

/// Barabasi-Albert growth: complete seed graph on m+1 nodes, then each new node attaches
/// to m distinct existing nodes drawn with probability proportional to degree.
inline Graph generate_ba(int n, int m, std::uint64_t seed) {
  if (m < 1 || n <= m)
    throw Error(ErrorCode::InvalidParameter,
                "barabasi-albert requires n > m >= 1 (n=" + std::to_string(n) +
                    ", m=" + std::to_string(m) + ")");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m) * (m + 1) / 2 + static_cast<std::size_t>(n - m - 1) * m);
  // Each node appears once per incident edge, so a uniform draw is degree-weighted.
  std::vector<int> endpoints;
  endpoints.reserve(2 * edges.capacity());
  for (int u = 0; u <= m; ++u)
    for (int v = u + 1; v <= m; ++v) {
      edges.push_back({u, v});
      endpoints.push_back(u);
      endpoints.push_back(v);
    }

  std::mt19937_64 rng(seed);
  std::vector<int> targets;
  targets.reserve(m);
  for (int node = m + 1; node < n; ++node) {
    targets.clear();
    std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
    while (static_cast<int>(targets.size()) < m) {
      const int t = endpoints[pick(rng)];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (int t : targets) {
      edges.push_back(Edge::of(t, node));
      endpoints.push_back(t);
      endpoints.push_back(node);
    }
  }
  return Graph(n, edges);
}

/// L = D - A with A the 0/1 adjacency indicator.
inline DenseMatrix laplacian(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.node_count());
  DenseMatrix L(n);
  for (int i = 0; i < g.node_count(); ++i) {
    L(i, i) = g.degree(i);
    for (int j : g.neighbours(i)) L(i, j) = -1.0;
  }
  return L;
}

struct LinkRemoval {
  Graph graph;
  Edge removed;
};

/// Cuts one link at the lowest-index minimum-degree node. Neighbours are tried in order of
/// decreasing degree (ties: lowest index) until the result stays connected.
inline LinkRemoval remove_min_degree_link(const Graph& g) {
  const int kmin = g.min_degree();
  if (kmin < 2)
    throw Error(ErrorCode::Precondition,
                "minimum degree " + std::to_string(kmin) + " < 2; removal would disconnect");
  if (!g.connected()) throw Error(ErrorCode::Disconnected, "link removal needs a connected graph");

  int node = 0;
  while (g.degree(node) != kmin) ++node;

  std::vector<int> candidates(g.neighbours(node).begin(), g.neighbours(node).end());
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](int a, int b) { return g.degree(a) > g.degree(b); });
  for (int nbr : candidates) {
    const Edge e = Edge::of(node, nbr);
    const std::array removed{e};
    Graph out = g.with_changes(removed, {});
    if (out.connected()) return {std::move(out), e};
  }
  throw Error(ErrorCode::Disconnected,
              "every link at node " + std::to_string(node) + " is a bridge");
}

/// Two-edge swap that keeps all four endpoint degrees.
struct RewirePlan {
  std::array<Edge, 2> removed;
  std::array<Edge, 2> added;
};

/// Pairs the two lowest-degree endpoints with each other and the two highest likewise
/// (ties broken by node index). Throws InvalidEdge / InvalidSwap.
inline RewirePlan plan_similar_rewire(const Graph& g, Edge e1, Edge e2) {
  e1 = Edge::of(e1.u, e1.v);
  e2 = Edge::of(e2.u, e2.v);
  for (const Edge& e : {e1, e2}) {
    if (!g.has_edge(e.u, e.v)) {
      std::ostringstream msg;
      msg << "edge " << e << " does not exist";
      throw Error(ErrorCode::InvalidEdge, msg.str());
    }
  }
  std::array<int, 4> ends{e1.u, e1.v, e2.u, e2.v};
  {
    auto sorted = ends;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(ErrorCode::InvalidSwap, "edges share an endpoint");
  }
  std::sort(ends.begin(), ends.end(), [&](int a, int b) {
    return std::pair(g.degree(a), a) < std::pair(g.degree(b), b);
  });
  const Edge low = Edge::of(ends[0], ends[1]);
  const Edge high = Edge::of(ends[2], ends[3]);
  if (low == e1 || low == e2)
    throw Error(ErrorCode::InvalidSwap, "edges already join similar-degree endpoints");
  if (g.has_edge(low.u, low.v) || g.has_edge(high.u, high.v))
    throw Error(ErrorCode::InvalidSwap, "replacement edge already exists");
  return {{e1, e2}, {low, high}};
}

/// Throws RejectedSwap when the swap would disconnect the graph.
inline Graph apply_rewire(const Graph& g, const RewirePlan& plan) {
  Graph out = g.with_changes(plan.removed, plan.added);
  if (!out.connected()) throw Error(ErrorCode::RejectedSwap, "swap disconnects the graph");
  return out;
}

inline Graph rewire_similar(const Graph& g, Edge e1, Edge e2) {
  return apply_rewire(g, plan_similar_rewire(g, e1, e2));
}

/// Reads "u v" pairs, one per line, 0-indexed. Blank lines and '#' comments are skipped;
/// an optional "# nodes N" line fixes the node count (otherwise max index + 1).
inline Graph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::unordered_set<std::uint64_t> seen;
  long long declared = -1;
  int max_index = -1;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::istringstream header(line.substr(first + 1));
      std::string key;
      long long value = 0;
      if (header >> key && key == "nodes") {
        if (!(header >> value) || value < 1) throw ParseError(lineno, "bad node-count header");
        declared = value;
      }
      continue;
    }
    std::istringstream fields(line);
    long long a = 0, b = 0;
    std::string extra;
    if (!(fields >> a >> b) || (fields >> extra))
      throw ParseError(lineno, "expected two integers, got '" + line + "'");
    if (a < 0 || b < 0 || a > 0x7fffffff || b > 0x7fffffff ||
        (declared >= 0 && (a >= declared || b >= declared)))
      throw ParseError(lineno, "node index out of range");
    if (a == b) throw ParseError(lineno, "self-loop");
    const Edge e = Edge::of(static_cast<int>(a), static_cast<int>(b));
    const auto key = (static_cast<std::uint64_t>(e.u) << 32) | static_cast<std::uint64_t>(e.v);
    if (!seen.insert(key).second) throw ParseError(lineno, "duplicate edge");
    edges.push_back(e);
    max_index = std::max(max_index, e.v);
  }
  const long long n = declared >= 0 ? declared : max_index + 1;
  if (n < 1) throw ParseError(lineno, "empty edge list");
  return Graph(static_cast<int>(n), edges);
}

inline Graph read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return read_edge_list(in);
}

/// Canonical sorted output. The node-count header is written only when trailing isolated
/// nodes would otherwise be lost.
inline void write_edge_list(std::ostream& out, const Graph& g) {
  const auto edges = g.edges();
  int max_index = -1;
  for (const Edge& e : edges) max_index = std::max(max_index, e.v);
  if (max_index + 1 != g.node_count()) out << "# nodes " << g.node_count() << '\n';
  for (const Edge& e : edges) out << e.u << ' ' << e.v << '\n';
}

inline void write_edge_list(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  write_edge_list(out, g);
}

}  // namespace sfsync
