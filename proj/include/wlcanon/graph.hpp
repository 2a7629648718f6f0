#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wlcanon/rng.hpp"

namespace wlcanon {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

struct NotApplicableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CapExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Simple undirected graph on dense vertex ids 0..n-1. Adjacency lists are
// strictly sorted; no loops, no parallel edges. Immutable after construction.
class Graph {
 public:
  Graph() = default;

  static Graph from_edges(std::uint32_t n, const std::vector<Edge>& edges) {
    Graph g;
    g.adj_.assign(n, {});
    for (const auto& [u, v] : edges) {
      if (u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
      if (u == v) throw std::invalid_argument("self-loop not allowed");
      g.adj_[u].push_back(v);
      g.adj_[v].push_back(u);
    }
    for (auto& nb : g.adj_) {
      std::sort(nb.begin(), nb.end());
      if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
        throw std::invalid_argument("parallel edge not allowed");
    }
    g.m_ = edges.size();
    assert(g.check_invariants());
    return g;
  }

  // Adjacency lists must already satisfy the invariants (sorted, symmetric).
  static Graph from_adjacency(std::vector<std::vector<Vertex>> adj) {
    Graph g;
    g.adj_ = std::move(adj);
    std::size_t total = 0;
    for (const auto& nb : g.adj_) total += nb.size();
    g.m_ = total / 2;
    assert(g.check_invariants());
    return g;
  }

  std::uint32_t n() const { return static_cast<std::uint32_t>(adj_.size()); }
  std::size_t m() const { return m_; }
  const std::vector<Vertex>& neighbours(Vertex v) const { return adj_[v]; }
  std::uint32_t degree(Vertex v) const { return static_cast<std::uint32_t>(adj_[v].size()); }

  bool has_edge(Vertex u, Vertex v) const {
    if (u >= n() || v >= n()) return false;
    const auto& nb = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
    Vertex w = (&nb == &adj_[u]) ? v : u;
    return std::binary_search(nb.begin(), nb.end(), w);
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> es;
    es.reserve(m_);
    for (Vertex u = 0; u < n(); ++u)
      for (Vertex v : adj_[u])
        if (u < v) es.emplace_back(u, v);
    return es;
  }

  bool operator==(const Graph& o) const { return adj_ == o.adj_; }

  bool check_invariants() const {
    std::size_t total = 0;
    for (Vertex u = 0; u < n(); ++u) {
      const auto& nb = adj_[u];
      if (!std::is_sorted(nb.begin(), nb.end())) return false;
      if (std::adjacent_find(nb.begin(), nb.end()) != nb.end()) return false;
      for (Vertex v : nb) {
        if (v >= n() || v == u) return false;
        if (!std::binary_search(adj_[v].begin(), adj_[v].end(), u)) return false;
      }
      total += nb.size();
    }
    return total == 2 * m_;
  }

 private:
  std::vector<std::vector<Vertex>> adj_;
  std::size_t m_ = 0;
};

// Multigraph: loops and parallel edges allowed, multiplicity tracked exactly.
// Loops are stored as (v,v). Used for the kernel of the 2-core.
struct Multigraph {
  std::uint32_t n = 0;
  std::vector<Edge> edges;
};

// G(n,p): each of the C(n,2) pairs is an edge independently with probability p.
// Bernoulli per pair for p >= 0.1; geometric skip-sampling otherwise, so the
// sparse regimes cost O(n+m) expected time.
inline Graph gnp(std::uint32_t n, double p, RngSeed seed) {
  if (!(p >= 0.0) || p > 1.0) throw std::invalid_argument("gnp: p outside [0,1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  if (n < 2 || p == 0.0) return Graph::from_edges(n, edges);
  if (p >= 0.1) {
    for (Vertex i = 0; i + 1 < n; ++i)
      for (Vertex j = i + 1; j < n; ++j)
        if (rng.bernoulli(p)) edges.emplace_back(i, j);
    return Graph::from_edges(n, edges);
  }
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const double log1mp = std::log1p(-p);
  std::uint64_t idx = rng.geometric_skip(log1mp);
  const double twon1 = 2.0 * n - 1.0;
  while (idx < total) {
    // Unrank idx into the pair (i,j), i<j, ordered row-major: pairs with first
    // coordinate < i occupy S(i) = i(2n-i-1)/2 slots.
    std::uint64_t i = static_cast<std::uint64_t>(
        std::floor((twon1 - std::sqrt(twon1 * twon1 - 8.0 * static_cast<double>(idx))) / 2.0));
    auto row_start = [&](std::uint64_t r) { return r * (2 * n - r - 1) / 2; };
    while (i > 0 && row_start(i) > idx) --i;
    while (row_start(i + 1) <= idx) ++i;
    std::uint64_t j = i + 1 + (idx - row_start(i));
    edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
    idx += 1 + rng.geometric_skip(log1mp);
  }
  return Graph::from_edges(n, edges);
}

// Edge set of the symmetric difference. Requires equal vertex counts.
inline Graph sym_diff(const Graph& a, const Graph& b) {
  if (a.n() != b.n()) throw std::invalid_argument("sym_diff: vertex count mismatch");
  std::vector<std::vector<Vertex>> adj(a.n());
  for (Vertex u = 0; u < a.n(); ++u) {
    std::set_symmetric_difference(a.neighbours(u).begin(), a.neighbours(u).end(),
                                  b.neighbours(u).begin(), b.neighbours(u).end(),
                                  std::back_inserter(adj[u]));
  }
  return Graph::from_adjacency(std::move(adj));
}

// Connected components; each part sorted, parts ordered by smallest member.
inline std::vector<std::vector<Vertex>> components(const Graph& g) {
  std::vector<std::vector<Vertex>> parts;
  std::vector<bool> seen(g.n(), false);
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.n(); ++s) {
    if (seen[s]) continue;
    std::vector<Vertex> part;
    seen[s] = true;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      part.push_back(u);
      for (Vertex v : g.neighbours(u))
        if (!seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
    }
    std::sort(part.begin(), part.end());
    parts.push_back(std::move(part));
  }
  return parts;
}

inline std::vector<std::uint32_t> component_ids(const Graph& g) {
  std::vector<std::uint32_t> id(g.n(), 0);
  auto parts = components(g);
  for (std::uint32_t c = 0; c < parts.size(); ++c)
    for (Vertex v : parts[c]) id[v] = c;
  return id;
}

// Exact hop counts from src; kUnreachable where no path exists.
inline std::vector<std::uint32_t> bfs_distances(const Graph& g, Vertex src) {
  if (src >= g.n()) throw std::invalid_argument("bfs_distances: source out of range");
  std::vector<std::uint32_t> dist(g.n(), kUnreachable);
  std::queue<Vertex> q;
  dist[src] = 0;
  q.push(src);
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop();
    for (Vertex v : g.neighbours(u))
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
  }
  return dist;
}

inline bool is_permutation_of_range(const std::vector<Vertex>& perm, std::uint32_t n) {
  if (perm.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (Vertex v : perm) {
    if (v >= n || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

// uv is an edge of G iff perm[u]perm[v] is an edge of the result.
inline Graph apply_permutation(const Graph& g, const std::vector<Vertex>& perm) {
  if (!is_permutation_of_range(perm, g.n()))
    throw std::invalid_argument("apply_permutation: not a bijection on 0..n-1");
  std::vector<std::vector<Vertex>> adj(g.n());
  for (Vertex u = 0; u < g.n(); ++u)
    for (Vertex v : g.neighbours(u)) adj[perm[u]].push_back(perm[v]);
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());
  return Graph::from_adjacency(std::move(adj));
}

inline std::vector<Vertex> random_permutation(std::uint32_t n, Rng& rng) {
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  for (std::uint32_t i = n; i > 1; --i)
    std::swap(perm[i - 1], perm[rng.next_below(i)]);
  return perm;
}

inline Graph induced_subgraph(const Graph& g, const std::vector<Vertex>& verts,
                              std::vector<Vertex>* back_map = nullptr) {
  std::vector<std::uint32_t> idx(g.n(), kUnreachable);
  for (std::uint32_t i = 0; i < verts.size(); ++i) idx[verts[i]] = i;
  std::vector<std::vector<Vertex>> adj(verts.size());
  for (std::uint32_t i = 0; i < verts.size(); ++i)
    for (Vertex w : g.neighbours(verts[i]))
      if (idx[w] != kUnreachable) adj[i].push_back(idx[w]);
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());
  if (back_map) *back_map = verts;
  return Graph::from_adjacency(std::move(adj));
}

}  // namespace wlcanon
