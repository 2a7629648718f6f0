#pragma once

// Shared fixtures and independent oracles for the test suites. Everything in
// here is deliberately naive: oracles must not share logic with the library
// paths they check.

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "wlcanon/graph.hpp"
#include "wlcanon/refine.hpp"
#include "wlcanon/rng.hpp"

namespace testing_support {

using wlcanon::Edge;
using wlcanon::Graph;
using wlcanon::Rng;
using wlcanon::RngSeed;
using wlcanon::Vertex;

inline Graph path_graph(std::uint32_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph::from_edges(n, e);
}

inline Graph cycle_graph(std::uint32_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph::from_edges(n, e);
}

inline Graph complete_graph(std::uint32_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph::from_edges(n, e);
}

inline Graph complete_bipartite(std::uint32_t a, std::uint32_t b) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < a; ++i)
    for (Vertex j = 0; j < b; ++j) e.emplace_back(i, a + j);
  return Graph::from_edges(a + b, e);
}

inline Graph disjoint_union(const Graph& g, const Graph& h) {
  std::vector<Edge> e = g.edges();
  for (const auto& [u, v] : h.edges()) e.emplace_back(g.n() + u, g.n() + v);
  return Graph::from_edges(g.n() + h.n(), e);
}

// The 7-vertex example graph: a 4-cycle u0..u3 with a pendant tree
// u0-u4, u4-u5, u4-u6.
inline Graph example7_graph() {
  return Graph::from_edges(7, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 4}, {4, 5}, {4, 6}});
}

// Theta graph: two degree-3 hubs (0 and 1) joined by three parallel bare
// paths of equal length, each with one interior vertex.
inline Graph theta_graph() {
  return Graph::from_edges(5, {{0, 2}, {2, 1}, {0, 3}, {3, 1}, {0, 4}, {4, 1}});
}

inline Graph petersen() {
  std::vector<Edge> e;
  for (Vertex i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(i, i + 5);
    e.emplace_back(i + 5, 5 + (i + 2) % 5);
  }
  return Graph::from_edges(10, e);
}

inline Graph random_tree(std::uint32_t n, Rng& rng) {
  std::vector<Edge> e;
  for (Vertex v = 1; v < n; ++v)
    e.emplace_back(v, static_cast<Vertex>(rng.next_below(v)));
  return Graph::from_edges(n, e);
}

// ---------------------------------------------------------------------------
// Brute-force isomorphism oracle: permutation backtracking with degree
// pruning. Independent of the canon module.
// ---------------------------------------------------------------------------

inline bool brute_force_isomorphic(const Graph& g, const Graph& h,
                                   std::vector<Vertex>* mapping = nullptr) {
  const std::uint32_t n = g.n();
  if (h.n() != n || h.m() != g.m()) return false;
  std::vector<Vertex> img(n, wlcanon::kUnreachable);
  std::vector<bool> used(n, false);
  auto rec = [&](auto&& self, Vertex t) -> bool {
    if (t == n) return true;
    for (Vertex w = 0; w < n; ++w) {
      if (used[w] || h.degree(w) != g.degree(t)) continue;
      bool ok = true;
      for (Vertex s = 0; s < t && ok; ++s)
        if (g.has_edge(t, s) != h.has_edge(w, img[s])) ok = false;
      if (!ok) continue;
      img[t] = w;
      used[w] = true;
      if (self(self, t + 1)) return true;
      used[w] = false;
      img[t] = wlcanon::kUnreachable;
    }
    return false;
  };
  if (!rec(rec, 0)) return false;
  if (mapping) *mapping = img;
  return true;
}

inline std::vector<std::vector<Vertex>> brute_force_automorphisms(const Graph& g) {
  const std::uint32_t n = g.n();
  std::vector<std::vector<Vertex>> out;
  std::vector<Vertex> img(n, wlcanon::kUnreachable);
  std::vector<bool> used(n, false);
  auto rec = [&](auto&& self, Vertex t) -> void {
    if (t == n) {
      out.push_back(img);
      return;
    }
    for (Vertex w = 0; w < n; ++w) {
      if (used[w] || g.degree(w) != g.degree(t)) continue;
      bool ok = true;
      for (Vertex s = 0; s < t && ok; ++s)
        if (g.has_edge(t, s) != g.has_edge(w, img[s])) ok = false;
      if (!ok) continue;
      img[t] = w;
      used[w] = true;
      self(self, t + 1);
      used[w] = false;
    }
  };
  rec(rec, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Walk-count oracle for the view-difference multisets: counts walks of each
// length by literal enumeration (exponential; n <= 10, depth <= 4 or so).
// The surplus of walk counts from u over v gives the expected multiset.
// ---------------------------------------------------------------------------

inline void enumerate_walks(const Graph& g, Vertex at, std::uint32_t remaining,
                            std::vector<mpz_class>& ends) {
  if (remaining == 0) {
    ends[at] += 1;
    return;
  }
  for (Vertex w : g.neighbours(at)) enumerate_walks(g, w, remaining - 1, ends);
}

inline std::map<Vertex, mpz_class> walk_surplus(const Graph& g, Vertex u, Vertex v,
                                                std::uint32_t length) {
  std::vector<mpz_class> from_u(g.n()), from_v(g.n());
  enumerate_walks(g, u, length, from_u);
  enumerate_walks(g, v, length, from_v);
  std::map<Vertex, mpz_class> out;
  for (Vertex w = 0; w < g.n(); ++w)
    if (from_u[w] > from_v[w]) out[w] = from_u[w] - from_v[w];
  return out;
}

// Partition equality irrespective of colour ids.
inline bool same_partition_as(const std::vector<std::uint32_t>& a,
                              const std::vector<std::uint32_t>& b) {
  if (a.size() != b.size()) return false;
  std::map<std::uint32_t, std::uint32_t> fw, bw;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [it1, new1] = fw.emplace(a[i], b[i]);
    if (!new1 && it1->second != b[i]) return false;
    auto [it2, new2] = bw.emplace(b[i], a[i]);
    if (!new2 && it2->second != a[i]) return false;
  }
  return true;
}

}  // namespace testing_support
