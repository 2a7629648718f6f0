#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wlcanon/graph.hpp"
#include "wlcanon/refine.hpp"

namespace wlcanon {

// Symmetric class-pair matrix: 1 means "all edges between the classes",
// 0 means "no edges". Indexed by the colour ids of the supplied colouring.
struct MajoritySpec {
  std::uint32_t k = 0;
  std::vector<std::uint8_t> table;  // k*k, symmetric

  bool at(std::uint32_t a, std::uint32_t b) const { return table[a * k + b] != 0; }
  void set(std::uint32_t a, std::uint32_t b, bool val) {
    table[a * k + b] = table[b * k + a] = val ? 1 : 0;
  }
  static MajoritySpec zero(std::uint32_t k) {
    MajoritySpec L;
    L.k = k;
    L.table.assign(static_cast<std::size_t>(k) * k, 0);
    return L;
  }
};

// L[w][w'] = 1 iff at least half of the possible edges between the classes
// are present (ties round to 1). Possible edges: |A||B| across classes,
// C(|A|,2) within one; a singleton class has no within-pair decision to make.
inline MajoritySpec majority(const Graph& g, const Colouring& c) {
  if (c.colour.size() != g.n()) throw std::invalid_argument("majority: size mismatch");
  MajoritySpec L = MajoritySpec::zero(c.k);
  std::vector<std::uint64_t> present(static_cast<std::size_t>(c.k) * c.k, 0);
  for (const auto& [u, v] : g.edges()) {
    std::uint32_t a = c.colour[u], b = c.colour[v];
    ++present[a * c.k + b];
    if (a != b) ++present[b * c.k + a];
  }
  for (std::uint32_t a = 0; a < c.k; ++a) {
    for (std::uint32_t b = a; b < c.k; ++b) {
      std::uint64_t possible =
          a == b ? static_cast<std::uint64_t>(c.class_sizes[a]) * (c.class_sizes[a] - 1) / 2
                 : static_cast<std::uint64_t>(c.class_sizes[a]) * c.class_sizes[b];
      L.set(a, b, 2 * present[a * c.k + b] >= possible);
    }
  }
  return L;
}

// D_L(G,c) = M_L(G,c) triangle G.
inline Graph generalised_disparity(const Graph& g, const Colouring& c, const MajoritySpec& L) {
  if (c.colour.size() != g.n()) throw std::invalid_argument("generalised_disparity: size mismatch");
  if (L.k != c.k) throw std::invalid_argument("generalised_disparity: L index mismatch");
  const std::uint32_t n = g.n();
  std::vector<std::vector<Vertex>> adj(n);
  std::vector<bool> is_nb(n, false);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex w : g.neighbours(u)) is_nb[w] = true;
    for (Vertex v = u + 1; v < n; ++v) {
      bool in_m = L.at(c.colour[u], c.colour[v]);
      if (in_m != is_nb[v]) {
        adj[u].push_back(v);
        adj[v].push_back(u);
      }
    }
    for (Vertex w : g.neighbours(u)) is_nb[w] = false;
  }
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());
  return Graph::from_adjacency(std::move(adj));
}

// D(G,c) = M(G,c) triangle G.
inline Graph disparity(const Graph& g, const Colouring& c) {
  return generalised_disparity(g, c, majority(g, c));
}

struct DisparityStats {
  std::vector<std::uint32_t> component_sizes;
  std::uint32_t max_degree = 0;
  std::uint32_t s_bound = 0;  // max over (class, component) of |C intersect X|
  struct ClassRow {
    std::uint32_t cls;
    std::uint32_t max_component_intersection;  // max over components of |C intersect X|
    std::uint32_t max_neighbours_in_class;     // max over vertices of |N(y) intersect C|
  };
  std::vector<ClassRow> degree_table;

  bool s_bounded(std::uint32_t s) const { return s_bound <= s; }
  // (r,d)-degree-bounded: classes meeting some component in >= r vertices
  // have all-vertex neighbour counts <= d.
  bool degree_bounded(std::uint32_t r, std::uint32_t d) const {
    for (const auto& row : degree_table)
      if (row.max_component_intersection >= r && row.max_neighbours_in_class > d) return false;
    return true;
  }
};

inline DisparityStats stats(const Graph& d, const Colouring& c) {
  if (c.colour.size() != d.n()) throw std::invalid_argument("stats: size mismatch");
  DisparityStats st;
  auto comp = component_ids(d);
  std::uint32_t ncomp = 0;
  for (auto x : comp) ncomp = std::max(ncomp, x + 1);
  st.component_sizes.assign(ncomp, 0);
  for (Vertex v = 0; v < d.n(); ++v) ++st.component_sizes[comp[v]];
  for (Vertex v = 0; v < d.n(); ++v) st.max_degree = std::max(st.max_degree, d.degree(v));

  std::vector<std::uint32_t> inter(static_cast<std::size_t>(c.k) * ncomp, 0);
  for (Vertex v = 0; v < d.n(); ++v) ++inter[static_cast<std::size_t>(c.colour[v]) * ncomp + comp[v]];
  std::vector<std::uint32_t> nb_in_class(c.k, 0);
  std::vector<std::uint32_t> per_vertex(c.k, 0);
  for (Vertex y = 0; y < d.n(); ++y) {
    for (Vertex w : d.neighbours(y)) ++per_vertex[c.colour[w]];
    for (Vertex w : d.neighbours(y)) {
      std::uint32_t col = c.colour[w];
      nb_in_class[col] = std::max(nb_in_class[col], per_vertex[col]);
      per_vertex[col] = 0;
    }
  }
  for (std::uint32_t cls = 0; cls < c.k; ++cls) {
    std::uint32_t rmax = 0;
    for (std::uint32_t x = 0; x < ncomp; ++x)
      rmax = std::max(rmax, inter[static_cast<std::size_t>(cls) * ncomp + x]);
    st.degree_table.push_back({cls, rmax, nb_in_class[cls]});
    st.s_bound = std::max(st.s_bound, rmax);
  }
  return st;
}

// Constructive witness: a vertex y and a set of distances I such that the
// number of vertices of C at a distance in I from y lies in [a, a*Delta).
// Follows the two-case construction: walk toward the start vertex when some
// distance level is already populous, otherwise grow prefix distance sets.
// The start vertex is the lowest-id member of C; walk ties break to the
// lowest id.
inline std::pair<Vertex, std::vector<std::uint32_t>> distance_witness(
    const Graph& h, const std::vector<Vertex>& c_set, std::uint32_t a) {
  if (c_set.empty() || a < 1 || a > c_set.size())
    throw std::invalid_argument("distance_witness: need 1 <= a <= |C|");
  if (components(h).size() != 1) throw std::invalid_argument("distance_witness: H not connected");
  std::uint32_t delta = 0;
  for (Vertex v = 0; v < h.n(); ++v) delta = std::max(delta, h.degree(v));
  if (delta < 2) throw std::invalid_argument("distance_witness: max degree must be >= 2");
  std::vector<bool> in_c(h.n(), false);
  for (Vertex v : c_set) {
    if (v >= h.n()) throw std::invalid_argument("distance_witness: C vertex out of range");
    in_c[v] = true;
  }
  const Vertex z = *std::min_element(c_set.begin(), c_set.end());

  auto level_counts = [&](Vertex y) {
    auto dist = bfs_distances(h, y);
    std::vector<std::uint64_t> cnt(h.n() + 1, 0);
    for (Vertex v : c_set) ++cnt[dist[v]];
    return std::make_pair(dist, cnt);
  };

  auto [dist_z, cnt_z] = level_counts(z);
  std::uint32_t d_level = kUnreachable;
  for (std::uint32_t i = 0; i < cnt_z.size(); ++i)
    if (cnt_z[i] >= a) {
      d_level = i;
      break;
    }

  if (d_level != kUnreachable) {
    // Case 1: walk from z toward smaller distance levels, keeping the count
    // from shrinking by more than a factor Delta per step.
    Vertex cur = z;
    std::uint64_t q_cur = cnt_z[d_level];
    std::vector<std::pair<Vertex, std::uint64_t>> chain{{cur, q_cur}};
    for (std::uint32_t level = d_level; level > 0; --level) {
      Vertex chosen = kUnreachable;
      std::uint64_t chosen_q = 0;
      for (Vertex w : h.neighbours(cur)) {
        auto dist_w = bfs_distances(h, w);
        std::uint64_t q = 0;
        for (Vertex v : c_set)
          if (dist_w[v] == level - 1) ++q;
        if (q * static_cast<std::uint64_t>(delta) >= chain.back().second) {
          chosen = w;
          chosen_q = q;
          break;  // neighbours scanned in id order: lowest-id valid choice
        }
      }
      chain.emplace_back(chosen, chosen_q);
      cur = chosen;
    }
    // chain[t] sits at distance level d_level - t. Find the deepest entry
    // whose count drops below a; the previous entry lands in [a, a*Delta).
    for (std::size_t t = 1; t < chain.size(); ++t) {
      if (chain[t].second < a)
        return {chain[t - 1].first, {d_level - static_cast<std::uint32_t>(t) + 1}};
    }
    return {chain.back().first, {0}};  // only reachable when a == 1
  }

  // Case 2: every level holds < a vertices of C; grow prefix sets {0..i-1}.
  std::uint64_t cum = 0;
  for (std::uint32_t i = 0; i < cnt_z.size(); ++i) {
    cum += cnt_z[i];
    if (cum >= a) {
      std::vector<std::uint32_t> interval(i + 1);
      for (std::uint32_t t = 0; t <= i; ++t) interval[t] = t;
      return {z, interval};
    }
  }
  throw std::logic_error("distance_witness: unreachable");
}

// Greedy fingerprint: S subset of B of size at most |C|/(2 d_B) + 1 with
// |N(S)| >= |C|/4, by repeatedly taking the vertex covering the most
// still-uncovered vertices of C.
inline std::vector<Vertex> fingerprint_set(const Graph& f, const std::vector<Vertex>& side_c,
                                           const std::vector<Vertex>& side_b) {
  if (f.m() == 0) throw std::invalid_argument("fingerprint_set: empty graph");
  if (side_c.empty() || side_b.empty())
    throw std::invalid_argument("fingerprint_set: empty side");
  std::vector<std::uint8_t> side(f.n(), 0);
  for (Vertex v : side_c) side[v] = 1;
  for (Vertex v : side_b) {
    if (side[v]) throw std::invalid_argument("fingerprint_set: sides not disjoint");
    side[v] = 2;
  }
  std::uint32_t d_b = f.degree(side_b[0]), d_c = f.degree(side_c[0]);
  for (Vertex v : side_b)
    if (f.degree(v) != d_b) throw std::invalid_argument("fingerprint_set: B side not regular");
  for (Vertex v : side_c)
    if (f.degree(v) != d_c) throw std::invalid_argument("fingerprint_set: C side not regular");
  for (Vertex v : side_b)
    for (Vertex w : f.neighbours(v))
      if (side[w] != 1) throw std::invalid_argument("fingerprint_set: edge not between sides");
  if (d_b == 0) throw std::invalid_argument("fingerprint_set: B side has degree 0");

  std::vector<bool> covered(f.n(), false);
  std::vector<Vertex> s;
  std::uint64_t rounds = (side_c.size() + 2 * d_b - 1) / (2 * d_b);  // ceil(|C| / 2d_B)
  for (std::uint64_t i = 0; i < rounds; ++i) {
    Vertex best = kUnreachable;
    std::uint32_t best_gain = 0;
    for (Vertex z : side_b) {
      std::uint32_t gain = 0;
      for (Vertex w : f.neighbours(z))
        if (!covered[w]) ++gain;
      if (best == kUnreachable || gain > best_gain) {
        best = z;
        best_gain = gain;
      }
    }
    s.push_back(best);
    for (Vertex w : f.neighbours(best)) covered[w] = true;
  }
  return s;
}

}  // namespace wlcanon
