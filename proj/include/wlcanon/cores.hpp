#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wlcanon/graph.hpp"

namespace wlcanon {

// A path in the 2-core whose internal vertices have degree 2 there.
// `vertices` includes both endpoints; closed paths have front() == back().
struct BarePath {
  std::vector<Vertex> vertices;
  bool closed() const { return vertices.size() > 1 && vertices.front() == vertices.back(); }
};

struct CoreDecomposition {
  std::vector<std::uint32_t> coreness;  // max k with v in V_k
  std::vector<Vertex> v2, v3, v23, v23_safe;
  std::vector<BarePath> bare_paths;                   // kernel.edges[i] expands to bare_paths[i]
  std::vector<std::vector<Vertex>> cycle_components;  // core2 components with no degree-3 vertex
  Multigraph kernel;                                  // on original vertex ids, loops allowed
  bool safe_computed = false;
};

// Per-vertex coreness by bucket peeling, O(n+m).
inline std::vector<std::uint32_t> coreness(const Graph& g) {
  const std::uint32_t n = g.n();
  std::vector<std::uint32_t> deg(n), pos(n), vert(n), bin;
  std::uint32_t maxdeg = 0;
  for (Vertex v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    maxdeg = std::max(maxdeg, deg[v]);
  }
  bin.assign(maxdeg + 2, 0);
  for (Vertex v = 0; v < n; ++v) ++bin[deg[v]];
  std::uint32_t startpos = 0;
  for (std::uint32_t d = 0; d <= maxdeg; ++d) {
    std::uint32_t c = bin[d];
    bin[d] = startpos;
    startpos += c;
  }
  for (Vertex v = 0; v < n; ++v) {
    pos[v] = bin[deg[v]]++;
    vert[pos[v]] = v;
  }
  for (std::uint32_t d = maxdeg + 1; d > 0; --d) bin[d - 1] = d >= 2 ? bin[d - 2] : 0;
  bin[0] = 0;
  std::vector<std::uint32_t> core(deg);
  for (std::uint32_t i = 0; i < n; ++i) {
    Vertex v = vert[i];
    core[v] = deg[v];
    for (Vertex w : g.neighbours(v)) {
      if (deg[w] > deg[v]) {
        std::uint32_t dw = deg[w], pw = pos[w], ps = bin[dw];
        Vertex s = vert[ps];
        if (s != w) {
          std::swap(vert[ps], vert[pw]);
          pos[w] = ps;
          pos[s] = pw;
        }
        ++bin[dw];
        --deg[w];
      }
    }
  }
  return core;
}

// Maximal vertex set S with minimum degree >= k in G[S].
inline std::vector<Vertex> kcore(const Graph& g, std::uint32_t k) {
  if (k < 1) throw std::invalid_argument("kcore: k must be positive");
  auto core = coreness(g);
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.n(); ++v)
    if (core[v] >= k) out.push_back(v);
  return out;
}

enum class CoreCategory { outside_2core, core2_degree2, v23 };

namespace detail {

// Degree within the 2-core, or 0 for vertices outside it.
inline std::vector<std::uint32_t> core2_degrees(const Graph& g,
                                                const std::vector<std::uint32_t>& core) {
  std::vector<std::uint32_t> d2(g.n(), 0);
  for (Vertex v = 0; v < g.n(); ++v) {
    if (core[v] < 2) continue;
    for (Vertex w : g.neighbours(v))
      if (core[w] >= 2) ++d2[v];
  }
  return d2;
}

}  // namespace detail

inline CoreCategory core_category(const Graph& g, Vertex v) {
  if (v >= g.n()) throw std::invalid_argument("core_category: vertex out of range");
  auto core = coreness(g);
  if (core[v] < 2) return CoreCategory::outside_2core;
  auto d2 = detail::core2_degrees(g, core);
  return d2[v] >= 3 ? CoreCategory::v23 : CoreCategory::core2_degree2;
}

inline CoreDecomposition decompose(const Graph& g, bool compute_safe = true) {
  const std::uint32_t n = g.n();
  CoreDecomposition dec;
  dec.coreness = coreness(g);
  auto d2 = detail::core2_degrees(g, dec.coreness);
  std::vector<bool> in2(n, false);
  for (Vertex v = 0; v < n; ++v) {
    if (dec.coreness[v] >= 2) {
      dec.v2.push_back(v);
      in2[v] = true;
    }
    if (dec.coreness[v] >= 3) dec.v3.push_back(v);
    if (dec.coreness[v] >= 2 && d2[v] >= 3) dec.v23.push_back(v);
  }
  std::vector<bool> is_v23(n, false);
  for (Vertex v : dec.v23) is_v23[v] = true;

  // Bare paths: walk from each branch vertex along unvisited core2 edges
  // through degree-2 vertices until the next branch vertex.
  dec.kernel.n = n;
  std::vector<std::vector<bool>> used(n);
  for (Vertex v = 0; v < n; ++v) used[v].assign(g.degree(v), false);
  auto edge_index = [&](Vertex u, Vertex w) {
    const auto& nb = g.neighbours(u);
    return static_cast<std::uint32_t>(std::lower_bound(nb.begin(), nb.end(), w) - nb.begin());
  };
  for (Vertex s : dec.v23) {
    const auto& nbs = g.neighbours(s);
    for (std::uint32_t i = 0; i < nbs.size(); ++i) {
      Vertex t = nbs[i];
      if (!in2[t] || used[s][i]) continue;
      BarePath path;
      path.vertices.push_back(s);
      used[s][i] = true;
      Vertex prev = s, cur = t;
      for (;;) {
        used[cur][edge_index(cur, prev)] = true;
        path.vertices.push_back(cur);
        if (is_v23[cur]) break;
        // Degree-2 interior: step to the neighbour that is not prev.
        Vertex next = kUnreachable;
        for (Vertex w : g.neighbours(cur)) {
          if (!in2[w] || w == prev) continue;
          next = w;
          break;
        }
        if (next == kUnreachable) {
          // Interior of a closed path of length 2 visits prev again.
          next = prev;
        }
        used[cur][edge_index(cur, next)] = true;
        prev = cur;
        cur = next;
      }
      dec.kernel.edges.emplace_back(s, cur);
      dec.bare_paths.push_back(std::move(path));
    }
  }
  // Remaining unvisited core2 edges belong to components where every vertex
  // has degree 2: bare cycles.
  std::vector<bool> in_cycle(n, false);
  for (Vertex s = 0; s < n; ++s) {
    if (!in2[s] || d2[s] != 2 || is_v23[s] || in_cycle[s]) continue;
    bool untouched = true;
    for (std::uint32_t i = 0; i < g.degree(s) && untouched; ++i)
      if (in2[g.neighbours(s)[i]] && used[s][i]) untouched = false;
    if (!untouched) continue;
    std::vector<Vertex> cycle{s};
    in_cycle[s] = true;
    Vertex prev = s, cur = kUnreachable;
    for (Vertex w : g.neighbours(s))
      if (in2[w]) {
        cur = w;
        break;
      }
    while (cur != s) {
      cycle.push_back(cur);
      in_cycle[cur] = true;
      Vertex next = kUnreachable;
      for (Vertex w : g.neighbours(cur))
        if (in2[w] && w != prev) {
          next = w;
          break;
        }
      prev = cur;
      cur = next;
    }
    dec.cycle_components.push_back(std::move(cycle));
  }

  if (compute_safe) {
    // Def: v is safe if deleting any two other vertices leaves at least three
    // V23 vertices (v included) in v's component. Only deletions inside v's
    // core2 component can change that count, so the pair enumeration is
    // restricted there; reachability among core2 vertices is likewise decided
    // within the 2-core.
    Graph core2 = induced_subgraph(g, dec.v2);
    std::vector<std::uint32_t> to_core(n, kUnreachable);
    for (std::uint32_t i = 0; i < dec.v2.size(); ++i) to_core[dec.v2[i]] = i;
    auto comp_id = component_ids(core2);
    std::vector<std::vector<Vertex>> comp_members;  // core2-local ids per component
    for (std::uint32_t i = 0; i < dec.v2.size(); ++i) {
      std::uint32_t c = comp_id[i];
      if (comp_members.size() <= c) comp_members.resize(c + 1);
      comp_members[c].push_back(i);
    }
    std::vector<bool> v23_local(dec.v2.size(), false);
    for (Vertex v : dec.v23) v23_local[to_core[v]] = true;

    std::vector<Vertex> stack;
    std::vector<std::uint32_t> mark(dec.v2.size(), 0);
    std::uint32_t stamp = 0;
    auto count_reachable_v23 = [&](std::uint32_t src, std::uint32_t del1, std::uint32_t del2,
                                   std::uint32_t need) {
      ++stamp;
      std::uint32_t found = 0;
      mark[src] = stamp;
      stack.push_back(src);
      while (!stack.empty()) {
        std::uint32_t x = stack.back();
        stack.pop_back();
        if (v23_local[x] && ++found >= need) {
          stack.clear();
          return found;
        }
        for (Vertex y : core2.neighbours(x)) {
          if (mark[y] == stamp || y == del1 || y == del2) continue;
          mark[y] = stamp;
          stack.push_back(y);
        }
      }
      return found;
    };

    for (Vertex v : dec.v23) {
      std::uint32_t lv = to_core[v];
      const auto& cand = comp_members[comp_id[lv]];
      bool safe = count_reachable_v23(lv, kUnreachable, kUnreachable, 3) >= 3;
      for (std::size_t a = 0; a < cand.size() && safe; ++a) {
        if (cand[a] == lv) continue;
        if (count_reachable_v23(lv, cand[a], kUnreachable, 3) < 3) {
          safe = false;
          break;
        }
        for (std::size_t b = a + 1; b < cand.size() && safe; ++b) {
          if (cand[b] == lv) continue;
          if (count_reachable_v23(lv, cand[a], cand[b], 3) < 3) safe = false;
        }
      }
      if (safe) dec.v23_safe.push_back(v);
    }
    dec.safe_computed = true;
  }
  return dec;
}

}  // namespace wlcanon
