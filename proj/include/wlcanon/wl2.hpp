#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "wlcanon/graph.hpp"
#include "wlcanon/refine.hpp"

namespace wlcanon {

// Colouring of ordered vertex pairs, dense n x n table, canonical dense ids
// (signature-sorted, as in the vertex refinement module).
struct PairColouring {
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  std::vector<std::uint32_t> colour;  // colour[u*n+v]

  std::uint32_t at(Vertex u, Vertex v) const { return colour[static_cast<std::size_t>(u) * n + v]; }
};

inline constexpr std::uint32_t kWl2MaxN = 4096;

// phi_{G,c}: 1-tag on edges, 0-tag on off-diagonal non-edges, c(v) on the
// diagonal; the three tag spaces are disjoint and mapped to dense ids with
// diagonal tags first (ordered by c), then edge, then non-edge.
inline PairColouring init_pair_colouring(const Graph& g, const Colouring& c) {
  const std::uint32_t n = g.n();
  if (c.colour.size() != n) throw std::invalid_argument("init_pair_colouring: size mismatch");
  if (n > kWl2MaxN) throw CapExceededError("2-WL supports at most 4096 vertices");
  PairColouring f;
  f.n = n;
  f.colour.assign(static_cast<std::size_t>(n) * n, 0);
  // Raw tags: diagonal = c(v), edge = k, non-edge = k+1; compress to dense.
  std::vector<std::uint32_t> raw(static_cast<std::size_t>(n) * n);
  std::vector<bool> present(c.k + 2, false);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = 0; v < n; ++v) {
      std::uint32_t tag;
      if (u == v)
        tag = c.colour[u];
      else if (g.has_edge(u, v))
        tag = c.k;
      else
        tag = c.k + 1;
      raw[static_cast<std::size_t>(u) * n + v] = tag;
      present[tag] = true;
    }
  }
  std::vector<std::uint32_t> dense(c.k + 2, 0);
  std::uint32_t next = 0;
  for (std::uint32_t t = 0; t < present.size(); ++t)
    if (present[t]) dense[t] = next++;
  for (std::size_t i = 0; i < raw.size(); ++i) f.colour[i] = dense[raw[i]];
  f.k = next;
  return f;
}

namespace detail {

inline std::uint64_t fnv_hash(const std::uint64_t* data, std::size_t len) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= data[i];
    h *= 0x100000001b3ULL;
    h ^= h >> 29;
  }
  return h;
}

}  // namespace detail

// Stable colouring of the 2-dimensional refinement: the colour of (u,v) is
// refined by the multiset of (f(u,w), f(w,v)) over intermediate vertices w,
// iterated until the pair partition stops changing. Per-round signatures are
// run-length encoded; distinct signatures per class are kept in an arena with
// exact comparison (hashing only buckets, it never decides equality).
inline PairColouring wl2_stable(const Graph& g, PairColouring f,
                                std::size_t arena_budget_entries = 250'000'000) {
  const std::uint32_t n = g.n();
  if (f.n != n || f.colour.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("wl2_stable: pair colouring size mismatch");
  if (n > kWl2MaxN) throw CapExceededError("2-WL supports at most 4096 vertices");
  if (n == 0) return f;
  constexpr unsigned kCountBits = 13;
  const std::size_t np = static_cast<std::size_t>(n) * n;

  std::vector<std::uint32_t> transpose(np);
  std::vector<std::uint32_t> order(np), class_start;
  std::vector<std::uint64_t> scratch(n), sig;
  std::vector<std::uint64_t> arena;
  std::vector<std::pair<std::size_t, std::size_t>> spans;  // per group rep
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets;
  std::vector<std::uint32_t> group_of;       // per member index within class
  std::vector<std::uint32_t> new_colour(np);

  for (;;) {
    const std::uint32_t k = f.k;
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = 0; v < n; ++v)
        transpose[static_cast<std::size_t>(v) * n + u] = f.colour[static_cast<std::size_t>(u) * n + v];

    // Bucket pair indices by current colour.
    class_start.assign(k + 1, 0);
    for (std::size_t p = 0; p < np; ++p) ++class_start[f.colour[p] + 1];
    for (std::uint32_t i = 1; i <= k; ++i) class_start[i] += class_start[i - 1];
    {
      std::vector<std::uint32_t> fill(class_start.begin(), class_start.end() - 1);
      for (std::size_t p = 0; p < np; ++p) order[fill[f.colour[p]]++] = static_cast<std::uint32_t>(p);
    }

    std::uint32_t next_id = 0;
    for (std::uint32_t cls = 0; cls < k; ++cls) {
      std::uint32_t lo = class_start[cls], hi = class_start[cls + 1];
      if (hi - lo == 1) {
        new_colour[order[lo]] = next_id++;
        continue;
      }
      arena.clear();
      spans.clear();
      buckets.clear();
      group_of.assign(hi - lo, 0);
      for (std::uint32_t t = lo; t < hi; ++t) {
        std::uint32_t p = order[t];
        Vertex u = p / n, v = p % n;
        const std::uint32_t* fu = f.colour.data() + static_cast<std::size_t>(u) * n;
        const std::uint32_t* ftv = transpose.data() + static_cast<std::size_t>(v) * n;
        for (Vertex w = 0; w < n; ++w)
          scratch[w] = static_cast<std::uint64_t>(fu[w]) * k + ftv[w];
        std::sort(scratch.begin(), scratch.end());
        sig.clear();
        for (std::uint32_t i = 0; i < n;) {
          std::uint32_t j = i;
          while (j < n && scratch[j] == scratch[i]) ++j;
          sig.push_back((scratch[i] << kCountBits) | (j - i));
          i = j;
        }
        std::uint64_t h = detail::fnv_hash(sig.data(), sig.size());
        auto& cands = buckets[h];
        std::uint32_t gid = kUnreachable;
        for (std::uint32_t cand : cands) {
          auto [b, e] = spans[cand];
          if (e - b == sig.size() && std::equal(sig.begin(), sig.end(), arena.begin() + b)) {
            gid = cand;
            break;
          }
        }
        if (gid == kUnreachable) {
          if (arena.size() + sig.size() > arena_budget_entries)
            throw BudgetExceededError("wl2_stable: signature arena budget exceeded");
          gid = static_cast<std::uint32_t>(spans.size());
          spans.emplace_back(arena.size(), arena.size() + sig.size());
          arena.insert(arena.end(), sig.begin(), sig.end());
          cands.push_back(gid);
        }
        group_of[t - lo] = gid;
      }
      // Canonical order of the groups within this class.
      std::vector<std::uint32_t> gorder(spans.size());
      for (std::uint32_t i = 0; i < gorder.size(); ++i) gorder[i] = i;
      std::sort(gorder.begin(), gorder.end(), [&](std::uint32_t a, std::uint32_t b) {
        return detail::rle_compare<kCountBits>(arena.data() + spans[a].first,
                                               spans[a].second - spans[a].first,
                                               arena.data() + spans[b].first,
                                               spans[b].second - spans[b].first) < 0;
      });
      std::vector<std::uint32_t> rank(spans.size());
      for (std::uint32_t i = 0; i < gorder.size(); ++i) rank[gorder[i]] = next_id + i;
      for (std::uint32_t t = lo; t < hi; ++t) new_colour[order[t]] = rank[group_of[t - lo]];
      next_id += static_cast<std::uint32_t>(spans.size());
    }
    if (next_id == k) break;
    f.colour.swap(new_colour);
    f.k = next_id;
  }
  return f;
}

// Vertex projection: v coloured by the diagonal pair colour, re-encoded
// densely (order preserved, so canonicity carries over).
inline Colouring vertex_projection(const PairColouring& f) {
  std::vector<std::uint32_t> diag(f.n);
  for (Vertex v = 0; v < f.n; ++v) diag[v] = f.at(v, v);
  return normalise_colouring(diag);
}

// V* phi_{G,c}: the vertex colouring extracted from the stable 2-dimensional
// refinement of the augmented initial pair colouring.
inline Colouring wl2_vertex_colouring(const Graph& g, const Colouring& c) {
  return vertex_projection(wl2_stable(g, init_pair_colouring(g, c)));
}

inline Colouring wl2_vertex_colouring(const Graph& g) {
  return wl2_vertex_colouring(g, trivial_colouring(g.n()));
}

}  // namespace wlcanon
