#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wlcanon/graph.hpp"

namespace wlcanon {

// Vertex colouring with dense canonical ids 0..k-1. Ids are canonical in the
// sense that they are assigned by sorting the signature chain that produced
// them, so relabelling the graph by an isomorphism yields the identical id
// assignment (up to the vertex permutation).
struct Colouring {
  std::vector<std::uint32_t> colour;  // per-vertex id in [0,k)
  std::uint32_t k = 0;
  std::vector<std::uint32_t> class_sizes;

  std::uint32_t n() const { return static_cast<std::uint32_t>(colour.size()); }
  bool discrete() const { return k == n(); }
};

// The trivial colouring sigma: every vertex the same colour.
inline Colouring trivial_colouring(std::uint32_t n) {
  Colouring c;
  c.colour.assign(n, 0);
  c.k = n > 0 ? 1 : 0;
  if (n > 0) c.class_sizes.assign(1, n);
  return c;
}

inline Colouring discrete_colouring(std::uint32_t n) {
  Colouring c;
  c.colour.resize(n);
  for (std::uint32_t v = 0; v < n; ++v) c.colour[v] = v;
  c.k = n;
  c.class_sizes.assign(n, 1);
  return c;
}

// Re-encode an arbitrary id assignment densely, preserving the relative order
// of the ids that occur. Canonical whenever the input ids are.
inline Colouring normalise_colouring(const std::vector<std::uint32_t>& raw) {
  Colouring c;
  c.colour.resize(raw.size());
  std::vector<std::uint32_t> ids(raw);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  c.k = static_cast<std::uint32_t>(ids.size());
  c.class_sizes.assign(c.k, 0);
  for (std::size_t v = 0; v < raw.size(); ++v) {
    std::uint32_t id = static_cast<std::uint32_t>(
        std::lower_bound(ids.begin(), ids.end(), raw[v]) - ids.begin());
    c.colour[v] = id;
    ++c.class_sizes[id];
  }
  return c;
}

struct RefinementTrace {
  std::uint32_t rounds = 0;                 // steps until the partition stopped changing
  std::vector<std::uint32_t> class_counts;  // k before round 1, then after each refining round
};

namespace detail {

// Signatures are run-length-encoded multisets, each entry packing
// (value << count_bits) | count. Comparison follows the lexicographic order
// of the *expanded* multiset (values ascending, prefix-is-smaller rule).
template <unsigned CountBits>
inline int rle_compare(const std::uint64_t* a, std::size_t na, const std::uint64_t* b,
                       std::size_t nb) {
  constexpr std::uint64_t mask = (1ULL << CountBits) - 1;
  std::size_t i = 0, j = 0;
  while (i < na && j < nb) {
    std::uint64_t va = a[i] >> CountBits, vb = b[j] >> CountBits;
    if (va != vb) return va < vb ? -1 : 1;
    std::uint64_t ca = a[i] & mask, cb = b[j] & mask;
    if (ca != cb) {
      // The stream with the smaller run either ends (it is a prefix, hence
      // smaller) or continues with a strictly larger value (hence larger).
      bool a_shorter = ca < cb;
      std::size_t next = a_shorter ? i + 1 : j + 1;
      std::size_t len = a_shorter ? na : nb;
      if (next >= len) return a_shorter ? -1 : 1;
      return a_shorter ? 1 : -1;
    }
    ++i;
    ++j;
  }
  if (i < na) return 1;
  if (j < nb) return -1;
  return 0;
}

}  // namespace detail

// One refinement step: partition vertices by (colour, multiset of neighbour
// colours) and re-encode canonically, sorting distinct signatures
// lexicographically. The output refines the input.
inline Colouring refine_step(const Graph& g, const Colouring& c) {
  const std::uint32_t n = g.n();
  if (c.colour.size() != n) throw std::invalid_argument("refine_step: colouring size mismatch");
  constexpr unsigned kCountBits = 20;
  if (n >= (1u << kCountBits)) throw CapExceededError("refine_step: n too large");

  // Bucket vertices by current colour.
  std::vector<std::uint32_t> start(c.k + 1, 0);
  for (Vertex v = 0; v < n; ++v) ++start[c.colour[v] + 1];
  for (std::uint32_t i = 1; i <= c.k; ++i) start[i] += start[i - 1];
  std::vector<Vertex> order(n);
  {
    std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
    for (Vertex v = 0; v < n; ++v) order[fill[c.colour[v]]++] = v;
  }

  Colouring out;
  out.colour.resize(n);
  std::uint32_t next_id = 0;

  std::vector<std::uint64_t> arena;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> sig_span;  // per member: [begin,end) in arena
  std::vector<std::uint32_t> members;
  std::vector<std::uint32_t> cnt(c.k, 0);
  std::vector<std::uint32_t> touched;

  for (std::uint32_t cls = 0; cls < c.k; ++cls) {
    std::uint32_t lo = start[cls], hi = start[cls + 1];
    if (hi - lo == 1) {  // singleton classes can never split
      out.colour[order[lo]] = next_id++;
      out.class_sizes.push_back(1);
      continue;
    }
    arena.clear();
    sig_span.clear();
    members.assign(order.begin() + lo, order.begin() + hi);
    for (Vertex v : members) {
      std::uint32_t begin = static_cast<std::uint32_t>(arena.size());
      for (Vertex w : g.neighbours(v)) {
        std::uint32_t col = c.colour[w];
        if (cnt[col]++ == 0) touched.push_back(col);
      }
      std::sort(touched.begin(), touched.end());
      for (std::uint32_t col : touched) {
        arena.push_back((static_cast<std::uint64_t>(col) << kCountBits) | cnt[col]);
        cnt[col] = 0;
      }
      touched.clear();
      sig_span.emplace_back(begin, static_cast<std::uint32_t>(arena.size()));
    }
    std::vector<std::uint32_t> idx(members.size());
    for (std::uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
      int r = detail::rle_compare<kCountBits>(arena.data() + sig_span[a].first,
                                              sig_span[a].second - sig_span[a].first,
                                              arena.data() + sig_span[b].first,
                                              sig_span[b].second - sig_span[b].first);
      if (r != 0) return r < 0;
      return members[a] < members[b];
    });
    std::uint32_t group_size = 0;
    for (std::uint32_t i = 0; i < idx.size(); ++i) {
      if (i > 0) {
        int r = detail::rle_compare<kCountBits>(
            arena.data() + sig_span[idx[i - 1]].first,
            sig_span[idx[i - 1]].second - sig_span[idx[i - 1]].first,
            arena.data() + sig_span[idx[i]].first,
            sig_span[idx[i]].second - sig_span[idx[i]].first);
        if (r != 0) {
          out.class_sizes.push_back(group_size);
          group_size = 0;
          ++next_id;
        }
      }
      out.colour[members[idx[i]]] = next_id;
      ++group_size;
    }
    out.class_sizes.push_back(group_size);
    ++next_id;
  }
  out.k = next_id;
  return out;
}

// Iterate refine_step until the partition is unchanged (the step refines, so
// the partition is stable exactly when the class count stops growing).
inline std::pair<Colouring, RefinementTrace> stable(const Graph& g, const Colouring& c0) {
  RefinementTrace trace;
  Colouring cur = c0;
  trace.class_counts.push_back(cur.k);
  for (;;) {
    Colouring next = refine_step(g, cur);
    if (next.k == cur.k) break;
    cur = std::move(next);
    trace.class_counts.push_back(cur.k);
    ++trace.rounds;
  }
  return {std::move(cur), std::move(trace)};
}

inline Colouring stable_colouring(const Graph& g) { return stable(g, trivial_colouring(g.n())).first; }

// True iff between every ordered pair of classes (A,B), every vertex of A has
// the same number of neighbours in B. Equivalent to refine_step not splitting.
inline bool is_equitable(const Graph& g, const Colouring& c) {
  if (c.colour.size() != g.n()) return false;
  return refine_step(g, c).k == c.k;
}

// True iff every class of `fine` lies inside a class of `coarse`.
inline bool is_refinement(const Colouring& fine, const Colouring& coarse) {
  if (fine.colour.size() != coarse.colour.size())
    throw std::invalid_argument("is_refinement: size mismatch");
  std::vector<std::uint32_t> image(fine.k, kUnreachable);
  for (std::size_t v = 0; v < fine.colour.size(); ++v) {
    std::uint32_t f = fine.colour[v];
    if (image[f] == kUnreachable)
      image[f] = coarse.colour[v];
    else if (image[f] != coarse.colour[v])
      return false;
  }
  return true;
}

inline bool same_partition(const Colouring& a, const Colouring& b) {
  return is_refinement(a, b) && is_refinement(b, a);
}

}  // namespace wlcanon
