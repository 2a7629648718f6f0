#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wlcanon/graph.hpp"
#include "wlcanon/refine.hpp"

namespace wlcanon {

// Canonical code of the truncated walk tree rooted at a vertex. class_id is
// an exact canonical code: two ViewHashes computed over the same graph at the
// same depth have equal class_id iff the truncated views are isomorphic as
// rooted trees. digest is a structural fingerprint usable across graphs.
struct ViewHash {
  std::uint32_t depth = 0;
  std::uint64_t class_id = 0;
  std::uint64_t digest = 0;

  friend bool operator==(const ViewHash& a, const ViewHash& b) {
    return a.depth == b.depth && a.class_id == b.class_id;
  }
  friend bool operator!=(const ViewHash& a, const ViewHash& b) { return !(a == b); }
};

namespace detail {

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h * 0xff51afd7ed558ccdULL;
}

}  // namespace detail

// Codes for all vertices at the given depth, one level-by-level pass: the
// code of a node is the canonical id of the sorted multiset of child codes,
// so all n hashes cost one pass per level. Throws BudgetExceededError when
// some truncated walk tree would exceed node_cap nodes.
inline std::vector<ViewHash> view_hashes(const Graph& g, std::uint32_t depth,
                                         std::uint64_t node_cap = 10'000'000) {
  const std::uint32_t n = g.n();
  // Walk-tree sizes, saturating at node_cap + 1.
  std::vector<std::uint64_t> size(n, 1), prev_size;
  for (std::uint32_t d = 1; d <= depth; ++d) {
    prev_size = size;
    for (Vertex v = 0; v < n; ++v) {
      std::uint64_t s = 1;
      for (Vertex w : g.neighbours(v)) {
        s += prev_size[w];
        if (s > node_cap) {
          s = node_cap + 1;
          break;
        }
      }
      size[v] = s;
    }
  }
  for (Vertex v = 0; v < n; ++v)
    if (size[v] > node_cap)
      throw BudgetExceededError("view_hashes: walk tree exceeds node cap");

  std::vector<std::uint32_t> code(n, 0), prev;
  std::vector<std::uint64_t> digest(n, 0x517cc1b727220a95ULL), prev_digest;
  for (std::uint32_t d = 1; d <= depth; ++d) {
    prev = code;
    prev_digest = digest;
    // Signature of v: sorted child codes at the previous level.
    std::vector<std::vector<std::uint32_t>> sig(n);
    for (Vertex v = 0; v < n; ++v) {
      sig[v].reserve(g.degree(v));
      for (Vertex w : g.neighbours(v)) sig[v].push_back(prev[w]);
      std::sort(sig[v].begin(), sig[v].end());
    }
    std::vector<Vertex> order(n);
    for (Vertex v = 0; v < n; ++v) order[v] = v;
    std::sort(order.begin(), order.end(),
              [&](Vertex a, Vertex b) { return sig[a] < sig[b]; });
    std::uint32_t id = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (i > 0 && sig[order[i]] != sig[order[i - 1]]) ++id;
      code[order[i]] = id;
    }
    for (Vertex v = 0; v < n; ++v) {
      std::uint64_t h = 0x2545f4914f6cdd1dULL;
      std::vector<std::uint64_t> ds;
      ds.reserve(g.degree(v));
      for (Vertex w : g.neighbours(v)) ds.push_back(prev_digest[w]);
      std::sort(ds.begin(), ds.end());
      for (std::uint64_t x : ds) h = detail::hash_combine(h, x);
      digest[v] = h;
    }
  }
  std::vector<ViewHash> out(n);
  for (Vertex v = 0; v < n; ++v) out[v] = ViewHash{depth, code[v], digest[v]};
  return out;
}

inline ViewHash view_hash(const Graph& g, Vertex v, std::uint32_t depth,
                          std::uint64_t node_cap = 10'000'000) {
  if (v >= g.n()) throw std::invalid_argument("view_hash: vertex out of range");
  return view_hashes(g, depth, node_cap)[v];
}

// The multiset difference chain of two views: per level i, the multisets
// L^i(u,v) and L^i(v,u), and the sets of vertices first appearing differently
// at depth i. Multiplicities are arbitrary-precision (they can grow like
// Delta^i).
struct ViewDiff {
  Vertex u = 0, v = 0;
  std::uint32_t i_max = 0;
  std::vector<std::map<Vertex, mpz_class>> l_uv, l_vu;  // levels 0..i_max
  std::vector<std::vector<Vertex>> s_new;                // S^i, levels 0..i_max
  std::vector<std::vector<Vertex>> s_cum;                // S^{<=i}
  std::optional<std::uint32_t> first_empty_s;            // least i with S^i empty
};

inline ViewDiff view_diff(const Graph& g, Vertex u, Vertex v, std::uint32_t i_max) {
  if (u == v) throw std::invalid_argument("view_diff: u == v");
  if (u >= g.n() || v >= g.n()) throw std::invalid_argument("view_diff: vertex out of range");
  const std::uint32_t n = g.n();
  ViewDiff d;
  d.u = u;
  d.v = v;
  d.i_max = i_max;

  std::vector<mpz_class> cur_uv(n), cur_vu(n);
  cur_uv[u] = 1;
  cur_vu[v] = 1;
  std::vector<bool> seen(n, false);

  auto record_level = [&](const std::vector<mpz_class>& muv, const std::vector<mpz_class>& mvu,
                          std::uint32_t level) {
    std::map<Vertex, mpz_class> a, b;
    std::vector<Vertex> fresh;
    for (Vertex w = 0; w < n; ++w) {
      bool in_a = muv[w] > 0, in_b = mvu[w] > 0;
      if (in_a) a.emplace(w, muv[w]);
      if (in_b) b.emplace(w, mvu[w]);
      if ((in_a || in_b) && !seen[w]) {
        seen[w] = true;
        fresh.push_back(w);
      }
    }
    d.l_uv.push_back(std::move(a));
    d.l_vu.push_back(std::move(b));
    d.s_new.push_back(std::move(fresh));
    std::vector<Vertex> cum = d.s_cum.empty() ? std::vector<Vertex>{} : d.s_cum.back();
    cum.insert(cum.end(), d.s_new.back().begin(), d.s_new.back().end());
    std::sort(cum.begin(), cum.end());
    d.s_cum.push_back(std::move(cum));
    if (!d.first_empty_s && d.s_new.back().empty()) d.first_empty_s = level;
  };

  record_level(cur_uv, cur_vu, 0);
  std::vector<mpz_class> ell_uv(n), ell_vu(n);
  for (std::uint32_t i = 1; i <= i_max; ++i) {
    for (Vertex w = 0; w < n; ++w) {
      ell_uv[w] = 0;
      ell_vu[w] = 0;
      for (Vertex x : g.neighbours(w)) {
        ell_uv[w] += cur_uv[x];
        ell_vu[w] += cur_vu[x];
      }
    }
    for (Vertex w = 0; w < n; ++w) {
      if (ell_uv[w] > ell_vu[w]) {
        cur_uv[w] = ell_uv[w] - ell_vu[w];
        cur_vu[w] = 0;
      } else if (ell_vu[w] > ell_uv[w]) {
        cur_vu[w] = ell_vu[w] - ell_uv[w];
        cur_uv[w] = 0;
      } else {
        cur_uv[w] = 0;
        cur_vu[w] = 0;
      }
    }
    record_level(cur_uv, cur_vu, i);
  }
  return d;
}

// First (i, d) at which the numbers of degree-d copies in L^i(u,v) and
// L^i(v,u) disagree; the contract is that stable colours of u,v then differ.
inline std::optional<std::pair<std::uint32_t, std::uint32_t>> degree_discrepancy(
    const Graph& g, const ViewDiff& diff) {
  for (std::uint32_t i = 0; i < diff.l_uv.size(); ++i) {
    std::map<std::uint32_t, mpz_class> per_degree;
    for (const auto& [w, mult] : diff.l_uv[i]) per_degree[g.degree(w)] += mult;
    for (const auto& [w, mult] : diff.l_vu[i]) per_degree[g.degree(w)] -= mult;
    for (const auto& [deg, delta] : per_degree)
      if (delta != 0) return std::make_pair(i, deg);
  }
  return std::nullopt;
}

}  // namespace wlcanon
