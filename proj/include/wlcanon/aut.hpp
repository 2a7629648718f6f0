#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wlcanon/canon.hpp"
#include "wlcanon/cores.hpp"
#include "wlcanon/graph.hpp"
#include "wlcanon/refine.hpp"

namespace wlcanon {

struct AutomorphismReport {
  std::vector<std::vector<Vertex>> automorphisms;  // vertex -> image
  bool full_enumeration = false;
  // Detected exception configurations from the 2-core.
  std::vector<std::vector<Vertex>> cycle_components;
  std::vector<std::pair<std::size_t, std::size_t>> equal_length_cycle_pairs;
  std::vector<BarePath> bare_paths;
  std::vector<std::vector<std::size_t>> parallel_path_groups;  // >=2 paths, same endpoints
  std::vector<std::size_t> closed_path_indices;
};

namespace detail {

inline void fill_exception_configs(AutomorphismReport& rep, const CoreDecomposition& dec) {
  rep.cycle_components = dec.cycle_components;
  for (std::size_t a = 0; a < dec.cycle_components.size(); ++a)
    for (std::size_t b = a + 1; b < dec.cycle_components.size(); ++b)
      if (dec.cycle_components[a].size() == dec.cycle_components[b].size())
        rep.equal_length_cycle_pairs.emplace_back(a, b);
  rep.bare_paths = dec.bare_paths;
  std::map<std::pair<Vertex, Vertex>, std::vector<std::size_t>> by_endpoints;
  for (std::size_t i = 0; i < dec.bare_paths.size(); ++i) {
    const auto& p = dec.bare_paths[i].vertices;
    Vertex a = p.front(), b = p.back();
    by_endpoints[{std::min(a, b), std::max(a, b)}].push_back(i);
    if (dec.bare_paths[i].closed()) rep.closed_path_indices.push_back(i);
  }
  for (auto& [ep, ids] : by_endpoints)
    if (ids.size() >= 2) rep.parallel_path_groups.push_back(ids);
}

}  // namespace detail

inline constexpr std::uint32_t kBruteAutMaxN = 14;

// Exact automorphism list by backtracking over colour-respecting images with
// adjacency-mask consistency checks. Every map is re-verified edge-by-edge.
inline AutomorphismReport brute_aut(const Graph& g, std::size_t list_cap = 1u << 20) {
  const std::uint32_t n = g.n();
  if (n > kBruteAutMaxN) throw CapExceededError("brute_aut: n exceeds 14");
  AutomorphismReport rep;
  rep.full_enumeration = true;
  detail::fill_exception_configs(rep, decompose(g, false));
  if (n == 0) {
    rep.automorphisms.push_back({});
    return rep;
  }

  Colouring c = stable_colouring(g);
  std::vector<std::uint32_t> adjmask(n, 0);
  for (Vertex v = 0; v < n; ++v)
    for (Vertex w : g.neighbours(v)) adjmask[v] |= 1u << w;

  std::vector<Vertex> img(n);
  std::uint32_t used = 0;

  auto rec = [&](auto&& self, std::uint32_t t) -> void {
    if (t == n) {
      rep.automorphisms.push_back(img);
      if (rep.automorphisms.size() > list_cap)
        throw BudgetExceededError("brute_aut: automorphism list cap exceeded");
      return;
    }
    std::uint32_t needed_src = adjmask[t] & ((t == 0) ? 0 : ((1u << t) - 1));
    std::uint32_t needed = 0;
    for (std::uint32_t s = 0; s < t; ++s)
      if ((needed_src >> s) & 1u) needed |= 1u << img[s];
    for (Vertex w = 0; w < n; ++w) {
      if ((used >> w) & 1u) continue;
      if (c.colour[w] != c.colour[t]) continue;
      if ((adjmask[w] & used) != needed) continue;
      img[t] = w;
      used |= 1u << w;
      self(self, t + 1);
      used &= ~(1u << w);
    }
  };
  rec(rec, 0);
  for (const auto& a : rep.automorphisms)
    if (!is_isomorphism(g, g, a)) throw std::logic_error("brute_aut: unverified map");
  return rep;
}

// ---------------------------------------------------------------------------
// Checking the automorphism characterisation: every automorphism acts on the
// 2-core as a composition of cycle-component symmetries, equal-length
// cycle-component swaps, exchanges of parallel bare paths, and flips of
// closed bare paths, and fixes the remaining 2-core vertices.
// ---------------------------------------------------------------------------

struct CharacterisationResult {
  bool ok = true;
  std::vector<std::string> violations;
  std::vector<std::string> classifications;  // one per automorphism
};

inline CharacterisationResult check_aut_characterisation(const Graph& g,
                                                         const AutomorphismReport& rep) {
  CharacterisationResult res;
  CoreDecomposition dec = decompose(g, false);
  std::vector<bool> is_v23(g.n(), false);
  for (Vertex v : dec.v23) is_v23[v] = true;

  std::map<std::vector<Vertex>, std::size_t> cycle_lookup;
  for (std::size_t i = 0; i < dec.cycle_components.size(); ++i) {
    auto key = dec.cycle_components[i];
    std::sort(key.begin(), key.end());
    cycle_lookup[key] = i;
  }
  std::map<std::pair<Vertex, Vertex>, std::vector<std::size_t>> path_groups;
  for (std::size_t i = 0; i < dec.bare_paths.size(); ++i) {
    Vertex a = dec.bare_paths[i].vertices.front(), b = dec.bare_paths[i].vertices.back();
    path_groups[{std::min(a, b), std::max(a, b)}].push_back(i);
  }

  for (std::size_t ai = 0; ai < rep.automorphisms.size(); ++ai) {
    const auto& phi = rep.automorphisms[ai];
    std::vector<std::string> used_exceptions;
    auto violate = [&](const std::string& why) {
      res.ok = false;
      res.violations.push_back("automorphism #" + std::to_string(ai) + ": " + why);
    };
    if (!is_isomorphism(g, g, phi)) {
      violate("not an automorphism");
      res.classifications.push_back("invalid");
      continue;
    }
    for (Vertex v : dec.v23)
      if (phi[v] != v) violate("moves V23 vertex " + std::to_string(v));
    bool moved_cycle = false;
    for (std::size_t ci = 0; ci < dec.cycle_components.size(); ++ci) {
      std::vector<Vertex> img;
      for (Vertex v : dec.cycle_components[ci]) img.push_back(phi[v]);
      std::sort(img.begin(), img.end());
      auto it = cycle_lookup.find(img);
      if (it == cycle_lookup.end()) {
        violate("cycle component image is not a cycle component");
        continue;
      }
      if (it->second == ci) {
        bool moved = false;
        for (Vertex v : dec.cycle_components[ci])
          if (phi[v] != v) {
            moved = true;
            break;
          }
        if (moved) {
          used_exceptions.push_back("cycle-symmetry");
          moved_cycle = true;
        }
      } else {
        if (dec.cycle_components[it->second].size() != dec.cycle_components[ci].size())
          violate("cycle component mapped to different-length cycle");
        used_exceptions.push_back("cycle-swap");
        moved_cycle = true;
      }
    }
    (void)moved_cycle;
    for (std::size_t pi = 0; pi < dec.bare_paths.size(); ++pi) {
      const auto& path = dec.bare_paths[pi].vertices;
      std::vector<Vertex> img;
      for (Vertex v : path) img.push_back(phi[v]);
      Vertex a = path.front(), b = path.back();
      const auto& group = path_groups[{std::min(a, b), std::max(a, b)}];
      bool matched = false;
      for (std::size_t qi : group) {
        const auto& cand = dec.bare_paths[qi].vertices;
        if (cand.size() != img.size()) continue;
        if (std::equal(img.begin(), img.end(), cand.begin())) {
          matched = true;
          if (qi != pi) used_exceptions.push_back("parallel-exchange");
          break;
        }
        if (std::equal(img.begin(), img.end(), cand.rbegin())) {
          if (qi != pi) {
            // Mapped onto another path that is stored in the opposite
            // orientation: an ordinary exchange.
            matched = true;
            used_exceptions.push_back("parallel-exchange");
            break;
          }
          if (dec.bare_paths[pi].closed()) {
            matched = true;
            used_exceptions.push_back("closed-flip");
            break;
          }
          // Reversing an open path swaps its endpoints; the fixed-V23 check
          // already flags that, so keep this as a violation too.
        }
      }
      if (!matched)
        violate("bare path " + std::to_string(pi) +
                " not mapped to a bare path with the same endpoints");
    }
    std::sort(used_exceptions.begin(), used_exceptions.end());
    used_exceptions.erase(std::unique(used_exceptions.begin(), used_exceptions.end()),
                          used_exceptions.end());
    if (used_exceptions.empty()) {
      res.classifications.push_back("identity on core2");
    } else {
      std::string s;
      for (const auto& e : used_exceptions) s += (s.empty() ? "" : "+") + e;
      res.classifications.push_back(s);
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Constructing automorphisms from detected exception configurations (used at
// scales where brute force is impossible). Every emitted map is verified.
// ---------------------------------------------------------------------------

namespace detail {

struct PendantForest {
  std::vector<std::vector<Vertex>> children;  // pendant children only
  std::vector<std::uint32_t> code;            // rooted-subtree code incl. pendant trees
};

inline PendantForest pendant_forest(const Graph& g, const std::vector<std::uint32_t>& core) {
  PendantForest pf;
  pf.children.assign(g.n(), {});
  std::vector<bool> seen(g.n(), false);
  std::vector<Vertex> queue;
  for (Vertex v = 0; v < g.n(); ++v)
    if (core[v] >= 2) {
      seen[v] = true;
      queue.push_back(v);
    }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Vertex v = queue[head];
    for (Vertex w : g.neighbours(v)) {
      if (seen[w]) continue;
      seen[w] = true;
      pf.children[v].push_back(w);
      queue.push_back(w);
    }
  }
  // Tree components (no 2-core vertex) are rooted arbitrarily; they play no
  // role in the core exceptions.
  for (Vertex v = 0; v < g.n(); ++v) {
    if (seen[v]) continue;
    seen[v] = true;
    queue.clear();
    queue.push_back(v);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Vertex x = queue[head];
      for (Vertex w : g.neighbours(x))
        if (!seen[w]) {
          seen[w] = true;
          pf.children[x].push_back(w);
          queue.push_back(w);
        }
    }
  }
  pf.code = rooted_forest_codes(pf.children);
  return pf;
}

// Extend phi with an isomorphism of the pendant subtree of x onto that of y
// (codes must be equal). Children with equal codes are paired off in id order.
inline void map_pendant_tree(const PendantForest& pf, Vertex x, Vertex y,
                             std::vector<Vertex>& phi) {
  phi[x] = y;
  auto kx = pf.children[x];
  auto ky = pf.children[y];
  auto by_code = [&](Vertex a, Vertex b) {
    return pf.code[a] != pf.code[b] ? pf.code[a] < pf.code[b] : a < b;
  };
  std::sort(kx.begin(), kx.end(), by_code);
  std::sort(ky.begin(), ky.end(), by_code);
  for (std::size_t i = 0; i < kx.size(); ++i) map_pendant_tree(pf, kx[i], ky[i], phi);
}

}  // namespace detail

// Build candidate automorphisms realising the Thm-style exception catalogue:
// parallel bare-path exchanges, closed bare-path flips, cycle-component
// symmetries and equal-length cycle-component swaps. Only maps that verify as
// genuine automorphisms are returned.
inline std::vector<std::vector<Vertex>> exception_automorphisms(const Graph& g,
                                                                std::size_t max_out = 200) {
  CoreDecomposition dec = decompose(g, false);
  detail::PendantForest pf = detail::pendant_forest(g, dec.coreness);
  std::vector<std::vector<Vertex>> out;
  std::vector<Vertex> identity(g.n());
  for (Vertex v = 0; v < g.n(); ++v) identity[v] = v;

  auto emit = [&](std::vector<Vertex> phi) {
    if (out.size() >= max_out) return;
    if (is_isomorphism(g, g, phi)) out.push_back(std::move(phi));
  };

  // Parallel bare paths with matching interiors (pendant profiles included).
  std::map<std::pair<Vertex, Vertex>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < dec.bare_paths.size(); ++i) {
    Vertex a = dec.bare_paths[i].vertices.front(), b = dec.bare_paths[i].vertices.back();
    groups[{std::min(a, b), std::max(a, b)}].push_back(i);
  }
  for (const auto& [ep, ids] : groups) {
    for (std::size_t x = 0; x < ids.size(); ++x) {
      for (std::size_t y = x + 1; y < ids.size(); ++y) {
        if (out.size() >= max_out) break;
        const auto& p = dec.bare_paths[ids[x]];
        const auto& q = dec.bare_paths[ids[y]];
        if (p.vertices.size() != q.vertices.size()) continue;
        // Orient both from the smaller endpoint.
        auto pa = p.vertices, qa = q.vertices;
        if (pa.front() != ep.first) std::reverse(pa.begin(), pa.end());
        if (qa.front() != ep.first) std::reverse(qa.begin(), qa.end());
        auto try_swap = [&](const std::vector<Vertex>& s, const std::vector<Vertex>& t) {
          for (std::size_t i = 1; i + 1 < s.size(); ++i)
            if (pf.code[s[i]] != pf.code[t[i]]) return;
          std::vector<Vertex> phi = identity;
          for (std::size_t i = 1; i + 1 < s.size(); ++i) {
            detail::map_pendant_tree(pf, s[i], t[i], phi);
            detail::map_pendant_tree(pf, t[i], s[i], phi);
          }
          emit(std::move(phi));
        };
        try_swap(pa, qa);
        if (p.closed()) {
          auto qr = qa;
          std::reverse(qr.begin(), qr.end());
          try_swap(pa, qr);
        }
      }
    }
  }

  // Closed bare path flips (palindromic pendant profiles).
  for (std::size_t i : [&] {
         std::vector<std::size_t> closed;
         for (std::size_t j = 0; j < dec.bare_paths.size(); ++j)
           if (dec.bare_paths[j].closed()) closed.push_back(j);
         return closed;
       }()) {
    const auto& p = dec.bare_paths[i].vertices;
    std::size_t k = p.size() - 2;  // interior count
    bool palindrome = true;
    for (std::size_t t = 1; t <= k; ++t)
      if (pf.code[p[t]] != pf.code[p[k + 1 - t]]) {
        palindrome = false;
        break;
      }
    if (!palindrome || k < 2) continue;
    std::vector<Vertex> phi = identity;
    for (std::size_t t = 1; t <= k; ++t) detail::map_pendant_tree(pf, p[t], p[k + 1 - t], phi);
    emit(std::move(phi));
  }

  // Cycle component symmetries: first valid nontrivial rotation and first
  // valid reflection.
  auto cycle_codes = [&](const std::vector<Vertex>& cyc) {
    std::vector<std::uint32_t> seq(cyc.size());
    for (std::size_t i = 0; i < cyc.size(); ++i) seq[i] = pf.code[cyc[i]];
    return seq;
  };
  for (const auto& cyc : dec.cycle_components) {
    const std::size_t len = cyc.size();
    auto seq = cycle_codes(cyc);
    for (std::size_t r = 1; r < len; ++r) {
      bool valid = true;
      for (std::size_t t = 0; t < len && valid; ++t) valid = seq[t] == seq[(t + r) % len];
      if (valid) {
        std::vector<Vertex> phi = identity;
        for (std::size_t t = 0; t < len; ++t)
          detail::map_pendant_tree(pf, cyc[t], cyc[(t + r) % len], phi);
        emit(std::move(phi));
        break;
      }
    }
    for (std::size_t s = 0; s < len; ++s) {
      bool valid = true;
      for (std::size_t t = 0; t < len && valid; ++t)
        valid = seq[t] == seq[(s + len - t) % len];
      if (valid) {
        std::vector<Vertex> phi = identity;
        for (std::size_t t = 0; t < len; ++t)
          detail::map_pendant_tree(pf, cyc[t], cyc[(s + len - t) % len], phi);
        emit(std::move(phi));
        break;
      }
    }
  }

  // Equal-length cycle component swaps (first valid alignment per pair).
  for (std::size_t a = 0; a < dec.cycle_components.size(); ++a) {
    for (std::size_t b = a + 1; b < dec.cycle_components.size(); ++b) {
      const auto& ca = dec.cycle_components[a];
      const auto& cb = dec.cycle_components[b];
      if (ca.size() != cb.size()) continue;
      const std::size_t len = ca.size();
      auto sa = cycle_codes(ca), sb = cycle_codes(cb);
      bool done = false;
      for (std::size_t r = 0; r < len && !done; ++r) {
        for (int dir : {1, -1}) {
          bool valid = true;
          for (std::size_t t = 0; t < len && valid; ++t) {
            std::size_t pos = (r + len + static_cast<std::size_t>((dir * static_cast<int>(t)) % static_cast<int>(len) + static_cast<int>(len))) % len;
            valid = sa[t] == sb[pos];
          }
          if (!valid) continue;
          std::vector<Vertex> phi = identity;
          for (std::size_t t = 0; t < len; ++t) {
            std::size_t pos = (r + len + static_cast<std::size_t>((dir * static_cast<int>(t)) % static_cast<int>(len) + static_cast<int>(len))) % len;
            detail::map_pendant_tree(pf, ca[t], cb[pos], phi);
            detail::map_pendant_tree(pf, cb[pos], ca[t], phi);
          }
          emit(std::move(phi));
          done = true;
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace wlcanon
