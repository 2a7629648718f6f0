#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wlcanon/cores.hpp"
#include "wlcanon/disparity.hpp"
#include "wlcanon/graph.hpp"
#include "wlcanon/refine.hpp"
#include "wlcanon/wl2.hpp"

namespace wlcanon {

// A canonical labelling: `order[pos]` is the original vertex placed at
// canonical position pos, and `certificate` encodes the relabelled adjacency
// matrix (4-byte big-endian n, then the upper triangle row-major,
// byte-packed). Equal certificates mean equal relabelled graphs.
struct CanonicalLabelling {
  std::vector<Vertex> order;
  std::vector<std::uint8_t> certificate;
  std::string scheme;
};

inline std::vector<std::uint8_t> make_certificate(const Graph& g,
                                                  const std::vector<Vertex>& order) {
  const std::uint32_t n = g.n();
  std::vector<std::uint8_t> cert;
  cert.reserve(4 + (static_cast<std::size_t>(n) * (n - 1) / 2 + 7) / 8);
  for (int s = 24; s >= 0; s -= 8) cert.push_back(static_cast<std::uint8_t>((n >> s) & 0xff));
  std::uint8_t acc = 0;
  int bits = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      acc = static_cast<std::uint8_t>((acc << 1) | (g.has_edge(order[i], order[j]) ? 1 : 0));
      if (++bits == 8) {
        cert.push_back(acc);
        acc = 0;
        bits = 0;
      }
    }
  }
  if (bits > 0) cert.push_back(static_cast<std::uint8_t>(acc << (8 - bits)));
  return cert;
}

inline std::string certificate_hex(const std::vector<std::uint8_t>& cert) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(cert.size() * 2);
  for (std::uint8_t b : cert) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Discrete colour refinement labelling.
// ---------------------------------------------------------------------------

inline CanonicalLabelling label_discrete_cr(const Graph& g) {
  Colouring c = stable_colouring(g);
  if (!c.discrete())
    throw NotApplicableError("discrete-cr: stable colouring not discrete");
  CanonicalLabelling lab;
  lab.order.resize(g.n());
  for (Vertex v = 0; v < g.n(); ++v) lab.order[c.colour[v]] = v;
  lab.certificate = make_certificate(g, lab.order);
  lab.scheme = "discrete-cr";
  return lab;
}

// ---------------------------------------------------------------------------
// Individualisation-refinement labelling (canonical on CR-determined graphs).
// ---------------------------------------------------------------------------

inline Colouring individualise(const Colouring& c, Vertex v) {
  Colouring out = c;
  std::uint32_t old = out.colour[v];
  out.colour[v] = out.k;
  --out.class_sizes[old];
  out.class_sizes.push_back(1);
  ++out.k;
  return out;
}

// Refine to stable; while non-discrete, give one vertex of the
// canonically-least non-singleton class a unique colour and re-refine.
inline CanonicalLabelling label_ir(const Graph& g) {
  Colouring c = stable_colouring(g);
  while (!c.discrete()) {
    std::uint32_t cls = 0;
    while (c.class_sizes[cls] < 2) ++cls;
    Vertex pick = kUnreachable;
    for (Vertex v = 0; v < g.n(); ++v)
      if (c.colour[v] == cls) {
        pick = v;
        break;
      }
    c = stable(g, individualise(c, pick)).first;
  }
  CanonicalLabelling lab;
  lab.order.resize(g.n());
  for (Vertex v = 0; v < g.n(); ++v) lab.order[c.colour[v]] = v;
  lab.certificate = make_certificate(g, lab.order);
  lab.scheme = "ir";
  return lab;
}

// ---------------------------------------------------------------------------
// Rooted-forest canonical codes (AHU style), shared by the tree labeller and
// the automorphism tooling.
// ---------------------------------------------------------------------------

namespace detail {

// `children` lists a rooted forest. Equal codes iff the rooted subtrees are
// isomorphic; the code order (height-major, then signature-lex) is invariant
// under relabelling.
inline std::vector<std::uint32_t> rooted_forest_codes(
    const std::vector<std::vector<Vertex>>& children) {
  const std::uint32_t n = static_cast<std::uint32_t>(children.size());
  std::vector<std::uint32_t> height(n, 0);
  std::vector<std::uint32_t> order(n);
  // Heights bottom-up: process vertices in an order where children precede
  // parents; a simple fixpoint over heights suffices for forests.
  {
    std::vector<std::uint32_t> indeg_done(n, 0);
    std::vector<Vertex> stack;
    std::vector<std::uint32_t> pending(n, 0);
    for (Vertex v = 0; v < n; ++v) pending[v] = static_cast<std::uint32_t>(children[v].size());
    for (Vertex v = 0; v < n; ++v)
      if (pending[v] == 0) stack.push_back(v);
    std::vector<Vertex> parent(n, kUnreachable);
    for (Vertex v = 0; v < n; ++v)
      for (Vertex w : children[v]) parent[w] = v;
    std::size_t head = 0;
    std::vector<Vertex> topo;
    while (head < stack.size()) {
      Vertex v = stack[head++];
      topo.push_back(v);
      if (parent[v] != kUnreachable) {
        Vertex p = parent[v];
        height[p] = std::max(height[p], height[v] + 1);
        if (--pending[p] == 0) stack.push_back(p);
      }
    }
    (void)indeg_done;
  }
  std::uint32_t max_h = 0;
  for (Vertex v = 0; v < n; ++v) max_h = std::max(max_h, height[v]);
  std::vector<std::uint32_t> code(n, 0);
  std::uint32_t next_code = 0;
  std::vector<Vertex> level;
  for (std::uint32_t h = 0; h <= max_h; ++h) {
    level.clear();
    for (Vertex v = 0; v < n; ++v)
      if (height[v] == h) level.push_back(v);
    std::vector<std::vector<std::uint32_t>> sig(level.size());
    for (std::size_t i = 0; i < level.size(); ++i) {
      for (Vertex w : children[level[i]]) sig[i].push_back(code[w]);
      std::sort(sig[i].begin(), sig[i].end());
    }
    std::vector<std::size_t> idx(level.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return sig[a] < sig[b]; });
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i > 0 && sig[idx[i]] != sig[idx[i - 1]]) ++next_code;
      code[level[idx[i]]] = next_code;
    }
    if (!level.empty()) ++next_code;
  }
  return code;
}

// Preorder walk with children visited in (code, id) order. Ties are
// isomorphic subtrees, so the resulting certificate is order-independent.
inline void canonical_dfs(Vertex root, const std::vector<std::vector<Vertex>>& children,
                          const std::vector<std::uint32_t>& code, std::vector<Vertex>& out) {
  out.push_back(root);
  std::vector<Vertex> kids = children[root];
  std::sort(kids.begin(), kids.end(), [&](Vertex a, Vertex b) {
    return code[a] != code[b] ? code[a] < code[b] : a < b;
  });
  for (Vertex k : kids) canonical_dfs(k, children, code, out);
}

}  // namespace detail

// Canonical labelling for connected graphs with at most one cycle. Trees are
// AHU-labelled from the centre (or centre edge); unicyclic graphs take the
// lexicographically minimal rotation/reflection of the cycle's attached-tree
// code sequence.
inline CanonicalLabelling label_tree_unicyclic(const Graph& g) {
  const std::uint32_t n = g.n();
  if (n == 0) return {{}, make_certificate(g, {}), "tree-unicyclic"};
  if (components(g).size() != 1) throw NotApplicableError("tree-unicyclic: not connected");
  if (g.m() >= n + 1) throw NotApplicableError("tree-unicyclic: more than one cycle");

  CanonicalLabelling lab;
  lab.scheme = "tree-unicyclic";

  if (g.m() == n - 1) {
    // Tree: peel leaves to find the centre (1 or 2 vertices).
    std::vector<std::uint32_t> deg(n);
    for (Vertex v = 0; v < n; ++v) deg[v] = g.degree(v);
    std::vector<Vertex> frontier;
    std::vector<bool> removed(n, false);
    for (Vertex v = 0; v < n; ++v)
      if (deg[v] <= 1) frontier.push_back(v);
    std::uint32_t remaining = n;
    while (remaining > 2) {
      std::vector<Vertex> next;
      for (Vertex v : frontier) {
        removed[v] = true;
        --remaining;
        for (Vertex w : g.neighbours(v))
          if (!removed[w] && --deg[w] == 1) next.push_back(w);
      }
      frontier = std::move(next);
    }
    std::vector<Vertex> centres;
    for (Vertex v = 0; v < n; ++v)
      if (!removed[v]) centres.push_back(v);

    std::vector<std::vector<Vertex>> children(n);
    std::vector<bool> seen(n, false);
    std::vector<Vertex> queue;
    for (Vertex c : centres) {
      seen[c] = true;
      queue.push_back(c);
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Vertex v = queue[head];
      for (Vertex w : g.neighbours(v)) {
        if (seen[w]) continue;
        if (centres.size() == 2 && head < 2 && w == centres[1 - head]) continue;
        seen[w] = true;
        children[v].push_back(w);
        queue.push_back(w);
      }
    }
    auto code = detail::rooted_forest_codes(children);
    std::vector<Vertex> roots = centres;
    if (roots.size() == 2 &&
        (code[roots[1]] < code[roots[0]] ||
         (code[roots[1]] == code[roots[0]] && roots[1] < roots[0])))
      std::swap(roots[0], roots[1]);
    for (Vertex r : roots) detail::canonical_dfs(r, children, code, lab.order);
  } else {
    // Unicyclic: peel degree-1 vertices; what remains is the unique cycle.
    std::vector<std::uint32_t> deg(n);
    std::vector<Vertex> stack;
    std::vector<bool> off_cycle(n, false);
    for (Vertex v = 0; v < n; ++v) {
      deg[v] = g.degree(v);
      if (deg[v] == 1) stack.push_back(v);
    }
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      off_cycle[v] = true;
      for (Vertex w : g.neighbours(v))
        if (!off_cycle[w] && --deg[w] == 1) stack.push_back(w);
    }
    std::vector<Vertex> cyc_start;
    for (Vertex v = 0; v < n; ++v)
      if (!off_cycle[v]) cyc_start.push_back(v);
    // Walk the cycle from its lowest-id vertex.
    std::vector<Vertex> cyc;
    {
      Vertex s = cyc_start.front();
      cyc.push_back(s);
      Vertex prev = s, cur = kUnreachable;
      for (Vertex w : g.neighbours(s))
        if (!off_cycle[w]) {
          cur = w;
          break;
        }
      while (cur != s) {
        cyc.push_back(cur);
        for (Vertex w : g.neighbours(cur))
          if (!off_cycle[w] && w != prev) {
            prev = cur;
            cur = w;
            break;
          }
      }
    }
    const std::uint32_t len = static_cast<std::uint32_t>(cyc.size());
    // Pendant trees rooted at cycle vertices.
    std::vector<std::vector<Vertex>> children(n);
    std::vector<bool> seen(n, false);
    std::vector<Vertex> queue;
    for (Vertex v : cyc) {
      seen[v] = true;
      queue.push_back(v);
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Vertex v = queue[head];
      for (Vertex w : g.neighbours(v)) {
        if (seen[w]) continue;
        seen[w] = true;
        children[v].push_back(w);
        queue.push_back(w);
      }
    }
    auto code = detail::rooted_forest_codes(children);
    std::vector<std::uint32_t> seq(len);
    for (std::uint32_t i = 0; i < len; ++i) seq[i] = code[cyc[i]];
    std::uint32_t best_s = 0;
    int best_dir = 1;
    std::vector<std::uint32_t> best;
    for (std::uint32_t s = 0; s < len; ++s) {
      for (int dir : {1, -1}) {
        std::vector<std::uint32_t> cand(len);
        for (std::uint32_t t = 0; t < len; ++t)
          cand[t] = seq[(s + static_cast<std::uint32_t>((dir * static_cast<int>(t)) % static_cast<int>(len) + len)) % len];
        if (best.empty() || cand < best) {
          best = cand;
          best_s = s;
          best_dir = dir;
        }
      }
    }
    for (std::uint32_t t = 0; t < len; ++t) {
      std::uint32_t pos =
          (best_s + static_cast<std::uint32_t>((best_dir * static_cast<int>(t)) % static_cast<int>(len) + len)) % len;
      detail::canonical_dfs(cyc[pos], children, code, lab.order);
    }
  }
  lab.certificate = make_certificate(g, lab.order);
  return lab;
}

// ---------------------------------------------------------------------------
// Exhaustive labelling for small graphs: individualisation-refinement search
// for the minimal certificate. Exact; exponential worst case, so capped.
// ---------------------------------------------------------------------------

namespace detail {

// True when adjacency between (and inside) all colour classes is all-or-
// nothing; then any by-colour vertex order yields the same certificate.
inline bool homogeneous_quotient(const Graph& g, const Colouring& c) {
  std::vector<std::uint64_t> cnt(static_cast<std::size_t>(c.k) * c.k, 0);
  for (const auto& [u, v] : g.edges()) {
    std::uint32_t a = c.colour[u], b = c.colour[v];
    ++cnt[a * c.k + b];
    if (a != b) ++cnt[b * c.k + a];
  }
  for (std::uint32_t a = 0; a < c.k; ++a) {
    for (std::uint32_t b = a; b < c.k; ++b) {
      std::uint64_t possible =
          a == b ? static_cast<std::uint64_t>(c.class_sizes[a]) * (c.class_sizes[a] - 1) / 2
                 : static_cast<std::uint64_t>(c.class_sizes[a]) * c.class_sizes[b];
      std::uint64_t have = cnt[a * c.k + b];
      if (have != 0 && have != possible) return false;
    }
  }
  return true;
}

inline void exhaustive_search(const Graph& g, const Colouring& c,
                              std::vector<std::uint8_t>& best_cert,
                              std::vector<Vertex>& best_order) {
  if (homogeneous_quotient(g, c)) {
    std::vector<Vertex> order(g.n());
    for (Vertex v = 0; v < g.n(); ++v) order[v] = v;
    std::stable_sort(order.begin(), order.end(),
                     [&](Vertex a, Vertex b) { return c.colour[a] < c.colour[b]; });
    auto cert = make_certificate(g, order);
    if (best_cert.empty() || cert < best_cert) {
      best_cert = std::move(cert);
      best_order = std::move(order);
    }
    return;
  }
  // Branch on the smallest non-singleton class (ties: least colour id).
  std::uint32_t target = kUnreachable, best_size = kUnreachable;
  for (std::uint32_t cls = 0; cls < c.k; ++cls)
    if (c.class_sizes[cls] >= 2 && c.class_sizes[cls] < best_size) {
      best_size = c.class_sizes[cls];
      target = cls;
    }
  for (Vertex v = 0; v < g.n(); ++v) {
    if (c.colour[v] != target) continue;
    exhaustive_search(g, stable(g, individualise(c, v)).first, best_cert, best_order);
  }
}

}  // namespace detail

inline CanonicalLabelling label_small_exhaustive(const Graph& g, std::uint32_t cap = 24) {
  if (g.n() > cap) throw CapExceededError("small-exhaustive: vertex cap exceeded");
  CanonicalLabelling lab;
  lab.scheme = "small-exhaustive";
  if (g.n() == 0) {
    lab.certificate = make_certificate(g, {});
    return lab;
  }
  std::vector<std::uint8_t> best_cert;
  detail::exhaustive_search(g, stable_colouring(g), best_cert, lab.order);
  lab.certificate = std::move(best_cert);
  return lab;
}

// ---------------------------------------------------------------------------
// Component assembly: sort canonically-labelled components by certificate;
// ties are isomorphic components, so any tie order is an automorphism.
// ---------------------------------------------------------------------------

inline CanonicalLabelling assemble_components(
    const std::vector<std::pair<Graph, CanonicalLabelling>>& parts) {
  std::vector<std::size_t> offset(parts.size() + 1, 0);
  for (std::size_t i = 0; i < parts.size(); ++i)
    offset[i + 1] = offset[i] + parts[i].first.n();
  std::vector<std::size_t> idx(parts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return parts[a].second.certificate < parts[b].second.certificate;
  });
  CanonicalLabelling lab;
  lab.scheme = "assembled";
  for (std::size_t i : idx)
    for (Vertex v : parts[i].second.order)
      lab.order.push_back(static_cast<Vertex>(offset[i] + v));
  // Certificate of the disjoint union under this order.
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (const auto& [u, v] : parts[i].first.edges())
      edges.emplace_back(static_cast<Vertex>(offset[i] + u), static_cast<Vertex>(offset[i] + v));
  Graph whole = Graph::from_edges(static_cast<std::uint32_t>(offset.back()), edges);
  lab.certificate = make_certificate(whole, lab.order);
  return lab;
}

namespace detail {

// Label each component with `labeller`, then assemble on the original graph.
template <typename Labeller>
CanonicalLabelling label_per_component(const Graph& g, Labeller&& labeller,
                                       const std::string& scheme) {
  auto comps = components(g);
  struct Part {
    std::vector<Vertex> back;
    CanonicalLabelling lab;
  };
  std::vector<Part> parts;
  for (const auto& comp : comps) {
    Part p;
    Graph sub = induced_subgraph(g, comp, &p.back);
    p.lab = labeller(sub);
    parts.push_back(std::move(p));
  }
  std::vector<std::size_t> idx(parts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return parts[a].lab.certificate < parts[b].lab.certificate;
  });
  CanonicalLabelling lab;
  lab.scheme = scheme;
  for (std::size_t i : idx)
    for (Vertex local : parts[i].lab.order) lab.order.push_back(parts[i].back[local]);
  lab.certificate = make_certificate(g, lab.order);
  return lab;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Disparity-based labelling (colour classes + exhaustively labelled disparity
// components), and the V23 labelling for sparse graphs.
// ---------------------------------------------------------------------------

enum class DisparityMode { cr, wl2 };

inline std::uint32_t disparity_component_cap(std::uint32_t n) {
  std::uint32_t lg = 0;
  while ((1ull << (lg + 1)) <= n) ++lg;
  if ((1ull << lg) < n) ++lg;  // ceil(log2 n)
  return std::max<std::uint32_t>(24, 3 * lg);
}

inline CanonicalLabelling label_via_disparity(const Graph& g, DisparityMode mode,
                                              std::uint32_t cap = 0) {
  const std::uint32_t n = g.n();
  if (cap == 0) cap = disparity_component_cap(n);
  Colouring cg = mode == DisparityMode::cr ? stable_colouring(g) : wl2_vertex_colouring(g);
  Graph d = disparity(g, cg);
  for (const auto& comp : components(d))
    if (comp.size() > cap)
      throw NotApplicableError("disparity: component of disparity graph exceeds size cap");
  CanonicalLabelling dlab = detail::label_per_component(
      d, [&](const Graph& sub) { return label_small_exhaustive(sub, cap); }, "disparity");
  std::vector<std::uint32_t> dpos(n);
  for (std::uint32_t pos = 0; pos < n; ++pos) dpos[dlab.order[pos]] = pos;
  CanonicalLabelling lab;
  lab.scheme = mode == DisparityMode::cr ? "disparity-cr" : "disparity-wl2";
  lab.order.resize(n);
  for (Vertex v = 0; v < n; ++v) lab.order[v] = v;
  std::sort(lab.order.begin(), lab.order.end(), [&](Vertex a, Vertex b) {
    if (cg.colour[a] != cg.colour[b]) return cg.colour[a] < cg.colour[b];
    return dpos[a] < dpos[b];
  });
  lab.certificate = make_certificate(g, lab.order);
  return lab;
}

// Per component: individualisation-refinement when V23 is nonempty and its
// stable colours are distinct, the tree/unicyclic labeller otherwise.
inline CanonicalLabelling label_via_v23(const Graph& g) {
  auto lab = detail::label_per_component(
      g,
      [&](const Graph& sub) {
        auto core = coreness(sub);
        auto d2 = detail::core2_degrees(sub, core);
        std::vector<Vertex> v23;
        for (Vertex v = 0; v < sub.n(); ++v)
          if (core[v] >= 2 && d2[v] >= 3) v23.push_back(v);
        if (v23.empty()) return label_tree_unicyclic(sub);
        Colouring c = stable_colouring(sub);
        std::vector<std::uint32_t> used(c.k, 0);
        for (Vertex v : v23)
          if (++used[c.colour[v]] > 1)
            throw NotApplicableError("v23: V23 colours not distinct in a component");
        return label_ir(sub);
      },
      "v23");
  return lab;
}

// ---------------------------------------------------------------------------
// Scheme applicability detection (itself isomorphism-invariant).
// ---------------------------------------------------------------------------

struct SchemeReport {
  bool discrete_cr = false;
  bool tree_unicyclic = false;
  bool v23 = false;
  bool disparity_cr = false;
  bool disparity_wl2 = false;
  bool small_exhaustive = false;
  std::vector<std::string> reasons;  // one entry per inapplicable scheme
};

inline SchemeReport scheme_report(const Graph& g, std::uint32_t exhaustive_cap = 24) {
  SchemeReport r;
  auto probe = [&](bool& flag, const char* name, auto&& fn) {
    try {
      fn();
      flag = true;
    } catch (const NotApplicableError& e) {
      r.reasons.push_back(std::string(name) + ": " + e.what());
    } catch (const CapExceededError& e) {
      r.reasons.push_back(std::string(name) + ": " + e.what());
    }
  };
  probe(r.discrete_cr, "discrete-cr", [&] {
    if (!stable_colouring(g).discrete())
      throw NotApplicableError("stable colouring not discrete");
  });
  probe(r.tree_unicyclic, "tree-unicyclic", [&] {
    if (components(g).size() != 1) throw NotApplicableError("not connected");
    if (g.m() >= g.n() + 1) throw NotApplicableError("more than one cycle");
  });
  probe(r.v23, "v23", [&] { label_via_v23(g); });
  probe(r.disparity_cr, "disparity-cr", [&] {
    std::uint32_t cap = disparity_component_cap(g.n());
    for (const auto& comp : components(disparity(g, stable_colouring(g))))
      if (comp.size() > cap)
        throw NotApplicableError("component of disparity graph exceeds size cap");
  });
  probe(r.disparity_wl2, "disparity-wl2", [&] {
    std::uint32_t cap = disparity_component_cap(g.n());
    for (const auto& comp : components(disparity(g, wl2_vertex_colouring(g))))
      if (comp.size() > cap)
        throw NotApplicableError("component of disparity graph exceeds size cap");
  });
  probe(r.small_exhaustive, "small-exhaustive", [&] {
    if (g.n() > exhaustive_cap) throw CapExceededError("vertex cap exceeded");
  });
  return r;
}

// ---------------------------------------------------------------------------
// Composite isomorphism tester.
// ---------------------------------------------------------------------------

enum class IsoVerdict { isomorphic, non_isomorphic, inconclusive };

struct IsoResult {
  IsoVerdict verdict = IsoVerdict::inconclusive;
  std::vector<Vertex> mapping;  // G vertex -> H vertex, only when isomorphic
  std::string detail;
};

inline bool is_isomorphism(const Graph& g, const Graph& h, const std::vector<Vertex>& map) {
  if (g.n() != h.n() || g.m() != h.m()) return false;
  if (!is_permutation_of_range(map, g.n())) return false;
  for (const auto& [u, v] : g.edges())
    if (!h.has_edge(map[u], map[v])) return false;
  return true;
}

namespace detail {

inline std::optional<IsoResult> compare_by_scheme(
    const Graph& g, const Graph& h, const char* name,
    CanonicalLabelling (*scheme)(const Graph&)) {
  std::optional<CanonicalLabelling> lg, lh;
  try {
    lg = scheme(g);
  } catch (const NotApplicableError&) {
  }
  try {
    lh = scheme(h);
  } catch (const NotApplicableError&) {
  }
  if (lg.has_value() != lh.has_value()) {
    IsoResult r;
    r.verdict = IsoVerdict::non_isomorphic;
    r.detail = std::string(name) + " applicable to exactly one input";
    return r;
  }
  if (!lg) return std::nullopt;
  IsoResult r;
  if (lg->certificate != lh->certificate) {
    r.verdict = IsoVerdict::non_isomorphic;
    r.detail = std::string(name) + " certificates differ";
    return r;
  }
  r.mapping.resize(g.n());
  for (std::uint32_t pos = 0; pos < g.n(); ++pos) r.mapping[lg->order[pos]] = lh->order[pos];
  if (!is_isomorphism(g, h, r.mapping))
    throw std::logic_error("canonical labelling produced an unverifiable mapping");
  r.verdict = IsoVerdict::isomorphic;
  r.detail = std::string(name) + " certificates equal; mapping verified";
  return r;
}

}  // namespace detail

// Tries schemes in order (discrete-CR, v23, disparity-wl2, small-exhaustive).
// "isomorphic" always carries a verified bijection; "non-isomorphic" only
// when a genuine isomorphism invariant differs.
inline IsoResult isomorphic(const Graph& g, const Graph& h,
                            std::uint32_t exhaustive_cap = 24) {
  IsoResult r;
  auto non_iso = [&](const std::string& why) {
    r.verdict = IsoVerdict::non_isomorphic;
    r.detail = why;
    return r;
  };
  if (g.n() != h.n()) return non_iso("vertex counts differ");
  if (g.m() != h.m()) return non_iso("edge counts differ");
  {
    std::vector<std::uint32_t> dg, dh;
    for (Vertex v = 0; v < g.n(); ++v) {
      dg.push_back(g.degree(v));
      dh.push_back(h.degree(v));
    }
    std::sort(dg.begin(), dg.end());
    std::sort(dh.begin(), dh.end());
    if (dg != dh) return non_iso("degree multisets differ");
  }
  {
    std::vector<std::size_t> sg, sh;
    for (const auto& comp : components(g)) sg.push_back(comp.size());
    for (const auto& comp : components(h)) sh.push_back(comp.size());
    std::sort(sg.begin(), sg.end());
    std::sort(sh.begin(), sh.end());
    if (sg != sh) return non_iso("component size multisets differ");
  }
  // Colour refinement on the disjoint union: the two sides must produce the
  // same multiset of stable colours.
  {
    std::vector<Edge> edges = g.edges();
    for (const auto& [u, v] : h.edges())
      edges.emplace_back(u + g.n(), v + g.n());
    Graph uni = Graph::from_edges(g.n() + h.n(), edges);
    Colouring c = stable_colouring(uni);
    std::vector<std::uint32_t> mg, mh;
    for (Vertex v = 0; v < g.n(); ++v) mg.push_back(c.colour[v]);
    for (Vertex v = 0; v < h.n(); ++v) mh.push_back(c.colour[g.n() + v]);
    std::sort(mg.begin(), mg.end());
    std::sort(mh.begin(), mh.end());
    if (mg != mh) return non_iso("stable colour multisets differ");
    // 2-WL on the union for small inputs: strictly stronger invariant.
    if (uni.n() <= 256) {
      Colouring w = wl2_vertex_colouring(uni);
      std::vector<std::uint32_t> wg, wh;
      for (Vertex v = 0; v < g.n(); ++v) wg.push_back(w.colour[v]);
      for (Vertex v = 0; v < h.n(); ++v) wh.push_back(w.colour[g.n() + v]);
      std::sort(wg.begin(), wg.end());
      std::sort(wh.begin(), wh.end());
      if (wg != wh) return non_iso("2-WL colour multisets differ");
    }
  }
  if (auto res = detail::compare_by_scheme(g, h, "discrete-cr", &label_discrete_cr)) return *res;
  if (auto res = detail::compare_by_scheme(g, h, "v23", &label_via_v23)) return *res;
  if (auto res = detail::compare_by_scheme(g, h, "disparity-wl2", [](const Graph& x) {
        return label_via_disparity(x, DisparityMode::wl2);
      }))
    return *res;
  if (g.n() <= exhaustive_cap) {
    auto lg = label_small_exhaustive(g, exhaustive_cap);
    auto lh = label_small_exhaustive(h, exhaustive_cap);
    if (lg.certificate != lh.certificate) return non_iso("exhaustive certificates differ");
    r.mapping.resize(g.n());
    for (std::uint32_t pos = 0; pos < g.n(); ++pos) r.mapping[lg.order[pos]] = lh.order[pos];
    if (!is_isomorphism(g, h, r.mapping))
      throw std::logic_error("exhaustive labelling produced an unverifiable mapping");
    r.verdict = IsoVerdict::isomorphic;
    r.detail = "exhaustive certificates equal; mapping verified";
    return r;
  }
  r.verdict = IsoVerdict::inconclusive;
  r.detail = "no applicable scheme";
  return r;
}

}  // namespace wlcanon
