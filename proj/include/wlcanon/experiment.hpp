#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "wlcanon/aut.hpp"
#include "wlcanon/canon.hpp"
#include "wlcanon/cores.hpp"
#include "wlcanon/disparity.hpp"
#include "wlcanon/graph.hpp"
#include "wlcanon/io.hpp"
#include "wlcanon/refine.hpp"
#include "wlcanon/wl2.hpp"

namespace wlcanon {

enum class ExperimentKind {
  bes,
  smoothed_cr,
  disparity_components,
  sparse_v23,
  canonicity_fuzz,
  automorphism_check,
  sprinkle_degree,
  percolation,
};

inline const char* kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::bes: return "bes";
    case ExperimentKind::smoothed_cr: return "smoothed-cr";
    case ExperimentKind::disparity_components: return "disparity-components";
    case ExperimentKind::sparse_v23: return "sparse-v23";
    case ExperimentKind::canonicity_fuzz: return "canonicity-fuzz";
    case ExperimentKind::automorphism_check: return "automorphism-check";
    case ExperimentKind::sprinkle_degree: return "sprinkle-degree";
    case ExperimentKind::percolation: return "percolation";
  }
  return "?";
}

inline ExperimentKind kind_from_name(const std::string& s) {
  for (int k = 0; k <= static_cast<int>(ExperimentKind::percolation); ++k)
    if (s == kind_name(static_cast<ExperimentKind>(k))) return static_cast<ExperimentKind>(k);
  throw std::invalid_argument("unknown experiment kind: " + s);
}

// Tiny expression evaluator for edge probabilities: products/quotients of
// numbers and the atoms n, log(n), ln(n), log2(n), loglog(n).
inline double eval_p_expression(const std::string& expr, std::uint32_t n) {
  double result = 1.0;
  std::size_t i = 0;
  char op = '*';
  auto skip_ws = [&] {
    while (i < expr.size() && expr[i] == ' ') ++i;
  };
  while (true) {
    skip_ws();
    if (i >= expr.size()) throw std::invalid_argument("p-expression: unexpected end");
    double atom;
    if (expr.compare(i, 9, "loglog(n)") == 0) {
      atom = std::log(std::log(static_cast<double>(n)));
      i += 9;
    } else if (expr.compare(i, 7, "log2(n)") == 0) {
      atom = std::log2(static_cast<double>(n));
      i += 7;
    } else if (expr.compare(i, 6, "log(n)") == 0 || expr.compare(i, 5, "ln(n)") == 0) {
      atom = std::log(static_cast<double>(n));
      i += expr[i] == 'l' && expr[i + 1] == 'o' ? 6 : 5;
    } else if (expr[i] == 'n') {
      atom = static_cast<double>(n);
      i += 1;
    } else {
      std::size_t used = 0;
      try {
        atom = std::stod(expr.substr(i), &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("p-expression: bad token at '" + expr.substr(i) + "'");
      }
      i += used;
    }
    result = op == '*' ? result * atom : result / atom;
    skip_ws();
    if (i >= expr.size()) break;
    op = expr[i];
    if (op != '*' && op != '/') throw std::invalid_argument("p-expression: expected * or /");
    ++i;
  }
  return result;
}

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::bes;
  std::uint32_t n = 0;
  std::string p_expr = "0";
  std::string g0 = "empty";  // empty | union-k4 | union-petersen | file:<path>
  std::uint32_t trials = 1;
  std::uint64_t master_seed = 0;
  double threshold = -1.0;    // required success fraction; negative = no gate
  std::uint32_t cap = 0;      // kind-specific cap override (0 = default)
  std::uint32_t workers = 0;  // 0 = hardware concurrency
  std::string mode = "direct";  // sprinkle-degree: direct | core-mechanism

  double p(std::uint32_t for_n) const {
    double v = eval_p_expression(p_expr, for_n);
    if (!(v >= 0.0) || v > 1.0)
      throw std::invalid_argument("p-expression evaluates outside [0,1]");
    return v;
  }
};

struct TrialRecord {
  std::uint32_t trial = 0;
  std::uint64_t stream = 0;
  bool success = false;
  double value = 0.0;  // the kind's primary measured quantity
  std::map<std::string, double> extra;
  double wall_ms = 0.0;
};

struct ExperimentSummary {
  std::uint32_t trials = 0;
  std::uint32_t successes = 0;
  double min_value = 0.0, max_value = 0.0;
  bool threshold_met = true;
  std::string measure;
};

inline Graph petersen_graph() {
  std::vector<Edge> e;
  for (Vertex i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(i, i + 5);
    e.emplace_back(i + 5, 5 + (i + 2) % 5);
  }
  return Graph::from_edges(10, e);
}

// Named adversary families for the smoothed experiments.
inline Graph adversary_graph(const std::string& name, std::uint32_t n) {
  if (name == "empty") return Graph::from_edges(n, {});
  std::vector<Edge> edges;
  if (name == "union-k4") {
    for (Vertex b = 0; b + 4 <= n; b += 4)
      for (Vertex i = 0; i < 4; ++i)
        for (Vertex j = i + 1; j < 4; ++j) edges.emplace_back(b + i, b + j);
    return Graph::from_edges(n, edges);
  }
  if (name == "union-petersen") {
    Graph p = petersen_graph();
    for (Vertex b = 0; b + 10 <= n; b += 10)
      for (const auto& [u, v] : p.edges()) edges.emplace_back(b + u, b + v);
    return Graph::from_edges(n, edges);
  }
  if (name.rfind("file:", 0) == 0) {
    Graph g = read_graph(name.substr(5), GraphFormat::edgelist);
    if (g.n() != n) throw std::invalid_argument("adversary file has wrong vertex count");
    return g;
  }
  throw std::invalid_argument("unknown adversary family: " + name);
}

namespace detail {

// Assign each vertex a fresh unique colour with the given probability,
// independently; the colouring stays canonical in distribution arguments
// only, which is all the sprinkling experiments need.
inline Colouring sprinkle_unique(const Colouring& c, double prob, Rng& rng) {
  Colouring out = c;
  for (Vertex v = 0; v < c.n(); ++v)
    if (rng.bernoulli(prob)) {
      --out.class_sizes[out.colour[v]];
      out.colour[v] = out.k;
      out.class_sizes.push_back(1);
      ++out.k;
    }
  return out;
}

// Drop edges at vertices whose degree exceeds cap (highest neighbour first),
// so the result has maximum degree <= cap.
inline Graph trim_to_max_degree(const Graph& g, std::uint32_t cap) {
  std::vector<std::uint32_t> deg(g.n());
  for (Vertex v = 0; v < g.n(); ++v) deg[v] = g.degree(v);
  std::vector<Edge> keep;
  auto es = g.edges();
  std::sort(es.begin(), es.end(), [](const Edge& a, const Edge& b) {
    return std::max(a.first, a.second) < std::max(b.first, b.second);
  });
  for (const auto& [u, v] : es) {
    if (deg[u] > cap || deg[v] > cap) {
      --deg[u];
      --deg[v];
      continue;
    }
    keep.emplace_back(u, v);
  }
  return Graph::from_edges(g.n(), keep);
}

inline std::uint32_t max_component_size(const Graph& g) {
  std::size_t best = 0;
  for (const auto& comp : components(g)) best = std::max(best, comp.size());
  return static_cast<std::uint32_t>(best);
}

}  // namespace detail

inline TrialRecord run_trial(const ExperimentSpec& spec, std::uint32_t trial) {
  TrialRecord rec;
  rec.trial = trial;
  rec.stream = trial;
  RngSeed seed{spec.master_seed, trial};
  auto t0 = std::chrono::steady_clock::now();

  switch (spec.kind) {
    case ExperimentKind::bes:
    case ExperimentKind::smoothed_cr: {
      Graph rnd = gnp(spec.n, spec.p(spec.n), seed);
      Graph g = spec.kind == ExperimentKind::bes
                    ? std::move(rnd)
                    : sym_diff(adversary_graph(spec.g0, spec.n), rnd);
      Colouring c = stable_colouring(g);
      rec.success = c.discrete();
      rec.value = c.k;
      rec.extra["classes"] = c.k;
      break;
    }
    case ExperimentKind::disparity_components: {
      Graph rnd = gnp(spec.n, spec.p(spec.n), seed);
      Graph g = sym_diff(adversary_graph(spec.g0, spec.n), rnd);
      Colouring cg = wl2_vertex_colouring(g);
      Graph d = disparity(g, cg);
      rec.value = detail::max_component_size(d);
      double bound = spec.cap > 0 ? spec.cap : 2.0 * std::log2(static_cast<double>(spec.n));
      rec.success = rec.value <= bound;
      rec.extra["bound"] = bound;
      rec.extra["classes"] = cg.k;
      break;
    }
    case ExperimentKind::sparse_v23: {
      Graph g = gnp(spec.n, spec.p(spec.n), seed);
      Colouring c = stable_colouring(g);
      auto core = coreness(g);
      auto d2 = detail::core2_degrees(g, core);
      std::vector<std::uint32_t> used(c.k, 0);
      std::uint64_t collisions = 0;
      std::uint32_t v23_count = 0;
      for (Vertex v = 0; v < g.n(); ++v) {
        if (core[v] < 2 || d2[v] < 3) continue;
        ++v23_count;
        if (used[c.colour[v]]++ > 0) ++collisions;
      }
      rec.value = static_cast<double>(collisions);
      rec.success = collisions == 0;
      rec.extra["v23"] = v23_count;
      // Applicability and permutation invariance of the V23 labelling.
      bool applicable = false, invariant = true;
      try {
        auto lab = label_via_v23(g);
        applicable = true;
        Rng prng(RngSeed{spec.master_seed ^ 0xabcdef12345678ULL, trial});
        auto perm = random_permutation(g.n(), prng);
        auto lab2 = label_via_v23(apply_permutation(g, perm));
        invariant = lab.certificate == lab2.certificate;
      } catch (const NotApplicableError&) {
      }
      rec.extra["applicable"] = applicable ? 1 : 0;
      rec.extra["invariant"] = invariant ? 1 : 0;
      if (applicable && !invariant) rec.success = false;
      break;
    }
    case ExperimentKind::canonicity_fuzz: {
      Rng rng(seed);
      std::uint32_t n = 6 + static_cast<std::uint32_t>(rng.next_below(11));
      double p = 0.15 + 0.5 * rng.next_unit();
      Graph g = gnp(n, p, RngSeed{spec.master_seed ^ 0x77aa, trial});
      auto perm = random_permutation(n, rng);
      Graph h = apply_permutation(g, perm);
      SchemeReport rg = scheme_report(g), rh = scheme_report(h);
      bool ok = rg.discrete_cr == rh.discrete_cr && rg.v23 == rh.v23 &&
                rg.disparity_cr == rh.disparity_cr && rg.disparity_wl2 == rh.disparity_wl2 &&
                rg.tree_unicyclic == rh.tree_unicyclic;
      auto match = [&](auto&& labeller, bool applicable) {
        if (!applicable || !ok) return;
        ok = labeller(g).certificate == labeller(h).certificate;
      };
      match([](const Graph& x) { return label_discrete_cr(x); }, rg.discrete_cr);
      match([](const Graph& x) { return label_via_v23(x); }, rg.v23);
      match([](const Graph& x) { return label_via_disparity(x, DisparityMode::cr); },
            rg.disparity_cr);
      match([](const Graph& x) { return label_small_exhaustive(x); }, rg.small_exhaustive);
      rec.success = ok;
      rec.value = ok ? 1 : 0;
      break;
    }
    case ExperimentKind::automorphism_check: {
      Graph g = gnp(spec.n, spec.p(spec.n), seed);
      if (spec.n <= kBruteAutMaxN) {
        auto rep = brute_aut(g);
        auto res = check_aut_characterisation(g, rep);
        rec.success = res.ok;
        rec.value = static_cast<double>(res.violations.size());
        rec.extra["automorphisms"] = static_cast<double>(rep.automorphisms.size());
      } else {
        auto auts = exception_automorphisms(g);
        bool all_good = true;
        for (const auto& phi : auts)
          if (!is_isomorphism(g, g, phi)) all_good = false;
        rec.success = all_good;
        rec.value = static_cast<double>(auts.size());
        rec.extra["constructed"] = static_cast<double>(auts.size());
      }
      break;
    }
    case ExperimentKind::sprinkle_degree: {
      double logn = std::log(static_cast<double>(spec.n));
      if (spec.mode == "core-mechanism") {
        // Eight-way split of the perturbation; unique colours for vertices
        // with >= 3 neighbours in a fixed half-size core set.
        double p = spec.p(spec.n);
        double p_split = 1.0 - std::pow(1.0 - p, 1.0 / 8.0);
        Graph g1 = gnp(spec.n, p_split, RngSeed{spec.master_seed, trial * 8});
        auto v3 = kcore(g1, 3);
        if (v3.size() < spec.n / 2) {
          rec.success = false;
          rec.value = -1;
          rec.extra["core_too_small"] = 1;
          break;
        }
        std::vector<Vertex> vcore(v3.begin(), v3.begin() + spec.n / 2);
        std::vector<bool> in_core(spec.n, false);
        for (Vertex v : vcore) in_core[v] = true;
        std::vector<Vertex> u_side;
        for (Vertex v = 0; v < spec.n; ++v)
          if (!in_core[v]) u_side.push_back(v);
        Graph g0 = adversary_graph(spec.g0, spec.n);
        Graph g_all = sym_diff(g0, g1);
        Graph hu = induced_subgraph(g_all, u_side);
        Colouring c = stable_colouring(hu);
        Graph g2 = gnp(spec.n, p_split, RngSeed{spec.master_seed, trial * 8 + 1});
        Colouring b = c;
        for (std::uint32_t i = 0; i < u_side.size(); ++i) {
          std::uint32_t nb_core = 0;
          for (Vertex w : g2.neighbours(u_side[i]))
            if (in_core[w]) ++nb_core;
          if (nb_core >= 3) {
            --b.class_sizes[b.colour[i]];
            b.colour[i] = b.k;
            b.class_sizes.push_back(1);
            ++b.k;
          }
        }
        Colouring c2 = stable(hu, b).first;
        Graph d = disparity(hu, c2);
        std::uint32_t maxdeg = 0;
        for (Vertex v = 0; v < d.n(); ++v) maxdeg = std::max(maxdeg, d.degree(v));
        rec.value = maxdeg;
        rec.success = rec.value <= 4.0 * std::log(static_cast<double>(u_side.size() > 1 ? u_side.size() : 2));
        rec.extra["u_size"] = static_cast<double>(u_side.size());
      } else {
        Graph h = gnp(spec.n, spec.p(spec.n), seed);
        Colouring c = stable_colouring(h);
        Rng rng(RngSeed{spec.master_seed ^ 0x5eed, trial});
        Colouring cp = detail::sprinkle_unique(c, 0.7, rng);
        Colouring r = stable(h, cp).first;
        Graph d = disparity(h, r);
        std::uint32_t maxdeg = 0;
        for (Vertex v = 0; v < d.n(); ++v) maxdeg = std::max(maxdeg, d.degree(v));
        rec.value = maxdeg;
        rec.success = rec.value <= 4.0 * logn;
        rec.extra["bound"] = 4.0 * logn;
      }
      break;
    }
    case ExperimentKind::percolation: {
      double logn = std::log(static_cast<double>(spec.n));
      std::uint32_t degcap = static_cast<std::uint32_t>(4.0 * logn);
      Graph h0 = gnp(spec.n, spec.p(spec.n), seed);
      Graph h = detail::trim_to_max_degree(h0, degcap);
      double survive = 1.0 / std::pow(logn, 6.0);
      Rng rng(RngSeed{spec.master_seed ^ 0x9e3c, trial});
      std::vector<Vertex> alive;
      for (Vertex v = 0; v < spec.n; ++v)
        if (rng.bernoulli(survive)) alive.push_back(v);
      Graph sub = induced_subgraph(h, alive);
      rec.value = alive.empty() ? 0.0 : detail::max_component_size(sub);
      double bound = logn / (4.0 * std::log(logn)) * 1.5;
      rec.success = rec.value <= bound;
      rec.extra["bound"] = bound;
      rec.extra["alive"] = static_cast<double>(alive.size());
      break;
    }
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
  return rec;
}

inline std::pair<std::vector<TrialRecord>, ExperimentSummary> run(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (spec.kind == ExperimentKind::disparity_components && spec.n > kWl2MaxN)
    throw CapExceededError("disparity-components: n exceeds the 2-WL cap");
  std::vector<TrialRecord> records(spec.trials);
  std::uint32_t workers = spec.workers > 0 ? spec.workers
                                           : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, spec.trials);
  std::atomic<std::uint32_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mu;
  for (std::uint32_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::uint32_t t = next.fetch_add(1);
        if (t >= spec.trials) return;
        try {
          records[t] = run_trial(spec, t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);

  ExperimentSummary sum;
  sum.trials = spec.trials;
  sum.measure = kind_name(spec.kind);
  sum.min_value = records.empty() ? 0 : records[0].value;
  sum.max_value = sum.min_value;
  for (const auto& r : records) {
    if (r.success) ++sum.successes;
    sum.min_value = std::min(sum.min_value, r.value);
    sum.max_value = std::max(sum.max_value, r.value);
  }
  if (spec.threshold >= 0.0)
    sum.threshold_met =
        static_cast<double>(sum.successes) >= spec.threshold * spec.trials - 1e-9;
  return {std::move(records), sum};
}

}  // namespace wlcanon
