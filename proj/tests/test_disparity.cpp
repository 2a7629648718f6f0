#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "helpers.hpp"
#include "wlcanon/disparity.hpp"
#include "wlcanon/graph.hpp"
#include "wlcanon/refine.hpp"

using namespace wlcanon;
using namespace testing_support;

TEST_CASE("majority basics") {
  Graph k4 = complete_graph(4);
  MajoritySpec mk4 = majority(k4, stable_colouring(k4));
  CHECK(mk4.k == 1);
  CHECK(mk4.at(0, 0));

  Graph none = Graph::from_edges(5, {});
  MajoritySpec mn = majority(none, stable_colouring(none));
  CHECK(!mn.at(0, 0));

  // C5 with one class: exactly half the possible edges, ties round to 1.
  Graph c5 = cycle_graph(5);
  MajoritySpec mc5 = majority(c5, stable_colouring(c5));
  CHECK(mc5.at(0, 0));
}

TEST_CASE("disparity basics") {
  Graph k4 = complete_graph(4);
  CHECK(disparity(k4, stable_colouring(k4)).m() == 0);

  // C5: majority fills everything, so D is the complement of C5.
  Graph c5 = cycle_graph(5);
  Graph d = disparity(c5, stable_colouring(c5));
  CHECK(d.m() == 5);
  CHECK(brute_force_isomorphic(d, c5));
}

TEST_CASE("disparity under a discrete colouring is edgeless") {
  Rng rng({41, 0});
  for (int t = 0; t < 30; ++t) {
    std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.next_below(20));
    Graph g = gnp(n, rng.next_unit(), {42, static_cast<std::uint64_t>(t)});
    CHECK(disparity(g, discrete_colouring(n)).m() == 0);
  }
}

TEST_CASE("generalised disparity special cases") {
  Rng rng({43, 0});
  for (int t = 0; t < 20; ++t) {
    std::uint32_t n = 3 + static_cast<std::uint32_t>(rng.next_below(16));
    Graph g = gnp(n, 0.4, {44, static_cast<std::uint64_t>(t)});
    Colouring c = stable_colouring(g);
    // L = 0: D_L = G. L = 1: D_L = complement.
    CHECK(generalised_disparity(g, c, MajoritySpec::zero(c.k)) == g);
    MajoritySpec ones = MajoritySpec::zero(c.k);
    for (std::uint32_t a = 0; a < c.k; ++a)
      for (std::uint32_t b = a; b < c.k; ++b) ones.set(a, b, true);
    Graph comp = generalised_disparity(g, c, ones);
    CHECK(comp.m() == static_cast<std::size_t>(n) * (n - 1) / 2 - g.m());
    // L = majority reproduces the plain disparity graph.
    CHECK(generalised_disparity(g, c, majority(g, c)) == disparity(g, c));
  }
}

TEST_CASE("disparity stats") {
  Graph none = Graph::from_edges(6, {});
  DisparityStats st = stats(none, trivial_colouring(6));
  CHECK(st.s_bound == 1);
  CHECK(st.max_degree == 0);
  CHECK(st.component_sizes == std::vector<std::uint32_t>(6, 1));

  DisparityStats c5 = stats(cycle_graph(5), trivial_colouring(5));
  CHECK(c5.s_bound == 5);
  CHECK(c5.max_degree == 2);

  // K33 with the two sides as classes.
  Graph k33 = complete_bipartite(3, 3);
  Colouring sides = normalise_colouring({0, 0, 0, 1, 1, 1});
  DisparityStats st33 = stats(k33, sides);
  CHECK(st33.s_bound == 3);
  CHECK(st33.degree_bounded(4, 3));
  CHECK(!st33.degree_bounded(3, 2));
}

TEST_CASE("equitable disparity degree bounds") {
  Rng rng({45, 0});
  for (int t = 0; t < 40; ++t) {
    std::uint32_t n = 4 + static_cast<std::uint32_t>(rng.next_below(92));
    Graph g = gnp(n, rng.next_unit() * 0.4, {46, static_cast<std::uint64_t>(t)});
    Colouring c = stable_colouring(g);
    Graph d = disparity(g, c);
    // Within a class A: degree <= (|A|-1)/2; from A into B: <= |B|/2.
    for (Vertex v = 0; v < n; ++v) {
      std::map<std::uint32_t, std::uint32_t> per_class;
      for (Vertex w : d.neighbours(v)) ++per_class[c.colour[w]];
      for (const auto& [cls, deg] : per_class) {
        if (cls == c.colour[v])
          CHECK(2 * deg <= c.class_sizes[cls] - 1);
        else
          CHECK(2 * deg <= c.class_sizes[cls]);
      }
    }
  }
}

TEST_CASE("same-coloured vertices reach the same colours in D_L") {
  Rng rng({47, 0});
  for (int t = 0; t < 40; ++t) {
    std::uint32_t n = 4 + static_cast<std::uint32_t>(rng.next_below(92));
    Graph g = gnp(n, 2.5 / n, {48, static_cast<std::uint64_t>(t)});
    Colouring c = stable_colouring(g);
    MajoritySpec L = MajoritySpec::zero(c.k);
    for (std::uint32_t a = 0; a < c.k; ++a)
      for (std::uint32_t b = a; b < c.k; ++b) L.set(a, b, rng.bernoulli(0.5));
    Graph d = generalised_disparity(g, c, L);
    // Reachable colour set per vertex must agree within classes.
    std::map<std::uint32_t, std::set<std::uint32_t>> expected;
    for (Vertex v = 0; v < n; ++v) {
      auto dist = bfs_distances(d, v);
      std::set<std::uint32_t> reach;
      for (Vertex w = 0; w < n; ++w)
        if (dist[w] != kUnreachable) reach.insert(c.colour[w]);
      auto [it, fresh] = expected.emplace(c.colour[v], reach);
      if (!fresh) CHECK(it->second == reach);
    }
  }
}

TEST_CASE("disparity degrees shrink under equitable refinement") {
  Rng rng({49, 0});
  for (int t = 0; t < 40; ++t) {
    std::uint32_t n = 4 + static_cast<std::uint32_t>(rng.next_below(92));
    Graph g = gnp(n, 0.3, {50, static_cast<std::uint64_t>(t)});
    Colouring coarse = stable_colouring(g);
    // Equitable refinement from an individualised start.
    std::vector<std::uint32_t> raw(coarse.colour);
    Vertex pick = static_cast<Vertex>(rng.next_below(n));
    raw[pick] = coarse.k;
    Colouring fine = stable(g, normalise_colouring(raw)).first;
    REQUIRE(is_refinement(fine, coarse));
    Graph d_fine = disparity(g, fine);
    Graph d_coarse = disparity(g, coarse);
    for (Vertex v = 0; v < n; ++v) CHECK(d_fine.degree(v) <= d_coarse.degree(v));
  }
}

TEST_CASE("factor-2 component coupling") {
  Rng rng({51, 0});
  for (int t = 0; t < 40; ++t) {
    std::uint32_t n = 4 + static_cast<std::uint32_t>(rng.next_below(92));
    Graph h = gnp(n, 0.3, {52, static_cast<std::uint64_t>(t)});
    Colouring c = stable_colouring(h);
    MajoritySpec L = MajoritySpec::zero(c.k);
    for (std::uint32_t a = 0; a < c.k; ++a)
      for (std::uint32_t b = a; b < c.k; ++b) L.set(a, b, rng.bernoulli(0.5));
    Graph h1 = generalised_disparity(h, c, L);
    Graph h2 = disparity(h, c);
    auto comp1 = component_ids(h1);
    auto comp2 = component_ids(h2);
    std::map<std::uint32_t, std::uint32_t> size1, size2;
    for (Vertex v = 0; v < n; ++v) {
      ++size1[comp1[v]];
      ++size2[comp2[v]];
    }
    for (Vertex v = 0; v < n; ++v) CHECK(size2[comp2[v]] <= 2 * size1[comp1[v]]);
  }
}

TEST_CASE("distance witness satisfies its interval bound") {
  auto verify = [](const Graph& h, const std::vector<Vertex>& c_set, std::uint32_t a) {
    auto [y, interval] = distance_witness(h, c_set, a);
    std::uint32_t delta = 0;
    for (Vertex v = 0; v < h.n(); ++v) delta = std::max(delta, h.degree(v));
    auto dist = bfs_distances(h, y);
    std::set<std::uint32_t> in_interval(interval.begin(), interval.end());
    std::uint64_t count = 0;
    for (Vertex v : c_set)
      if (in_interval.count(dist[v])) ++count;
    CHECK(count >= a);
    CHECK(count < static_cast<std::uint64_t>(a) * delta);
  };

  verify(path_graph(3), {0, 2}, 1);
  verify(cycle_graph(6), {0, 1, 2, 3, 4, 5}, 2);

  // Single-vertex C with a = 1 returns that vertex at distance zero.
  auto [y, interval] = distance_witness(path_graph(4), {2}, 1);
  CHECK(y == 2);
  CHECK(interval == std::vector<std::uint32_t>{0});

  Rng rng({53, 0});
  int done = 0;
  for (int t = 0; t < 300 && done < 120; ++t) {
    std::uint32_t n = 4 + static_cast<std::uint32_t>(rng.next_below(40));
    Graph h = gnp(n, 2.2 / n, {54, static_cast<std::uint64_t>(t)});
    auto comps = components(h);
    std::sort(comps.begin(), comps.end(),
              [](const auto& a, const auto& b) { return a.size() > b.size(); });
    if (comps[0].size() < 3) continue;
    Graph sub = induced_subgraph(h, comps[0]);
    std::uint32_t delta = 0;
    for (Vertex v = 0; v < sub.n(); ++v) delta = std::max(delta, sub.degree(v));
    if (delta < 2) continue;
    std::vector<Vertex> c_set;
    for (Vertex v = 0; v < sub.n(); ++v)
      if (rng.bernoulli(0.5)) c_set.push_back(v);
    if (c_set.empty()) continue;
    std::uint32_t a = 1 + static_cast<std::uint32_t>(rng.next_below(c_set.size()));
    verify(sub, c_set, a);
    ++done;
  }
  CHECK(done >= 120);
}

TEST_CASE("distance witness precondition checks") {
  CHECK_THROWS_AS(distance_witness(disjoint_union(path_graph(2), path_graph(2)), {0}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(distance_witness(path_graph(3), {0}, 2), std::invalid_argument);
  CHECK_THROWS_AS(distance_witness(path_graph(2), {0}, 1), std::invalid_argument);  // Delta < 2
}

TEST_CASE("fingerprint set post-conditions") {
  auto verify = [](const Graph& f, const std::vector<Vertex>& c_side,
                   const std::vector<Vertex>& b_side) {
    auto s = fingerprint_set(f, c_side, b_side);
    std::uint32_t d_b = f.degree(b_side[0]);
    CHECK(static_cast<double>(s.size()) <=
          static_cast<double>(c_side.size()) / (2.0 * d_b) + 1.0);
    std::set<Vertex> covered;
    for (Vertex z : s)
      for (Vertex w : f.neighbours(z)) covered.insert(w);
    CHECK(4 * covered.size() >= c_side.size());
    // S stays inside B.
    std::set<Vertex> b(b_side.begin(), b_side.end());
    for (Vertex z : s) CHECK(b.count(z) == 1);
  };

  // K22: one vertex covers all of C.
  verify(complete_bipartite(2, 2), {0, 1}, {2, 3});
  auto s_k22 = fingerprint_set(complete_bipartite(2, 2), {0, 1}, {2, 3});
  CHECK(s_k22.size() == 1);

  // Perfect matching.
  {
    std::vector<Edge> e;
    for (Vertex i = 0; i < 6; ++i) e.emplace_back(i, 6 + i);
    Graph match = Graph::from_edges(12, e);
    std::vector<Vertex> c_side, b_side;
    for (Vertex i = 0; i < 6; ++i) {
      c_side.push_back(i);
      b_side.push_back(6 + i);
    }
    verify(match, c_side, b_side);
  }

  // Star with C side a single vertex.
  {
    Graph star = complete_bipartite(1, 5);
    verify(star, {0}, {1, 2, 3, 4, 5});
    auto s = fingerprint_set(star, {0}, {1, 2, 3, 4, 5});
    CHECK(s.size() == 1);
  }

  // Random biregular instances: d_C * |C| = d_B * |B| via bipartite circulants.
  Rng rng({55, 0});
  int done = 0;
  for (int t = 0; t < 200 && done < 120; ++t) {
    std::uint32_t half = 2 + static_cast<std::uint32_t>(rng.next_below(10));
    std::uint32_t deg = 1 + static_cast<std::uint32_t>(rng.next_below(half));
    std::vector<Edge> e;
    for (Vertex i = 0; i < half; ++i)
      for (std::uint32_t s = 0; s < deg; ++s) e.emplace_back(i, half + (i + s) % half);
    Graph f = Graph::from_edges(2 * half, e);
    std::vector<Vertex> c_side, b_side;
    for (Vertex i = 0; i < half; ++i) {
      c_side.push_back(i);
      b_side.push_back(half + i);
    }
    verify(f, c_side, b_side);
    ++done;
  }
  CHECK(done >= 120);
}

TEST_CASE("fingerprint set rejects non-biregular input") {
  // Path P3 as "bipartite" with uneven degrees on the C side.
  Graph p4 = path_graph(4);
  CHECK_THROWS_AS(fingerprint_set(p4, {0, 2}, {1, 3}), std::invalid_argument);
}
