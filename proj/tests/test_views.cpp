#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "wlcanon/graph.hpp"
#include "wlcanon/refine.hpp"
#include "wlcanon/views.hpp"

using namespace wlcanon;
using namespace testing_support;

namespace {

std::map<Vertex, mpz_class> as_map(std::initializer_list<std::pair<Vertex, long>> init) {
  std::map<Vertex, mpz_class> m;
  for (auto [v, mult] : init) m[v] = mult;
  return m;
}

}  // namespace

TEST_CASE("view hashes: basic shapes") {
  Graph iso = Graph::from_edges(1, {});
  CHECK_NOTHROW(view_hash(iso, 0, 5));

  // Vertex-transitive: all codes equal at every depth.
  Graph c6 = cycle_graph(6);
  for (std::uint32_t d : {0u, 1u, 3u, 5u}) {
    auto hs = view_hashes(c6, d);
    for (Vertex v = 1; v < 6; ++v) CHECK(hs[v] == hs[0]);
  }

  // The 7-vertex example: depth-3 views of u2 and u5 are non-isomorphic.
  Graph g = example7_graph();
  auto hs = view_hashes(g, 3);
  CHECK(hs[2] != hs[5]);
}

TEST_CASE("view hash budget") {
  // Complete graph walk trees explode; a tiny cap must trigger.
  CHECK_THROWS_AS(view_hashes(complete_graph(12), 8, 1000), BudgetExceededError);
}

TEST_CASE("view-diff golden values on the example graph") {
  Graph g = example7_graph();
  ViewDiff d = view_diff(g, 2, 5, 3);

  CHECK(d.l_uv[0] == as_map({{2, 1}}));
  CHECK(d.l_vu[0] == as_map({{5, 1}}));
  CHECK(d.l_uv[1] == as_map({{1, 1}, {3, 1}}));
  CHECK(d.l_vu[1] == as_map({{4, 1}}));
  CHECK(d.l_uv[2] == as_map({{0, 1}, {2, 2}}));
  CHECK(d.l_vu[2] == as_map({{5, 1}, {6, 1}}));
  CHECK(d.l_uv[3] == as_map({{1, 3}, {3, 3}}));
  CHECK(d.l_vu[3] == as_map({{4, 1}}));

  CHECK(d.s_new[0] == std::vector<Vertex>{2, 5});
  CHECK(d.s_new[1] == std::vector<Vertex>{1, 3, 4});
  CHECK(d.s_new[2] == std::vector<Vertex>{0, 6});
  CHECK(d.s_new[3].empty());
  REQUIRE(d.first_empty_s.has_value());
  CHECK(*d.first_empty_s == 3);
}

TEST_CASE("view-diff rejects u == v") {
  CHECK_THROWS_AS(view_diff(path_graph(3), 1, 1, 2), std::invalid_argument);
}

TEST_CASE("view-diff agrees with the walk enumeration oracle") {
  Rng rng({404, 0});
  for (int t = 0; t < 60; ++t) {
    std::uint32_t n = 3 + static_cast<std::uint32_t>(rng.next_below(8));
    Graph g = gnp(n, 0.4, {505, static_cast<std::uint64_t>(t)});
    Vertex u = static_cast<Vertex>(rng.next_below(n));
    Vertex v = static_cast<Vertex>(rng.next_below(n));
    if (u == v) continue;
    ViewDiff d = view_diff(g, u, v, 4);
    for (std::uint32_t i = 0; i <= 4; ++i) {
      CHECK(d.l_uv[i] == walk_surplus(g, u, v, i));
      CHECK(d.l_vu[i] == walk_surplus(g, v, u, i));
    }
  }
}

TEST_CASE("disjoint supports at every level") {
  Rng rng({405, 0});
  for (int t = 0; t < 40; ++t) {
    std::uint32_t n = 4 + static_cast<std::uint32_t>(rng.next_below(20));
    Graph g = gnp(n, 0.3, {506, static_cast<std::uint64_t>(t)});
    ViewDiff d = view_diff(g, 0, 1, 5);
    for (std::uint32_t i = 0; i <= 5; ++i)
      for (const auto& [w, mult] : d.l_uv[i]) CHECK(d.l_vu[i].count(w) == 0);
  }
}

TEST_CASE("view-hash equality matches iterated refinement at every depth") {
  Rng rng({406, 0});
  for (int t = 0; t < 50; ++t) {
    std::uint32_t n = 3 + static_cast<std::uint32_t>(rng.next_below(22));
    Graph g = gnp(n, rng.next_unit() * 0.5, {507, static_cast<std::uint64_t>(t)});
    Colouring c = trivial_colouring(n);
    for (std::uint32_t depth = 0; depth <= 5; ++depth) {
      auto hs = view_hashes(g, depth);
      for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
          CHECK((hs[u] == hs[v]) == (c.colour[u] == c.colour[v]));
      c = refine_step(g, c);
    }
  }
}

TEST_CASE("degree discrepancy") {
  // P3: endpoints vs the middle differ already at i=0.
  Graph p3 = path_graph(3);
  auto d = degree_discrepancy(p3, view_diff(p3, 0, 1, 3));
  REQUIRE(d.has_value());
  CHECK(d->first == 0);

  // C6: no discrepancy at any level.
  Graph c6 = cycle_graph(6);
  CHECK(!degree_discrepancy(c6, view_diff(c6, 0, 3, 6)).has_value());

  // Example graph, (u2,u5): fires by i=1 at the latest.
  Graph g = example7_graph();
  auto d2 = degree_discrepancy(g, view_diff(g, 2, 5, 3));
  REQUIRE(d2.has_value());
  CHECK(d2->first <= 1);
}

TEST_CASE("degree discrepancy firing implies distinct stable colours") {
  Rng rng({407, 0});
  for (int t = 0; t < 60; ++t) {
    std::uint32_t n = 4 + static_cast<std::uint32_t>(rng.next_below(20));
    Graph g = gnp(n, 0.25, {508, static_cast<std::uint64_t>(t)});
    Colouring st = stable_colouring(g);
    Vertex u = static_cast<Vertex>(rng.next_below(n));
    Vertex v = static_cast<Vertex>(rng.next_below(n));
    if (u == v) continue;
    if (degree_discrepancy(g, view_diff(g, u, v, 6)).has_value())
      CHECK(st.colour[u] != st.colour[v]);
  }
}

TEST_CASE("regular vertex-transitive graphs: no discrepancy fires") {
  Graph p = petersen();
  for (Vertex u = 0; u < 10; ++u)
    for (Vertex v = u + 1; v < 10; ++v)
      CHECK(!degree_discrepancy(p, view_diff(p, u, v, 6)).has_value());
}
