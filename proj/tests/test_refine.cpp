#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "helpers.hpp"
#include "wlcanon/graph.hpp"
#include "wlcanon/refine.hpp"

using namespace wlcanon;
using namespace testing_support;

namespace {

std::set<std::set<Vertex>> classes_of(const Colouring& c) {
  std::map<std::uint32_t, std::set<Vertex>> by_colour;
  for (Vertex v = 0; v < c.n(); ++v) by_colour[c.colour[v]].insert(v);
  std::set<std::set<Vertex>> out;
  for (auto& [k, s] : by_colour) out.insert(std::move(s));
  return out;
}

}  // namespace

TEST_CASE("refine_step on the 4-edge path matches the illustration") {
  // sigma -> degree classes -> {ends},{2nd,4th},{middle}, stable at round 2.
  Graph p5 = path_graph(5);
  Colouring sigma = trivial_colouring(5);
  Colouring r1 = refine_step(p5, sigma);
  CHECK(classes_of(r1) == std::set<std::set<Vertex>>{{0, 4}, {1, 2, 3}});
  Colouring r2 = refine_step(p5, r1);
  CHECK(classes_of(r2) == std::set<std::set<Vertex>>{{0, 4}, {1, 3}, {2}});
  Colouring r3 = refine_step(p5, r2);
  CHECK(same_partition(r3, r2));

  auto [st, trace] = stable(p5, sigma);
  CHECK(classes_of(st) == classes_of(r2));
  CHECK(trace.rounds == 2);
  CHECK(trace.class_counts == std::vector<std::uint32_t>{1, 2, 3});
}

TEST_CASE("regular graphs stay monochromatic") {
  for (auto g : {cycle_graph(6), complete_graph(5), petersen()}) {
    Colouring st = stable_colouring(g);
    CHECK(st.k == 1);
  }
}

TEST_CASE("refine_step fixes discrete colourings") {
  Graph g = gnp(12, 0.3, {8, 1});
  Colouring d = discrete_colouring(12);
  CHECK(same_partition(refine_step(g, d), d));
}

TEST_CASE("G(128,1/2) is discrete for most seeds") {
  int discrete = 0;
  for (int t = 0; t < 20; ++t)
    if (stable_colouring(gnp(128, 0.5, {555, static_cast<std::uint64_t>(t)})).discrete())
      ++discrete;
  CHECK(discrete >= 19);
}

TEST_CASE("stability: refining a stable colouring does not split") {
  Rng rng({77, 3});
  for (int t = 0; t < 40; ++t) {
    std::uint32_t n = 4 + static_cast<std::uint32_t>(rng.next_below(253));
    Graph g = gnp(n, 3.0 / n, {303, static_cast<std::uint64_t>(t)});
    Colouring st = stable_colouring(g);
    CHECK(same_partition(refine_step(g, st), st));
    CHECK(is_equitable(g, st));
  }
}

TEST_CASE("consistency: refinement from a coarsening of the stable colouring") {
  Rng rng({78, 3});
  for (int t = 0; t < 40; ++t) {
    std::uint32_t n = 4 + static_cast<std::uint32_t>(rng.next_below(125));
    Graph g = gnp(n, 2.5 / n, {304, static_cast<std::uint64_t>(t)});
    Colouring st = stable_colouring(g);
    // Random coarsening: merge colour ids through a random non-injective map.
    std::vector<std::uint32_t> merged(st.k);
    for (std::uint32_t i = 0; i < st.k; ++i)
      merged[i] = static_cast<std::uint32_t>(rng.next_below(std::max(1u, st.k / 2 + 1)));
    std::vector<std::uint32_t> raw(n);
    for (Vertex v = 0; v < n; ++v) raw[v] = merged[st.colour[v]];
    Colouring coarse = normalise_colouring(raw);
    Colouring back = stable(g, coarse).first;
    CHECK(same_partition(back, st));
  }
}

TEST_CASE("coarsest equitable: equitable refinements refine the stable colouring") {
  Rng rng({79, 3});
  for (int t = 0; t < 40; ++t) {
    std::uint32_t n = 4 + static_cast<std::uint32_t>(rng.next_below(60));
    Graph g = gnp(n, 0.2, {305, static_cast<std::uint64_t>(t)});
    Colouring st = stable_colouring(g);
    // Equitable colourings refining sigma arise as stable colourings of
    // random starts refining sigma.
    std::vector<std::uint32_t> raw(n);
    for (Vertex v = 0; v < n; ++v) raw[v] = static_cast<std::uint32_t>(rng.next_below(3));
    Colouring refined_start = normalise_colouring(raw);
    Colouring equitable = stable(g, refined_start).first;
    REQUIRE(is_equitable(g, equitable));
    CHECK(is_refinement(equitable, st));
  }
}

TEST_CASE("canonicity: stable colour ids are permutation-invariant") {
  Rng rng({80, 3});
  for (int t = 0; t < 60; ++t) {
    std::uint32_t n = 3 + static_cast<std::uint32_t>(rng.next_below(40));
    Graph g = gnp(n, 0.25, {306, static_cast<std::uint64_t>(t)});
    auto perm = random_permutation(n, rng);
    Graph h = apply_permutation(g, perm);
    Colouring cg = stable_colouring(g);
    Colouring ch = stable_colouring(h);
    for (Vertex v = 0; v < n; ++v) CHECK(ch.colour[perm[v]] == cg.colour[v]);
  }
}

TEST_CASE("rounds never exceed n") {
  for (int t = 0; t < 10; ++t) {
    std::uint32_t n = 30 + static_cast<std::uint32_t>(t) * 20;
    Graph g = gnp(n, 2.0 / n, {307, static_cast<std::uint64_t>(t)});
    auto [st, trace] = stable(g, trivial_colouring(n));
    CHECK(trace.rounds <= n);
    for (std::size_t i = 1; i < trace.class_counts.size(); ++i)
      CHECK(trace.class_counts[i] > trace.class_counts[i - 1]);
  }
}

TEST_CASE("is_refinement basics") {
  Colouring sigma = trivial_colouring(5);
  Colouring disc = discrete_colouring(5);
  CHECK(is_refinement(sigma, sigma));
  CHECK(is_refinement(disc, sigma));
  CHECK(!is_refinement(sigma, disc));
}

TEST_CASE("is_equitable counterexample") {
  // C4 with classes {one vertex},{rest} is not equitable.
  Graph c4 = cycle_graph(4);
  Colouring c = normalise_colouring({0, 1, 1, 1});
  CHECK(!is_equitable(c4, c));
  CHECK(is_equitable(c4, discrete_colouring(4)));
}

TEST_CASE("refine_step rejects size mismatch") {
  CHECK_THROWS_AS(refine_step(path_graph(4), trivial_colouring(5)), std::invalid_argument);
}
