#include <doctest.h>

#include <bit>
#include <set>

#include "oracles.hpp"
#include "sosgraph/iso.hpp"

using namespace sosgraph;

TEST_CASE("scaling isomorphisms between vertex sets") {
  auto e6 = build_root_system("E6");
  auto r = check_scaling_isomorphism(e6, 1, 4);
  CHECK(r.passed);
  CHECK(r.exhaustive);
  CHECK(r.items_checked == 72);
  CHECK(check_scaling_isomorphism(build_root_system("E8"), 2, 8).passed);
  CHECK_FALSE(check_scaling_isomorphism(build_root_system("E7"), 1, 7).passed);
  CHECK(is_doubling(vertex_set(e6, 1), vertex_set(e6, 4)));
  CHECK_FALSE(is_doubling(vertex_set(e6, 4), vertex_set(e6, 1)));
}

TEST_CASE("doubling carries adjacency across") {
  auto e6 = build_root_system("E6");
  SOSGraph g1 = build_gamma(e6, 1), g4 = build_gamma(e6, 4);
  std::vector<VertexId> map(g1.vertex_count());
  for (VertexId v = 0; v < g1.vertex_count(); ++v) {
    auto img = g4.index_of(g1.vertex(v).scaled(2));
    REQUIRE(img);
    map[v] = *img;
  }
  CHECK(is_isomorphism(g1, g4, map));
}

TEST_CASE("vertex norms of maximal sets are 0 mod 8 at k = rank") {
  for (auto [name, k] : {std::pair{"E6", 4}, std::pair{"E7", 7}, std::pair{"E8", 8}}) {
    CAPTURE(name);
    auto r = check_mod8(build_root_system(name), k);
    CHECK(r.passed);
    CHECK(r.exhaustive);
  }
  auto e8 = build_root_system("E8");
  CHECK_FALSE(check_mod8(e8, 1).passed);
  CHECK_THROWS_AS(check_mod8(build_root_system("F4"), 4), std::invalid_argument);
  CHECK_THROWS_AS(check_mod8(build_root_system("E6"), 5), std::invalid_argument);
}

TEST_CASE("sampled mod 8 check is reproducible") {
  auto e8 = build_root_system("E8");
  SOSGraph g = build_gamma(e8, 2);
  SamplingPolicy policy;
  policy.exhaustive_pair_limit = 1000;
  policy.samples = 20000;
  auto a = check_mod8(g, e8, policy), b = check_mod8(g, e8, policy);
  CHECK_FALSE(a.exhaustive);
  CHECK(a.sample_size == 20000);
  CHECK(a.seed == kDefaultCheckSeed);
  CHECK(a.passed == b.passed);
  CHECK(a.items_checked == b.items_checked);
  CHECK(a.detail == b.detail);
  CHECK(to_json(a)["check"] == a.check);
}

TEST_CASE("root graph degree is 2(h - 2)") {
  struct Row {
    const char* name;
    std::size_t degree;
  };
  for (auto [name, degree] : {Row{"E6", 20}, Row{"E7", 32}, Row{"E8", 56}, Row{"D5", 12}, Row{"A4", 6}}) {
    CAPTURE(name);
    auto rs = build_root_system(name);
    CHECK(check_degree_formula(rs).passed);
    SOSGraph g = build_gamma(rs, 1);
    for (VertexId v = 0; v < g.vertex_count(); ++v) CHECK(g.degree(v) == degree);
  }
  SOSGraph a1 = build_gamma(build_root_system("A1"), 1);
  CHECK(a1.edge_count() == 0);
}

TEST_CASE("simple reflections act as automorphisms") {
  for (auto [name, k] : {std::pair{"G2", 1}, std::pair{"F4", 3}, std::pair{"E6", 2}, std::pair{"E7", 1}}) {
    CAPTURE(name);
    auto rs = build_root_system(name);
    auto r = check_weyl_automorphism(build_gamma(rs, k), rs);
    CHECK(r.passed);
    CHECK(r.exhaustive);
  }
  auto e8 = build_root_system("E8");
  auto sampled = check_weyl_automorphism(build_gamma(e8, 2), e8, 1000, 50000);
  CHECK(sampled.passed);
  CHECK_FALSE(sampled.exhaustive);
}

TEST_CASE("Gamma(F4, 4) is isomorphic to Gamma(D4, 1)") {
  SOSGraph f4 = build_gamma(build_root_system("F4"), 4);
  SOSGraph d4 = build_gamma(build_root_system("D4"), 1);
  auto result = check_graph_isomorphism_small(f4, d4);
  REQUIRE(result.isomorphic);
  CHECK(is_isomorphism(f4, d4, result.mapping));
  std::set<VertexId> image(result.mapping.begin(), result.mapping.end());
  CHECK(image.size() == 24);

  // Vertices are twice the D4 roots, adjacent iff they share exactly one
  // non-zero entry, with the same value.
  std::set<RootVector> d4_roots;
  auto d4_system = build_root_system("D4");
  for (const auto& r : d4_system.roots()) d4_roots.insert(r.scaled(2));
  for (VertexId v = 0; v < f4.vertex_count(); ++v) CHECK(d4_roots.count(f4.vertex(v)));
  for (VertexId u = 0; u < f4.vertex_count(); ++u)
    for (VertexId v = u + 1; v < f4.vertex_count(); ++v) {
      const RootVector &a = f4.vertex(u), &b = f4.vertex(v);
      auto common = a.support() & b.support();
      bool one_equal = std::popcount(common) == 1 && a[std::countr_zero(common)] == b[std::countr_zero(common)];
      CHECK(f4.adjacent(u, v) == one_equal);
    }
}

TEST_CASE("automorphism group of Gamma(F4, 4) has order 1152") {
  CHECK(count_automorphisms(build_gamma(build_root_system("F4"), 4)) == 1152);
  // The 6-cycle has the dihedral group of order 12.
  CHECK(count_automorphisms(build_gamma(build_root_system("G2"), 2)) == 12);
}

TEST_CASE("non-isomorphic graphs are told apart") {
  SOSGraph f4 = build_gamma(build_root_system("F4"), 4);
  SOSGraph g2 = build_gamma(build_root_system("G2"), 1);
  auto sizes = check_graph_isomorphism_small(f4, g2);
  CHECK_FALSE(sizes.isomorphic);
  CHECK_FALSE(sizes.reason.empty());

  // Same degree sequence, different structure: C6 against two triangles.
  std::vector<oracle::Edge> cycle{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}};
  std::vector<oracle::Edge> triangles{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
  auto r = check_graph_isomorphism_small(SOSGraph::from_edges(6, cycle), SOSGraph::from_edges(6, triangles));
  CHECK_FALSE(r.isomorphic);

  // A relabelled random graph is recovered.
  SOSGraph g = oracle::random_graph(40, 0.3, 5);
  std::vector<VertexId> perm(40);
  for (VertexId i = 0; i < 40; ++i) perm[i] = (i * 17 + 3) % 40;
  std::vector<oracle::Edge> moved;
  for (auto [u, v] : oracle::edges_of(g)) moved.emplace_back(std::min(perm[u], perm[v]), std::max(perm[u], perm[v]));
  SOSGraph h = SOSGraph::from_edges(40, moved);
  CHECK(is_isomorphism(g, h, perm));
  auto found = check_graph_isomorphism_small(g, h);
  REQUIRE(found.isomorphic);
  CHECK(is_isomorphism(g, h, found.mapping));
}
