#include <gtest/gtest.h>

#include <set>

#include "ftc/ftc.hpp"

using namespace ftc;

namespace {

struct CycleCase {
  Graph g;
  OrientedTwoFactor f;
};

CycleCase single_cycle(int len) {
  CycleCase c{gen::cycle(len), {}};
  c.f = two_factorize_even(c.g).front();
  return c;
}

// Pairs every fourth vertex with the one two steps later: every F-edge meets
// at most one paired vertex, so Q has maximum degree 2.
ConstraintGraph spaced_pairs(const Graph& g, const OrientedTwoFactor& f, int count) {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  const int n = g.num_vertices();
  for (int j = 0; j < count; ++j) {
    const Vertex x = (8 * j) % n;
    const Vertex y = (8 * j + 4 + 2 * n / 3) % n;
    pairs.emplace_back(x, y);
  }
  return ConstraintGraph::from_vertex_pairs(g, f, pairs);
}

void expect_partition(const OrientedTwoFactor& f, const Graph& g, const Decomposition& d) {
  std::vector<int> used(g.num_edges(), 0);
  for (const auto& b : d.sets)
    for (EdgeId e : b.edges) ++used[e];
  for (EdgeId e = 0; e < g.num_edges(); ++e) EXPECT_EQ(used[e], f.contains(e) ? 1 : 0) << e;
}

}  // namespace

TEST(PathPartition, ExactDivision) {
  auto c = single_cycle(3 * 7);
  auto pp = path_partition(c.f, 7);
  ASSERT_EQ(pp.per_cycle.size(), 1u);
  ASSERT_EQ(pp.per_cycle[0].size(), 3u);
  for (const auto& p : pp.per_cycle[0]) EXPECT_EQ(p.edges.size(), 7u);
}

TEST(PathPartition, RemainderGoesFirst) {
  const int ell = 5;
  auto c = single_cycle(3 * ell + 1);
  auto pp = path_partition(c.f, ell);
  ASSERT_EQ(pp.per_cycle[0].size(), 4u);
  std::vector<std::size_t> sizes;
  std::size_t total = 0;
  for (const auto& p : pp.per_cycle[0]) {
    sizes.push_back(p.edges.size());
    total += p.edges.size();
  }
  EXPECT_EQ(sizes, (std::vector<std::size_t>{1, 5, 5, 5}));
  EXPECT_EQ(total, 16u);
}

TEST(PathPartition, CycleOfLengthEllRejectedInStrictMode) {
  auto c = single_cycle(6);
  EXPECT_THROW(path_partition(c.f, 6, true), PreconditionError);
  EXPECT_NO_THROW(path_partition(c.f, 6, false));
}

TEST(TernarySequence, Bases) {
  EXPECT_EQ(ternary_sequence(6), (std::vector<int>{0, 1, 2, 0, 1, 2}));
  EXPECT_EQ(ternary_sequence(7), (std::vector<int>{0, 1, 0, 2, 0, 1, 2}));
  EXPECT_EQ(ternary_sequence(9), (std::vector<int>{0, 1, 2, 0, 1, 2, 0, 1, 2}));
}

TEST(TernarySequence, ExhaustiveSixToFiveHundred) {
  for (int m = 6; m <= 500; ++m) {
    auto s = ternary_sequence(m);
    ASSERT_EQ(static_cast<int>(s.size()), m);
    ASSERT_TRUE(ternary_sequence_valid(s)) << "m = " << m;
  }
}

TEST(TernarySequence, CheckerRejectsViolations) {
  EXPECT_FALSE(ternary_sequence_valid({0, 1, 2, 0, 1, 2, 2}));  // adjacent equal
  EXPECT_FALSE(ternary_sequence_valid({1, 0, 2, 0, 1, 2}));     // wrong start
  EXPECT_FALSE(ternary_sequence_valid({0, 1, 2, 1, 2, 1, 2, 0, 1, 2}));  // zeros too far apart
  EXPECT_THROW(ternary_sequence(5), PreconditionError);
}

TEST(StrongColouring, NoEdgesAnyPartition) {
  std::vector<std::vector<int>> adj(6);
  std::vector<std::vector<int>> classes{{0, 1, 2}, {3, 4, 5}};
  auto c = strong_colour(adj, classes, 3);
  EXPECT_TRUE(is_strong_colouring(adj, classes, 3, c));
}

TEST(StrongColouring, DisjointEdgesAcrossClasses) {
  // classes of size 2 with cross edges; ell = 2 colours
  std::vector<std::vector<int>> classes{{0, 1}, {2, 3}, {4, 5}, {6, 7}};
  std::vector<std::vector<int>> adj(8);
  auto join = [&](int a, int b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  join(0, 2);
  join(3, 4);
  join(5, 6);
  join(7, 1);
  auto oracle = detail::strong_colour_exhaustive(adj, classes, 2);
  ASSERT_TRUE(oracle.has_value());
  auto c = strong_colour(adj, classes, 2);
  EXPECT_TRUE(is_strong_colouring(adj, classes, 2, c));
}

TEST(StrongColouring, CheckerCatchesBadColourings) {
  std::vector<std::vector<int>> adj{{1}, {0}, {}};
  std::vector<std::vector<int>> classes{{0, 2}, {1}};
  EXPECT_FALSE(is_strong_colouring(adj, classes, 2, {0, 0, 1}));  // improper
  EXPECT_FALSE(is_strong_colouring(adj, classes, 2, {0, 1, 0}));  // repeat in class
  EXPECT_TRUE(is_strong_colouring(adj, classes, 2, {0, 1, 1}));
}

TEST(StrongColouring, RandomBoundedDegreeInstances) {
  // classes of size r, aux degree well below the existence bound
  const int r = 12, nclasses = 30;
  Rng rng(5);
  for (int round = 0; round < 3; ++round) {
    const int n = r * nclasses;
    std::vector<std::vector<int>> classes(nclasses), adj(n);
    for (int x = 0; x < n; ++x) classes[x / r].push_back(x);
    for (int x = 0; x < n; ++x)
      for (int t = 0; t < 2; ++t) {
        const int y = uniform_int(rng, 0, n - 1);
        if (y / r == x / r || std::find(adj[x].begin(), adj[x].end(), y) != adj[x].end()) continue;
        adj[x].push_back(y);
        adj[y].push_back(x);
      }
    StrongColourOptions opt;
    opt.seed = static_cast<std::uint64_t>(round + 1);
    auto c = strong_colour(adj, classes, r, opt);
    EXPECT_TRUE(is_strong_colouring(adj, classes, r, c));
  }
}

TEST(VerifySparse, EveryEllthEdgePasses) {
  const int ell = 5;
  auto c = single_cycle(6 * ell);
  auto edges = cycle_edges(c.f, 0);
  std::vector<EdgeId> b;
  for (int i = 0; i < 6 * ell; i += ell + 1) b.push_back(edges[i]);
  auto r = verify_sparse(c.g, c.f, b, ell);
  EXPECT_TRUE(r.ok());
}

TEST(VerifySparse, IncidentPairFailsFourDistance) {
  auto c = single_cycle(40);
  auto edges = cycle_edges(c.f, 0);
  std::vector<EdgeId> b{edges[0], edges[1], edges[20]};
  auto r = verify_sparse(c.g, c.f, b, 2);
  EXPECT_FALSE(r.four_distant);
  ASSERT_TRUE(r.close_pair.has_value());
  EXPECT_EQ(*r.close_pair, std::pair(std::min(edges[0], edges[1]), std::max(edges[0], edges[1])));
}

TEST(VerifySparse, LongComponentFailsLength) {
  const int ell = 3;
  auto c = single_cycle(40);
  auto edges = cycle_edges(c.f, 0);
  // components of lengths 22 (= 7 ell + 1) and 16
  std::vector<EdgeId> b{edges[0], edges[23]};
  auto r = verify_sparse(c.g, c.f, b, ell);
  EXPECT_TRUE(r.four_distant);
  EXPECT_FALSE(r.lengths_ok);
  EXPECT_EQ(r.bad_component.size(), 22u);
  EXPECT_EQ(r.max_length, 22);
}

TEST(VerifySparse, OneEdgePerCycleFailsTwoPerCycle) {
  auto c = single_cycle(20);
  auto r = verify_sparse(c.g, c.f, {cycle_edges(c.f, 0)[0]}, 2);
  EXPECT_FALSE(r.two_per_cycle);
}

TEST(Decompose, SingleCycleEllEight) {
  const int ell = 8;
  auto c = single_cycle(6 * ell);
  auto d = decompose(c.g, c.f, {ell, false});
  EXPECT_FALSE(d.rotation_fallback);
  ASSERT_EQ(static_cast<int>(d.sets.size()), 3 * ell);
  expect_partition(c.f, c.g, d);
  for (const auto& b : d.sets) {
    auto r = verify_sparse(c.g, c.f, b.edges, ell);
    EXPECT_TRUE(r.ok());
  }
}

TEST(Decompose, SingleCycleEllEightWithQ) {
  const int ell = 8;
  auto c = single_cycle(6 * ell);
  auto q = spaced_pairs(c.g, c.f, 4);
  ASSERT_EQ(q.max_degree(), 2);
  auto d = decompose(c.g, c.f, {ell, false}, &q, 3);
  ASSERT_EQ(static_cast<int>(d.sets.size()), 3 * ell);
  expect_partition(c.f, c.g, d);
  for (const auto& b : d.sets) {
    auto r = verify_sparse(c.g, c.f, b.edges, ell, &q);
    EXPECT_TRUE(r.ok());
    EXPECT_TRUE(r.q_independent);
  }
}

TEST(Decompose, SingleCycleEllNinetySixStrictWithQ) {
  const int ell = 96;
  auto c = single_cycle(6 * ell);
  auto q = spaced_pairs(c.g, c.f, 30);
  ASSERT_EQ(q.max_degree(), 2);
  ASSERT_LE(strict_ell_bound(q), ell);
  auto d = decompose(c.g, c.f, {ell, true}, &q, 1);
  ASSERT_EQ(static_cast<int>(d.sets.size()), 3 * ell);
  EXPECT_TRUE(d.partition);
  expect_partition(c.f, c.g, d);
  EXPECT_TRUE(d.all_sparse());
  for (const auto& b : d.sets) EXPECT_TRUE(verify_sparse(c.g, c.f, b.edges, ell, &q).ok());
}

TEST(Decompose, StrictRejectsSmallEll) {
  auto c = single_cycle(60);
  EXPECT_THROW(decompose(c.g, c.f, {8, true}), PreconditionError);
}

TEST(Decompose, PrismWithLongCycles) {
  const int ell = 6;
  Graph g = gen::prism(6 * ell);
  std::vector<EdgeId> rungs;
  for (int i = 0; i < 6 * ell; ++i) rungs.push_back(*g.find_edge(i, i + 6 * ell));
  auto f = complement_two_factor(g, make_matching(g, rungs));
  auto d = decompose(g, f, {ell, false}, nullptr, 7);
  EXPECT_FALSE(d.rotation_fallback);
  ASSERT_EQ(static_cast<int>(d.sets.size()), 3 * ell);
  expect_partition(f, g, d);
  EXPECT_TRUE(d.all_sparse());
}

TEST(Decompose, UncolourableSmallEllFallsBack) {
  // rung-aligned paths on both cycles would need three colours out of two
  Graph g = gen::prism(30);
  std::vector<EdgeId> rungs;
  for (int i = 0; i < 30; ++i) rungs.push_back(*g.find_edge(i, i + 30));
  auto f = complement_two_factor(g, make_matching(g, rungs));
  auto d = decompose(g, f, {2, false}, nullptr, 7);
  EXPECT_TRUE(d.rotation_fallback);
  EXPECT_EQ(d.fallback_reason, "colouring");
}

TEST(Decompose, ShortCyclesFallBackToRotation) {
  Graph g = gen::petersen();
  auto f = complement_two_factor(g, *find_perfect_matching(g));
  auto d = decompose(g, f, {2, false});
  EXPECT_TRUE(d.rotation_fallback);
  EXPECT_EQ(d.fallback_reason, "short-cycle");
  EXPECT_FALSE(d.partition);
  EXPECT_EQ(d.sets.size(), 6u);
  for (const auto& b : d.sets) EXPECT_EQ(b.edges.size(), 2u);
  EXPECT_THROW(decompose(g, f, {83, true}), PreconditionError);
}

TEST(Decompose, DeterministicForSeed) {
  auto c = single_cycle(60);
  auto a = decompose(c.g, c.f, {3, false}, nullptr, 11);
  auto b = decompose(c.g, c.f, {3, false}, nullptr, 11);
  ASSERT_EQ(a.sets.size(), b.sets.size());
  for (std::size_t i = 0; i < a.sets.size(); ++i) EXPECT_EQ(a.sets[i].edges, b.sets[i].edges);
}
