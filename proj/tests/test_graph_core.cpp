#include <gtest/gtest.h>

#include <set>

#include "ftc/ftc.hpp"

using namespace ftc;

namespace {

std::string k4_text() {
  return "c K4\np 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n";
}

int brute_girth(const Graph& g) {
  // shortest cycle through each edge: remove it, BFS between the ends
  int best = kInfiniteGirth;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    std::vector<std::pair<int, int>> rest;
    for (EdgeId f = 0; f < g.num_edges(); ++f)
      if (f != e) rest.emplace_back(g.edge(f).u, g.edge(f).v);
    Graph h(g.num_vertices(), rest);
    const Vertex src[] = {g.edge(e).u};
    auto d = vertex_bfs(h, src);
    if (d[g.edge(e).v] >= 0) best = std::min(best, d[g.edge(e).v] + 1);
  }
  return best;
}

bool brute_bridge(const Graph& g, EdgeId e) {
  std::vector<std::pair<int, int>> rest;
  for (EdgeId f = 0; f < g.num_edges(); ++f)
    if (f != e) rest.emplace_back(g.edge(f).u, g.edge(f).v);
  Graph h(g.num_vertices(), rest);
  const Vertex src[] = {g.edge(e).u};
  return vertex_bfs(h, src)[g.edge(e).v] < 0;
}

void expect_two_factor(const Graph& g, const OrientedTwoFactor& f) {
  std::vector<int> deg(g.num_vertices(), 0);
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (f.contains(e)) {
      ++deg[g.edge(e).u];
      ++deg[g.edge(e).v];
    }
  for (int d : deg) EXPECT_EQ(d, 2);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    EXPECT_EQ(f.pred(f.succ(v)), v);
    EXPECT_TRUE(g.adjacent(v, f.succ(v)));
  }
}

}  // namespace

TEST(GraphIo, ParsesK4) {
  Graph g = parse_graph(k4_text());
  EXPECT_EQ(g.num_vertices(), 4);
  EXPECT_EQ(g.num_edges(), 6);
  EXPECT_TRUE(g.is_regular(3));
}

TEST(GraphIo, RejectsLoop) { EXPECT_THROW(parse_graph("p 2 1\ne 1 1\n"), PreconditionError); }

TEST(GraphIo, RejectsBadInput) {
  EXPECT_THROW(parse_graph("e 1 2\n"), PreconditionError);
  EXPECT_THROW(parse_graph("p 2 2\ne 1 2\n"), PreconditionError);
  EXPECT_THROW(parse_graph("p 2 1\ne 1 3\n"), PreconditionError);
  EXPECT_THROW(parse_graph("p 3 2\ne 1 2\ne 2 1\n"), PreconditionError);
  EXPECT_THROW(parse_graph("p 2 1\nx 1 2\n"), PreconditionError);
}

TEST(GraphIo, PetersenFileIsCubic) {
  Graph g = load_graph(std::string(FTC_DATA_DIR) + "/petersen.g");
  EXPECT_EQ(g.num_vertices(), 10);
  EXPECT_EQ(g.num_edges(), 15);
  std::vector<int> deg(10, 0);
  for (const auto& e : g.edges()) {
    ++deg[e.u];
    ++deg[e.v];
  }
  for (int d : deg) EXPECT_EQ(d, 3);
}

TEST(GraphIo, RoundTripIsCanonical) {
  Graph g = gen::petersen();
  const std::string text = format_graph(g);
  EXPECT_EQ(format_graph(parse_graph(text)), text);
}

TEST(Girth, SmallOracles) {
  EXPECT_EQ(gen::complete(4).girth(), 3);
  EXPECT_EQ(gen::petersen().girth(), 5);
  EXPECT_EQ(gen::path(5).girth(), kInfiniteGirth);
  for (const Graph& g : {gen::prism(5), gen::generalized_petersen(10, 3), gen::complete_bipartite(3, 3)})
    EXPECT_EQ(g.girth(), brute_girth(g));
}

TEST(TotalDistance, Examples) {
  Graph p = gen::path(4);  // 0-1-2-3
  EXPECT_EQ(total_distance(p, TotalElement::edge(0, 1), TotalElement::vertex(0)), 1);
  EXPECT_EQ(total_distance(p, TotalElement::vertex(2), TotalElement::vertex(2)), 0);
  EXPECT_EQ(total_distance(p, TotalElement::edge(0, 1), TotalElement::edge(2, 3)), 2);
}

TEST(TotalDistance, EdgeDistanceMatchesTotalBfs) {
  Graph g = gen::generalized_petersen(10, 3);
  for (EdgeId e = 0; e < g.num_edges(); e += 3)
    for (EdgeId f = 0; f < g.num_edges(); ++f)
      EXPECT_EQ(edge_distance(g, e, f),
                total_distance(g, g.element_at(g.index_of_edge(e)), g.element_at(g.index_of_edge(f))));
}

TEST(Neighbourhood, RadiusZeroAndOne) {
  Graph g = gen::cycle(8);
  const EdgeId b[] = {*g.find_edge(0, 1)};
  EXPECT_TRUE(neighbourhood(g, b, 0).empty());
  auto n1 = neighbourhood(g, b, 1);
  std::set<int> want{g.index_of_vertex(0), g.index_of_vertex(1), g.index_of_edge(b[0])};
  EXPECT_EQ(std::set<int>(n1.begin(), n1.end()), want);
}

TEST(Neighbourhood, SixVerticesAroundFactorEdgeInHighGirthCubic) {
  Graph g = gen::random_cubic_girth({40, 6, 3, 1000});
  auto f = complement_two_factor(g, *find_perfect_matching(g));
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!f.contains(e)) continue;
    const EdgeId b[] = {e};
    int verts = 0;
    for (int x : neighbourhood(g, b, 2)) verts += g.index_is_vertex(x);
    EXPECT_EQ(verts, 6);
  }
}

TEST(Neighbourhood, MatchesTotalBfsDefinition) {
  Graph g = gen::petersen();
  const EdgeId b[] = {0, 9};
  auto got = neighbourhood(g, b, 2);
  std::vector<int> src{g.index_of_edge(0), g.index_of_edge(9)};
  auto dist = total_bfs(g, src);
  std::set<Vertex> inside;
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (dist[v] >= 0 && dist[v] <= 2) inside.insert(v);
  std::set<int> want;
  for (Vertex v : inside) want.insert(v);
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (inside.count(g.edge(e).u) && inside.count(g.edge(e).v)) want.insert(g.index_of_edge(e));
  EXPECT_EQ(std::set<int>(got.begin(), got.end()), want);
}

TEST(PerfectMatchings, Counts) {
  EXPECT_EQ(perfect_matchings(gen::complete(4), 100).matchings.size(), 3u);
  EXPECT_EQ(perfect_matchings(gen::petersen(), 100).matchings.size(), 6u);
  EXPECT_EQ(perfect_matchings(gen::cycle(6), 100).matchings.size(), 2u);
  EXPECT_TRUE(perfect_matchings(gen::cycle(5), 100).matchings.empty());
}

TEST(PerfectMatchings, CapTruncates) {
  auto en = perfect_matchings(gen::petersen(), 4);
  EXPECT_TRUE(en.truncated);
  EXPECT_EQ(en.matchings.size(), 4u);
}

TEST(PerfectMatchings, BlossomFindsOneOnLargeCubic) {
  Graph g = gen::random_cubic_girth({200, 7, 1, 1000});
  auto m = find_perfect_matching(g);
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->edges.size(), 100u);
  EXPECT_TRUE(is_matching(g, m->edges));
}

TEST(TwoFactor, K4MinusMatchingIsFourCycle) {
  Graph g = gen::complete(4);
  for (const auto& m : perfect_matchings(g, 10).matchings) {
    auto f = complement_two_factor(g, m);
    ASSERT_EQ(f.cycles().size(), 1u);
    EXPECT_EQ(f.cycles()[0].size(), 4u);
    expect_two_factor(g, f);
  }
}

TEST(TwoFactor, PetersenComplementsAreTwoFiveCycles) {
  Graph g = gen::petersen();
  for (const auto& m : perfect_matchings(g, 10).matchings) {
    auto f = complement_two_factor(g, m);
    ASSERT_EQ(f.cycles().size(), 2u);
    EXPECT_EQ(f.cycles()[0].size(), 5u);
    EXPECT_EQ(f.cycles()[1].size(), 5u);
  }
}

TEST(TwoFactor, PrismMinusRungsIsTwoTriangles) {
  Graph g = gen::prism(3);
  std::vector<EdgeId> rungs;
  for (int i = 0; i < 3; ++i) rungs.push_back(*g.find_edge(i, i + 3));
  auto f = complement_two_factor(g, make_matching(g, rungs));
  ASSERT_EQ(f.cycles().size(), 2u);
  EXPECT_EQ(f.cycles()[0].size(), 3u);
  EXPECT_EQ(f.cycles()[1].size(), 3u);
}

TEST(TwoFactor, OrientationPersistsThroughArcs) {
  Graph g = gen::petersen();
  auto f = complement_two_factor(g, *find_perfect_matching(g));
  std::vector<Vertex> succ(g.num_vertices());
  for (auto [u, v] : f.arcs()) succ[u] = v;
  auto h = OrientedTwoFactor::from_successors(g, succ);
  EXPECT_EQ(h.successors(), f.successors());
  EXPECT_EQ(f.tail(g, f.out_edge(3)), 3);
  EXPECT_EQ(f.head(g, f.out_edge(3)), f.succ(3));
}

TEST(TwoFactor, RejectsNonEdgeArc) {
  Graph g = gen::cycle(4);
  EXPECT_THROW(OrientedTwoFactor::from_successors(g, {2, 3, 0, 1}), PreconditionError);
}

TEST(TwoFactorize, CycleIsItsOwnFactor) {
  Graph g = gen::cycle(7);
  auto fs = two_factorize_even(g);
  ASSERT_EQ(fs.size(), 1u);
  for (EdgeId e = 0; e < g.num_edges(); ++e) EXPECT_TRUE(fs[0].contains(e));
}

TEST(TwoFactorize, EvenRegularGraphsSplit) {
  for (const Graph& g : {gen::complete(5), gen::circulant(9, {1, 2}), gen::circulant(13, {1, 3, 5})}) {
    auto fs = two_factorize_even(g);
    ASSERT_EQ(static_cast<int>(fs.size()), g.max_degree() / 2);
    std::vector<int> used(g.num_edges(), 0);
    for (const auto& f : fs) {
      expect_two_factor(g, f);
      for (EdgeId e = 0; e < g.num_edges(); ++e) used[e] += f.contains(e);
    }
    for (int u : used) EXPECT_EQ(u, 1);
  }
}

TEST(Mates, CountsFollowDegree) {
  Graph c = gen::random_cubic_girth({20, 4, 5, 1000});
  auto fc = complement_two_factor(c, *find_perfect_matching(c));
  for (Vertex v = 0; v < c.num_vertices(); ++v) EXPECT_EQ(mates(c, fc, v).size(), 1u);
  Graph q = gen::circulant(9, {1, 2});
  auto fq = two_factorize_even(q).front();
  for (Vertex v = 0; v < q.num_vertices(); ++v) EXPECT_EQ(mates(q, fq, v).size(), 2u);
  Graph cy = gen::cycle(6);
  auto fy = two_factorize_even(cy).front();
  EXPECT_TRUE(mates(cy, fy, 0).empty());
}

TEST(Generators, NamedFamilies) {
  Graph k4 = gen::complete(4);
  EXPECT_EQ(k4.num_edges(), 6);
  Graph p = gen::generalized_petersen(5, 2);
  EXPECT_TRUE(p.is_regular(3));
  EXPECT_EQ(p.girth(), 5);
  EXPECT_EQ(format_graph(p), format_graph(gen::petersen()));
}

TEST(Generators, RandomCubicGirthSeven) {
  Graph g = gen::random_cubic_girth({200, 7, 1, 1000});
  EXPECT_TRUE(g.is_regular(3));
  EXPECT_EQ(g.num_vertices(), 200);
  EXPECT_GE(brute_girth(g), 7);
  EXPECT_TRUE(is_connected(g));
  for (EdgeId e = 0; e < g.num_edges(); e += 7) EXPECT_FALSE(brute_bridge(g, e));
  EXPECT_TRUE(is_bridgeless(g));
}

TEST(Generators, RandomCubicIsReproducible) {
  EXPECT_EQ(format_graph(gen::random_cubic_girth({60, 5, 9, 1000})),
            format_graph(gen::random_cubic_girth({60, 5, 9, 1000})));
}

TEST(Bridges, MatchBruteForce) {
  Graph g = load_graph(std::string(FTC_DATA_DIR) + "/bridged_cubic.g");
  EXPECT_TRUE(g.is_regular(3));
  auto br = bridges(g);
  ASSERT_EQ(br.size(), 1u);
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    EXPECT_EQ(brute_bridge(g, e), e == br[0]) << "edge " << e;
}

TEST(TotalSets, MembershipHelpers) {
  Graph g = gen::cycle(3);
  ElementMask m(g.num_elements(), 0);
  m[g.index_of_vertex(0)] = 1;
  m[g.index_of(TotalElement::edge(1, 2))] = 1;
  EXPECT_TRUE(is_total_independent(g, m));
  EXPECT_TRUE(is_full(g, m));
  EXPECT_TRUE(exactly_one_of_y(g, m));
  m[g.index_of_vertex(1)] = 1;
  EXPECT_FALSE(is_total_independent(g, m));
}
