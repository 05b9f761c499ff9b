#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "ftc/ftc.hpp"

using namespace ftc;

namespace {

Graph data_graph(const std::string& name) { return load_graph(std::string(FTC_DATA_DIR) + "/" + name); }

// Brute-force fractional total chromatic number oracle for tiny graphs: all
// independent sets of T(G), not just maximal ones.
Rational brute_chi_total(const Graph& g) {
  const int n = g.num_elements();
  auto adj = total_graph_adjacency(g);
  std::vector<std::vector<int>> sets;
  for (long mask = 1; mask < (1L << n); ++mask) {
    std::vector<int> s;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      if (!((mask >> i) & 1)) continue;
      for (int j : s) ok = ok && !adj[i][j];
      s.push_back(i);
    }
    if (ok) sets.push_back(std::move(s));
  }
  return lp::solve_covering_lp(sets, n).value;
}

void expect_resubstitution(const LPSolution& sol, int universe) {
  std::vector<Rational> cover(universe, Rational(0));
  Rational sum = 0;
  for (std::size_t i = 0; i < sol.sets.size(); ++i) {
    EXPECT_GT(sol.weights[i], 0);
    sum += sol.weights[i];
    for (int x : sol.sets[i]) cover[x] += sol.weights[i];
  }
  EXPECT_EQ(sum, sol.value);
  for (int x = 0; x < universe; ++x) EXPECT_GE(cover[x], 1) << x;
}

}  // namespace

TEST(ChiTotal, K4IsFive) {
  Graph g = data_graph("k4.g");
  auto sol = fractional_total_chromatic(g);
  EXPECT_EQ(sol.value, 5);
  EXPECT_GE(sol.value, g.max_degree() + 1);
  expect_resubstitution(sol, g.num_elements());
}

TEST(ChiTotal, K33IsFive) {
  Graph g = data_graph("k33.g");
  auto sol = fractional_total_chromatic(g);
  EXPECT_EQ(sol.value, 5);
  EXPECT_EQ(sol.value, g.max_degree() + 2);
  expect_resubstitution(sol, g.num_elements());
}

TEST(ChiTotal, C5IsTenThirds) {
  Graph g = data_graph("c5.g");
  auto sol = fractional_total_chromatic(g);
  EXPECT_EQ(sol.value, Rational(10, 3));
  EXPECT_EQ(sol.value, brute_chi_total(g));
  expect_resubstitution(sol, g.num_elements());
}

TEST(ChiTotal, MatchesBruteForceOnSmallGraphs) {
  for (const Graph& g : {gen::cycle(3), gen::cycle(4), gen::cycle(6), gen::path(4),
                         gen::complete_bipartite(1, 3), gen::complete_bipartite(2, 3)}) {
    auto sol = fractional_total_chromatic(g);
    EXPECT_EQ(sol.value, brute_chi_total(g)) << format_graph(g);
    EXPECT_GE(sol.value, g.max_degree() + 1);
  }
}

TEST(ChiTotal, AtLeastDeltaPlusOneOnPetersen) {
  Graph g = gen::petersen();
  auto sol = fractional_total_chromatic(g);
  EXPECT_GE(sol.value, 4);
  expect_resubstitution(sol, g.num_elements());
}

TEST(ChiVertex, KnownValues) {
  EXPECT_EQ(fractional_chromatic(gen::cycle(5)).value, Rational(5, 2));
  EXPECT_EQ(fractional_chromatic(gen::petersen()).value, Rational(5, 2));
  EXPECT_EQ(fractional_chromatic(gen::complete(4)).value, 4);
}

TEST(ChiTotal, RejectsBadCertificate) {
  Graph g = gen::cycle(5);
  auto adj = total_graph_adjacency(g);
  // two non-adjacent vertices of C5
  EXPECT_THROW(exact_chi_f(adj, {g.index_of_vertex(0), g.index_of_vertex(2)}), PreconditionError);
}

TEST(Cover, K4UsesEachMatchingOnce) {
  auto c = uniform_pm_cover(data_graph("k4.g"));
  EXPECT_EQ(c.n_cover, 1);
  EXPECT_EQ(c.matchings.size(), 3u);
  EXPECT_EQ(c.total(), 3);
}

TEST(Cover, PetersenUsesAllSix) {
  Graph g = data_graph("petersen.g");
  auto c = uniform_pm_cover(g);
  EXPECT_EQ(c.n_cover, 2);
  EXPECT_EQ(c.matchings.size(), 6u);
  EXPECT_EQ(c.total(), 3 * c.n_cover);
  for (long m : c.multiplicity) EXPECT_EQ(m, 1);
}

TEST(Cover, EdgeCoverageIsExact) {
  for (const Graph& g : {data_graph("k4.g"), data_graph("petersen.g"), data_graph("gp10_3.g"),
                         data_graph("prism.g"), gen::prism(5)}) {
    auto c = uniform_pm_cover(g);
    std::vector<long> cov(g.num_edges(), 0);
    for (std::size_t i = 0; i < c.matchings.size(); ++i) {
      EXPECT_TRUE(is_matching(g, c.matchings[i].edges));
      EXPECT_TRUE(c.matchings[i].perfect);
      for (EdgeId e : c.matchings[i].edges) cov[e] += c.multiplicity[i];
    }
    for (long x : cov) EXPECT_EQ(x, c.n_cover);
    EXPECT_EQ(c.total(), 3 * c.n_cover);
  }
}

TEST(Cover, BridgedCubicRefused) {
  Graph g = data_graph("bridged_cubic.g");
  ASSERT_TRUE(g.is_regular(3));
  try {
    uniform_pm_cover(g);
    FAIL() << "expected a refusal";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("bridge"), std::string::npos) << e.what();
  }
}

TEST(Cover, NonCubicRefused) {
  EXPECT_THROW(uniform_pm_cover(data_graph("k4_subdivided.g")), PreconditionError);
}

TEST(MatchingCoefficient, Values) {
  EXPECT_EQ(matching_coefficient(Rational(1, 4)), 0);
  EXPECT_EQ(matching_coefficient(Rational(1, 3)), Rational(1, 3));
  const double b = 2 * std::sqrt(7.0) - 5;
  const double oracle = 1 - (1 - b) / (3 * b);
  EXPECT_NEAR(to_double(matching_coefficient(Rational(b))), oracle, 1e-12);
  EXPECT_NEAR(oracle, 0.1899, 5e-4);
  EXPECT_LT(matching_coefficient(Rational(1, 5)), 0);
}

TEST(Weights, NonFactorEdgeOutsideRegionsNeverChosen) {
  Graph g = gen::random_cubic_girth({60, 6, 4, 1000});
  auto f = complement_two_factor(g, *find_perfect_matching(g));
  auto b = choose_boundary(g, f, 3);
  SamplerLayout layout(g, f, b.edges);
  auto w = estimate_weights(layout, pq_table(3, 1, 3), 2000, 4);
  EXPECT_EQ(w.violations, 0);
  EXPECT_EQ(w.y_failures, 0);
  int checked = 0;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const int x = g.index_of_edge(e);
    if (f.contains(e) || layout.region_union()[x]) continue;
    ++checked;
    EXPECT_EQ(w.frequency[x], 0) << g.element_at(x).to_string();
  }
  EXPECT_GT(checked, 0);
  EXPECT_EQ(w.outside_other_edge.hits, 0);
}

TEST(Weights, YSetsSumToOneAndIdentityHolds) {
  Graph g = gen::generalized_petersen(10, 3);
  auto f = complement_two_factor(g, *find_perfect_matching(g));
  auto b = choose_boundary(g, f, 3);
  SamplerLayout layout(g, f, b.edges);
  auto w = estimate_weights(layout, pq_table(3, 1, 3), 3000, 5);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    Rational s = w.frequency[g.index_of_vertex(v)];
    for (const auto& inc : g.incident(v)) s += w.frequency[g.index_of_edge(inc.edge)];
    EXPECT_EQ(s, 1) << v;
  }
  EXPECT_EQ(w.identity_sum(), 1);
  for (const auto& fr : w.frequency) {
    EXPECT_GE(fr, 0);
    EXPECT_LE(fr, 1);
  }
}

TEST(Weights, SymmetricBoundaryEdgesAgree) {
  // same GP(24,5) layout as the sampler uniformity check
  const int n = 24;
  Graph g = gen::generalized_petersen(n, 5);
  std::vector<Vertex> succ(2 * n);
  for (int i = 0; i < n; ++i) {
    succ[i] = (i + 1) % n;
    succ[n + i] = n + (i + 5) % n;
  }
  auto f = OrientedTwoFactor::from_successors(g, succ);
  SamplerLayout layout(g, f, {f.out_edge(0), f.out_edge(12), f.out_edge(n + 4), f.out_edge(n + 16)});
  const long trials = 20000;
  auto w = estimate_weights(layout, pq_table(3, 1, 3), trials, 6);
  for (int label : {3, 4, 5}) {
    std::vector<double> rates;
    for (int p = 0; p < layout.num_paths(); ++p)
      for (int x : layout.region(p))
        if (classify_type(layout, x) == label) rates.push_back(to_double(w.frequency[x]));
    ASSERT_EQ(rates.size(), 4u);
    double mean = 0;
    for (double r : rates) mean += r / 4;
    const double sigma = std::sqrt(mean * (1 - mean) / trials);
    for (double r : rates) EXPECT_LT(std::abs(r - mean), 3 * sigma) << "label " << label;
  }
}

TEST(Weights, MixtureHalfWidthShrinks) {
  WeightEstimate a, b;
  a.frequency = {Rational(1, 2)};
  b.frequency = {Rational(1, 4)};
  a.beta = Rational(1, 2);
  b.beta = Rational(1, 4);
  a.beta_hw = b.beta_hw = 0.02;
  a.trials = b.trials = 100;
  auto m = mix_estimates({a, b});
  EXPECT_EQ(m.frequency[0], Rational(3, 8));
  EXPECT_EQ(m.beta, Rational(3, 8));
  EXPECT_NEAR(m.beta_hw, 0.02 / std::sqrt(2.0), 1e-12);
  EXPECT_EQ(m.components, 2);
}

TEST(Assembly, PetersenIdentities) {
  Graph g = data_graph("petersen.g");
  auto cover = uniform_pm_cover(g);
  const int k = 3, ell = 2;
  auto table = pq_table(k, 1, 3);
  std::vector<WeightEstimate> per_factor;
  for (std::size_t i = 0; i < cover.matchings.size(); ++i) {
    auto f = complement_two_factor(g, cover.matchings[i]);
    BoundaryFamily fam;
    per_factor.push_back(
        average_over_decomposition(g, f, table, {ell, false}, 2000, derive_seed(9, i), &fam));
    EXPECT_EQ(fam.source, "certified");
    EXPECT_EQ(per_factor.back().violations, 0);
  }
  auto r = assemble_final(g, per_factor, cover);
  EXPECT_TRUE(r.y_sums_exact);
  EXPECT_EQ(r.identity, 1);
  EXPECT_EQ(r.size, 4);
  EXPECT_LE(to_double(r.alpha), 4.0 / (3 * ell) + 3 * r.alpha_hw);
  EXPECT_EQ(r.edge_weight, (r.alpha + 2 * r.gamma) / 3);
  EXPECT_EQ(r.beta_deficit, r.beta - Rational(1, 4));
  // the coefficient sign follows the deficit
  EXPECT_EQ(r.coefficient_nonnegative, r.beta >= Rational(1, 4));
}

TEST(Assembly, CoverageOneWhenBetaIsAQuarter) {
  // synthetic: every factor reports the uniform 1/4 weighting
  Graph g = gen::complete(4);
  auto cover = uniform_pm_cover(g);
  WeightEstimate w;
  w.frequency.assign(g.num_elements(), Rational(1, 4));
  w.alpha = w.beta = w.gamma = Rational(1, 4);
  std::vector<WeightEstimate> ws(cover.matchings.size(), w);
  auto r = assemble_final(g, ws, cover);
  EXPECT_EQ(r.matching_coefficient, 0);
  EXPECT_EQ(r.min_coverage, 1);
  EXPECT_EQ(r.max_coverage, 1);
  EXPECT_TRUE(r.y_sums_exact);
}

TEST(Thinning, KeepProbabilityHitsTarget) {
  EXPECT_DOUBLE_EQ(thinning_keep_probability(0.4, 0.3), 0.75);
  EXPECT_DOUBLE_EQ(thinning_keep_probability(0.0, 0.0), 1.0);
  EXPECT_THROW(thinning_keep_probability(0.2, 0.3), PreconditionError);
  const long n = 100000;
  std::vector<ElementMask> sets(n, ElementMask{1, 1, 0});
  for (long i = 0; i < n; i += 2) sets[i][0] = 0;
  Rng rng(1);
  thin_element(sets, 0, 0.75, rng);
  long with = 0;
  for (const auto& s : sets) {
    with += s[0];
    EXPECT_EQ(s[1], 1);
    EXPECT_EQ(s[2], 0);
  }
  const double expect = 0.375 * n, sigma = std::sqrt(n / 2 * 0.75 * 0.25);
  EXPECT_LT(std::abs(with - expect), 3 * sigma);
}

TEST(Multiset, ExactFromLp) {
  for (const Graph& g : {gen::cycle(5), gen::cycle(3), gen::complete(4), gen::path(3)}) {
    auto sol = fractional_total_chromatic(g);
    const int slots = sol.value <= 4 ? 4 : 5;
    auto ms = to_exact_multiset(sol, g.num_elements(), slots);
    EXPECT_EQ(static_cast<long>(ms.sets.size()), slots * ms.n_cover);
    for (long c : multiset_coverage(ms, g.num_elements())) EXPECT_EQ(c, ms.n_cover);
    for (const auto& s : ms.sets) EXPECT_TRUE(is_total_independent(g, s));
  }
  EXPECT_THROW(to_exact_multiset(fractional_total_chromatic(gen::complete(4)), 10, 4),
               PreconditionError);
}

TEST(Glue, TwoSingletonsMakeK2) {
  Graph k1(1, {});
  TisMultiset w{{ElementMask{1}, ElementMask{0}, ElementMask{0}, ElementMask{0}}, 1};
  auto r = bridge_glue(k1, w, 0, k1, w, 0);
  const Graph& g = r.graph;
  ASSERT_EQ(g.num_vertices(), 2);
  ASSERT_EQ(g.num_edges(), 1);
  ASSERT_EQ(r.multiset.sets.size(), 4u);
  for (long c : multiset_coverage(r.multiset, g.num_elements())) EXPECT_EQ(c, 1);
  for (const auto& s : r.multiset.sets) EXPECT_TRUE(is_total_independent(g, s));
}

TEST(Glue, TwoTriangles) {
  Graph c3 = data_graph("c3.g");
  auto ms = to_exact_multiset(fractional_total_chromatic(c3), c3.num_elements(), 4);
  auto r = bridge_glue(c3, ms, 0, c3, ms, 1);
  const Graph& g = r.graph;
  EXPECT_EQ(g.num_vertices(), 6);
  EXPECT_EQ(g.num_edges(), 7);
  EXPECT_EQ(static_cast<long>(r.multiset.sets.size()), 4 * ms.n_cover);
  for (long c : multiset_coverage(r.multiset, g.num_elements())) EXPECT_EQ(c, ms.n_cover);
  for (const auto& s : r.multiset.sets) EXPECT_TRUE(is_total_independent(g, s));
  // Y-set of a bridge endpoint (degree 3) sums to 4N
  for (Vertex v : {0, 4}) {
    ASSERT_EQ(g.degree(v), 3);
    long y = 0;
    for (const auto& s : r.multiset.sets) y += y_count(g, s, v);
    EXPECT_EQ(y, 4 * ms.n_cover);
  }
}

TEST(Glue, RejectsInexactMultiset) {
  Graph k1(1, {});
  TisMultiset bad{{ElementMask{1}, ElementMask{1}, ElementMask{0}, ElementMask{0}}, 1};
  TisMultiset good{{ElementMask{1}, ElementMask{0}, ElementMask{0}, ElementMask{0}}, 1};
  EXPECT_THROW(bridge_glue(k1, bad, 0, k1, good, 0), PreconditionError);
  TisMultiset short_ms{{ElementMask{1}, ElementMask{0}}, 1};
  EXPECT_THROW(bridge_glue(k1, short_ms, 0, k1, good, 0), PreconditionError);
}
