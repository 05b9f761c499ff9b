#ifndef FTC_ASSEMBLER_HPP
#define FTC_ASSEMBLER_HPP

#include <algorithm>
#include <array>
#include <bitset>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ftc/errors.hpp"
#include "ftc/graph.hpp"
#include "ftc/matching.hpp"
#include "ftc/rational.hpp"
#include "ftc/recurrence.hpp"
#include "ftc/sampler.hpp"
#include "ftc/simplex.hpp"
#include "ftc/sparse_decomp.hpp"
#include "ftc/total_set.hpp"
#include "ftc/two_factor.hpp"

namespace ftc {

inline constexpr double kZ99 = 2.5758293035489004;

// ---------------------------------------------------------------------------
// Weight estimates

/// Mean and 99% half-width of a per-trial quantity.
struct RunningMean {
  long n = 0;
  double sum = 0, sumsq = 0;
  void add(double x) {
    ++n;
    sum += x;
    sumsq += x * x;
  }
  double mean() const { return n ? sum / n : 0.0; }
  double half_width() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, (sumsq - n * m * m) / (n - 1));
    return kZ99 * std::sqrt(var / n);
  }
};

struct TypeAggregate {
  long elements = 0;  ///< elements carrying this label
  long hits = 0;      ///< summed over trials
};

/// Empirical inclusion frequencies of the resolved sets for one (F, B), or a
/// uniform mixture over several B.
///
/// alpha, beta, gamma are the mean frequencies of non-F edges, vertices and
/// F-edges, as exact ratios of counts; (delta-2) alpha + beta + 2 gamma = 1 holds
/// exactly whenever every sample has exactly one member in each Y-set.
struct WeightEstimate {
  long trials = 0;                 ///< per boundary set
  int components = 1;              ///< boundary sets mixed
  std::vector<Rational> frequency; ///< per element index
  Rational alpha, beta, gamma;
  double alpha_hw = 0, beta_hw = 0, gamma_hw = 0;
  int delta = 3;
  long violations = 0;
  long y_failures = 0;  ///< (vertex, trial) pairs with a Y-count other than 1
  std::array<TypeAggregate, 12> by_type{};  ///< index 1..11 = region label
  TypeAggregate outside_vertex, outside_f_edge, outside_other_edge;
  std::array<long, kConflictTypes> conflicts{};

  Rational identity_sum() const { return Rational(delta - 2) * alpha + beta + 2 * gamma; }
};

/// Region labels per element: 0 outside every region, -1 in several.
inline std::vector<int> region_labels(const SamplerLayout& layout) {
  const Graph& g = layout.graph();
  std::vector<int> out(g.num_elements(), 0);
  for (int x = 0; x < g.num_elements(); ++x) {
    if (!layout.region_union()[x]) continue;
    try {
      auto l = classify_type(layout, x);
      out[x] = l ? *l : 0;
    } catch (const PreconditionError&) {
      out[x] = -1;
    }
  }
  return out;
}

inline WeightEstimate estimate_weights(const SamplerLayout& layout, const RecurrenceTable& table,
                                       long trials, std::uint64_t seed) {
  detail::require(trials >= 1, "trials must be positive");
  const Graph& g = layout.graph();
  const OrientedTwoFactor& f = layout.factor();
  const int n = g.num_vertices();
  int f_edges = 0;
  for (EdgeId e = 0; e < g.num_edges(); ++e) f_edges += f.contains(e);
  const int other_edges = g.num_edges() - f_edges;
  RunningMean a, b, c;
  long y_fail = 0;
  auto stats = run_trials(layout, table, seed, trials, [&](const SampleResult& r) {
    long va = 0, vb = 0, vc = 0;
    for (Vertex v = 0; v < n; ++v) {
      vb += r.resolved[g.index_of_vertex(v)];
      if (y_count(g, r.resolved, v) != 1) ++y_fail;
    }
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const bool in = r.resolved[g.index_of_edge(e)];
      if (f.contains(e)) vc += in;
      else va += in;
    }
    if (other_edges > 0) a.add(static_cast<double>(va) / other_edges);
    b.add(static_cast<double>(vb) / n);
    c.add(static_cast<double>(vc) / f_edges);
  });
  WeightEstimate w;
  w.trials = stats.trials;
  w.delta = g.max_degree();
  w.violations = stats.violations;
  w.y_failures = y_fail;
  w.conflicts = stats.conflict_totals();
  w.frequency.resize(g.num_elements());
  BigInt hv = 0, hf = 0, ho = 0;
  for (int x = 0; x < g.num_elements(); ++x) {
    w.frequency[x] = Rational(stats.element_hits[x], stats.trials);
    if (g.index_is_vertex(x)) hv += stats.element_hits[x];
    else if (f.contains(g.edge_of_index(x))) hf += stats.element_hits[x];
    else ho += stats.element_hits[x];
  }
  w.beta = Rational(hv) / (BigInt(n) * stats.trials);
  w.gamma = Rational(hf) / (BigInt(f_edges) * stats.trials);
  w.alpha = other_edges > 0 ? Rational(ho) / (BigInt(other_edges) * stats.trials) : Rational(0);
  w.alpha_hw = a.half_width();
  w.beta_hw = b.half_width();
  w.gamma_hw = c.half_width();
  auto labels = region_labels(layout);
  for (int x = 0; x < g.num_elements(); ++x) {
    const long h = stats.element_hits[x];
    if (labels[x] > 0) {
      ++w.by_type[labels[x]].elements;
      w.by_type[labels[x]].hits += h;
    } else if (labels[x] == 0) {
      TypeAggregate& t = g.index_is_vertex(x)                  ? w.outside_vertex
                         : f.contains(g.edge_of_index(x)) ? w.outside_f_edge
                                                          : w.outside_other_edge;
      ++t.elements;
      t.hits += h;
    }
  }
  return w;
}

/// Uniform mixture of estimates with equal trial counts.
inline WeightEstimate mix_estimates(const std::vector<WeightEstimate>& parts) {
  detail::require(!parts.empty(), "nothing to mix");
  WeightEstimate w;
  const Rational share(1, static_cast<long>(parts.size()));
  w.trials = parts.front().trials;
  w.components = static_cast<int>(parts.size());
  w.delta = parts.front().delta;
  w.frequency.assign(parts.front().frequency.size(), Rational(0));
  double ahw = 0, bhw = 0, chw = 0;
  for (const auto& p : parts) {
    detail::require(p.trials == w.trials, "mixture parts need equal trial counts");
    for (std::size_t x = 0; x < p.frequency.size(); ++x) w.frequency[x] += share * p.frequency[x];
    w.alpha += share * p.alpha;
    w.beta += share * p.beta;
    w.gamma += share * p.gamma;
    // parts are independent; half-widths combine in quadrature
    ahw += p.alpha_hw * p.alpha_hw;
    bhw += p.beta_hw * p.beta_hw;
    chw += p.gamma_hw * p.gamma_hw;
    w.violations += p.violations;
    w.y_failures += p.y_failures;
    for (int i = 0; i < 12; ++i) {
      w.by_type[i].elements += p.by_type[i].elements;
      w.by_type[i].hits += p.by_type[i].hits;
    }
    for (auto [dst, src] : {std::pair{&w.outside_vertex, &p.outside_vertex},
                            std::pair{&w.outside_f_edge, &p.outside_f_edge},
                            std::pair{&w.outside_other_edge, &p.outside_other_edge}}) {
      dst->elements += src->elements;
      dst->hits += src->hits;
    }
    for (int i = 0; i < kConflictTypes; ++i) w.conflicts[i] += p.conflicts[i];
  }
  const double m = static_cast<double>(parts.size());
  w.alpha_hw = std::sqrt(ahw) / m;
  w.beta_hw = std::sqrt(bhw) / m;
  w.gamma_hw = std::sqrt(chw) / m;
  return w;
}

// ---------------------------------------------------------------------------
// Boundary families

struct BoundaryFamily {
  std::vector<std::vector<EdgeId>> sets;
  /// "decomposition" when the 3 ell sets are used directly, "certified" when
  /// the family consists of certified one-edge-per-cycle choices.
  std::string source;
  Decomposition decomposition;
};

/// Boundary sets to average over for one factor. The sparse decomposition is
/// used when it exists and each set is runnable (4-distant, or small enough to
/// certify); otherwise every certified one-edge-per-cycle choice is used.
inline BoundaryFamily boundary_family(const Graph& g, const OrientedTwoFactor& f,
                                      const SparseParams& sp, int k, std::uint64_t seed,
                                      long combination_budget = 10000) {
  BoundaryFamily fam;
  fam.decomposition = decompose(g, f, sp, nullptr, seed);
  if (!fam.decomposition.rotation_fallback) {
    bool runnable = true;
    for (const auto& b : fam.decomposition.sets) {
      try {
        SamplerLayout layout(g, f, b.edges);
        if (!layout.four_distant() && !certify_boundary(layout, k).certified) runnable = false;
      } catch (const PreconditionError&) {
        runnable = false;
      }
      if (!runnable) break;
    }
    if (runnable) {
      for (const auto& b : fam.decomposition.sets) fam.sets.push_back(b.edges);
      fam.source = "decomposition";
      return fam;
    }
  }
  const int nc = static_cast<int>(f.cycles().size());
  double combos = 1;
  for (const auto& c : f.cycles()) combos *= static_cast<double>(c.size());
  detail::require(combos <= static_cast<double>(combination_budget),
                  "too many one-edge-per-cycle choices to certify");
  std::vector<int> pos(nc, 0);
  for (;;) {
    std::vector<EdgeId> b;
    for (int c = 0; c < nc; ++c) b.push_back(f.out_edge(f.cycles()[c][pos[c]]));
    try {
      SamplerLayout layout(g, f, b);
      if (layout.four_distant() || certify_boundary(layout, k).certified) {
        std::sort(b.begin(), b.end());
        fam.sets.push_back(b);
      }
    } catch (const PreconditionError&) {
    }
    int c = 0;
    while (c < nc && ++pos[c] == static_cast<int>(f.cycles()[c].size())) pos[c++] = 0;
    if (c == nc) break;
  }
  detail::require(!fam.sets.empty(), "no runnable boundary set for this factor");
  fam.source = "certified";
  return fam;
}

/// Mixture of estimate_weights over a boundary family, `trials` per set.
inline WeightEstimate average_over_decomposition(const Graph& g, const OrientedTwoFactor& f,
                                                 const RecurrenceTable& table,
                                                 const SparseParams& sp, long trials,
                                                 std::uint64_t seed,
                                                 BoundaryFamily* family_out = nullptr) {
  auto fam = boundary_family(g, f, sp, table.k, seed);
  std::vector<WeightEstimate> parts;
  for (std::size_t i = 0; i < fam.sets.size(); ++i) {
    SamplerLayout layout(g, f, fam.sets[i]);
    parts.push_back(estimate_weights(layout, table, trials, derive_seed(seed, 1000 + i)));
  }
  if (family_out) *family_out = std::move(fam);
  return mix_estimates(parts);
}

// ---------------------------------------------------------------------------
// Uniform perfect-matching covers

struct PMCover {
  std::vector<Matching> matchings;  ///< distinct matchings used
  std::vector<long> multiplicity;
  long n_cover = 0;  ///< N: every edge lies in exactly N of the 3N
  long total() const { return std::accumulate(multiplicity.begin(), multiplicity.end(), 0L); }
};

/// Solves sum_{M containing e} x_M = 1/3 over all perfect matchings exactly and
/// scales x to integers.
inline PMCover uniform_pm_cover(const Graph& g, std::size_t cap = 100000) {
  detail::require(g.is_regular(3), "uniform_pm_cover needs a cubic graph");
  auto br = bridges(g);
  if (!br.empty())
    throw PreconditionError("graph has a bridge (" +
                            g.element_at(g.index_of_edge(br.front())).to_string() +
                            "); no uniform perfect-matching cover exists");
  auto en = perfect_matchings(g, cap);
  detail::require(!en.truncated, "perfect matching enumeration exceeded the cap");
  std::vector<std::vector<int>> cols;
  for (const auto& m : en.matchings) cols.emplace_back(m.edges.begin(), m.edges.end());
  std::vector<Rational> rhs(g.num_edges(), Rational(1, 3));
  auto x = lp::solve_equality_feasibility(cols, g.num_edges(), rhs);
  detail::ensure(x.has_value(), "uniform cover LP infeasible on a bridgeless cubic graph");
  BigInt scale = 3;
  for (const auto& v : *x)
    if (v != 0) scale = lcm(scale, boost::multiprecision::denominator(v));
  PMCover cover;
  for (std::size_t i = 0; i < x->size(); ++i) {
    if ((*x)[i] == 0) continue;
    Rational m = (*x)[i] * scale;
    cover.matchings.push_back(en.matchings[i]);
    cover.multiplicity.push_back(boost::multiprecision::numerator(m).convert_to<long>());
  }
  cover.n_cover = (scale / 3).convert_to<long>();
  std::vector<long> per_edge(g.num_edges(), 0);
  for (std::size_t i = 0; i < cover.matchings.size(); ++i)
    for (EdgeId e : cover.matchings[i].edges) per_edge[e] += cover.multiplicity[i];
  for (long c : per_edge) detail::ensure(c == cover.n_cover, "cover is not uniform");
  detail::ensure(cover.total() == 3 * cover.n_cover, "cover size is not 3N");
  return cover;
}

// ---------------------------------------------------------------------------
// Final assembly

struct AssemblyReport {
  long n_cover = 0;
  Rational alpha, beta, gamma;  ///< averaged over the 3N factors
  Rational edge_weight;         ///< (alpha + 2 gamma) / 3
  Rational vertex_weight;       ///< beta
  Rational matching_coefficient;  ///< 1 - (1 - beta) / (3 beta)
  Rational size;                  ///< 1 / beta + 3 * coefficient
  double alpha_hw = 0, beta_hw = 0, gamma_hw = 0;
  bool coefficient_nonnegative = false;
  Rational beta_deficit;  ///< beta - 1/4
  Rational min_coverage, max_coverage;  ///< final per-element coverage
  bool y_sums_exact = false;            ///< every Y-set sums to exactly 4
  Rational identity;                    ///< alpha + beta + 2 gamma
};

/// Weight of the matching part in the final mixture: 1 - (1 - beta) / (3 beta).
inline Rational matching_coefficient(const Rational& beta) {
  detail::require(beta > 0, "beta must be positive");
  return 1 - (1 - beta) / (3 * beta);
}

/// Combines per-factor estimates (weights[i] belongs to the complement of
/// cover.matchings[i]) into w = w'/beta + coef * c, with w' the multiplicity
/// weighted average and c the fractional 3-edge-colouring of the cover.
inline AssemblyReport assemble_final(const Graph& g, const std::vector<WeightEstimate>& weights,
                                     const PMCover& cover) {
  detail::require(weights.size() == cover.matchings.size(),
                  "one weight estimate per cover matching is needed");
  const long total = cover.total();
  const int ne = g.num_elements();
  std::vector<Rational> wprime(ne, Rational(0));
  AssemblyReport r;
  r.n_cover = cover.n_cover;
  double ahw = 0, bhw = 0, chw = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const Rational share(cover.multiplicity[i], total);
    for (int x = 0; x < ne; ++x) wprime[x] += share * weights[i].frequency[x];
    r.alpha += share * weights[i].alpha;
    r.beta += share * weights[i].beta;
    r.gamma += share * weights[i].gamma;
    const double s = to_double(share);
    ahw += s * s * weights[i].alpha_hw * weights[i].alpha_hw;
    bhw += s * s * weights[i].beta_hw * weights[i].beta_hw;
    chw += s * s * weights[i].gamma_hw * weights[i].gamma_hw;
  }
  r.alpha_hw = std::sqrt(ahw);
  r.beta_hw = std::sqrt(bhw);
  r.gamma_hw = std::sqrt(chw);
  r.identity = r.alpha + r.beta + 2 * r.gamma;
  r.edge_weight = (r.alpha + 2 * r.gamma) / 3;
  r.vertex_weight = r.beta;
  r.beta_deficit = r.beta - Rational(1, 4);
  detail::require(r.beta > 0, "beta estimate is zero; nothing to scale");
  r.matching_coefficient = matching_coefficient(r.beta);
  r.coefficient_nonnegative = r.matching_coefficient >= 0;
  r.size = 1 / r.beta + 3 * r.matching_coefficient;
  // c covers every edge with weight 1 (each edge in N of 3N matchings of weight 1/N).
  std::vector<Rational> final_w(ne);
  for (int x = 0; x < ne; ++x) {
    final_w[x] = wprime[x] / r.beta;
    if (!g.index_is_vertex(x)) final_w[x] += r.matching_coefficient;
  }
  r.min_coverage = *std::min_element(final_w.begin(), final_w.end());
  r.max_coverage = *std::max_element(final_w.begin(), final_w.end());
  r.y_sums_exact = true;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    Rational s = final_w[g.index_of_vertex(v)];
    for (const auto& inc : g.incident(v)) s += final_w[g.index_of_edge(inc.edge)];
    if (s != 4) r.y_sums_exact = false;
  }
  return r;
}

/// Probability of keeping z in a set that contains it, so that its frequency
/// drops from `current` to `target` (Bernoulli thinning).
inline double thinning_keep_probability(double current, double target) {
  detail::require(target >= 0 && current >= target, "thinning can only lower a frequency");
  return current > 0 ? target / current : 1.0;
}

/// Removes element z from each set containing it independently with
/// probability 1 - keep.
inline void thin_element(std::vector<ElementMask>& sets, int z, double keep, Rng& rng) {
  for (auto& s : sets)
    if (s[z] && uniform01(rng) >= keep) s[z] = 0;
}

// ---------------------------------------------------------------------------
// Exact fractional chromatic numbers

inline constexpr int kMaxUniverse = 256;
using ElementBits = std::bitset<kMaxUniverse>;

/// Maximal independent sets of a graph given by adjacency bitsets, via
/// Bron-Kerbosch with pivoting on the complement.
inline std::vector<ElementBits> maximal_independent_sets(const std::vector<ElementBits>& adj,
                                                         std::size_t cap = 1000000) {
  const int n = static_cast<int>(adj.size());
  detail::require(n <= kMaxUniverse, "universe too large for exact enumeration");
  ElementBits all;
  for (int i = 0; i < n; ++i) all.set(i);
  std::vector<ElementBits> nonadj(n);
  for (int i = 0; i < n; ++i) {
    nonadj[i] = all & ~adj[i];
    nonadj[i].reset(i);
  }
  std::vector<ElementBits> out;
  auto rec = [&](auto&& self, ElementBits r, ElementBits p, ElementBits x) -> void {
    if (p.none() && x.none()) {
      if (out.size() >= cap) throw BudgetExhausted("independent set enumeration exceeded the cap");
      out.push_back(r);
      return;
    }
    int pivot = -1;
    std::size_t best = 0;
    ElementBits px = p | x;
    for (int u = 0; u < n; ++u)
      if (px[u]) {
        const std::size_t c = (p & nonadj[u]).count();
        if (pivot < 0 || c > best) {
          pivot = u;
          best = c;
        }
      }
    ElementBits cand = p & ~nonadj[pivot];
    for (int v = 0; v < n; ++v) {
      if (!cand[v]) continue;
      ElementBits r2 = r;
      r2.set(v);
      self(self, r2, p & nonadj[v], x & nonadj[v]);
      p.reset(v);
      x.set(v);
    }
  };
  rec(rec, ElementBits{}, all, ElementBits{});
  return out;
}

struct LPSolution {
  Rational value;
  std::vector<std::vector<int>> sets;  ///< generating sets (element indices)
  std::vector<Rational> weights;       ///< one per set; only positive ones kept
  std::vector<Rational> duals;         ///< a fractional clique, one per element
  long enumerated = 0;                 ///< maximal sets fed to the LP
  long pivots = 0;
};

/// min sum w(I) s.t. every element is covered with weight >= 1, over the maximal
/// independent sets of the given graph. Asserts value >= |clique_certificate|
/// after checking the certificate is a clique.
inline LPSolution exact_chi_f(const std::vector<ElementBits>& adj,
                              const std::vector<int>& clique_certificate,
                              std::size_t cap = 1000000) {
  const int n = static_cast<int>(adj.size());
  for (std::size_t i = 0; i < clique_certificate.size(); ++i)
    for (std::size_t j = i + 1; j < clique_certificate.size(); ++j)
      detail::require(adj[clique_certificate[i]][clique_certificate[j]],
                      "clique certificate is not a clique");
  auto mis = maximal_independent_sets(adj, cap);
  std::vector<std::vector<int>> sets;
  for (const auto& b : mis) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (b[i]) s.push_back(i);
    sets.push_back(std::move(s));
  }
  auto lp_res = lp::solve_covering_lp(sets, n);
  LPSolution sol;
  sol.value = lp_res.value;
  sol.duals = lp_res.duals;
  sol.enumerated = static_cast<long>(sets.size());
  sol.pivots = lp_res.pivots;
  Rational sum = 0;
  std::vector<Rational> cover(n, Rational(0));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const Rational& w = lp_res.weights[i];
    detail::ensure(w >= 0, "negative LP weight");
    if (w == 0) continue;
    sum += w;
    for (int x : sets[i]) cover[x] += w;
    sol.sets.push_back(sets[i]);
    sol.weights.push_back(w);
  }
  detail::ensure(sum == sol.value, "LP value differs from the weight sum");
  for (const auto& c : cover) detail::ensure(c >= 1, "LP solution leaves an element uncovered");
  Rational dual_sum = 0;
  for (const auto& d : sol.duals) dual_sum += d;
  detail::ensure(dual_sum == sol.value, "dual value differs from the primal value");
  detail::ensure(sol.value >= static_cast<long>(clique_certificate.size()),
                 "LP value is below the clique certificate");
  return sol;
}

inline std::vector<ElementBits> total_graph_adjacency(const Graph& g) {
  detail::require(g.num_elements() <= kMaxUniverse, "total graph too large for exact enumeration");
  std::vector<ElementBits> adj(g.num_elements());
  for (int x = 0; x < g.num_elements(); ++x) g.for_each_total_neighbour(x, [&](int y) { adj[x].set(y); });
  return adj;
}

/// The Y-set of a maximum-degree vertex: a clique of size Delta + 1 in T(G).
inline std::vector<int> y_clique(const Graph& g) {
  Vertex best = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (g.degree(v) > g.degree(best)) best = v;
  std::vector<int> c{g.index_of_vertex(best)};
  for (const auto& inc : g.incident(best)) c.push_back(g.index_of_edge(inc.edge));
  return c;
}

inline LPSolution fractional_total_chromatic(const Graph& g, std::size_t cap = 1000000) {
  detail::require(g.num_vertices() >= 1, "graph has no vertices");
  return exact_chi_f(total_graph_adjacency(g), y_clique(g), cap);
}

inline LPSolution fractional_chromatic(const Graph& g, std::size_t cap = 1000000) {
  detail::require(g.num_vertices() >= 1 && g.num_vertices() <= kMaxUniverse,
                  "graph size outside the exact range");
  std::vector<ElementBits> adj(g.num_vertices());
  for (const auto& e : g.edges()) {
    adj[e.u].set(e.v);
    adj[e.v].set(e.u);
  }
  std::vector<int> clique{0};
  if (g.num_edges() > 0) clique = {g.edge(0).u, g.edge(0).v};
  return exact_chi_f(adj, clique, cap);
}

// ---------------------------------------------------------------------------
// Multisets and bridge gluing

/// A multiset of total independent sets in which every element is covered
/// exactly n_cover times.
struct TisMultiset {
  std::vector<ElementMask> sets;
  long n_cover = 0;
};

/// LCM scaling of an optimal LP solution: each set repeated w * L times, excess
/// coverage trimmed by deleting elements from sets, then padded with empty sets
/// to `slots_per_cover * N` sets. Requires value <= slots_per_cover.
inline TisMultiset to_exact_multiset(const LPSolution& lp, int universe, int slots_per_cover) {
  detail::require(lp.value <= slots_per_cover, "LP value exceeds the available slots");
  BigInt scale = 1;
  for (const auto& w : lp.weights) scale = lcm(scale, boost::multiprecision::denominator(w));
  TisMultiset ms;
  ms.n_cover = scale.convert_to<long>();
  std::vector<long> cover(universe, 0);
  for (std::size_t i = 0; i < lp.sets.size(); ++i) {
    const long copies = boost::multiprecision::numerator(Rational(lp.weights[i] * scale)).convert_to<long>();
    for (long c = 0; c < copies; ++c) {
      ElementMask m(universe, 0);
      for (int x : lp.sets[i]) {
        if (cover[x] < ms.n_cover) {
          m[x] = 1;
          ++cover[x];
        }
      }
      ms.sets.push_back(std::move(m));
    }
  }
  for (long c : cover) detail::ensure(c == ms.n_cover, "trimmed multiset is not exact");
  const long want = static_cast<long>(slots_per_cover) * ms.n_cover;
  detail::ensure(static_cast<long>(ms.sets.size()) <= want, "multiset larger than its slots");
  while (static_cast<long>(ms.sets.size()) < want) ms.sets.push_back(ElementMask(universe, 0));
  return ms;
}

inline std::vector<long> multiset_coverage(const TisMultiset& ms, int universe) {
  std::vector<long> c(universe, 0);
  for (const auto& s : ms.sets)
    for (int x = 0; x < universe; ++x) c[x] += s[x];
  return c;
}

struct GlueResult {
  Graph graph;
  EdgeId bridge = 0;
  TisMultiset multiset;
};

/// Joins G1 and G2 by the edge x1 x2 (G2's vertices shifted by |V(G1)|) and
/// merges two 4N-multisets slot by slot: sets with x1 go to slots 1..N of the
/// first side, sets with x2 to slots N+1..2N of the second, sets avoiding x_i
/// and its edges to slots 3N+1..4N, where the bridge edge is added.
inline GlueResult bridge_glue(const Graph& g1, const TisMultiset& w1, Vertex x1, const Graph& g2,
                              const TisMultiset& w2, Vertex x2) {
  detail::require(w1.n_cover == w2.n_cover && w1.n_cover >= 1, "multisets need the same N");
  const long n_cov = w1.n_cover;
  detail::require(static_cast<long>(w1.sets.size()) == 4 * n_cov &&
                      static_cast<long>(w2.sets.size()) == 4 * n_cov,
                  "each multiset must hold exactly 4N sets");
  auto arrange = [&](const Graph& g, const TisMultiset& w, Vertex x, long x_slot) {
    detail::require(x >= 0 && x < g.num_vertices(), "bridge endpoint out of range");
    for (int i = 0; i < g.num_elements(); ++i) {
      long c = 0;
      for (const auto& s : w.sets) c += s[i];
      detail::require(c == n_cov, "multiset does not cover every element exactly N times");
    }
    std::vector<int> with_x, with_edge, avoid;
    for (int i = 0; i < static_cast<int>(w.sets.size()); ++i) {
      const auto& s = w.sets[i];
      detail::require(is_total_independent(g, s), "multiset contains a dependent set");
      bool edge = false;
      for (const auto& inc : g.incident(x)) edge = edge || s[g.index_of_edge(inc.edge)];
      if (s[g.index_of_vertex(x)]) with_x.push_back(i);
      else if (edge) with_edge.push_back(i);
      else avoid.push_back(i);
    }
    detail::require(static_cast<long>(with_x.size()) == n_cov, "x is not in exactly N sets");
    detail::require(static_cast<long>(avoid.size()) >= n_cov, "fewer than N sets avoid x");
    std::vector<int> order(4 * n_cov, -1);
    for (long j = 0; j < n_cov; ++j) order[x_slot + j] = with_x[j];
    for (long j = 0; j < n_cov; ++j) order[3 * n_cov + j] = avoid[avoid.size() - 1 - j];
    avoid.resize(avoid.size() - n_cov);
    std::vector<int> rest = with_edge;
    rest.insert(rest.end(), avoid.begin(), avoid.end());
    std::size_t at = 0;
    for (auto& o : order)
      if (o < 0) o = rest[at++];
    return order;
  };
  auto o1 = arrange(g1, w1, x1, 0);
  auto o2 = arrange(g2, w2, x2, n_cov);
  const int n1 = g1.num_vertices();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : g1.edges()) edges.emplace_back(e.u, e.v);
  for (const auto& e : g2.edges()) edges.emplace_back(n1 + e.u, n1 + e.v);
  edges.emplace_back(x1, n1 + x2);
  GlueResult out{Graph(n1 + g2.num_vertices(), edges), 0, {}};
  const Graph& g = out.graph;
  out.bridge = *g.find_edge(x1, n1 + x2);
  auto map1 = [&](int i) {
    if (g1.index_is_vertex(i)) return g.index_of_vertex(i);
    const Edge& e = g1.edge(g1.edge_of_index(i));
    return g.index_of_edge(*g.find_edge(e.u, e.v));
  };
  auto map2 = [&](int i) {
    if (g2.index_is_vertex(i)) return g.index_of_vertex(n1 + i);
    const Edge& e = g2.edge(g2.edge_of_index(i));
    return g.index_of_edge(*g.find_edge(n1 + e.u, n1 + e.v));
  };
  out.multiset.n_cover = n_cov;
  for (long j = 0; j < 4 * n_cov; ++j) {
    ElementMask m(g.num_elements(), 0);
    const auto& s1 = w1.sets[o1[j]];
    const auto& s2 = w2.sets[o2[j]];
    for (int i = 0; i < g1.num_elements(); ++i)
      if (s1[i]) m[map1(i)] = 1;
    for (int i = 0; i < g2.num_elements(); ++i)
      if (s2[i]) m[map2(i)] = 1;
    if (j >= 3 * n_cov) m[g.index_of_edge(out.bridge)] = 1;
    detail::ensure(is_total_independent(g, m), "glued set is not independent");
    out.multiset.sets.push_back(std::move(m));
  }
  auto cov = multiset_coverage(out.multiset, g.num_elements());
  for (long c : cov) detail::ensure(c == n_cov, "glued multiset is not an exact N-cover");
  return out;
}

}  // namespace ftc

#endif  // FTC_ASSEMBLER_HPP
