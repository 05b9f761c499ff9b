#ifndef FTC_SAMPLER_HPP
#define FTC_SAMPLER_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ftc/errors.hpp"
#include "ftc/graph.hpp"
#include "ftc/random.hpp"
#include "ftc/recurrence.hpp"
#include "ftc/total_set.hpp"
#include "ftc/two_factor.hpp"

namespace ftc {

// ---------------------------------------------------------------------------
// Conflict table

/// Junction conflicts. IVd is the residual case where u' is uncovered and none
/// of u0, u'' or a mate of u' is in T; u' itself is then added.
enum class ConflictType : std::uint8_t { none, I, II, IIIa, IIIb, IIIc, IVa, IVb, IVc, IVd };
inline constexpr int kConflictTypes = 10;

inline const char* conflict_name(ConflictType t) {
  static const char* names[kConflictTypes] = {"none", "I",   "II",  "IIIa", "IIIb",
                                              "IIIc", "IVa", "IVb", "IVc",  "IVd"};
  return names[static_cast<int>(t)];
}

/// Post-phase-one membership of the elements around one boundary edge e0 = u'u0,
/// with u'' = pred(u'), e' = u''u', e1 = u0u1.
struct JunctionState {
  bool u2 = false;      // u''
  bool e_prev = false;  // e'
  bool u_prev = false;  // u'
  bool e0 = false;
  bool u0 = false;
  bool e1 = false;
  bool u1 = false;
  bool u0_mate = false;      // some mate of u0 in T
  bool u_prev_mate = false;  // some mate of u' in T
};

/// Every row of the table whose condition holds, in table order.
inline std::vector<ConflictType> matching_conflicts(const JunctionState& s) {
  std::vector<ConflictType> out;
  const bool uncovered = !s.u_prev && !s.e_prev && !s.e0;
  const bool double_edge = s.e_prev && s.e0;
  if (s.u_prev && s.u0) out.push_back(ConflictType::I);
  if (s.u_prev && s.e0) out.push_back(ConflictType::II);
  if (double_edge && s.u1) out.push_back(ConflictType::IIIa);
  if (double_edge && !s.u1 && s.u0_mate) out.push_back(ConflictType::IIIb);
  if (double_edge && !s.u1 && !s.u0_mate) out.push_back(ConflictType::IIIc);
  if (uncovered && s.u0) out.push_back(ConflictType::IVa);
  if (uncovered && !s.u0 && s.u2) out.push_back(ConflictType::IVb);
  if (uncovered && !s.u0 && !s.u2 && s.u_prev_mate) out.push_back(ConflictType::IVc);
  if (uncovered && !s.u0 && !s.u2 && !s.u_prev_mate) out.push_back(ConflictType::IVd);
  return out;
}

inline ConflictType classify_conflict(const JunctionState& s) {
  auto m = matching_conflicts(s);
  if (m.empty()) return ConflictType::none;
  if (m.size() > 1)
    throw InvariantError(std::string("conflict types ") + conflict_name(m[0]) + " and " +
                         conflict_name(m[1]) + " fire on one boundary edge");
  return m.front();
}

// ---------------------------------------------------------------------------
// Layout of F - B

/// Paths of F - B with their entering boundary edges, junction geometry and the
/// N_2 regions. Holds references: the graph and factor must outlive it.
class SamplerLayout {
 public:
  struct Junction {
    Vertex u2, u_prev, u0, u1;
    EdgeId e_prev, e0, e1;
  };

  SamplerLayout(const Graph& g, const OrientedTwoFactor& f, std::vector<EdgeId> boundary)
      : g_(&g), f_(&f) {
    const int n = g.num_vertices();
    detail::require(f.num_vertices() == n, "factor does not belong to the graph");
    std::sort(boundary.begin(), boundary.end());
    detail::require(std::adjacent_find(boundary.begin(), boundary.end()) == boundary.end(),
                    "duplicate boundary edge");
    in_b_.assign(g.num_edges(), 0);
    for (EdgeId e : boundary) {
      detail::require(e >= 0 && e < g.num_edges() && f.contains(e), "boundary edge not in F");
      in_b_[e] = 1;
    }
    boundary_ = std::move(boundary);
    path_of_vertex_.assign(n, -1);
    const int np = static_cast<int>(boundary_.size());
    vertices_.resize(np);
    edges_.resize(np);
    for (int p = 0; p < np; ++p) {
      const EdgeId b = boundary_[p];
      Vertex v = f.head(g, b);
      vertices_[p].push_back(v);
      edges_[p].push_back(b);
      path_of_vertex_[v] = p;
      while (!in_b_[f.out_edge(v)]) {
        edges_[p].push_back(f.out_edge(v));
        v = f.succ(v);
        vertices_[p].push_back(v);
        path_of_vertex_[v] = p;
      }
      detail::require(edges_[p].size() >= 4, "path of F - B after edge " +
                                                 g.element_at(g.index_of_edge(b)).to_string() +
                                                 " is shorter than 3");
    }
    for (Vertex v = 0; v < n; ++v)
      detail::require(path_of_vertex_[v] >= 0,
                      "boundary set misses the cycle through v" + std::to_string(v));
    mates_.resize(n);
    for (Vertex v = 0; v < n; ++v) mates_[v] = ftc::mates(g, f, v);
    junctions_.resize(np);
    for (int p = 0; p < np; ++p) {
      Junction& j = junctions_[p];
      j.e0 = boundary_[p];
      j.u0 = vertices_[p][0];
      j.u_prev = f.tail(g, j.e0);
      j.u2 = f.pred(j.u_prev);
      j.e_prev = f.in_edge(j.u_prev);
      j.e1 = f.out_edge(j.u0);
      j.u1 = f.succ(j.u0);
    }
    // N_2 regions and their overlaps.
    owner_.assign(g.num_elements(), -1);
    region_union_.assign(g.num_elements(), 0);
    regions_disjoint_ = true;
    regions_.resize(np);
    for (int p = 0; p < np; ++p) {
      const EdgeId one[] = {boundary_[p]};
      regions_[p] = neighbourhood(g, one, 2);
      for (int x : regions_[p]) {
        if (owner_[x] >= 0) {
          regions_disjoint_ = false;
          owner_[x] = -2;
        } else if (owner_[x] == -1) {
          owner_[x] = p;
        }
        region_union_[x] = 1;
      }
    }
    four_distant_ = true;
    for (int p = 0; p < np && four_distant_; ++p) {
      const Vertex src[] = {g.edge(boundary_[p]).u, g.edge(boundary_[p]).v};
      auto dist = vertex_bfs(g, src, 2);
      for (int o = 0; o < np; ++o)
        if (o != p && (dist[g.edge(boundary_[o]).u] >= 0 || dist[g.edge(boundary_[o]).v] >= 0)) {
          four_distant_ = false;
          break;
        }
    }
  }

  const Graph& graph() const { return *g_; }
  const OrientedTwoFactor& factor() const { return *f_; }
  int num_paths() const { return static_cast<int>(boundary_.size()); }
  const std::vector<EdgeId>& boundary() const { return boundary_; }
  bool is_boundary(EdgeId e) const { return in_b_[e] != 0; }
  const std::vector<Vertex>& path_vertices(int p) const { return vertices_[p]; }
  const std::vector<EdgeId>& path_edges(int p) const { return edges_[p]; }
  int path_of_vertex(Vertex v) const { return path_of_vertex_[v]; }
  const std::vector<Vertex>& mates(Vertex v) const { return mates_[v]; }
  const Junction& junction(int p) const { return junctions_[p]; }
  const std::vector<int>& region(int p) const { return regions_[p]; }
  const ElementMask& region_union() const { return region_union_; }
  bool regions_disjoint() const { return regions_disjoint_; }
  bool four_distant() const { return four_distant_; }
  /// Path whose region holds element x; -1 outside every region, -2 if shared.
  int region_owner(int x) const { return owner_[x]; }

 private:
  const Graph* g_;
  const OrientedTwoFactor* f_;
  std::vector<EdgeId> boundary_;
  std::vector<char> in_b_;
  std::vector<std::vector<Vertex>> vertices_;
  std::vector<std::vector<EdgeId>> edges_;
  std::vector<int> path_of_vertex_;
  std::vector<std::vector<Vertex>> mates_;
  std::vector<Junction> junctions_;
  std::vector<std::vector<int>> regions_;
  std::vector<int> owner_;
  ElementMask region_union_;
  bool regions_disjoint_ = true;
  bool four_distant_ = true;
};

/// Position label 1..11 of an element inside the N_2 region of its boundary edge:
/// 1 u'', 2 e', 3 u' (left end), 4 boundary edge, 5 u0 (right end), 6 e1, 7 u1,
/// 8 mate of u', 9 edge u'-mate, 10 edge u0-mate, 11 mate of u0.
inline std::optional<int> classify_type(const SamplerLayout& layout, int element) {
  const Graph& g = layout.graph();
  std::optional<int> label;
  int owner = -1;
  for (int p = 0; p < layout.num_paths(); ++p) {
    const auto& j = layout.junction(p);
    std::optional<int> here;
    auto vert = [&](Vertex v) { return g.index_of_vertex(v); };
    auto edge = [&](EdgeId e) { return g.index_of_edge(e); };
    if (element == vert(j.u2)) here = 1;
    else if (element == edge(j.e_prev)) here = 2;
    else if (element == vert(j.u_prev)) here = 3;
    else if (element == edge(j.e0)) here = 4;
    else if (element == vert(j.u0)) here = 5;
    else if (element == edge(j.e1)) here = 6;
    else if (element == vert(j.u1)) here = 7;
    else {
      for (Vertex w : layout.mates(j.u_prev)) {
        if (element == vert(w)) here = 8;
        else if (element == edge(*g.find_edge(j.u_prev, w))) here = 9;
      }
      for (Vertex w : layout.mates(j.u0)) {
        if (here) break;
        if (element == edge(*g.find_edge(j.u0, w))) here = 10;
        else if (element == vert(w)) here = 11;
      }
    }
    if (!here) continue;
    if (label)
      throw PreconditionError("element " + g.element_at(element).to_string() +
                              " lies in two N_2 regions (paths " + std::to_string(owner) +
                              " and " + std::to_string(p) + ")");
    label = here;
    owner = p;
  }
  return label;
}

// ---------------------------------------------------------------------------
// Random choices, phase one, phase two

enum SeedChoice : std::uint8_t { seed_edge = 0, seed_vertex = 1, seed_neither = 2 };

/// Everything random about one run: levels per path, the seed choice per path,
/// and the per-vertex veto of the damping coin (empty means no vetoes).
struct SamplerDraw {
  std::vector<int> level;
  std::vector<std::uint8_t> seed;
  std::vector<char> veto;
};

struct SamplerParams {
  int k = 11;
  Rational xi = 1;
  std::uint64_t seed = 1;
};

inline SamplerDraw random_draw(const SamplerLayout& layout, const RecurrenceTable& table,
                               Rng& rng) {
  const int np = layout.num_paths();
  const int n = layout.graph().num_vertices();
  SamplerDraw d;
  d.level.resize(np);
  d.seed.resize(np);
  for (int p = 0; p < np; ++p) d.level[p] = uniform_int(rng, 1, table.k);
  for (int p = 0; p < np; ++p) {
    const double u = uniform01(rng);
    const int t = d.level[p];
    d.seed[p] = u < table.p_at(t) ? seed_edge
                : u < table.p_at(t) + table.q_at(t) ? seed_vertex
                                                    : seed_neither;
  }
  if (table.xi == 0) {
    d.veto.assign(n, 1);
  } else if (table.xi < 1) {
    const double xi = to_double(table.xi);
    d.veto.resize(n);
    for (Vertex v = 0; v < n; ++v) d.veto[v] = uniform01(rng) >= xi ? 1 : 0;
  }
  return d;
}

struct Phase1Result {
  ElementMask in_t;
  std::vector<int> vertex_level;
  std::vector<int> order;  ///< paths in processing order
};

/// Deterministic propagation along every path, in (level, boundary id) order.
inline Phase1Result phase1(const SamplerLayout& layout, const SamplerDraw& d) {
  const Graph& g = layout.graph();
  const int np = layout.num_paths();
  detail::require(static_cast<int>(d.level.size()) == np && static_cast<int>(d.seed.size()) == np,
                  "draw does not match the layout");
  Phase1Result r;
  r.in_t.assign(g.num_elements(), 0);
  r.vertex_level.assign(g.num_vertices(), 0);
  for (int p = 0; p < np; ++p) {
    detail::require(d.level[p] >= 1, "levels start at 1");
    for (Vertex v : layout.path_vertices(p)) r.vertex_level[v] = d.level[p];
  }
  r.order.resize(np);
  std::iota(r.order.begin(), r.order.end(), 0);
  std::sort(r.order.begin(), r.order.end(), [&](int a, int b) {
    if (d.level[a] != d.level[b]) return d.level[a] < d.level[b];
    return layout.boundary()[a] < layout.boundary()[b];
  });
  auto mates_allow = [&](Vertex u) {
    const int lu = r.vertex_level[u];
    for (Vertex w : layout.mates(u)) {
      const int lw = r.vertex_level[w];
      if (lw == lu) return false;
      if (lw < lu && r.in_t[g.index_of_vertex(w)]) return false;
    }
    return true;
  };
  for (int p : r.order) {
    bool prev_e = d.seed[p] == seed_edge;
    bool prev_u = d.seed[p] == seed_vertex;
    const auto& vs = layout.path_vertices(p);
    const auto& es = layout.path_edges(p);
    for (std::size_t j = 0; j < vs.size(); ++j) {
      const bool e_in = !prev_e && !prev_u;
      r.in_t[g.index_of_edge(es[j])] = e_in;
      const Vertex u = vs[j];
      const bool u_in = !prev_u && !e_in && mates_allow(u) && (d.veto.empty() || !d.veto[u]);
      r.in_t[g.index_of_vertex(u)] = u_in;
      prev_e = e_in;
      prev_u = u_in;
    }
  }
  return r;
}

inline JunctionState junction_state(const SamplerLayout& layout, int p, const ElementMask& t) {
  const Graph& g = layout.graph();
  const auto& j = layout.junction(p);
  auto vin = [&](Vertex v) { return t[g.index_of_vertex(v)] != 0; };
  auto ein = [&](EdgeId e) { return t[g.index_of_edge(e)] != 0; };
  JunctionState s;
  s.u2 = vin(j.u2);
  s.e_prev = ein(j.e_prev);
  s.u_prev = vin(j.u_prev);
  s.e0 = ein(j.e0);
  s.u0 = vin(j.u0);
  s.e1 = ein(j.e1);
  s.u1 = vin(j.u1);
  for (Vertex w : layout.mates(j.u0)) s.u0_mate = s.u0_mate || vin(w);
  for (Vertex w : layout.mates(j.u_prev)) s.u_prev_mate = s.u_prev_mate || vin(w);
  return s;
}

struct ConflictRecord {
  int path = 0;
  EdgeId boundary = 0;
  ConflictType type = ConflictType::none;
  std::vector<int> removed;
  std::vector<int> added;
};

/// One record per boundary edge that has a conflict, in path order.
inline std::vector<ConflictRecord> detect_conflicts(const SamplerLayout& layout,
                                                    const ElementMask& t) {
  const Graph& g = layout.graph();
  std::vector<ConflictRecord> out;
  for (int p = 0; p < layout.num_paths(); ++p) {
    const auto type = classify_conflict(junction_state(layout, p, t));
    if (type == ConflictType::none) continue;
    const auto& j = layout.junction(p);
    ConflictRecord rec{p, j.e0, type, {}, {}};
    auto V = [&](Vertex v) { return g.index_of_vertex(v); };
    auto E = [&](EdgeId e) { return g.index_of_edge(e); };
    auto lowest_mate_in = [&](Vertex u) {
      Vertex best = -1;
      for (Vertex w : layout.mates(u))
        if (t[V(w)] && (best < 0 || w < best)) best = w;
      return best;
    };
    switch (type) {
      case ConflictType::I:
        rec.removed = {V(j.u_prev), V(j.u0)};
        rec.added = {E(j.e0)};
        break;
      case ConflictType::II:
        rec.removed = {V(j.u_prev)};
        break;
      case ConflictType::IIIa:
        rec.removed = {E(j.e0), V(j.u1)};
        rec.added = {E(j.e1)};
        break;
      case ConflictType::IIIb: {
        const Vertex w = lowest_mate_in(j.u0);
        rec.removed = {E(j.e0), V(w)};
        rec.added = {E(*g.find_edge(j.u0, w))};
        break;
      }
      case ConflictType::IIIc:
        rec.removed = {E(j.e0)};
        rec.added = {V(j.u0)};
        break;
      case ConflictType::IVa:
        rec.removed = {V(j.u0)};
        rec.added = {E(j.e0)};
        break;
      case ConflictType::IVb:
        rec.removed = {V(j.u2)};
        rec.added = {E(j.e_prev)};
        break;
      case ConflictType::IVc: {
        const Vertex w = lowest_mate_in(j.u_prev);
        rec.removed = {V(w)};
        rec.added = {E(*g.find_edge(j.u_prev, w))};
        break;
      }
      case ConflictType::IVd:
        rec.added = {V(j.u_prev)};
        break;
      case ConflictType::none:
        break;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

inline ElementMask resolve_conflicts(const ElementMask& t,
                                     const std::vector<ConflictRecord>& records) {
  ElementMask out = t;
  for (const auto& r : records) {
    for (int x : r.removed) out[x] = 0;
    for (int x : r.added) out[x] = 1;
  }
  return out;
}

struct SampleResult {
  Phase1Result phase1;
  ElementMask resolved;
  std::vector<ConflictRecord> conflicts;
};

inline SampleResult run_sampler(const SamplerLayout& layout, const SamplerDraw& d) {
  SampleResult r;
  r.phase1 = phase1(layout, d);
  r.conflicts = detect_conflicts(layout, r.phase1.in_t);
  r.resolved = resolve_conflicts(r.phase1.in_t, r.conflicts);
  return r;
}

/// Levels, seeds and vetoes from rng, then both phases.
inline SampleResult sample_full_tis(const SamplerLayout& layout, const RecurrenceTable& table,
                                    Rng& rng) {
  return run_sampler(layout, random_draw(layout, table, rng));
}

struct SampleCheck {
  bool independent = true;
  bool full = true;
  bool exactly_one = true;
  bool local = true;  ///< T and the resolved set differ only inside N_2(B)
  bool phase1_paths_independent = true;

  bool ok() const { return independent && full && exactly_one && local && phase1_paths_independent; }
  std::string describe() const {
    std::string s;
    if (!independent) s += " not-independent";
    if (!full) s += " not-full";
    if (!exactly_one) s += " y-count";
    if (!local) s += " non-local";
    if (!phase1_paths_independent) s += " phase1-path";
    return s.empty() ? "ok" : s.substr(1);
  }
};

inline SampleCheck check_sample(const SamplerLayout& layout, const SampleResult& r) {
  const Graph& g = layout.graph();
  SampleCheck c;
  c.independent = is_total_independent(g, r.resolved);
  c.full = is_full(g, r.resolved);
  c.exactly_one = exactly_one_of_y(g, r.resolved);
  for (int x = 0; x < g.num_elements(); ++x)
    if (r.resolved[x] != r.phase1.in_t[x] && !layout.region_union()[x]) c.local = false;
  // Phase one restricted to a component of F - B is independent: no two
  // consecutive elements along the path, and no vertex with a mate of the same
  // component (the boundary edge itself is not part of the component).
  const auto& t = r.phase1.in_t;
  for (int p = 0; p < layout.num_paths() && c.phase1_paths_independent; ++p) {
    const auto& vs = layout.path_vertices(p);
    const auto& es = layout.path_edges(p);
    for (std::size_t j = 0; j < vs.size(); ++j) {
      const bool u_in = t[g.index_of_vertex(vs[j])];
      if (j + 1 < vs.size()) {
        const bool e_next = t[g.index_of_edge(es[j + 1])];
        const bool u_next = t[g.index_of_vertex(vs[j + 1])];
        if ((u_in && (e_next || u_next)) || (e_next && u_next)) c.phase1_paths_independent = false;
        if (j + 2 < vs.size() && e_next && t[g.index_of_edge(es[j + 2])])
          c.phase1_paths_independent = false;
      }
      if (u_in)
        for (Vertex w : layout.mates(vs[j]))
          if (layout.path_of_vertex(w) == p && t[g.index_of_vertex(w)])
            c.phase1_paths_independent = false;
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Repeated sampling

struct SamplerStats {
  long trials = 0;
  std::vector<long> element_hits;                         ///< resolved set, per element
  std::vector<std::array<long, kConflictTypes>> conflicts;  ///< per path, per type
  long violations = 0;
  std::string first_violation;

  std::array<long, kConflictTypes> conflict_totals() const {
    std::array<long, kConflictTypes> t{};
    for (const auto& a : conflicts)
      for (int i = 0; i < kConflictTypes; ++i) t[i] += a[i];
    return t;
  }
};

/// Runs `trials` independent samples; trial i uses derive_seed(seed, i).
/// Invariant checks run on every sample; `on_sample` sees every resolved set.
template <typename Visitor>
SamplerStats run_trials(const SamplerLayout& layout, const RecurrenceTable& table,
                        std::uint64_t seed, long trials, Visitor&& on_sample) {
  detail::require(trials >= 1, "trials must be positive");
  const Graph& g = layout.graph();
  SamplerStats s;
  s.element_hits.assign(g.num_elements(), 0);
  s.conflicts.assign(layout.num_paths(), {});
  for (long i = 0; i < trials; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    SampleResult r;
    try {
      r = sample_full_tis(layout, table, rng);
    } catch (const InvariantError& e) {
      ++s.violations;
      if (s.first_violation.empty())
        s.first_violation = "trial " + std::to_string(i) + ": " + e.what();
      ++s.trials;
      continue;
    }
    auto chk = check_sample(layout, r);
    if (!chk.ok()) {
      ++s.violations;
      if (s.first_violation.empty())
        s.first_violation = "trial " + std::to_string(i) + ": " + chk.describe();
    }
    for (int x = 0; x < g.num_elements(); ++x) s.element_hits[x] += r.resolved[x];
    for (const auto& c : r.conflicts) ++s.conflicts[c.path][static_cast<int>(c.type)];
    on_sample(r);
    ++s.trials;
  }
  // conflict-free junctions go in column 0, so each row sums to the trials
  for (int p = 0; p < layout.num_paths(); ++p) {
    long with = 0;
    for (int i = 1; i < kConflictTypes; ++i) with += s.conflicts[p][i];
    s.conflicts[p][0] = s.trials - with;
  }
  return s;
}

inline SamplerStats run_trials(const SamplerLayout& layout, const RecurrenceTable& table,
                               std::uint64_t seed, long trials) {
  return run_trials(layout, table, seed, trials, [](const SampleResult&) {});
}

// ---------------------------------------------------------------------------
// Exhaustive certification of small boundary sets

struct Certification {
  bool certified = false;
  long states = 0;
  std::string witness;  ///< first failing state, if any
};

/// Runs every combination of relative levels (values 1..min(k, paths)), seed
/// choices, and vetoes (none, all, and every subset when n <= 12), checking the
/// output invariants each time. Outcomes depend on levels only through their
/// order, so this covers all k.
inline Certification certify_boundary(const SamplerLayout& layout, int k,
                                      long state_budget = 2000000) {
  const int np = layout.num_paths();
  const int n = layout.graph().num_vertices();
  const int lv = std::max(1, std::min(k, np));
  double states = std::pow(static_cast<double>(lv), np) * std::pow(3.0, np);
  const bool subsets = n <= 12;
  states *= subsets ? std::pow(2.0, n) : 2.0;
  Certification c;
  if (states > static_cast<double>(state_budget)) {
    c.witness = "state space too large";
    return c;
  }
  SamplerDraw d;
  d.level.assign(np, 1);
  d.seed.assign(np, 0);
  std::vector<std::vector<char>> vetoes;
  if (subsets) {
    for (long mask = 0; mask < (1L << n); ++mask) {
      std::vector<char> v(n);
      for (int i = 0; i < n; ++i) v[i] = (mask >> i) & 1;
      vetoes.push_back(std::move(v));
    }
  } else {
    vetoes.push_back({});
    vetoes.push_back(std::vector<char>(n, 1));
  }
  auto next = [](auto& digits, int base, int offset) {
    for (auto& x : digits) {
      if (x + 1 < base + offset) {
        ++x;
        return true;
      }
      x = offset;
    }
    return false;
  };
  do {
    std::fill(d.seed.begin(), d.seed.end(), 0);
    do {
      for (const auto& v : vetoes) {
        d.veto = v;
        ++c.states;
        std::string bad;
        try {
          auto r = run_sampler(layout, d);
          auto chk = check_sample(layout, r);
          if (!chk.ok()) bad = chk.describe();
        } catch (const InvariantError& e) {
          bad = e.what();
        }
        if (!bad.empty()) {
          std::string lv_s, sd_s;
          for (int x : d.level) lv_s += std::to_string(x);
          for (int x : d.seed) sd_s += std::to_string(x);
          c.witness = "levels " + lv_s + " seeds " + sd_s + ": " + bad;
          return c;
        }
      }
    } while (next(d.seed, 3, 0));
  } while (next(d.level, lv, 1));
  c.certified = true;
  return c;
}

struct BoundaryChoice {
  std::vector<EdgeId> edges;
  bool four_distant = false;
  bool certified = false;
};

/// A boundary set the sampler can run on. First a greedy 4-distant set with
/// at least one edge per cycle; failing that, the first one-edge-per-cycle
/// choice that passes exhaustive certification.
inline BoundaryChoice choose_boundary(const Graph& g, const OrientedTwoFactor& f, int k,
                                      long combination_budget = 10000) {
  const int n = g.num_vertices();
  const int nc = static_cast<int>(f.cycles().size());
  for (const auto& c : f.cycles())
    detail::require(c.size() >= 4, "factor has a cycle shorter than 4");
  std::vector<char> blocked(n, 0);
  std::vector<EdgeId> chosen;
  auto block = [&](EdgeId e) {
    const Vertex src[] = {g.edge(e).u, g.edge(e).v};
    auto dist = vertex_bfs(g, src, 2);
    for (Vertex v = 0; v < n; ++v)
      if (dist[v] >= 0) blocked[v] = 1;
  };
  auto free_edge = [&](EdgeId e) { return !blocked[g.edge(e).u] && !blocked[g.edge(e).v]; };
  bool greedy_ok = true;
  for (int c = 0; c < nc && greedy_ok; ++c) {
    bool found = false;
    for (Vertex v : f.cycles()[c])
      if (free_edge(f.out_edge(v))) {
        chosen.push_back(f.out_edge(v));
        block(f.out_edge(v));
        found = true;
        break;
      }
    greedy_ok = found;
  }
  if (greedy_ok) {
    for (int c = 0; c < nc; ++c)
      for (Vertex v : f.cycles()[c])
        if (free_edge(f.out_edge(v))) {
          chosen.push_back(f.out_edge(v));
          block(f.out_edge(v));
        }
    std::sort(chosen.begin(), chosen.end());
    return {chosen, true, false};
  }
  // One edge per cycle, all combinations in lexicographic order.
  double combos = 1;
  for (const auto& c : f.cycles()) combos *= static_cast<double>(c.size());
  detail::require(combos <= static_cast<double>(combination_budget),
                  "no 4-distant boundary set and too many combinations to certify");
  std::vector<int> pos(nc, 0);
  for (;;) {
    std::vector<EdgeId> b;
    for (int c = 0; c < nc; ++c) b.push_back(f.out_edge(f.cycles()[c][pos[c]]));
    SamplerLayout layout(g, f, b);
    if (certify_boundary(layout, k).certified) {
      std::sort(b.begin(), b.end());
      return {b, layout.four_distant(), true};
    }
    int c = 0;
    while (c < nc && ++pos[c] == static_cast<int>(f.cycles()[c].size())) pos[c++] = 0;
    if (c == nc) break;
  }
  throw PreconditionError("no certified boundary set with one edge per cycle");
}

// ---------------------------------------------------------------------------
// Mean-field process

struct MeanFieldOptions {
  int k = 11;
  Rational xi = 1;
  int delta = 3;
  int length = 0;  ///< path length; 0 means 10 k
  long trials = 10000;
  std::uint64_t seed = 1;
};

struct MeanFieldResult {
  RecurrenceTable table;
  int length = 0;
  std::vector<long> edge_trials, edge_hits, vertex_trials, vertex_hits;  // per level, 0-based
  std::array<long, kConflictTypes> conflicts{};
  long junctions = 0;
  long multi_type = 0;  ///< junctions where more than one row fired (must stay 0)

  double p_hat(int t) const { return static_cast<double>(edge_hits[t - 1]) / edge_trials[t - 1]; }
  double q_hat(int t) const {
    return static_cast<double>(vertex_hits[t - 1]) / vertex_trials[t - 1];
  }
  double p_sigma(int t) const {
    const double p = table.p_at(t);
    return std::sqrt(p * (1 - p) / edge_trials[t - 1]);
  }
  double q_sigma(int t) const {
    const double q = table.q_at(t);
    return std::sqrt(q * (1 - q) / vertex_trials[t - 1]);
  }
  double p_star_hat() const {
    return static_cast<double>(std::accumulate(edge_hits.begin(), edge_hits.end(), 0L)) /
           std::accumulate(edge_trials.begin(), edge_trials.end(), 0L);
  }
  double q_star_hat() const {
    return static_cast<double>(std::accumulate(vertex_hits.begin(), vertex_hits.end(), 0L)) /
           std::accumulate(vertex_trials.begin(), vertex_trials.end(), 0L);
  }
  double conflict_rate(ConflictType t) const {
    return static_cast<double>(conflicts[static_cast<int>(t)]) / junctions;
  }
};

/// Simulates the construction on an idealised neighbourhood: one path at a
/// random level s ending in u'', e', u', followed across a boundary edge by the
/// start e0, u0, e1, u1 of a path at level t. Every mate is synthetic with a
/// uniform level: a lower mate is in T with probability qt(level); a mate on a
/// higher level is in T iff its vertex is not and a qt(level) coin succeeds; an
/// equal level keeps both out. Each trial records one random edge and one random
/// vertex position of the first path, so the per-level counts are binomial.
inline MeanFieldResult mean_field_process(const MeanFieldOptions& opt) {
  detail::require(opt.k >= 1, "k must be at least 1");
  detail::require(opt.delta == 3 || (opt.delta >= 4 && opt.delta % 2 == 0),
                  "delta must be 3 or even");
  MeanFieldResult res;
  res.table = pq_table(opt.k, opt.xi, opt.delta);
  const int k = opt.k;
  const int length = opt.length > 0 ? opt.length : 10 * k;
  detail::require(length >= 2, "path length must be at least 2");
  detail::require(opt.trials >= 1, "trials must be positive");
  res.length = length;
  res.edge_trials.assign(k, 0);
  res.edge_hits.assign(k, 0);
  res.vertex_trials.assign(k, 0);
  res.vertex_hits.assign(k, 0);
  const auto& tab = res.table;
  const double xi = to_double(opt.xi);
  const bool coin = xi > 0 && xi < 1;
  const int nm = opt.delta - 2;
  Rng rng(opt.seed);

  // One vertex at level t with all its mates; returns (in T, some mate in T).
  auto vertex = [&](int t, bool eligible) {
    bool allowed = eligible;
    int higher[16];
    int nh = 0;
    bool mate_in = false;
    for (int m = 0; m < nm; ++m) {
      const int lm = uniform_int(rng, 1, k);
      if (lm == t) {
        allowed = false;
      } else if (lm < t) {
        if (uniform01(rng) < tab.qt_at(lm)) {
          allowed = false;
          mate_in = true;
        }
      } else {
        higher[nh++] = lm;
      }
    }
    bool in = allowed && (xi >= 1 || (coin && uniform01(rng) < xi));
    if (!in)
      for (int h = 0; h < nh; ++h)
        if (uniform01(rng) < tab.qt_at(higher[h])) mate_in = true;
    return std::pair{in, mate_in};
  };
  auto seed_choice = [&](int t) {
    const double u = uniform01(rng);
    return u < tab.p_at(t) ? seed_edge : u < tab.p_at(t) + tab.q_at(t) ? seed_vertex : seed_neither;
  };

  for (long trial = 0; trial < opt.trials; ++trial) {
    const int s = uniform_int(rng, 1, k);
    const int t = uniform_int(rng, 1, k);
    const int pick_e = uniform_int(rng, 0, length);
    const int pick_v = uniform_int(rng, 0, length);
    // Path at level s: e_0, u_0, ..., e_length, u_length = u'.
    auto sc = seed_choice(s);
    bool prev_e = sc == seed_edge, prev_u = sc == seed_vertex;
    bool u2 = false, e_prev = false, u_prev = false, u_prev_mate = false;
    for (int j = 0; j <= length; ++j) {
      const bool e_in = !prev_e && !prev_u;
      auto [u_in, mate_in] = vertex(s, !prev_u && !e_in);
      if (j == pick_e) {
        ++res.edge_trials[s - 1];
        res.edge_hits[s - 1] += e_in;
      }
      if (j == pick_v) {
        ++res.vertex_trials[s - 1];
        res.vertex_hits[s - 1] += u_in;
      }
      if (j == length - 1) u2 = u_in;
      if (j == length) {
        e_prev = e_in;
        u_prev = u_in;
        u_prev_mate = mate_in;
      }
      prev_e = e_in;
      prev_u = u_in;
    }
    // Start of the path at level t.
    sc = seed_choice(t);
    prev_e = sc == seed_edge;
    prev_u = sc == seed_vertex;
    JunctionState js;
    js.u2 = u2;
    js.e_prev = e_prev;
    js.u_prev = u_prev;
    js.u_prev_mate = u_prev_mate;
    for (int j = 0; j <= 1; ++j) {
      const bool e_in = !prev_e && !prev_u;
      auto [u_in, mate_in] = vertex(t, !prev_u && !e_in);
      if (j == 0) {
        js.e0 = e_in;
        js.u0 = u_in;
        js.u0_mate = mate_in;
      } else {
        js.e1 = e_in;
        js.u1 = u_in;
      }
      prev_e = e_in;
      prev_u = u_in;
    }
    auto types = matching_conflicts(js);
    ++res.junctions;
    if (types.size() > 1) ++res.multi_type;
    const auto type = types.empty() ? ConflictType::none : types.front();
    ++res.conflicts[static_cast<int>(type)];
  }
  return res;
}

/// Probability of a IIIb conflict at a boundary edge for delta = 3:
///   (1/k) sum_t p* p(t) X3(t) X4(t),
/// with X3(t) = (1/k) sum_{i != t} qt(i) the chance that u0* is in T and
/// X4(t) = 1 - xi S(t) the chance that u1 is not, where
/// S(t) = 1 - 1/k - (1/k) sum_{j<t} qt(j).
inline double p_IIIb_analytic(const RecurrenceTable& tab) {
  detail::require(tab.delta == 3, "closed form is for delta = 3");
  const int k = tab.k;
  const double xi = to_double(tab.xi);
  double qt_total = 0;
  for (int i = 1; i <= k; ++i) qt_total += tab.qt_at(i);
  double sum = 0, prefix = 0;
  for (int t = 1; t <= k; ++t) {
    const double x3 = (qt_total - tab.qt_at(t)) / k;
    const double s_t = 1.0 - 1.0 / k - prefix / k;
    const double x4 = 1.0 - xi * s_t;
    sum += tab.p_star * tab.p_at(t) * x3 * x4;
    prefix += tab.qt_at(t);
  }
  return sum / k;
}

}  // namespace ftc

#endif  // FTC_SAMPLER_HPP
