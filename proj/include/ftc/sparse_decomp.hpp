#ifndef FTC_SPARSE_DECOMP_HPP
#define FTC_SPARSE_DECOMP_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ftc/errors.hpp"
#include "ftc/graph.hpp"
#include "ftc/random.hpp"
#include "ftc/two_factor.hpp"

namespace ftc {

struct SparseParams {
  int ell = 2;
  bool strict = false;
};

/// Pairs of F-edges that must not share a boundary set. Vertices are edge ids
/// of the host graph; only F-edges ever get neighbours.
class ConstraintGraph {
 public:
  ConstraintGraph() = default;
  explicit ConstraintGraph(int num_edges) : adj_(num_edges) {}

  void add(EdgeId a, EdgeId b) {
    detail::require(a != b, "constraint graph has no loops");
    if (adjacent(a, b)) return;
    adj_[a].push_back(b);
    adj_[b].push_back(a);
  }
  bool adjacent(EdgeId a, EdgeId b) const {
    if (adj_.empty()) return false;
    return std::find(adj_[a].begin(), adj_[a].end(), b) != adj_[a].end();
  }
  const std::vector<EdgeId>& neighbours(EdgeId e) const {
    static const std::vector<EdgeId> none;
    return adj_.empty() ? none : adj_[e];
  }
  int max_degree() const {
    std::size_t d = 0;
    for (const auto& a : adj_) d = std::max(d, a.size());
    return static_cast<int>(d);
  }
  bool empty() const {
    return std::all_of(adj_.begin(), adj_.end(), [](const auto& a) { return a.empty(); });
  }

  /// For each pair (x, y), joins both F-edges at x to both F-edges at y.
  static ConstraintGraph from_vertex_pairs(const Graph& g, const OrientedTwoFactor& f,
                                           const std::vector<std::pair<Vertex, Vertex>>& pairs) {
    ConstraintGraph q(g.num_edges());
    for (auto [x, y] : pairs) {
      detail::require(x != y, "constraint pair must join distinct vertices");
      for (EdgeId a : {f.in_edge(x), f.out_edge(x)})
        for (EdgeId b : {f.in_edge(y), f.out_edge(y)})
          if (a != b) q.add(a, b);
    }
    return q;
  }

 private:
  std::vector<std::vector<EdgeId>> adj_;
};

/// Smallest segment length the existence argument covers for a given Q.
inline int strict_ell_bound(const ConstraintGraph& q) { return 83 + 3 * q.max_degree(); }

// ---------------------------------------------------------------------------
// Path partition and the ternary sequence

/// Edges of the cycle with index c, starting at the anchor's out-edge.
inline std::vector<EdgeId> cycle_edges(const OrientedTwoFactor& f, int c) {
  std::vector<EdgeId> out;
  for (Vertex v : f.cycles()[c]) out.push_back(f.out_edge(v));
  return out;
}

struct FactorPath {
  int cycle = 0;
  std::vector<EdgeId> edges;  // along the orientation
};

struct PathPartition {
  int ell = 0;
  std::vector<std::vector<FactorPath>> per_cycle;
};

/// Cuts each cycle into m = ceil(L / ell) paths from its anchor: the first has
/// length L - (m-1) ell >= 1, the others length ell.
inline PathPartition path_partition(const OrientedTwoFactor& f, int ell, bool strict = true) {
  detail::require(ell >= 1, "ell must be positive");
  PathPartition pp;
  pp.ell = ell;
  for (int c = 0; c < static_cast<int>(f.cycles().size()); ++c) {
    auto edges = cycle_edges(f, c);
    const int len = static_cast<int>(edges.size());
    if (strict)
      detail::require(len >= ell + 1, "cycle of length " + std::to_string(len) +
                                          " is shorter than ell + 1");
    const int m = (len + ell - 1) / ell;
    const int first = len - (m - 1) * ell;
    std::vector<FactorPath> paths;
    int at = 0;
    for (int j = 0; j < m; ++j) {
      const int size = j == 0 ? first : ell;
      paths.push_back({c, std::vector<EdgeId>(edges.begin() + at, edges.begin() + at + size)});
      at += size;
    }
    pp.per_cycle.push_back(std::move(paths));
  }
  return pp;
}

/// Symbols over {0,1,2}: starts with 01, ends with 2, equal symbols cyclically
/// 1..3 apart, zeros at most two apart. Built from a base for m mod 3 with blocks
/// of 201 inserted before the last symbol.
inline std::vector<int> ternary_sequence(int m) {
  detail::require(m >= 6, "ternary sequence needs m >= 6");
  static const std::vector<int> bases[3] = {
      {0, 1, 2, 0, 1, 2}, {0, 1, 0, 2, 0, 1, 2}, {0, 1, 0, 2, 1, 0, 1, 2}};
  std::vector<int> s = bases[m % 3];
  const int blocks = (m - static_cast<int>(s.size())) / 3;
  std::vector<int> out(s.begin(), s.end() - 1);
  for (int b = 0; b < blocks; ++b) out.insert(out.end(), {2, 0, 1});
  out.push_back(2);
  return out;
}

/// Mechanical check of the sequence properties.
inline bool ternary_sequence_valid(const std::vector<int>& s) {
  const int m = static_cast<int>(s.size());
  if (m < 6 || s[0] != 0 || s[1] != 1 || s[m - 1] != 2) return false;
  for (int i = 0; i < m; ++i) {
    if (s[i] < 0 || s[i] > 2) return false;
    // next occurrence of the same symbol, cyclically
    int gap = 0;
    for (int d = 1; d <= m; ++d)
      if (s[(i + d) % m] == s[i]) {
        gap = d - 1;
        break;
      }
    if (gap < 1 || gap > 3) return false;
    if (s[i] == 0 && gap > 2) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Strong colouring

/// A colouring of 0..n-1 by colours 0..colours-1 that is proper on `adj` and
/// uses every colour at most once per class.
inline bool is_strong_colouring(const std::vector<std::vector<int>>& adj,
                                const std::vector<std::vector<int>>& classes, int colours,
                                const std::vector<int>& colour) {
  const int n = static_cast<int>(adj.size());
  if (static_cast<int>(colour.size()) != n) return false;
  for (int c : colour)
    if (c < 0 || c >= colours) return false;
  for (int x = 0; x < n; ++x)
    for (int y : adj[x])
      if (colour[x] == colour[y]) return false;
  std::vector<int> seen(colours, -1);
  for (int ci = 0; ci < static_cast<int>(classes.size()); ++ci)
    for (int x : classes[ci]) {
      if (seen[colour[x]] == ci) return false;
      seen[colour[x]] = ci;
    }
  return true;
}

struct StrongColourOptions {
  std::uint64_t seed = 1;
  int restarts = 50;
  long steps_per_restart = 200000;
};

namespace detail {

inline std::optional<std::vector<int>> strong_colour_exhaustive(
    const std::vector<std::vector<int>>& adj, const std::vector<std::vector<int>>& classes,
    int colours) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> class_of(n, -1), colour(n, -1), order;
  for (int ci = 0; ci < static_cast<int>(classes.size()); ++ci)
    for (int x : classes[ci]) {
      class_of[x] = ci;
      order.push_back(x);
    }
  auto ok = [&](int x, int c) {
    for (int y : adj[x])
      if (colour[y] == c) return false;
    for (int y : classes[class_of[x]])
      if (y != x && colour[y] == c) return false;
    return true;
  };
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == order.size()) return true;
    const int x = order[i];
    for (int c = 0; c < colours; ++c)
      if (ok(x, c)) {
        colour[x] = c;
        if (self(self, i + 1)) return true;
        colour[x] = -1;
      }
    return false;
  };
  if (rec(rec, 0)) return colour;
  return std::nullopt;
}

}  // namespace detail

/// Min-conflicts local search over per-class injective colourings: a conflicted
/// element swaps colours with a classmate (or takes a colour its class leaves
/// free) so as to minimise the conflicts created. Restarts on stagnation;
/// instances of at most 20 elements are settled exhaustively instead.
inline std::vector<int> strong_colour(const std::vector<std::vector<int>>& adj,
                                      const std::vector<std::vector<int>>& classes, int colours,
                                      const StrongColourOptions& opt = {}) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> class_of(n, -1);
  for (int ci = 0; ci < static_cast<int>(classes.size()); ++ci) {
    detail::require(static_cast<int>(classes[ci].size()) <= colours,
                    "partition class larger than the number of colours");
    for (int x : classes[ci]) {
      detail::require(x >= 0 && x < n && class_of[x] < 0, "classes must partition the elements");
      class_of[x] = ci;
    }
  }
  for (int x = 0; x < n; ++x) detail::require(class_of[x] >= 0, "element outside every class");

  if (n <= 20) {
    auto c = detail::strong_colour_exhaustive(adj, classes, colours);
    if (!c) throw BudgetExhausted("strong_colour: no strong colouring exists");
    return *c;
  }

  Rng rng(opt.seed);
  std::vector<int> colour(n);
  auto conflicts_at = [&](int x, int c) {
    int k = 0;
    for (int y : adj[x])
      if (colour[y] == c) ++k;
    return k;
  };
  for (int attempt = 0; attempt < opt.restarts; ++attempt) {
    // Random injective start per class.
    std::vector<int> perm(colours);
    for (const auto& cls : classes) {
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (std::size_t i = 0; i < cls.size(); ++i) colour[cls[i]] = perm[i];
    }
    std::vector<int> bad;
    std::vector<int> in_bad(n, -1);
    auto refresh = [&](int x) {
      const bool conflicted = conflicts_at(x, colour[x]) > 0;
      if (conflicted && in_bad[x] < 0) {
        in_bad[x] = static_cast<int>(bad.size());
        bad.push_back(x);
      } else if (!conflicted && in_bad[x] >= 0) {
        const int last = bad.back();
        bad[in_bad[x]] = last;
        in_bad[last] = in_bad[x];
        bad.pop_back();
        in_bad[x] = -1;
      }
    };
    for (int x = 0; x < n; ++x) refresh(x);
    std::vector<int> holder(colours, -1);
    for (long step = 0; step < opt.steps_per_restart && !bad.empty(); ++step) {
      const int x = bad[uniform_int(rng, 0, static_cast<int>(bad.size()) - 1)];
      const auto& cls = classes[class_of[x]];
      std::fill(holder.begin(), holder.end(), -1);
      for (int y : cls) holder[colour[y]] = y;
      // Score of moving x to colour c (and its holder, if any, to colour[x]).
      int best_delta = 0, best_c = -1, ties = 0;
      const int cx = colour[x];
      const int before_x = conflicts_at(x, cx);
      for (int c = 0; c < colours; ++c) {
        if (c == cx) continue;
        const int y = holder[c];
        int delta = conflicts_at(x, c) - before_x;
        if (y >= 0) {
          delta += conflicts_at(y, cx) - conflicts_at(y, c);
          // x and y trade colours, so an edge between them never conflicts
          if (std::find(adj[x].begin(), adj[x].end(), y) != adj[x].end()) delta -= 2;
        }
        if (best_c < 0 || delta < best_delta) {
          best_delta = delta;
          best_c = c;
          ties = 1;
        } else if (delta == best_delta && uniform_int(rng, 0, ties++) == 0) {
          best_c = c;
        }
      }
      if (best_c < 0) continue;
      // Occasional random walk to escape plateaus.
      if (best_delta >= 0 && uniform01(rng) < 0.1) {
        best_c = uniform_int(rng, 0, colours - 1);
        if (best_c == cx) continue;
      }
      const int y = holder[best_c];
      colour[x] = best_c;
      if (y >= 0) colour[y] = cx;
      refresh(x);
      for (int z : adj[x]) refresh(z);
      if (y >= 0) {
        refresh(y);
        for (int z : adj[y]) refresh(z);
      }
    }
    if (bad.empty()) {
      detail::ensure(is_strong_colouring(adj, classes, colours, colour),
                     "strong_colour produced an invalid colouring");
      return colour;
    }
  }
  throw BudgetExhausted("strong_colour: restart budget exhausted");
}

// ---------------------------------------------------------------------------
// Boundary sets and verification

struct BoundarySet {
  std::vector<EdgeId> edges;  // sorted
  int colour = 0;             // r, 0-based
  int symbol = 0;             // t
};

struct SparseReport {
  bool four_distant = true;
  std::optional<std::pair<EdgeId, EdgeId>> close_pair;
  bool lengths_ok = true;
  int min_length = 0;
  int max_length = 0;
  std::vector<EdgeId> bad_component;  ///< a component outside [ell, 7 ell]
  bool q_independent = true;
  std::optional<std::pair<EdgeId, EdgeId>> q_pair;
  bool two_per_cycle = true;
  int sparse_cycle = -1;  ///< a cycle with fewer than two boundary edges

  bool ok() const { return four_distant && lengths_ok && q_independent && two_per_cycle; }
};

/// Components of F - B per cycle, as edge lists along the orientation. A cycle
/// without boundary edges yields its full edge list with `closed` set.
struct FactorComponent {
  int cycle = 0;
  std::vector<EdgeId> edges;
  bool closed = false;
};

inline std::vector<FactorComponent> factor_components(const OrientedTwoFactor& f,
                                                      const std::vector<char>& in_b) {
  std::vector<FactorComponent> out;
  for (int c = 0; c < static_cast<int>(f.cycles().size()); ++c) {
    auto edges = cycle_edges(f, c);
    const int len = static_cast<int>(edges.size());
    int start = -1;
    for (int i = 0; i < len; ++i)
      if (in_b[edges[i]]) {
        start = i;
        break;
      }
    if (start < 0) {
      out.push_back({c, edges, true});
      continue;
    }
    FactorComponent cur{c, {}, false};
    for (int d = 1; d <= len; ++d) {
      EdgeId e = edges[(start + d) % len];
      if (in_b[e]) {
        out.push_back(cur);
        cur.edges.clear();
      } else {
        cur.edges.push_back(e);
      }
    }
  }
  return out;
}

/// Checks the four sparseness clauses independently of how B was produced.
inline SparseReport verify_sparse(const Graph& g, const OrientedTwoFactor& f,
                                  const std::vector<EdgeId>& b, int ell,
                                  const ConstraintGraph* q = nullptr) {
  SparseReport r;
  std::vector<char> in_b(g.num_edges(), 0);
  for (EdgeId e : b) {
    detail::require(e >= 0 && e < g.num_edges() && f.contains(e), "boundary edge not in F");
    in_b[e] = 1;
  }
  // 4-distant: endpoints of distinct boundary edges at G-distance >= 3.
  for (std::size_t i = 0; i < b.size() && r.four_distant; ++i) {
    const Vertex src[] = {g.edge(b[i]).u, g.edge(b[i]).v};
    auto dist = vertex_bfs(g, src, 2);
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (j == i) continue;
      const Edge& o = g.edge(b[j]);
      if (dist[o.u] >= 0 || dist[o.v] >= 0) {
        r.four_distant = false;
        r.close_pair = std::pair{std::min(b[i], b[j]), std::max(b[i], b[j])};
        break;
      }
    }
  }
  auto comps = factor_components(f, in_b);
  r.min_length = std::numeric_limits<int>::max();
  for (const auto& comp : comps) {
    const int len = static_cast<int>(comp.edges.size());
    r.min_length = std::min(r.min_length, len);
    r.max_length = std::max(r.max_length, len);
    if ((comp.closed || len < ell || len > 7 * ell) && r.lengths_ok) {
      r.lengths_ok = false;
      r.bad_component = comp.edges;
    }
  }
  if (comps.empty()) r.min_length = 0;
  if (q) {
    for (EdgeId e : b) {
      for (EdgeId o : q->neighbours(e))
        if (in_b[o]) {
          r.q_independent = false;
          r.q_pair = std::pair{std::min(e, o), std::max(e, o)};
          break;
        }
      if (!r.q_independent) break;
    }
  }
  for (int c = 0; c < static_cast<int>(f.cycles().size()); ++c) {
    int count = 0;
    for (EdgeId e : cycle_edges(f, c)) count += in_b[e];
    if (count < 2) {
      r.two_per_cycle = false;
      r.sparse_cycle = c;
      break;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Decomposition

struct Decomposition {
  int ell = 0;
  std::vector<BoundarySet> sets;
  std::vector<SparseReport> reports;
  /// False for the rotation fallback, whose sets overlap.
  bool partition = true;
  /// Cycles too short for the sequence construction forced the fallback.
  bool rotation_fallback = false;
  /// Short first paths could not all be packed into full classes.
  int short_classes = 0;
  /// Why the fallback was taken: "short-cycle" or "colouring".
  std::string fallback_reason;

  bool all_sparse() const {
    return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.ok(); });
  }
};

namespace detail {

/// One edge per cycle, at position s mod L from the anchor, for s < count.
inline Decomposition rotation_family(const Graph& g, const OrientedTwoFactor& f, int ell,
                                     const ConstraintGraph* q) {
  Decomposition d;
  d.ell = ell;
  d.partition = false;
  d.rotation_fallback = true;
  for (int s = 0; s < 3 * ell; ++s) {
    BoundarySet b;
    b.colour = s / 3;
    b.symbol = s % 3;
    for (int c = 0; c < static_cast<int>(f.cycles().size()); ++c) {
      auto edges = cycle_edges(f, c);
      b.edges.push_back(edges[s % edges.size()]);
    }
    std::sort(b.edges.begin(), b.edges.end());
    d.reports.push_back(verify_sparse(g, f, b.edges, ell, q));
    d.sets.push_back(std::move(b));
  }
  return d;
}

}  // namespace detail

/// Splits E(F) into 3 ell boundary sets B_{r,t}: r is a strong colour class over
/// the path partition, t the ternary symbol of the path. In relaxed mode, when
/// some cycle is too short for a ternary sequence, falls back to a rotation
/// family with one boundary edge per cycle (not a partition; reported).
inline Decomposition decompose(const Graph& g, const OrientedTwoFactor& f,
                               const SparseParams& params, const ConstraintGraph* q = nullptr,
                               std::uint64_t seed = 1) {
  const int ell = params.ell;
  detail::require(ell >= 2, "ell must be at least 2");
  if (params.strict) {
    const int bound = q ? strict_ell_bound(*q) : 83;
    detail::require(ell >= bound, "strict mode needs ell >= " + std::to_string(bound));
  }
  bool short_cycle = false;
  for (const auto& c : f.cycles())
    if (static_cast<int>(c.size()) < 5 * ell + 1) short_cycle = true;
  if (short_cycle) {
    detail::require(!params.strict, "cycle shorter than the sequence construction allows");
    auto d = detail::rotation_family(g, f, ell, q);
    d.fallback_reason = "short-cycle";
    return d;
  }

  auto pp = path_partition(f, ell, true);
  // Local ids for F-edges.
  std::vector<int> local(g.num_edges(), -1);
  std::vector<EdgeId> global;
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (f.contains(e)) {
      local[e] = static_cast<int>(global.size());
      global.push_back(e);
    }
  const int nf = static_cast<int>(global.size());

  // Classes: full paths stay; short first paths are chained and chunked.
  std::vector<std::vector<int>> classes;
  std::vector<int> leftovers;
  std::vector<int> symbol_of(nf, -1);
  for (const auto& paths : pp.per_cycle) {
    auto seq = ternary_sequence(static_cast<int>(paths.size()));
    for (std::size_t j = 0; j < paths.size(); ++j) {
      std::vector<int> cls;
      for (EdgeId e : paths[j].edges) {
        cls.push_back(local[e]);
        symbol_of[local[e]] = seq[j];
      }
      if (static_cast<int>(cls.size()) == ell)
        classes.push_back(std::move(cls));
      else
        leftovers.insert(leftovers.end(), cls.begin(), cls.end());
    }
  }
  int short_classes = 0;
  for (std::size_t at = 0; at < leftovers.size(); at += ell) {
    const std::size_t end = std::min(leftovers.size(), at + ell);
    classes.emplace_back(leftovers.begin() + at, leftovers.begin() + end);
    if (static_cast<int>(end - at) < ell) ++short_classes;
  }

  // Auxiliary graph: T(G)-distance <= 3, plus Q. Relaxed mode keeps only pairs
  // with equal symbols, the only ones that can meet in one set; small ell is
  // often uncolourable otherwise.
  std::vector<std::vector<int>> aux(nf);
  for (int i = 0; i < nf; ++i) {
    const Edge& e = g.edge(global[i]);
    const Vertex src[] = {e.u, e.v};
    auto dist = vertex_bfs(g, src, 2);
    for (int j = 0; j < nf; ++j) {
      if (j == i) continue;
      if (!params.strict && symbol_of[i] != symbol_of[j]) continue;
      const Edge& o = g.edge(global[j]);
      const bool close = dist[o.u] >= 0 || dist[o.v] >= 0;
      if (close || (q && q->adjacent(global[i], global[j]))) aux[i].push_back(j);
    }
  }
  std::vector<int> colour;
  try {
    colour = strong_colour(aux, classes, ell, {.seed = seed});
  } catch (const BudgetExhausted&) {
    if (params.strict) throw;
    auto d = detail::rotation_family(g, f, ell, q);
    d.fallback_reason = "colouring";
    return d;
  }

  Decomposition d;
  d.ell = ell;
  d.short_classes = short_classes;
  d.sets.resize(3 * ell);
  for (int r = 0; r < ell; ++r)
    for (int t = 0; t < 3; ++t) {
      d.sets[3 * r + t].colour = r;
      d.sets[3 * r + t].symbol = t;
    }
  for (int i = 0; i < nf; ++i) d.sets[3 * colour[i] + symbol_of[i]].edges.push_back(global[i]);
  for (auto& b : d.sets) {
    std::sort(b.edges.begin(), b.edges.end());
    d.reports.push_back(verify_sparse(g, f, b.edges, ell, q));
  }
  if (params.strict)
    for (std::size_t i = 0; i < d.sets.size(); ++i)
      detail::ensure(d.reports[i].ok(), "strict decomposition produced a set that is not sparse");
  return d;
}

}  // namespace ftc

#endif  // FTC_SPARSE_DECOMP_HPP
