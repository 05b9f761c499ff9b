#ifndef FTC_TWO_FACTOR_HPP
#define FTC_TWO_FACTOR_HPP

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "ftc/errors.hpp"
#include "ftc/graph.hpp"
#include "ftc/matching.hpp"

namespace ftc {

/// A spanning 2-regular subgraph F with every cycle directed.
///
/// For v, succ(v) is v⁺ and pred(v) is v⁻; out_edge(v) is the F-edge whose left
/// end is v. Cycles are listed starting at their smallest vertex (the anchor)
/// and following the orientation.
class OrientedTwoFactor {
 public:
  OrientedTwoFactor() = default;

  /// Takes the orientation as given. Throws unless succ is a permutation whose
  /// arcs are edges of g and whose cycles all have length >= 3.
  static OrientedTwoFactor from_successors(const Graph& g, std::vector<Vertex> succ) {
    const int n = g.num_vertices();
    detail::require(static_cast<int>(succ.size()) == n, "successor map has wrong size");
    OrientedTwoFactor f;
    f.succ_ = std::move(succ);
    f.pred_.assign(n, -1);
    f.out_edge_.assign(n, -1);
    f.in_factor_.assign(g.num_edges(), 0);
    for (Vertex v = 0; v < n; ++v) {
      const Vertex w = f.succ_[v];
      detail::require(w >= 0 && w < n, "successor out of range");
      detail::require(f.pred_[w] < 0, "successor map is not a bijection");
      f.pred_[w] = v;
      auto e = g.find_edge(v, w);
      detail::require(e.has_value(), "arc " + std::to_string(v) + "->" + std::to_string(w) +
                                         " is not an edge of the graph");
      detail::require(!f.in_factor_[*e], "edge used twice by the factor");
      f.in_factor_[*e] = 1;
      f.out_edge_[v] = *e;
    }
    f.build_cycles();
    return f;
  }

  /// Orients a 2-regular spanning edge set: each cycle is traversed from its
  /// smallest vertex toward that vertex's smaller-id factor neighbour.
  static OrientedTwoFactor from_edge_set(const Graph& g, const std::vector<char>& in_factor) {
    const int n = g.num_vertices();
    detail::require(static_cast<int>(in_factor.size()) == g.num_edges(),
                    "factor edge mask has wrong size");
    std::vector<std::vector<Vertex>> nb(n);
    for (EdgeId e = 0; e < g.num_edges(); ++e)
      if (in_factor[e]) {
        nb[g.edge(e).u].push_back(g.edge(e).v);
        nb[g.edge(e).v].push_back(g.edge(e).u);
      }
    for (Vertex v = 0; v < n; ++v)
      detail::require(nb[v].size() == 2, "edge set is not 2-regular at vertex " +
                                             std::to_string(v));
    std::vector<Vertex> succ(n, -1);
    for (Vertex s = 0; s < n; ++s) {
      if (succ[s] >= 0) continue;
      Vertex prev = s;
      Vertex cur = std::min(nb[s][0], nb[s][1]);
      succ[s] = cur;
      while (cur != s) {
        Vertex next = nb[cur][0] == prev ? nb[cur][1] : nb[cur][0];
        succ[cur] = next;
        prev = cur;
        cur = next;
      }
    }
    return from_successors(g, std::move(succ));
  }

  int num_vertices() const { return static_cast<int>(succ_.size()); }
  Vertex succ(Vertex v) const { return succ_[v]; }
  Vertex pred(Vertex v) const { return pred_[v]; }
  /// The F-edge v v⁺.
  EdgeId out_edge(Vertex v) const { return out_edge_[v]; }
  /// The F-edge v⁻ v.
  EdgeId in_edge(Vertex v) const { return out_edge_[pred_[v]]; }
  bool contains(EdgeId e) const { return in_factor_[e] != 0; }
  const std::vector<char>& edge_mask() const { return in_factor_; }
  const std::vector<Vertex>& successors() const { return succ_; }

  /// Left end of an F-edge (its tail under the orientation).
  Vertex tail(const Graph& g, EdgeId e) const {
    const Edge& ed = g.edge(e);
    return succ_[ed.u] == ed.v ? ed.u : ed.v;
  }
  Vertex head(const Graph& g, EdgeId e) const { return g.edge(e).other(tail(g, e)); }

  const std::vector<std::vector<Vertex>>& cycles() const { return cycles_; }
  int cycle_of(Vertex v) const { return cycle_of_[v]; }
  /// Position of v along its cycle, counted from the anchor.
  int position(Vertex v) const { return position_[v]; }

  /// Arcs (v, v⁺) in cycle order, for persisting the orientation.
  std::vector<std::pair<Vertex, Vertex>> arcs() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    for (const auto& c : cycles_)
      for (Vertex v : c) out.emplace_back(v, succ_[v]);
    return out;
  }

 private:
  void build_cycles() {
    const int n = num_vertices();
    cycle_of_.assign(n, -1);
    position_.assign(n, -1);
    cycles_.clear();
    for (Vertex s = 0; s < n; ++s) {
      if (cycle_of_[s] >= 0) continue;
      std::vector<Vertex> cyc;
      Vertex v = s;
      do {
        cycle_of_[v] = static_cast<int>(cycles_.size());
        position_[v] = static_cast<int>(cyc.size());
        cyc.push_back(v);
        v = succ_[v];
      } while (v != s);
      detail::require(cyc.size() >= 3, "factor contains a cycle shorter than 3");
      cycles_.push_back(std::move(cyc));
    }
  }

  std::vector<Vertex> succ_, pred_;
  std::vector<EdgeId> out_edge_;
  std::vector<char> in_factor_;
  std::vector<std::vector<Vertex>> cycles_;
  std::vector<int> cycle_of_, position_;
};

/// Neighbours of v joined to it by edges outside F (deg(v) - 2 of them).
inline std::vector<Vertex> mates(const Graph& g, const OrientedTwoFactor& f, Vertex v) {
  std::vector<Vertex> out;
  for (const auto& inc : g.incident(v))
    if (!f.contains(inc.edge)) out.push_back(inc.neighbour);
  return out;
}

/// F = G - M for a perfect matching M of a cubic graph.
inline OrientedTwoFactor complement_two_factor(const Graph& g, const Matching& m) {
  detail::require(g.is_regular(3), "complement_two_factor needs a cubic graph");
  detail::require(m.perfect && is_matching(g, m.edges) &&
                      2 * static_cast<int>(m.edges.size()) == g.num_vertices(),
                  "matching is not perfect");
  std::vector<char> mask(g.num_edges(), 1);
  for (EdgeId e : m.edges) mask[e] = 0;
  return OrientedTwoFactor::from_edge_set(g, mask);
}

namespace detail {

// Kuhn's augmenting-path matching on a bipartite graph given as left adjacency.
inline std::vector<int> bipartite_perfect_matching(const std::vector<std::vector<int>>& adj,
                                                   int right_size) {
  const int left = static_cast<int>(adj.size());
  std::vector<int> match_right(right_size, -1);
  std::vector<int> seen(right_size, -1);
  auto augment = [&](auto&& self, int u, int stamp) -> bool {
    for (int w : adj[u]) {
      if (seen[w] == stamp) continue;
      seen[w] = stamp;
      if (match_right[w] < 0 || self(self, match_right[w], stamp)) {
        match_right[w] = u;
        return true;
      }
    }
    return false;
  };
  for (int u = 0; u < left; ++u)
    if (!augment(augment, u, u)) throw InvariantError("regular bipartite graph lacks a perfect matching");
  std::vector<int> match_left(left, -1);
  for (int w = 0; w < right_size; ++w)
    if (match_right[w] >= 0) match_left[match_right[w]] = w;
  return match_left;
}

}  // namespace detail

/// Petersen's 2-factorisation of a regular graph of even degree: orient along an
/// Euler circuit of each component, split every vertex into an out-copy and an
/// in-copy, and peel perfect matchings off the resulting regular bipartite graph.
inline std::vector<OrientedTwoFactor> two_factorize_even(const Graph& g) {
  const int n = g.num_vertices();
  const int delta = g.max_degree();
  detail::require(n > 0 && g.is_regular(delta), "two_factorize_even needs a regular graph");
  detail::require(delta % 2 == 0 && delta >= 2, "two_factorize_even needs even degree");

  // Hierholzer per component; records the direction each edge is traversed.
  std::vector<char> used(g.num_edges(), 0);
  std::vector<std::pair<Vertex, Vertex>> arcs;
  arcs.reserve(g.num_edges());
  std::vector<std::size_t> next(n, 0);
  for (Vertex s = 0; s < n; ++s) {
    if (next[s] == g.incident(s).size()) continue;
    std::vector<std::pair<Vertex, EdgeId>> stack{{s, -1}};
    while (!stack.empty()) {
      Vertex v = stack.back().first;
      auto inc = g.incident(v);
      while (next[v] < inc.size() && used[inc[next[v]].edge]) ++next[v];
      if (next[v] == inc.size()) {
        stack.pop_back();
        continue;
      }
      const Incidence step = inc[next[v]];
      used[step.edge] = 1;
      arcs.emplace_back(v, step.neighbour);
      stack.emplace_back(step.neighbour, step.edge);
    }
  }
  detail::ensure(static_cast<int>(arcs.size()) == g.num_edges(), "Euler orientation incomplete");

  // Bipartite multigraph: out-copy of v -> in-copy of w for each arc v->w.
  std::vector<std::vector<std::pair<int, EdgeId>>> out_arcs(n);
  for (auto [v, w] : arcs) out_arcs[v].emplace_back(w, *g.find_edge(v, w));

  std::vector<OrientedTwoFactor> factors;
  for (int round = 0; round < delta / 2; ++round) {
    std::vector<std::vector<int>> adj(n);
    for (Vertex v = 0; v < n; ++v)
      for (auto [w, e] : out_arcs[v]) adj[v].push_back(w);
    auto match = detail::bipartite_perfect_matching(adj, n);
    std::vector<char> mask(g.num_edges(), 0);
    for (Vertex v = 0; v < n; ++v) {
      auto& lst = out_arcs[v];
      auto it = std::find_if(lst.begin(), lst.end(),
                             [&](const auto& a) { return a.first == match[v]; });
      detail::ensure(it != lst.end(), "matched arc missing");
      mask[it->second] = 1;
      lst.erase(it);
    }
    factors.push_back(OrientedTwoFactor::from_edge_set(g, mask));
  }
  return factors;
}

}  // namespace ftc

#endif  // FTC_TWO_FACTOR_HPP
