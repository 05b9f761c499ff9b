#ifndef FTC_MATCHING_HPP
#define FTC_MATCHING_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

#include "ftc/graph.hpp"

namespace ftc {

struct Matching {
  std::vector<EdgeId> edges;  // sorted
  bool perfect = false;

  friend bool operator==(const Matching&, const Matching&) = default;
};

/// True iff the edges are pairwise vertex-disjoint.
inline bool is_matching(const Graph& g, const std::vector<EdgeId>& edges) {
  std::vector<char> used(g.num_vertices(), 0);
  for (EdgeId e : edges) {
    const auto& ed = g.edge(e);
    if (used[ed.u] || used[ed.v]) return false;
    used[ed.u] = used[ed.v] = 1;
  }
  return true;
}

inline Matching make_matching(const Graph& g, std::vector<EdgeId> edges) {
  std::sort(edges.begin(), edges.end());
  detail::require(is_matching(g, edges), "edge set is not a matching");
  Matching m;
  m.perfect = 2 * static_cast<int>(edges.size()) == g.num_vertices();
  m.edges = std::move(edges);
  return m;
}

/// Maximum-cardinality matching by Edmonds' blossom algorithm (Boost.Graph).
inline Matching maximum_matching(const Graph& g) {
  using BGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  BGraph bg(g.num_vertices());
  for (const auto& e : g.edges()) boost::add_edge(e.u, e.v, bg);
  std::vector<boost::graph_traits<BGraph>::vertex_descriptor> mate(g.num_vertices());
  boost::edmonds_maximum_cardinality_matching(bg, mate.data());
  std::vector<EdgeId> chosen;
  const auto none = boost::graph_traits<BGraph>::null_vertex();
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (mate[v] == none) continue;
    const auto w = static_cast<Vertex>(mate[v]);
    if (v < w) chosen.push_back(*g.find_edge(v, w));
  }
  return make_matching(g, std::move(chosen));
}

inline std::optional<Matching> find_perfect_matching(const Graph& g) {
  if (g.num_vertices() % 2 != 0) return std::nullopt;
  Matching m = maximum_matching(g);
  if (!m.perfect) return std::nullopt;
  return m;
}

struct MatchingEnumeration {
  std::vector<Matching> matchings;
  bool truncated = false;  ///< cap reached before the search finished
};

/// All perfect matchings, up to `cap`, by branching on the lowest-indexed uncovered
/// vertex. Graphs above 30 vertices get a blossom existence check first.
inline MatchingEnumeration perfect_matchings(const Graph& g, std::size_t cap) {
  MatchingEnumeration out;
  const int n = g.num_vertices();
  if (n % 2 != 0) return out;
  if (n > 30 && !find_perfect_matching(g)) return out;

  std::vector<char> covered(n, 0);
  std::vector<EdgeId> current;
  current.reserve(n / 2);

  auto recurse = [&](auto&& self, Vertex from) -> void {
    if (out.truncated) return;
    Vertex v = from;
    while (v < n && covered[v]) ++v;
    if (v == n) {
      if (out.matchings.size() >= cap) {
        out.truncated = true;
        return;
      }
      Matching m;
      m.edges = current;
      std::sort(m.edges.begin(), m.edges.end());
      m.perfect = true;
      out.matchings.push_back(std::move(m));
      return;
    }
    covered[v] = 1;
    for (const auto& inc : g.incident(v)) {
      if (covered[inc.neighbour]) continue;
      covered[inc.neighbour] = 1;
      current.push_back(inc.edge);
      self(self, v + 1);
      current.pop_back();
      covered[inc.neighbour] = 0;
      if (out.truncated) break;
    }
    covered[v] = 0;
  };
  if (n == 0) {
    out.matchings.push_back(Matching{{}, true});
    return out;
  }
  recurse(recurse, 0);
  std::sort(out.matchings.begin(), out.matchings.end(),
            [](const Matching& a, const Matching& b) { return a.edges < b.edges; });
  return out;
}

}  // namespace ftc

#endif  // FTC_MATCHING_HPP
