#ifndef FTC_TOTAL_SET_HPP
#define FTC_TOTAL_SET_HPP

#include <optional>
#include <string>
#include <vector>

#include "ftc/graph.hpp"

namespace ftc {

/// A set of total elements as a membership mask over element indices
/// (vertices first, then edges; see Graph::index_of).
using ElementMask = std::vector<char>;

inline std::vector<int> mask_members(const ElementMask& m) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(m.size()); ++i)
    if (m[i]) out.push_back(i);
  return out;
}

/// First pair of adjacent members, if any.
inline std::optional<std::pair<int, int>> find_total_conflict(const Graph& g,
                                                              const ElementMask& m) {
  for (int x = 0; x < g.num_elements(); ++x) {
    if (!m[x]) continue;
    std::optional<std::pair<int, int>> hit;
    g.for_each_total_neighbour(x, [&](int y) {
      if (!hit && y > x && m[y]) hit = std::pair{x, y};
    });
    if (hit) return hit;
  }
  return std::nullopt;
}

inline bool is_total_independent(const Graph& g, const ElementMask& m) {
  return !find_total_conflict(g, m).has_value();
}

/// Number of members among {v} and the edges at v.
inline int y_count(const Graph& g, const ElementMask& m, Vertex v) {
  int c = m[g.index_of_vertex(v)] ? 1 : 0;
  for (const auto& inc : g.incident(v)) c += m[g.index_of_edge(inc.edge)] ? 1 : 0;
  return c;
}

inline bool is_full(const Graph& g, const ElementMask& m) {
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (y_count(g, m, v) == 0) return false;
  return true;
}

/// Every vertex sees exactly one member among itself and its edges.
inline bool exactly_one_of_y(const Graph& g, const ElementMask& m) {
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (y_count(g, m, v) != 1) return false;
  return true;
}

inline std::string describe_members(const Graph& g, const ElementMask& m) {
  std::string s = "{";
  bool first = true;
  for (int i : mask_members(m)) {
    if (!first) s += ", ";
    s += g.element_at(i).to_string();
    first = false;
  }
  return s + "}";
}

}  // namespace ftc

#endif  // FTC_TOTAL_SET_HPP
