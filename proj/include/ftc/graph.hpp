#ifndef FTC_GRAPH_HPP
#define FTC_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ftc/errors.hpp"

namespace ftc {

using Vertex = int;
using EdgeId = int;

/// Undirected edge stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Vertex other(Vertex w) const { return w == u ? v : u; }
  bool has(Vertex w) const { return w == u || w == v; }
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Incidence {
  Vertex neighbour;
  EdgeId edge;
};

/// A vertex or an edge of a host graph, i.e. a vertex of the total graph T(G).
struct TotalElement {
  enum class Kind : std::uint8_t { vertex, edge };

  Kind kind = Kind::vertex;
  int a = 0;  ///< vertex id, or the smaller endpoint
  int b = 0;  ///< unused for vertices, the larger endpoint for edges

  static TotalElement vertex(Vertex v) { return {Kind::vertex, v, 0}; }
  static TotalElement edge(Vertex x, Vertex y) {
    return {Kind::edge, std::min(x, y), std::max(x, y)};
  }

  bool is_vertex() const { return kind == Kind::vertex; }
  bool is_edge() const { return kind == Kind::edge; }

  std::string to_string() const {
    if (is_vertex()) return "v" + std::to_string(a);
    return "e" + std::to_string(a) + "-" + std::to_string(b);
  }

  friend bool operator==(const TotalElement&, const TotalElement&) = default;
  friend auto operator<=>(const TotalElement&, const TotalElement&) = default;
};

inline constexpr int kInfiniteGirth = std::numeric_limits<int>::max();

/// Simple undirected graph, immutable after construction.
///
/// Edges are kept in canonical lexicographic order, so an EdgeId is stable for a
/// given edge set regardless of input order. Total elements are indexed densely:
/// vertex v has index v, edge id e has index n + e.
class Graph {
 public:
  Graph() = default;

  Graph(int n, const std::vector<std::pair<int, int>>& edge_list) : n_(n) {
    detail::require(n >= 0, "vertex count must be non-negative");
    edges_.reserve(edge_list.size());
    for (auto [x, y] : edge_list) {
      detail::require(x >= 0 && x < n && y >= 0 && y < n,
                      "edge endpoint out of range: " + std::to_string(x) + " " +
                          std::to_string(y));
      detail::require(x != y, "loop at vertex " + std::to_string(x));
      edges_.push_back({std::min(x, y), std::max(x, y)});
    }
    std::sort(edges_.begin(), edges_.end());
    auto dup = std::adjacent_find(edges_.begin(), edges_.end());
    detail::require(dup == edges_.end(),
                    dup == edges_.end() ? std::string{}
                                        : "duplicate edge " + std::to_string(dup->u) +
                                              " " + std::to_string(dup->v));
    build_adjacency();
    girth_ = compute_girth();
  }

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_elements() const { return n_ + num_edges(); }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const Incidence> incident(Vertex v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  int degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  int max_degree() const { return max_degree_; }
  int min_degree() const { return min_degree_; }
  bool is_regular(int d) const { return n_ > 0 && min_degree_ == d && max_degree_ == d; }

  /// Shortest cycle length, kInfiniteGirth for forests.
  int girth() const { return girth_; }

  std::optional<EdgeId> find_edge(Vertex x, Vertex y) const {
    if (x < 0 || y < 0 || x >= n_ || y >= n_ || x == y) return std::nullopt;
    Edge key{std::min(x, y), std::max(x, y)};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    if (it == edges_.end() || *it != key) return std::nullopt;
    return static_cast<EdgeId>(it - edges_.begin());
  }

  bool adjacent(Vertex x, Vertex y) const { return find_edge(x, y).has_value(); }

  // Total-element indexing.
  int index_of_vertex(Vertex v) const { return v; }
  int index_of_edge(EdgeId e) const { return n_ + e; }
  bool index_is_vertex(int idx) const { return idx < n_; }
  EdgeId edge_of_index(int idx) const { return idx - n_; }

  int index_of(const TotalElement& x) const {
    if (x.is_vertex()) {
      detail::require(x.a >= 0 && x.a < n_, "vertex not in graph: " + x.to_string());
      return x.a;
    }
    auto e = find_edge(x.a, x.b);
    detail::require(e.has_value(), "edge not in graph: " + x.to_string());
    return n_ + *e;
  }

  TotalElement element_at(int idx) const {
    if (idx < n_) return TotalElement::vertex(idx);
    const Edge& e = edges_[idx - n_];
    return TotalElement::edge(e.u, e.v);
  }

  /// Calls f(j) for every neighbour index j of index idx in the total graph.
  template <typename Fn>
  void for_each_total_neighbour(int idx, Fn&& f) const {
    if (idx < n_) {
      for (const auto& inc : incident(idx)) {
        f(inc.neighbour);
        f(n_ + inc.edge);
      }
      return;
    }
    const EdgeId e = idx - n_;
    const Edge& ed = edges_[e];
    f(ed.u);
    f(ed.v);
    for (Vertex end : {ed.u, ed.v})
      for (const auto& inc : incident(end))
        if (inc.edge != e) f(n_ + inc.edge);
  }

 private:
  void build_adjacency() {
    std::vector<int> deg(n_, 0);
    for (const auto& e : edges_) {
      ++deg[e.u];
      ++deg[e.v];
    }
    offsets_.assign(n_ + 1, 0);
    for (int v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
    adjacency_.resize(2 * edges_.size());
    std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
    for (EdgeId id = 0; id < num_edges(); ++id) {
      const auto& e = edges_[id];
      adjacency_[fill[e.u]++] = {e.v, id};
      adjacency_[fill[e.v]++] = {e.u, id};
    }
    max_degree_ = n_ ? *std::max_element(deg.begin(), deg.end()) : 0;
    min_degree_ = n_ ? *std::min_element(deg.begin(), deg.end()) : 0;
  }

  // BFS from one endpoint of each edge with that edge removed.
  int compute_girth() const {
    int best = kInfiniteGirth;
    std::vector<int> dist(n_, -1);
    std::vector<Vertex> touched;
    std::queue<Vertex> q;
    for (EdgeId id = 0; id < num_edges(); ++id) {
      const auto [s, t] = edges_[id];
      dist[s] = 0;
      touched.push_back(s);
      q.push(s);
      while (!q.empty()) {
        Vertex x = q.front();
        q.pop();
        if (best != kInfiniteGirth && dist[x] + 2 >= best) break;
        for (const auto& inc : incident(x)) {
          if (inc.edge == id || dist[inc.neighbour] >= 0) continue;
          dist[inc.neighbour] = dist[x] + 1;
          touched.push_back(inc.neighbour);
          if (inc.neighbour == t) {
            best = std::min(best, dist[t] + 1);
            break;
          }
          q.push(inc.neighbour);
        }
        if (dist[t] >= 0) break;
      }
      std::queue<Vertex>().swap(q);
      for (Vertex v : touched) dist[v] = -1;
      touched.clear();
    }
    return best;
  }

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> offsets_{0};
  std::vector<Incidence> adjacency_;
  int max_degree_ = 0;
  int min_degree_ = 0;
  int girth_ = kInfiniteGirth;
};

// ---------------------------------------------------------------------------
// Structural queries

/// Connected-component label per vertex; returns the number of components.
inline int connected_components(const Graph& g, std::vector<int>& label) {
  label.assign(g.num_vertices(), -1);
  int count = 0;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.num_vertices(); ++s) {
    if (label[s] >= 0) continue;
    label[s] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      for (const auto& inc : g.incident(x))
        if (label[inc.neighbour] < 0) {
          label[inc.neighbour] = count;
          stack.push_back(inc.neighbour);
        }
    }
    ++count;
  }
  return count;
}

inline bool is_connected(const Graph& g) {
  std::vector<int> label;
  return g.num_vertices() <= 1 || connected_components(g, label) == 1;
}

/// Bridges by DFS low-link (iterative).
inline std::vector<EdgeId> bridges(const Graph& g) {
  const int n = g.num_vertices();
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<EdgeId> out;
  struct Frame {
    Vertex v;
    EdgeId via;
    std::size_t next;
  };
  std::vector<Frame> stack;
  int timer = 0;
  for (Vertex root = 0; root < n; ++root) {
    if (disc[root] >= 0) continue;
    disc[root] = low[root] = timer++;
    stack.push_back({root, -1, 0});
    while (!stack.empty()) {
      Frame& f = stack.back();
      auto inc = g.incident(f.v);
      if (f.next < inc.size()) {
        const Incidence step = inc[f.next++];
        if (step.edge == f.via) continue;
        if (disc[step.neighbour] >= 0) {
          low[f.v] = std::min(low[f.v], disc[step.neighbour]);
        } else {
          disc[step.neighbour] = low[step.neighbour] = timer++;
          stack.push_back({step.neighbour, step.edge, 0});
        }
        continue;
      }
      const Frame done = f;
      stack.pop_back();
      if (!stack.empty()) {
        Vertex parent = stack.back().v;
        low[parent] = std::min(low[parent], low[done.v]);
        if (low[done.v] > disc[parent]) out.push_back(done.via);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_bridgeless(const Graph& g) { return bridges(g).empty(); }

// ---------------------------------------------------------------------------
// Total-graph geometry

/// Distances (in T(G)) from a set of source indices to every element index.
/// Unreachable elements get -1. Stops expanding past max_depth when given.
inline std::vector<int> total_bfs(const Graph& g, std::span<const int> sources,
                                  int max_depth = std::numeric_limits<int>::max()) {
  std::vector<int> dist(g.num_elements(), -1);
  std::queue<int> q;
  for (int s : sources) {
    if (dist[s] == 0) continue;
    dist[s] = 0;
    q.push(s);
  }
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    if (dist[x] >= max_depth) continue;
    g.for_each_total_neighbour(x, [&](int y) {
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        q.push(y);
      }
    });
  }
  return dist;
}

/// Distance between two elements in the total graph; -1 if disconnected.
inline int total_distance(const Graph& g, const TotalElement& x, const TotalElement& y) {
  const int from = g.index_of(x);
  const int to = g.index_of(y);
  if (from == to) return 0;
  const int src[] = {from};
  return total_bfs(g, src)[to];
}

/// Vertex-to-vertex BFS distances, truncated at max_depth (-1 beyond).
inline std::vector<int> vertex_bfs(const Graph& g, std::span<const Vertex> sources,
                                   int max_depth = std::numeric_limits<int>::max()) {
  std::vector<int> dist(g.num_vertices(), -1);
  std::queue<Vertex> q;
  for (Vertex s : sources) {
    if (dist[s] == 0) continue;
    dist[s] = 0;
    q.push(s);
  }
  while (!q.empty()) {
    Vertex x = q.front();
    q.pop();
    if (dist[x] >= max_depth) continue;
    for (const auto& inc : g.incident(x))
      if (dist[inc.neighbour] < 0) {
        dist[inc.neighbour] = dist[x] + 1;
        q.push(inc.neighbour);
      }
  }
  return dist;
}

/// Distance between two edges in T(G) (which equals their line-graph distance).
inline int edge_distance(const Graph& g, EdgeId e, EdgeId f) {
  if (e == f) return 0;
  const Edge& a = g.edge(e);
  const Vertex src[] = {a.u, a.v};
  auto dist = vertex_bfs(g, src);
  const Edge& b = g.edge(f);
  int d = -1;
  for (Vertex w : {b.u, b.v})
    if (dist[w] >= 0 && (d < 0 || dist[w] < d)) d = dist[w];
  return d < 0 ? -1 : d + 1;
}

/// The i-neighbourhood N_i(B): vertices at T(G)-distance <= i from some edge of B,
/// plus every edge with both endpoints among those vertices. Sorted element indices.
inline std::vector<int> neighbourhood(const Graph& g, std::span<const EdgeId> boundary, int i) {
  detail::require(i >= 0, "neighbourhood radius must be non-negative");
  std::vector<char> inside(g.num_vertices(), 0);
  // A vertex w has T-distance 1 + d_G(w, {u,v}) from the edge uv.
  if (i >= 1) {
    std::vector<Vertex> ends;
    for (EdgeId e : boundary) {
      detail::require(e >= 0 && e < g.num_edges(), "edge id out of range");
      ends.push_back(g.edge(e).u);
      ends.push_back(g.edge(e).v);
    }
    auto dist = vertex_bfs(g, ends, i - 1);
    for (Vertex w = 0; w < g.num_vertices(); ++w)
      if (dist[w] >= 0 && dist[w] <= i - 1) inside[w] = 1;
  }
  std::vector<int> out;
  for (Vertex w = 0; w < g.num_vertices(); ++w)
    if (inside[w]) out.push_back(g.index_of_vertex(w));
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (inside[g.edge(e).u] && inside[g.edge(e).v]) out.push_back(g.index_of_edge(e));
  return out;
}

}  // namespace ftc

#endif  // FTC_GRAPH_HPP
