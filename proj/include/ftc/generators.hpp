#ifndef FTC_GENERATORS_HPP
#define FTC_GENERATORS_HPP

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ftc/errors.hpp"
#include "ftc/graph.hpp"
#include "ftc/random.hpp"

namespace ftc::gen {

inline Graph cycle(int n) {
  detail::require(n >= 3, "cycle needs at least 3 vertices");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, e);
}

inline Graph path(int n) {
  detail::require(n >= 1, "path needs at least 1 vertex");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, e);
}

inline Graph complete(int n) {
  detail::require(n >= 1, "complete graph needs at least 1 vertex");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, e);
}

/// K_{a,b} with parts {0..a-1} and {a..a+b-1}.
inline Graph complete_bipartite(int a, int b) {
  detail::require(a >= 1 && b >= 1, "complete bipartite graph needs non-empty parts");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) e.emplace_back(i, a + j);
  return Graph(a + b, e);
}

/// C_n x K_2: outer cycle 0..n-1, inner cycle n..2n-1, rungs i -- n+i.
inline Graph prism(int n = 3) {
  detail::require(n >= 3, "prism needs n >= 3");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) {
    e.emplace_back(i, (i + 1) % n);
    e.emplace_back(n + i, n + (i + 1) % n);
    e.emplace_back(i, n + i);
  }
  return Graph(2 * n, e);
}

/// GP(n, k): outer cycle, spokes, inner star polygon with step k.
inline Graph generalized_petersen(int n, int k) {
  detail::require(n >= 3 && k >= 1 && 2 * k < n, "generalized Petersen needs 1 <= k < n/2");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) {
    e.emplace_back(i, (i + 1) % n);
    e.emplace_back(i, n + i);
    e.emplace_back(n + i, n + (i + k) % n);
  }
  return Graph(2 * n, e);
}

inline Graph petersen() { return generalized_petersen(5, 2); }

/// Circulant C_n(jumps): i adjacent to i +- j for each jump j.
inline Graph circulant(int n, const std::vector<int>& jumps) {
  detail::require(n >= 3, "circulant needs n >= 3");
  std::vector<std::pair<int, int>> e;
  for (int j : jumps) {
    detail::require(j >= 1 && 2 * j <= n, "circulant jump out of range");
    for (int i = 0; i < n; ++i) {
      int a = i, b = (i + j) % n;
      if (2 * j == n && a > b) continue;
      e.emplace_back(a, b);
    }
  }
  return Graph(n, e);
}

struct RandomCubicOptions {
  int n = 0;
  int min_girth = 3;
  std::uint64_t seed = 1;
  int retry_budget = 1000;
};

/// Random connected bridgeless cubic graph of girth >= min_girth.
///
/// Points of the pairing model are matched one at a time; a point is only paired
/// with a point whose vertex is at distance >= min_girth - 1 from it in the graph
/// built so far, so no short cycle is ever closed. A dead end, a disconnected
/// result, or a bridge restarts the attempt.
inline Graph random_cubic_girth(const RandomCubicOptions& opt) {
  detail::require(opt.n >= 4 && opt.n % 2 == 0, "random cubic graph needs even n >= 4");
  detail::require(opt.min_girth >= 3, "min_girth must be at least 3");
  Rng rng(opt.seed);
  const int n = opt.n;
  for (int attempt = 0; attempt < opt.retry_budget; ++attempt) {
    std::vector<std::vector<int>> adj(n);
    std::vector<int> free_points;
    for (int v = 0; v < n; ++v)
      for (int r = 0; r < 3; ++r) free_points.push_back(v);
    std::vector<std::pair<int, int>> edges;
    std::vector<int> dist(n, -1), touched, frontier, next;
    bool stuck = false;
    while (!free_points.empty()) {
      const int pick = uniform_int(rng, 0, static_cast<int>(free_points.size()) - 1);
      std::swap(free_points[pick], free_points.back());
      const int u = free_points.back();
      free_points.pop_back();
      // Ball of radius min_girth - 2 around u.
      dist[u] = 0;
      touched.assign(1, u);
      frontier.assign(1, u);
      for (int d = 1; d <= opt.min_girth - 2 && !frontier.empty(); ++d) {
        next.clear();
        for (int x : frontier)
          for (int y : adj[x])
            if (dist[y] < 0) {
              dist[y] = d;
              touched.push_back(y);
              next.push_back(y);
            }
        frontier.swap(next);
      }
      std::vector<int> candidates;
      for (int i = 0; i < static_cast<int>(free_points.size()); ++i)
        if (dist[free_points[i]] < 0) candidates.push_back(i);
      for (int x : touched) dist[x] = -1;
      if (candidates.empty()) {
        stuck = true;
        break;
      }
      const int ci = candidates[uniform_int(rng, 0, static_cast<int>(candidates.size()) - 1)];
      const int w = free_points[ci];
      std::swap(free_points[ci], free_points.back());
      free_points.pop_back();
      adj[u].push_back(w);
      adj[w].push_back(u);
      edges.emplace_back(u, w);
    }
    if (stuck) continue;
    Graph g(n, edges);
    if (!g.is_regular(3) || g.girth() < opt.min_girth) continue;
    if (!is_connected(g) || !is_bridgeless(g)) continue;
    return g;
  }
  throw BudgetExhausted("random_cubic_girth: retry budget of " +
                        std::to_string(opt.retry_budget) + " attempts exhausted");
}

}  // namespace ftc::gen

#endif  // FTC_GENERATORS_HPP
