#pragma once

// Rips-type graph on a net (edges between distinct members at distance
// <= 3*eps), its combinatorial ecart, connectivity, valency bound, and the
// two-sided comparison between ecart and the underlying metric.

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "cch/common.hpp"
#include "cch/net.hpp"
#include "cch/profiles.hpp"
#include "cch/rng.hpp"
#include "cch/space.hpp"

namespace cch {

struct RipsGraph {
  double eps = 0;
  std::vector<int> members;                 // point ids per vertex (from the net)
  std::vector<std::vector<int>> adj;        // vertex -> sorted neighbor vertices
  std::vector<std::pair<int, int>> edges;   // vertex pairs u < v
  int max_valency = 0;
  std::map<int, int> valency_histogram;

  int size() const { return int(members.size()); }
  int point_of(int v) const { return members[v]; }
  int vertex_of(int point) const {
    auto it = point_to_vertex.find(point);
    return it == point_to_vertex.end() ? -1 : it->second;
  }
  bool has_edge(int u, int v) const {
    if (u == v) return false;
    const auto& a = adj[u];
    return std::binary_search(a.begin(), a.end(), v);
  }

  std::unordered_map<int, int> point_to_vertex;

  // lazily filled per-source hop distances
  mutable std::unordered_map<int, std::vector<int>> bfs_cache;
};

inline RipsGraph build_rips(const FiniteMetricSpace& s, const PointedNet& net) {
  RipsGraph g;
  g.eps = net.eps;
  g.members = net.members;
  int m = g.size();
  g.adj.assign(m, {});
  for (int i = 0; i < m; ++i) g.point_to_vertex[g.members[i]] = i;
  double cutoff = 3.0 * net.eps + kTol;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      double d = s.dist(g.members[i], g.members[j]);
      if (d <= cutoff) {
        g.adj[i].push_back(j);
        g.adj[j].push_back(i);
        g.edges.push_back({i, j});
      }
    }
  for (int i = 0; i < m; ++i) {
    std::sort(g.adj[i].begin(), g.adj[i].end());
    int val = int(g.adj[i].size());
    g.max_valency = std::max(g.max_valency, val);
    g.valency_histogram[val]++;
  }
  return g;
}

namespace detail {

inline const std::vector<int>& bfs_from(const RipsGraph& g, int src) {
  auto it = g.bfs_cache.find(src);
  if (it != g.bfs_cache.end()) return it->second;
  std::vector<int> dist(g.size(), -1);
  std::queue<int> q;
  dist[src] = 0;
  q.push(src);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : g.adj[u])
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
  }
  return g.bfs_cache.emplace(src, std::move(dist)).first->second;
}

}  // namespace detail

// Hop distance between vertices; empty when they sit in different components.
inline std::optional<int> ecart(const RipsGraph& g, int u, int v) {
  int d = detail::bfs_from(g, u)[v];
  if (d < 0) return std::nullopt;
  return d;
}

struct Connectivity {
  int components = 0;
  std::vector<int> component_of;   // per vertex
  std::vector<int> component_size;
  bool connected() const { return components == 1; }
};

inline Connectivity check_connectivity(const RipsGraph& g) {
  Connectivity out;
  out.component_of.assign(g.size(), -1);
  for (int v = 0; v < g.size(); ++v) {
    if (out.component_of[v] >= 0) continue;
    int id = out.components++;
    int count = 0;
    std::queue<int> q;
    out.component_of[v] = id;
    q.push(v);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      ++count;
      for (int w : g.adj[u])
        if (out.component_of[w] < 0) {
          out.component_of[w] = id;
          q.push(w);
        }
    }
    out.component_size.push_back(count);
  }
  return out;
}

struct QiBoundsReport {
  bool pass = true;
  long pairs_checked = 0;
  // d(x,y) <= 3 eps ecart(x,y)
  double lower_slack = 0;  // max of d - 3 eps ecart (should stay <= 0)
  // ecart(x,y) <= Q d(x,y)/eps + 1
  double upper_slack = 0;  // max of ecart - (Q d/eps + 1) (should stay <= 0)
  std::optional<std::pair<int, int>> violation;     // vertex pair
  std::optional<std::pair<int, int>> disconnected;  // vertex pair with no path
};

// Checks both comparison inequalities between the graph ecart and the space
// metric on sampled vertex pairs (exhaustive for small graphs).
inline QiBoundsReport verify_qi_bounds(const FiniteMetricSpace& s, const RipsGraph& g, double Q,
                                       long sample_pairs = 10000, std::uint64_t seed = 0) {
  QiBoundsReport out;
  const double eps = g.eps;
  auto check = [&](int u, int v) {
    if (!out.pass) return;
    auto hops = ecart(g, u, v);
    ++out.pairs_checked;
    if (!hops) {
      out.pass = false;
      out.disconnected = {u, v};
      return;
    }
    double d = s.dist(g.members[u], g.members[v]);
    double lo = d - 3.0 * eps * double(*hops);
    double up = double(*hops) - (Q * d / eps + 1.0);
    out.lower_slack = std::max(out.lower_slack, lo);
    out.upper_slack = std::max(out.upper_slack, up);
    if (lo > kTol || up > kTol) {
      out.pass = false;
      out.violation = {u, v};
    }
  };
  long m = g.size();
  if (m * (m - 1) / 2 <= sample_pairs) {
    for (int u = 0; u < g.size(); ++u)
      for (int v = u + 1; v < g.size(); ++v) check(u, v);
  } else {
    SplitMix64 rng = SplitMix64(seed).split("qi-pairs");
    for (long k = 0; k < sample_pairs; ++k) {
      int u = int(rng.below(std::uint64_t(m)));
      int v = int(rng.below(std::uint64_t(m)));
      if (u != v) check(u, v);
    }
  }
  return out;
}

struct ValencyBoundReport {
  int max_valency = 0;
  double bound = 1;
  std::vector<std::pair<double, int>> factors;  // (radius, doubling estimate)
  bool pass = false;
};

// Max valency against the three-step covering bound N_d(4e) N_d(2e) N_d(e):
// covering B(x,4e) down to balls of radius e/2, which hold at most one
// eps-separated net point each.
inline ValencyBoundReport valency_bound_check(const FiniteMetricSpace& s, const RipsGraph& g) {
  ValencyBoundReport out;
  out.max_valency = g.max_valency;
  for (double r : {4.0 * g.eps, 2.0 * g.eps, 1.0 * g.eps}) {
    int est = doubling_estimate(s, r);
    out.factors.push_back({r, est});
    out.bound *= est;
  }
  out.pass = double(out.max_valency) <= out.bound + kTol;
  return out;
}

struct QuasiconvexityReport {
  double ratio = 1.0;                       // max weighted-path-length / distance
  std::optional<std::pair<int, int>> witness;
  bool infinite = false;                    // some sampled pair is disconnected
  std::optional<std::pair<int, int>> disconnected_witness;
  long pairs_checked = 0;
};

// Weighted shortest-path distances from one vertex, edges weighted by the
// metric length of their endpoints. Unreachable vertices stay infinite.
inline std::vector<double> weighted_paths_from(const FiniteMetricSpace& s, const RipsGraph& g,
                                               int src) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.size(), inf);
  std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>,
                      std::greater<>> pq;
  dist[src] = 0;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > dist[u]) continue;
    for (int v : g.adj[u]) {
      double w = s.dist(g.members[u], g.members[v]);
      if (dist[u] + w < dist[v]) {
        dist[v] = dist[u] + w;
        pq.push({dist[v], v});
      }
    }
  }
  return dist;
}

// Compares metric-weighted shortest paths in the graph with straight-line
// distances. Sources are all vertices when the graph is small, otherwise a
// seeded sample; each source contributes all pairs via one Dijkstra run.
inline QuasiconvexityReport quasiconvexity_ratio(const FiniteMetricSpace& s, const RipsGraph& g,
                                                 int max_sources = 1500, std::uint64_t seed = 0) {
  QuasiconvexityReport out;
  int m = g.size();
  std::vector<int> sources;
  if (m <= max_sources) {
    sources.resize(m);
    for (int i = 0; i < m; ++i) sources[i] = i;
  } else {
    SplitMix64 rng = SplitMix64(seed).split("qc-sources");
    std::vector<char> used(m, 0);
    while (int(sources.size()) < max_sources) {
      int c = int(rng.below(std::uint64_t(m)));
      if (!used[c]) used[c] = 1, sources.push_back(c);
    }
    std::sort(sources.begin(), sources.end());
  }
  const double inf = std::numeric_limits<double>::infinity();
  for (int src : sources) {
    std::vector<double> dist = weighted_paths_from(s, g, src);
    for (int v = 0; v < m; ++v) {
      if (v == src) continue;
      ++out.pairs_checked;
      if (dist[v] == inf) {
        out.infinite = true;
        if (!out.disconnected_witness) out.disconnected_witness = {src, v};
        continue;
      }
      double ratio = dist[v] / s.dist(g.members[src], g.members[v]);
      if (ratio > out.ratio) {
        out.ratio = ratio;
        out.witness = {src, v};
      }
    }
  }
  return out;
}

}  // namespace cch
