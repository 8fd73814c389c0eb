#pragma once

// shared plumbing for the test binaries: spaces from explicit matrices and
// random connected graphs realized as hop-metric spaces

#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "cch/common.hpp"
#include "cch/net.hpp"
#include "cch/rips.hpp"
#include "cch/rng.hpp"
#include "cch/space.hpp"

namespace testsupport {

inline cch::SpaceSpec named(const std::string& label) {
  cch::SpaceSpec sp;
  sp.kind = cch::SpaceKind::File;
  sp.path = label;
  return sp;
}

inline cch::FiniteMetricSpace matrix_space(const std::string& label, int n,
                                           std::vector<double> lower, int basepoint = 0) {
  return cch::FiniteMetricSpace::from_matrix(named(label), n, std::move(lower), basepoint);
}

struct Built {
  cch::FiniteMetricSpace s;
  cch::PointedNet net;
  cch::RipsGraph g;
};

inline Built build_at(cch::FiniteMetricSpace s, double eps) {
  auto net = cch::build_maximal_net(s, eps);
  auto g = cch::build_rips(s, net);
  return {std::move(s), std::move(net), std::move(g)};
}

// Random connected graph on n vertices (spanning tree plus a few chords),
// handed back as its hop metric with basepoint 0. Built at eps = 1/3 the
// Rips graph reproduces the graph itself.
inline cch::FiniteMetricSpace random_graph_space(cch::SplitMix64& rng, int n,
                                                 const std::string& label) {
  std::vector<std::vector<int>> adj(n);
  auto link = [&](int a, int b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (int i = 1; i < n; ++i) link(i, int(rng.below(std::uint64_t(i))));
  int extra = int(rng.below(std::uint64_t(n / 3 + 1)));
  for (int t = 0; t < extra; ++t) {
    int a = int(rng.below(std::uint64_t(n)));
    int b = int(rng.below(std::uint64_t(n)));
    if (a == b) continue;
    bool dup = false;
    for (int y : adj[a]) dup = dup || y == b;
    if (!dup) link(a, b);
  }

  std::vector<double> lower(std::size_t(n) * std::size_t(n - 1) / 2);
  std::vector<int> dist(n);
  for (int src = 0; src < n; ++src) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[src] = 0;
    std::queue<int> q;
    q.push(src);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int y : adj[u])
        if (dist[y] < 0) {
          dist[y] = dist[u] + 1;
          q.push(y);
        }
    }
    for (int b = 0; b < src; ++b)
      lower[std::size_t(src) * std::size_t(src - 1) / 2 + std::size_t(b)] = double(dist[b]);
  }
  return cch::FiniteMetricSpace::from_matrix(named(label), n, std::move(lower), 0);
}

}  // namespace testsupport
