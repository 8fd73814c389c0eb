#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <queue>
#include <set>

#include "cch/rng.hpp"
#include "cch/space.hpp"

using namespace cch;

namespace {

// Hop-count BFS over explicit neighbor lists; used as an independent check
// of the closed-form word metrics.
std::vector<int> bfs_hops(const std::vector<std::vector<int>>& adj, int src) {
  std::vector<int> d(adj.size(), -1);
  std::queue<int> q;
  d[src] = 0;
  q.push(src);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u])
      if (d[v] < 0) {
        d[v] = d[u] + 1;
        q.push(v);
      }
  }
  return d;
}

std::vector<std::vector<int>> lattice_adjacency(const FiniteMetricSpace& s) {
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < s.size(); ++i) index[s.int_points()[i]] = i;
  std::vector<std::vector<int>> adj(s.size());
  for (int i = 0; i < s.size(); ++i) {
    auto p = s.int_points()[i];
    for (std::size_t axis = 0; axis < p.size(); ++axis) {
      for (int step : {+1, -1}) {
        auto q = p;
        q[axis] += step;
        auto it = index.find(q);
        if (it != index.end()) adj[i].push_back(it->second);
      }
    }
  }
  return adj;
}

}  // namespace

TEST_CASE("integer line ball") {
  SpaceSpec spec;
  spec.kind = SpaceKind::Zn;
  spec.dims = 1;
  spec.radius = 5;
  auto s = FiniteMetricSpace::generate(spec);

  REQUIRE(s.size() == 11);
  REQUIRE(s.basepoint() == 0);
  REQUIRE(s.int_points()[0] == std::vector<int>{0});
  // breadth-first id order: 0, 1, -1, 2, -2, ...
  REQUIRE(s.int_points()[1] == std::vector<int>{1});
  REQUIRE(s.int_points()[2] == std::vector<int>{-1});
  REQUIRE(s.int_points()[3] == std::vector<int>{2});

  int lo = -1, hi = -1;
  for (int i = 0; i < s.size(); ++i) {
    if (s.int_points()[i][0] == -5) lo = i;
    if (s.int_points()[i][0] == 5) hi = i;
  }
  REQUIRE(lo >= 0);
  REQUIRE(hi >= 0);
  REQUIRE(s.dist(lo, hi) == 10.0);
  REQUIRE(s.truncation_radius() == 5.0);
  REQUIRE(s.integral());
}

TEST_CASE("lattice plane count matches direct enumeration") {
  SpaceSpec spec;
  spec.kind = SpaceKind::Zn;
  spec.dims = 2;
  spec.radius = 20;
  auto s = FiniteMetricSpace::generate(spec);

  int direct = 0;
  for (int x = -20; x <= 20; ++x)
    for (int y = -20; y <= 20; ++y)
      if (std::abs(x) + std::abs(y) <= 20) ++direct;
  REQUIRE(s.size() == direct);
  REQUIRE(direct == 841);
  REQUIRE(FiniteMetricSpace::l1_ball_count(2, 20) == Catch::Approx(841.0));

  // word metric equals taxicab distance
  SplitMix64 rng(11);
  for (int t = 0; t < 2000; ++t) {
    int i = int(rng.below(s.size())), j = int(rng.below(s.size()));
    auto &a = s.int_points()[i], &b = s.int_points()[j];
    REQUIRE(s.dist(i, j) == double(std::abs(a[0] - b[0]) + std::abs(a[1] - b[1])));
  }
}

TEST_CASE("free group ball") {
  SpaceSpec spec;
  spec.kind = SpaceKind::FreeGroup;
  spec.rank = 2;
  spec.radius = 3;
  auto s = FiniteMetricSpace::generate(spec);

  REQUIRE(s.size() == 53);  // 1 + 4 + 12 + 36
  REQUIRE(s.ball(s.basepoint(), 2.5).size() == 17);  // 1 + 4 + 12

  // reduced-word metric vs hop BFS on the word tree (geodesics between ball
  // elements stay inside the ball, so in-ball BFS is exact here)
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < s.size(); ++i) index[s.int_points()[i]] = i;
  std::vector<std::vector<int>> adj(s.size());
  for (int i = 0; i < s.size(); ++i) {
    auto w = s.int_points()[i];
    if (!w.empty()) {
      auto parent = w;
      parent.pop_back();
      int j = index.at(parent);
      adj[i].push_back(j);
      adj[j].push_back(i);
    }
  }
  for (int src : {0, 1, 5, 20, 52}) {
    auto hops = bfs_hops(adj, src);
    for (int v = 0; v < s.size(); ++v) REQUIRE(s.dist(src, v) == double(hops[v]));
  }
}

TEST_CASE("zn word metric vs lattice BFS") {
  SpaceSpec spec;
  spec.kind = SpaceKind::Zn;
  spec.dims = 2;
  spec.radius = 8;
  auto s = FiniteMetricSpace::generate(spec);
  auto adj = lattice_adjacency(s);
  for (int src : {0, 3, 17, s.size() - 1}) {
    auto hops = bfs_hops(adj, src);
    // in-ball BFS can only overshoot if every geodesic leaves the ball, which
    // never happens for taxicab paths routed through the smaller-norm corner
    for (int v = 0; v < s.size(); ++v) REQUIRE(s.dist(src, v) == double(hops[v]));
  }
}

TEST_CASE("heisenberg word metric") {
  SpaceSpec spec;
  spec.kind = SpaceKind::HeisenbergZ;
  spec.radius = 2;
  auto s = FiniteMetricSpace::generate(spec);

  // |B(1)| = 5 and the commutator x y x^-1 y^-1 = (0,0,2) at word length 4
  int b1 = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s.radius_of(i) <= 1.0) ++b1;
  REQUIRE(b1 == 5);
  REQUIRE(s.dist(0, 1) == 1.0);

  // generator squares: (1,0,0)*(0,1,0) = (1,1,1)
  bool found = false;
  for (int i = 0; i < s.size(); ++i)
    if (s.int_points()[i] == std::vector<int>{1, 1, 1}) {
      found = true;
      REQUIRE(s.radius_of(i) == 2.0);
    }
  REQUIRE(found);

  // cross-check all pairwise distances against BFS in a radius-3R ball,
  // which provably contains geodesics for radius-R pairs
  SpaceSpec big = spec;
  big.radius = 6;
  auto sbig = FiniteMetricSpace::generate(big);
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < sbig.size(); ++i) index[sbig.int_points()[i]] = i;
  std::vector<std::vector<int>> adj(sbig.size());
  auto mul = [](const std::vector<int>& a, const std::vector<int>& b) {
    return std::vector<int>{a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1] - a[1] * b[0]};
  };
  const std::vector<std::vector<int>> gens = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
  for (int i = 0; i < sbig.size(); ++i)
    for (const auto& g : gens) {
      auto q = mul(sbig.int_points()[i], g);
      auto it = index.find(q);
      if (it != index.end()) adj[i].push_back(it->second);
    }
  for (int src = 0; src < s.size(); ++src) {
    auto hops = bfs_hops(adj, index.at(s.int_points()[src]));
    for (int v = 0; v < s.size(); ++v)
      REQUIRE(s.dist(src, v) == double(hops[index.at(s.int_points()[v])]));
  }
}

TEST_CASE("regular tree metric") {
  SpaceSpec spec;
  spec.kind = SpaceKind::Tree;
  spec.degree = 3;
  spec.depth = 4;
  auto s = FiniteMetricSpace::generate(spec);
  REQUIRE(s.size() == 46);  // 1 + 3 * (2^4 - 1)

  // rebuild adjacency from distances of exactly 1 and BFS it
  std::vector<std::vector<int>> adj(s.size());
  for (int i = 0; i < s.size(); ++i)
    for (int j = i + 1; j < s.size(); ++j)
      if (s.dist(i, j) == 1.0) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
  for (int i = 0; i < s.size(); ++i) {
    int deg = int(adj[i].size());
    bool leaf = s.radius_of(i) == 4.0;
    REQUIRE(deg == (leaf ? 1 : 3));
  }
  for (int src : {0, 1, 10, 45}) {
    auto hops = bfs_hops(adj, src);
    for (int v = 0; v < s.size(); ++v) REQUIRE(s.dist(src, v) == double(hops[v]));
  }
}

TEST_CASE("fan in the plane") {
  SpaceSpec spec;
  spec.kind = SpaceKind::Fan;
  spec.arms = 8;
  auto s = FiniteMetricSpace::generate(spec);
  REQUIRE(s.size() == 1 + 32 * 9);  // apex + base + 8 arms
  REQUIRE(s.real_points()[0][0] == 0.0);
  REQUIRE(s.real_points()[0][1] == 0.0);

  int base_tip = -1, arm8_tip = -1;
  for (int i = 0; i < s.size(); ++i) {
    if (s.real_points()[i][0] == 1.0 && s.real_points()[i][1] == 0.0) base_tip = i;
    if (s.real_points()[i][0] == 1.0 && s.real_points()[i][1] == 0.125) arm8_tip = i;
  }
  REQUIRE(base_tip >= 0);
  REQUIRE(arm8_tip >= 0);
  // ambient distance between neighboring tips is tiny even though any path
  // through the apex has length about 2
  REQUIRE(s.dist(base_tip, arm8_tip) == Catch::Approx(0.125));
  REQUIRE(s.dist(0, base_tip) == 1.0);
}

TEST_CASE("ladder of stacked squares") {
  SpaceSpec spec;
  spec.kind = SpaceKind::Ladder;
  spec.rungs = 3;
  auto s = FiniteMetricSpace::generate(spec);
  REQUIRE(s.real_points()[0][0] == 0.0);
  REQUIRE(s.real_points()[0][1] == 0.0);
  // overlapping square edges dedupe, so strictly fewer than 3 * 64 points
  REQUIRE(s.size() < 192);
  REQUIRE(s.size() > 150);

  // consecutive squares touch: some point of square 2's bottom edge lies on
  // square 1's top edge (shared samples), so the min cross-gap is zero-free
  // but the shape stays connected through shared points
  double min_gap = 1e9;
  for (int i = 0; i < s.size(); ++i) {
    if (s.real_points()[i][1] != 2.0) continue;
    for (int j = 0; j < s.size(); ++j)
      if (j != i && s.real_points()[j][1] == 2.0)
        min_gap = std::min(min_gap, s.dist(i, j));
  }
  REQUIRE(min_gap <= 0.25);
}

TEST_CASE("hyperbolic disk sample") {
  SpaceSpec spec;
  spec.kind = SpaceKind::HyperbolicDisk;
  spec.count = 100;
  spec.max_radius = 4.0;
  spec.seed = 5;
  auto s = FiniteMetricSpace::generate(spec);
  REQUIRE(s.size() == 100);
  REQUIRE(s.dist(0, 0) == 0.0);
  for (int i = 1; i < s.size(); ++i) {
    REQUIRE(s.real_points()[i][0] <= 4.0);
    // distance to the center is the polar radius
    REQUIRE(s.dist(0, i) == Catch::Approx(s.real_points()[i][0]).margin(1e-12));
  }
}

TEST_CASE("metric axioms on sampled triples") {
  std::vector<FiniteMetricSpace> spaces;
  {
    SpaceSpec a;
    a.kind = SpaceKind::Zn;
    a.dims = 2;
    a.radius = 10;
    spaces.push_back(FiniteMetricSpace::generate(a));
  }
  {
    SpaceSpec b;
    b.kind = SpaceKind::FreeGroup;
    b.rank = 2;
    b.radius = 4;
    spaces.push_back(FiniteMetricSpace::generate(b));
  }
  {
    SpaceSpec c;
    c.kind = SpaceKind::HeisenbergZ;
    c.radius = 3;
    spaces.push_back(FiniteMetricSpace::generate(c));
  }
  {
    SpaceSpec d;
    d.kind = SpaceKind::HyperbolicDisk;
    d.count = 200;
    d.max_radius = 4.0;
    d.seed = 3;
    spaces.push_back(FiniteMetricSpace::generate(d));
  }
  {
    SpaceSpec e;
    e.kind = SpaceKind::HeisenbergRCloud;
    e.count = 200;
    e.box = 2.0;
    e.seed = 9;
    spaces.push_back(FiniteMetricSpace::generate(e));
  }
  {
    SpaceSpec f;
    f.kind = SpaceKind::Fan;
    f.arms = 16;
    spaces.push_back(FiniteMetricSpace::generate(f));
  }

  SplitMix64 rng(2024);
  for (const auto& s : spaces) {
    for (int t = 0; t < 10000; ++t) {
      int i = int(rng.below(s.size()));
      int j = int(rng.below(s.size()));
      int k = int(rng.below(s.size()));
      double dij = s.dist(i, j), dji = s.dist(j, i);
      REQUIRE(std::abs(dij - dji) <= 1e-9);
      if (i == j)
        REQUIRE(dij == 0.0);
      else
        REQUIRE(dij > 0.0);
      REQUIRE(s.dist(i, k) <= dij + s.dist(j, k) + 1e-9);
    }
  }
}

TEST_CASE("generation cap is enforced with an estimate") {
  SpaceSpec spec;
  spec.kind = SpaceKind::FreeGroup;
  spec.rank = 2;
  spec.radius = 30;
  try {
    FiniteMetricSpace::generate(spec, 100000);
    FAIL("expected a cap error");
  } catch (const Error& e) {
    REQUIRE(e.code == Errc::cap);
    REQUIRE(std::string(e.what()).find("cap") != std::string::npos);
  }
}

TEST_CASE("weights must be positive") {
  SpaceSpec spec;
  spec.kind = SpaceKind::Zn;
  spec.dims = 1;
  spec.radius = 2;
  auto s = FiniteMetricSpace::generate(spec);
  REQUIRE_THROWS_AS(s.set_weights({1, 1, 0, 1, 1}), Error);
  REQUIRE_THROWS_AS(s.set_weights({1, 1}), Error);
  s.set_weights({1, 2, 3, 4, 5});
  REQUIRE(s.weight(2) == 3.0);
  REQUIRE(s.ball_weight(0, 1.5) == 1.0 + 2.0 + 3.0);  // 0 and +-1
}
