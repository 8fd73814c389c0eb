#pragma once

// Maximal separated nets and the covering bound for how many net points can
// sit inside a ball.

#include <optional>
#include <utility>
#include <vector>

#include "cch/common.hpp"
#include "cch/profiles.hpp"
#include "cch/space.hpp"

namespace cch {

struct PointedNet {
  double eps = 0;
  std::vector<int> members;       // point indices in insertion order, basepoint first
  std::vector<int> member_index;  // point index -> position in members, or -1

  int size() const { return int(members.size()); }
  bool contains(int point) const { return member_index[point] >= 0; }
};

// Greedy maximal eps-separated net: the basepoint enters first, then every
// point in ascending id order that is at distance >= eps from all current
// members. Ties at exactly eps count as separated.
inline PointedNet build_maximal_net(const FiniteMetricSpace& s, double eps) {
  if (!(eps > 0)) throw Error(Errc::usage, "net separation eps must be positive");
  PointedNet net;
  net.eps = eps;
  net.member_index.assign(s.size(), -1);
  auto try_insert = [&](int p) {
    for (int m : net.members)
      if (s.dist(p, m) < eps - kTol) return;
    net.member_index[p] = net.size();
    net.members.push_back(p);
  };
  try_insert(s.basepoint());
  for (int p = 0; p < s.size(); ++p)
    if (p != s.basepoint()) try_insert(p);
  return net;
}

struct NetCheck {
  bool separated = true;
  bool covering = true;
  std::optional<std::pair<int, int>> separation_witness;  // member pair too close
  std::optional<int> coverage_witness;                    // point not covered
  bool pass() const { return separated && covering; }
};

// Verifies eps-separation of members and open-ball coverage of every point.
inline NetCheck verify_net(const FiniteMetricSpace& s, const PointedNet& net) {
  NetCheck out;
  for (std::size_t i = 0; i < net.members.size() && out.separated; ++i)
    for (std::size_t j = i + 1; j < net.members.size(); ++j)
      if (s.dist(net.members[i], net.members[j]) < net.eps - kTol) {
        out.separated = false;
        out.separation_witness = {net.members[i], net.members[j]};
        break;
      }
  for (int p = 0; p < s.size() && out.covering; ++p) {
    bool covered = false;
    for (int m : net.members)
      if (s.dist(p, m) < net.eps + kTol) {
        covered = true;
        break;
      }
    if (!covered) {
      out.covering = false;
      out.coverage_witness = p;
    }
  }
  return out;
}

// Measured worst count of net members inside an open ball of radius r, over
// all centers (or a seeded center sample for very large spaces).
inline int max_net_count_in_ball(const FiniteMetricSpace& s, const PointedNet& net, double r,
                                 int* worst_center = nullptr, int max_centers = 0,
                                 std::uint64_t seed = 0) {
  int best = 0, witness = -1;
  auto consider = [&](int c) {
    int count = 0;
    for (int m : net.members)
      if (s.dist(c, m) < r) ++count;
    if (count > best) best = count, witness = c;
  };
  for (int c : detail::center_sample(s, max_centers, seed)) consider(c);
  if (worst_center) *worst_center = witness;
  return best;
}

struct NetBallCountBound {
  int measured = 0;
  int witness_center = -1;
  double bound = 1;
  int halvings = 0;                            // m: balls shrink r -> r/2^m
  std::vector<std::pair<double, int>> factors;  // (radius, doubling estimate)
  bool pass = false;
};

// Covering bound on #(net  B(x,r)): iterate greedy half-covers from radius r
// until balls of radius r/2^m can hold at most one eps-separated point
// (2r/2^m <= eps); the bound is the product of the per-step cover sizes.
inline NetBallCountBound net_ball_count_bound(const FiniteMetricSpace& s, const PointedNet& net,
                                              double r, int max_centers = 0,
                                              std::uint64_t seed = 0) {
  if (!(r > 0)) throw Error(Errc::usage, "net ball count bound needs r > 0");
  NetBallCountBound out;
  out.measured = max_net_count_in_ball(s, net, r, &out.witness_center, max_centers, seed);
  int m = 0;
  double shrunk = r;
  while (2.0 * shrunk > net.eps + kTol) {
    shrunk /= 2.0;
    ++m;
  }
  out.halvings = m;
  auto centers = detail::center_sample(s, max_centers, seed);
  double radius = r;
  for (int k = 0; k < m; ++k) {
    int est = doubling_estimate(s, radius, centers);
    out.factors.push_back({radius, est});
    out.bound *= est;
    radius /= 2.0;
  }
  out.pass = double(out.measured) <= out.bound + kTol;
  return out;
}

}  // namespace cch
