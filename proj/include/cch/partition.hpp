#pragma once

// Lipschitz partition of unity subordinate to a net: bump functions
// psi_p(x) = min{1, (2/eps) dist(x, X \ B(p, 3eps/2))}, normalized to
// phi_p = psi_p / sum psi, plus the extension operator and empirical
// Lipschitz checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cch/common.hpp"
#include "cch/net.hpp"
#include "cch/rng.hpp"
#include "cch/space.hpp"

namespace cch {

class PartitionOfUnity {
 public:
  PartitionOfUnity(const FiniteMetricSpace& s, const PointedNet& net)
      : s_(&s), net_(&net), eps_(net.eps) {
    if (eps_ > 2.0)
      warnings_.push_back("separation above the usual small-scale regime (eps > 2)");
  }

  const FiniteMetricSpace& space() const { return *s_; }
  const PointedNet& net() const { return *net_; }
  double eps() const { return eps_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // bump of the net member at position pos, evaluated at point x
  double psi(int pos, int x) const {
    int p = net_->members[pos];
    double radius = 1.5 * eps_;
    if (s_->dist(p, x) >= radius) return 0.0;
    // the complement only matters within eps/2 of x, beyond that the bump
    // is already capped at 1
    double cdist = radius;  // anything >= eps/2 acts as the cap
    for (const auto& [d, y] : near_half_eps(x)) {
      if (s_->dist(p, y) >= radius) {
        cdist = d;
        break;  // neighbors are sorted by distance
      }
    }
    return std::min(1.0, 2.0 * cdist / eps_);
  }

  // nonzero bumps at x as (member position, psi) pairs
  const std::vector<std::pair<int, double>>& support(int x) const {
    auto it = support_cache_.find(x);
    if (it != support_cache_.end()) return it->second;
    std::vector<std::pair<int, double>> sup;
    for (int pos = 0; pos < net_->size(); ++pos) {
      double v = psi(pos, x);
      if (v > 0) sup.push_back({pos, v});
    }
    return support_cache_.emplace(x, std::move(sup)).first->second;
  }

  double psi_sum(int x) const {
    double total = 0;
    for (const auto& [pos, v] : support(x)) total += v;
    return total;
  }

  double phi(int pos, int x) const {
    double total = psi_sum(x);
    if (!(total > 0))
      throw Error(Errc::assertion, "net fails to cover a point, no bump is active there");
    return psi(pos, x) / total;
  }

  // all nonzero phi values at x
  std::vector<std::pair<int, double>> phis(int x) const {
    auto sup = support(x);
    double total = 0;
    for (const auto& [pos, v] : sup) total += v;
    if (!(total > 0))
      throw Error(Errc::assertion, "net fails to cover a point, no bump is active there");
    for (auto& [pos, v] : sup) v /= total;
    return sup;
  }

  // v given per net member position; weighted average under phi
  double extend(const std::vector<double>& v, int x) const {
    double out = 0;
    for (const auto& [pos, w] : phis(x)) out += v[pos] * w;
    return out;
  }

 private:
  // points within eps/2 of x (x excluded), ascending by distance
  const std::vector<std::pair<double, int>>& near_half_eps(int x) const {
    auto it = near_cache_.find(x);
    if (it != near_cache_.end()) return it->second;
    std::vector<std::pair<double, int>> near;
    for (int y = 0; y < s_->size(); ++y) {
      if (y == x) continue;
      double d = s_->dist(x, y);
      if (d < 0.5 * eps_) near.push_back({d, y});
    }
    std::sort(near.begin(), near.end());
    return near_cache_.emplace(x, std::move(near)).first->second;
  }

  const FiniteMetricSpace* s_;
  const PointedNet* net_;
  double eps_;
  std::vector<std::string> warnings_;
  mutable std::unordered_map<int, std::vector<std::pair<double, int>>> near_cache_;
  mutable std::unordered_map<int, std::vector<std::pair<int, double>>> support_cache_;
};

struct PartitionLipschitzReport {
  double max_ratio = 0;          // worst |phi_p(x) - phi_p(y)| / d(x,y)
  double bound = 0;              // 4 * (net count in 2 eps balls) / eps
  int net_count = 0;
  long pairs_checked = 0;
  std::optional<std::array<int, 3>> witness;  // member position, x, y
  bool pass = false;
};

// Worst phi difference quotient over sampled point pairs (exhaustive when
// small) against the covering-number bound.
inline PartitionLipschitzReport verify_partition_lipschitz(const PartitionOfUnity& part,
                                                           long sample_pairs = 2000,
                                                           std::uint64_t seed = 0) {
  const auto& s = part.space();
  PartitionLipschitzReport out;
  out.net_count = max_net_count_in_ball(s, part.net(), 2.0 * part.eps());
  out.bound = 4.0 * double(out.net_count) / part.eps();

  auto check = [&](int x, int y) {
    if (x == y) return;
    ++out.pairs_checked;
    double d = s.dist(x, y);
    // merge the two supports; phi is zero outside them
    std::unordered_map<int, double> diff;
    for (const auto& [pos, v] : part.phis(x)) diff[pos] += v;
    for (const auto& [pos, v] : part.phis(y)) diff[pos] -= v;
    for (const auto& [pos, delta] : diff) {
      double ratio = std::abs(delta) / d;
      if (ratio > out.max_ratio) {
        out.max_ratio = ratio;
        out.witness = {pos, x, y};
      }
    }
  };

  long n = s.size();
  if (n * (n - 1) / 2 <= sample_pairs) {
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y) check(x, y);
  } else {
    SplitMix64 rng = SplitMix64(seed).split("partition-pairs");
    for (long k = 0; k < sample_pairs; ++k)
      check(int(rng.below(std::uint64_t(n))), int(rng.below(std::uint64_t(n))));
  }
  out.pass = out.max_ratio <= out.bound + kTol;
  return out;
}

struct ExtensionQuotientReport {
  double max_quotient = 0;      // worst |ext(x) - ext(y)| / d(x,y) seen
  double min_bound = 0;         // smallest right-hand bound among checked x
  long pairs_checked = 0;
  std::optional<std::array<int, 3>> witness;  // x, y, covering member position
  bool pass = false;
};

// Difference quotients of the extension of v near each sampled x, against the
// local bound (4 net-count(2 eps)/eps) * sum of |v(q) - v(p)| over net members
// q within 3 eps of the member p covering x. Both points of a quotient pair
// stay inside the covering ball B(p, eps), the regime the bound speaks about.
inline ExtensionQuotientReport verify_extension_quotients(const PartitionOfUnity& part,
                                                          const std::vector<double>& v,
                                                          int sample_points = 200,
                                                          std::uint64_t seed = 0) {
  const auto& s = part.space();
  const auto& net = part.net();
  double eps = part.eps();
  ExtensionQuotientReport out;
  out.min_bound = std::numeric_limits<double>::infinity();
  int net_count = max_net_count_in_ball(s, net, 2.0 * eps);

  std::vector<int> xs =
      detail::center_sample(s, sample_points, SplitMix64(seed).split("quotient-sample").next());
  for (int x : xs) {
    // nearest covering member, lowest position on ties
    int p_pos = -1;
    double best = 0;
    for (int pos = 0; pos < net.size(); ++pos) {
      double d = s.dist(net.members[pos], x);
      if (d < eps + kTol && (p_pos < 0 || d < best - kTol)) p_pos = pos, best = d;
    }
    if (p_pos < 0) continue;  // uncovered points are the net checker's business
    int p = net.members[p_pos];

    double spread = 0;
    for (int q = 0; q < net.size(); ++q)
      if (s.dist(net.members[q], p) < 3.0 * eps) spread += std::abs(v[q] - v[p_pos]);
    double bound = 4.0 * double(net_count) / eps * spread;
    out.min_bound = std::min(out.min_bound, bound);

    double ext_x = part.extend(v, x);
    for (int y : s.ball(p, eps)) {
      if (y == x) continue;
      ++out.pairs_checked;
      double q = std::abs(ext_x - part.extend(v, y)) / s.dist(x, y);
      if (q > out.max_quotient) {
        out.max_quotient = q;
        out.witness = {x, y, p_pos};
      }
      if (q > bound + kTol) {
        out.pass = false;
        out.witness = {x, y, p_pos};
        return out;
      }
    }
  }
  out.pass = true;
  return out;
}

}  // namespace cch
