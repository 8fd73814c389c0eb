#pragma once

// Empirical geometry profiles: greedy doubling estimates N_d(r) (how many
// half-radius balls cover a radius-r ball, maximized over centers) and
// weighted ball-mass envelopes f(r) <= mu(B(x,r)) <= g(r).

#include <algorithm>
#include <vector>

#include "cch/common.hpp"
#include "cch/rng.hpp"
#include "cch/space.hpp"

namespace cch {

// Greedy cover of the open ball B(center, r) by open balls of radius r/2
// centered at member points: repeatedly center a ball at the lowest-id
// uncovered point. Returns the chosen centers.
inline std::vector<int> greedy_half_cover(const FiniteMetricSpace& s, int center, double r) {
  std::vector<int> members = s.ball(center, r);
  std::vector<char> covered(members.size(), 0);
  std::vector<int> centers;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (covered[i]) continue;
    int c = members[i];
    centers.push_back(c);
    for (std::size_t j = i; j < members.size(); ++j)
      if (!covered[j] && s.dist(c, members[j]) < r / 2.0) covered[j] = 1;
  }
  return centers;
}

namespace detail {

inline std::vector<int> center_sample(const FiniteMetricSpace& s, int max_centers,
                                      std::uint64_t seed) {
  std::vector<int> centers;
  if (max_centers <= 0 || s.size() <= max_centers) {
    centers.resize(s.size());
    for (int i = 0; i < s.size(); ++i) centers[i] = i;
  } else {
    SplitMix64 rng(seed);
    std::vector<char> used(s.size(), 0);
    while (int(centers.size()) < max_centers) {
      int c = int(rng.below(std::uint64_t(s.size())));
      if (!used[c]) {
        used[c] = 1;
        centers.push_back(c);
      }
    }
    std::sort(centers.begin(), centers.end());
  }
  return centers;
}

}  // namespace detail

// Greedy doubling estimate at a single radius: worst greedy half-cover size
// over the given centers (all points when centers is empty).
inline int doubling_estimate(const FiniteMetricSpace& s, double r,
                             const std::vector<int>& centers = {}, int* worst_center = nullptr) {
  int best = 0, witness = -1;
  auto consider = [&](int c) {
    int size = int(greedy_half_cover(s, c, r).size());
    if (size > best) best = size, witness = c;
  };
  if (centers.empty())
    for (int c = 0; c < s.size(); ++c) consider(c);
  else
    for (int c : centers) consider(c);
  if (worst_center) *worst_center = witness;
  return best;
}

struct DoublingProfile {
  std::vector<double> grid;
  std::vector<int> raw;            // greedy estimate per radius
  std::vector<int> nhat;           // monotone non-decreasing envelope of raw
  std::vector<int> worst_center;   // center realizing raw[i]
  bool exhaustive_centers = true;

  int value_at(double r) const {
    // envelope value at the largest grid radius <= r (grid is ascending)
    int v = 0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (grid[i] <= r + kTol) v = nhat[i];
    return v;
  }
};

inline DoublingProfile doubling_profile(const FiniteMetricSpace& s, std::vector<double> radii,
                                        int max_centers = 2000, std::uint64_t seed = 0) {
  std::sort(radii.begin(), radii.end());
  DoublingProfile out;
  out.grid = std::move(radii);
  std::vector<int> centers = detail::center_sample(s, max_centers, seed);
  out.exhaustive_centers = int(centers.size()) == s.size();
  int running = 0;
  for (double r : out.grid) {
    int witness = -1;
    int est = doubling_estimate(s, r, centers, &witness);
    out.raw.push_back(est);
    running = std::max(running, est);
    out.nhat.push_back(running);
    out.worst_center.push_back(witness);
  }
  return out;
}

struct MeasureProfile {
  std::vector<double> grid;
  std::vector<double> fmin;  // min ball weight over eligible centers
  std::vector<double> gmax;  // max ball weight over eligible centers
  std::vector<int> fmin_center, gmax_center;
  double margin = 0;         // centers restricted to |x| <= truncation - margin
  int centers_used = 0;
};

inline MeasureProfile measure_profile(const FiniteMetricSpace& s, std::vector<double> radii,
                                      double margin = 0) {
  std::sort(radii.begin(), radii.end());
  MeasureProfile out;
  out.grid = std::move(radii);
  out.margin = margin;
  std::vector<int> centers;
  for (int i = 0; i < s.size(); ++i)
    if (margin <= 0 || s.radius_of(i) <= s.truncation_radius() - margin + kTol)
      centers.push_back(i);
  if (centers.empty()) throw Error(Errc::usage, "measure profile margin leaves no centers");
  out.centers_used = int(centers.size());
  for (double r : out.grid) {
    double lo = 0, hi = 0;
    int lo_c = -1, hi_c = -1;
    for (int c : centers) {
      double w = s.ball_weight(c, r);
      if (lo_c < 0 || w < lo) lo = w, lo_c = c;
      if (hi_c < 0 || w > hi) hi = w, hi_c = c;
    }
    out.fmin.push_back(lo);
    out.gmax.push_back(hi);
    out.fmin_center.push_back(lo_c);
    out.gmax_center.push_back(hi_c);
  }
  return out;
}

}  // namespace cch
