#pragma once

// Gromov products and four-point hyperbolicity defects.

#include <algorithm>
#include <array>
#include <vector>

#include "cch/common.hpp"
#include "cch/rng.hpp"
#include "cch/space.hpp"

namespace cch {

// (x|y)_w = (d(x,w) + d(y,w) - d(x,y)) / 2
inline double gromov_product(const FiniteMetricSpace& s, int x, int y, int w) {
  return 0.5 * (s.dist(x, w) + s.dist(y, w) - s.dist(x, y));
}

// min((x|y)_w, (y|z)_w) - (x|z)_w, clamped at zero: how badly the four-point
// condition fails on this quadruple.
inline double four_point_defect(const FiniteMetricSpace& s, int x, int y, int z, int w) {
  double d = std::min(gromov_product(s, x, y, w), gromov_product(s, y, z, w)) -
             gromov_product(s, x, z, w);
  return d > 0 ? d : 0.0;
}

// Deterministic farthest-point subsample: start at the basepoint, repeatedly
// add the point maximizing the distance to the chosen set (ties: lowest id).
inline std::vector<int> farthest_point_sample(const FiniteMetricSpace& s, int k) {
  std::vector<int> chosen;
  if (k <= 0) return chosen;
  std::vector<double> mind(s.size(), 0);
  chosen.push_back(s.basepoint());
  for (int i = 0; i < s.size(); ++i) mind[i] = s.dist(s.basepoint(), i);
  while (int(chosen.size()) < std::min(k, s.size())) {
    int best = -1;
    for (int i = 0; i < s.size(); ++i)
      if (mind[i] > kTol && (best < 0 || mind[i] > mind[best] + kTol)) best = i;
    if (best < 0) break;
    chosen.push_back(best);
    for (int i = 0; i < s.size(); ++i) mind[i] = std::min(mind[i], s.dist(best, i));
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

struct DeltaEstimate {
  double delta = 0;
  std::array<int, 4> witness{-1, -1, -1, -1};  // x, y, z, w
  bool exhaustive = false;                     // all quadruples of all points
  long quadruples = 0;
};

// Exhaustive over all quadruples when the space is small; otherwise
// exhaustive over a farthest-point subsample plus seeded random quadruples.
inline DeltaEstimate estimate_delta(const FiniteMetricSpace& s, long random_quadruples = 20000,
                                    std::uint64_t seed = 0, int exhaustive_threshold = 32,
                                    int subsample = 24) {
  DeltaEstimate out;
  auto consider = [&](int x, int y, int z, int w) {
    double d = four_point_defect(s, x, y, z, w);
    ++out.quadruples;
    if (d > out.delta) {
      out.delta = d;
      out.witness = {x, y, z, w};
    }
  };
  if (s.size() <= exhaustive_threshold) {
    out.exhaustive = true;
    for (int x = 0; x < s.size(); ++x)
      for (int y = 0; y < s.size(); ++y)
        for (int z = 0; z < s.size(); ++z)
          for (int w = 0; w < s.size(); ++w) consider(x, y, z, w);
    return out;
  }
  std::vector<int> sub = farthest_point_sample(s, subsample);
  for (int x : sub)
    for (int y : sub)
      for (int z : sub)
        for (int w : sub) consider(x, y, z, w);
  SplitMix64 rng = SplitMix64(seed).split("delta");
  for (long q = 0; q < random_quadruples; ++q) {
    int x = int(rng.below(std::uint64_t(s.size())));
    int y = int(rng.below(std::uint64_t(s.size())));
    int z = int(rng.below(std::uint64_t(s.size())));
    int w = int(rng.below(std::uint64_t(s.size())));
    consider(x, y, z, w);
  }
  return out;
}

}  // namespace cch
