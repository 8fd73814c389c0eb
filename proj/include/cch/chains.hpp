#pragma once

// Sparse coarse chains in degrees 0 and 1, the boundary map between them,
// and the two gauges used downstream: the control norm (coefficient size
// against a control function of the distance from the basepoint) and the
// propagation (longest pair in the support).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <utility>

#include "cch/common.hpp"
#include "cch/control.hpp"
#include "cch/space.hpp"

namespace cch {

// Finitely supported real coefficients on points. Exact zeros are dropped so
// the stored map is the support.
struct Chain0 {
  std::map<int, double> coef;

  void add(int x, double a) {
    if (a == 0.0) return;
    auto [it, fresh] = coef.try_emplace(x, a);
    if (!fresh) {
      it->second += a;
      if (it->second == 0.0) coef.erase(it);
    }
  }
  double at(int x) const {
    auto it = coef.find(x);
    return it == coef.end() ? 0.0 : it->second;
  }
  void axpy(double alpha, const Chain0& o) {
    for (const auto& [x, a] : o.coef) add(x, alpha * a);
  }
  std::size_t support_size() const { return coef.size(); }
  bool zero() const { return coef.empty(); }
};

// Alternating coefficients on point pairs. Only keys with u < v are stored;
// the value at the reversed pair is the negation.
struct Chain1 {
  std::map<std::pair<int, int>, double> coef;

  // adds a * [u,v]; a pair with repeated entry is its own negation, hence 0
  void add(int u, int v, double a) {
    if (u == v || a == 0.0) return;
    std::pair<int, int> key{std::min(u, v), std::max(u, v)};
    double val = (u < v) ? a : -a;
    auto [it, fresh] = coef.try_emplace(key, val);
    if (!fresh) {
      it->second += val;
      if (it->second == 0.0) coef.erase(it);
    }
  }
  double at(int u, int v) const {
    if (u == v) return 0.0;
    auto it = coef.find({std::min(u, v), std::max(u, v)});
    if (it == coef.end()) return 0.0;
    return (u < v) ? it->second : -it->second;
  }
  void axpy(double alpha, const Chain1& o) {
    for (const auto& [uv, a] : o.coef) add(uv.first, uv.second, alpha * a);
  }
  std::size_t support_size() const { return coef.size(); }
  bool zero() const { return coef.empty(); }
};

// Boundary of a 1-chain: each stored a * [u,v] contributes +a at v and -a
// at u, extended linearly.
inline Chain0 boundary1(const Chain1& c) {
  Chain0 b;
  for (const auto& [uv, a] : c.coef) {
    b.add(uv.second, a);
    b.add(uv.first, -a);
  }
  return b;
}

// Smallest K with |c_{uv}| <= K rho(max of the endpoint distances to the
// basepoint) across the support; 0 for the zero chain.
inline double control_norm(const FiniteMetricSpace& s, const Chain1& c, const ControlFunction& rho) {
  double k = 0.0;
  for (const auto& [uv, a] : c.coef) {
    double len = std::max(s.radius_of(uv.first), s.radius_of(uv.second));
    k = std::max(k, std::abs(a) / rho(len));
  }
  return k;
}

// Longest distance between the two entries of any supported pair.
inline double propagation(const FiniteMetricSpace& s, const Chain1& c) {
  double p = 0.0;
  for (const auto& [uv, a] : c.coef) p = std::max(p, s.dist(uv.first, uv.second));
  return p;
}

}  // namespace cch
