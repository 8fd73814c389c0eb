#pragma once

// Finite pointed metric spaces: desk-scale truncations of lattices, free
// groups, the discrete Heisenberg group, random clouds with the Heisenberg
// norm, hyperbolic-plane samples, plane-embedded fan/ladder shapes, regular
// trees, and matrix-backed spaces loaded from files.
//
// Word metrics are exact: for a group ball of radius R, d(g,h) is the word
// length of g^{-1}h, which is computed in closed form (lattices, free groups,
// trees) or read off a breadth-first word-length table of the 2R ball
// (Heisenberg). Nothing is approximated by shortest paths inside the
// truncation, so truncation never distorts distances.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cch/common.hpp"
#include "cch/rng.hpp"

namespace cch {

enum class SpaceKind {
  Zn,
  FreeGroup,
  HeisenbergZ,
  HeisenbergRCloud,
  HyperbolicDisk,
  Fan,
  Ladder,
  Tree,
  File,
};

inline const char* to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::Zn: return "zn";
    case SpaceKind::FreeGroup: return "free-group";
    case SpaceKind::HeisenbergZ: return "heisenberg-z";
    case SpaceKind::HeisenbergRCloud: return "heisenberg-r-cloud";
    case SpaceKind::HyperbolicDisk: return "hyperbolic-disk";
    case SpaceKind::Fan: return "fan";
    case SpaceKind::Ladder: return "ladder";
    case SpaceKind::Tree: return "tree";
    case SpaceKind::File: return "file";
  }
  return "?";
}

inline std::optional<SpaceKind> space_kind_from(const std::string& s) {
  for (SpaceKind k : {SpaceKind::Zn, SpaceKind::FreeGroup, SpaceKind::HeisenbergZ,
                      SpaceKind::HeisenbergRCloud, SpaceKind::HyperbolicDisk, SpaceKind::Fan,
                      SpaceKind::Ladder, SpaceKind::Tree, SpaceKind::File}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

struct SpaceSpec {
  SpaceKind kind = SpaceKind::Zn;
  int dims = 1;          // zn
  int radius = 5;        // zn, free-group, heisenberg-z word radius
  int rank = 2;          // free-group
  int arms = 8;          // fan
  int arm_samples = 32;  // fan points per arm
  int rungs = 3;         // ladder
  int count = 100;       // cloud kinds
  int degree = 3;        // tree
  int depth = 4;         // tree
  double box = 2.0;      // heisenberg-r-cloud half side
  double max_radius = 4.0;  // hyperbolic-disk
  std::uint64_t seed = 1;   // cloud kinds
  std::string path;         // file

  std::string describe() const {
    std::ostringstream os;
    os << to_string(kind);
    switch (kind) {
      case SpaceKind::Zn: os << "(" << dims << "," << radius << ")"; break;
      case SpaceKind::FreeGroup: os << "(" << rank << "," << radius << ")"; break;
      case SpaceKind::HeisenbergZ: os << "(" << radius << ")"; break;
      case SpaceKind::HeisenbergRCloud:
        os << "(" << count << "," << box << ",seed=" << seed << ")";
        break;
      case SpaceKind::HyperbolicDisk:
        os << "(" << count << "," << max_radius << ",seed=" << seed << ")";
        break;
      case SpaceKind::Fan:
        os << "(" << arms;
        if (arm_samples != 32) os << ",samples=" << arm_samples;
        os << ")";
        break;
      case SpaceKind::Ladder: os << "(" << rungs << ")"; break;
      case SpaceKind::Tree: os << "(" << degree << "," << depth << ")"; break;
      case SpaceKind::File: os << "(" << path << ")"; break;
    }
    return os.str();
  }
};

namespace detail {

struct IntVecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= std::uint64_t(std::uint32_t(x));
      h *= 1099511628211ull;
    }
    return std::size_t(h);
  }
};

// Packs a Heisenberg element (x,y,z) into one key. Ranges are generous for
// any desk-scale radius; overflow throws rather than silently colliding.
inline std::uint64_t heis_key(int x, int y, int z) {
  constexpr int kXY = 1 << 19, kZ = 1 << 23;
  if (x <= -kXY || x >= kXY || y <= -kXY || y >= kXY || z <= -kZ || z >= kZ)
    throw Error(Errc::cap, "heisenberg element out of packing range");
  return (std::uint64_t(std::uint32_t(x + kXY)) << 44) |
         (std::uint64_t(std::uint32_t(y + kXY)) << 24) | std::uint64_t(std::uint32_t(z + kZ));
}

struct Heis {
  int x = 0, y = 0, z = 0;
};

// Group law (x1,y1,z1)*(x2,y2,z2) = (x1+x2, y1+y2, z1+z2 + (x1*y2 - y1*x2)).
inline Heis heis_mul(const Heis& a, const Heis& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z + (a.x * b.y - a.y * b.x)};
}

inline Heis heis_inv(const Heis& a) { return {-a.x, -a.y, -a.z}; }

}  // namespace detail

class FiniteMetricSpace {
 public:
  enum class Backend {
    L1Lattice,   // integer tuples, L1 word metric
    FreeWord,    // reduced words over rank free generators
    HeisWord,    // discrete Heisenberg, word metric via 2R length table
    TreeGraph,   // rooted regular tree, graph metric
    Euclid2,     // points in the plane, ambient Euclidean metric
    HeisNorm,    // R^3 with the Heisenberg gauge metric
    HyperPolar,  // hyperbolic plane, polar coordinates
    Matrix,      // explicit distance table
  };

  int size() const { return n_; }
  const SpaceSpec& spec() const { return spec_; }
  Backend backend() const { return backend_; }
  bool integral() const {
    return backend_ == Backend::L1Lattice || backend_ == Backend::FreeWord ||
           backend_ == Backend::HeisWord || backend_ == Backend::TreeGraph;
  }

  double dist(int i, int j) const {
    switch (backend_) {
      case Backend::L1Lattice: {
        const auto &a = ipts_[i], &b = ipts_[j];
        long s = 0;
        for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(long(a[k]) - long(b[k]));
        return double(s);
      }
      case Backend::FreeWord: {
        const auto &a = ipts_[i], &b = ipts_[j];
        std::size_t p = 0, m = std::min(a.size(), b.size());
        while (p < m && a[p] == b[p]) ++p;
        return double((a.size() - p) + (b.size() - p));
      }
      case Backend::HeisWord: {
        const auto &a = ipts_[i], &b = ipts_[j];
        detail::Heis q = detail::heis_mul(detail::heis_inv({a[0], a[1], a[2]}), {b[0], b[1], b[2]});
        auto it = heis_wl_.find(detail::heis_key(q.x, q.y, q.z));
        if (it == heis_wl_.end())
          throw Error(Errc::assertion, "heisenberg word-length table miss");
        return double(it->second);
      }
      case Backend::TreeGraph: {
        int u = i, v = j, d = 0;
        while (tree_depth_[u] > tree_depth_[v]) u = tree_parent_[u], ++d;
        while (tree_depth_[v] > tree_depth_[u]) v = tree_parent_[v], ++d;
        while (u != v) u = tree_parent_[u], v = tree_parent_[v], d += 2;
        return double(d);
      }
      case Backend::Euclid2: {
        double dx = dpts_[i][0] - dpts_[j][0], dy = dpts_[i][1] - dpts_[j][1];
        return std::sqrt(dx * dx + dy * dy);
      }
      case Backend::HeisNorm: {
        const auto &a = dpts_[i], &b = dpts_[j];
        // left-invariant gauge distance ||a^{-1} b||, with
        // ||(x,y,z)|| = ((x^2+y^2)^2 + z^2)^(1/4)
        double x = b[0] - a[0], y = b[1] - a[1];
        double z = b[2] - a[2] - a[0] * b[1] + a[1] * b[0];
        double r2 = x * x + y * y;
        return std::pow(r2 * r2 + z * z, 0.25);
      }
      case Backend::HyperPolar: {
        // stable half-angle form of cosh d = cosh r1 cosh r2 - sinh r1 sinh r2 cos dt
        double r1 = dpts_[i][0], t1 = dpts_[i][1];
        double r2 = dpts_[j][0], t2 = dpts_[j][1];
        double sr = std::sinh(0.5 * (r1 - r2));
        double st = std::sin(0.5 * (t1 - t2));
        double q = sr * sr + std::sinh(r1) * std::sinh(r2) * st * st;
        return 2.0 * std::asinh(std::sqrt(q));
      }
      case Backend::Matrix: {
        if (i == j) return 0.0;
        int a = std::max(i, j), b = std::min(i, j);
        return dmat_[std::size_t(a) * (a - 1) / 2 + b];
      }
    }
    return 0.0;
  }

  int basepoint() const { return basepoint_; }
  double weight(int i) const { return weights_.empty() ? 1.0 : weights_[i]; }
  bool unit_weights() const { return weights_.empty(); }
  double radius_of(int i) const { return radius_[i]; }
  double truncation_radius() const { return trunc_radius_; }

  // Open metric ball around a member point: indices j with d(c,j) < r.
  std::vector<int> ball(int center, double r) const {
    std::vector<int> out;
    for (int j = 0; j < n_; ++j)
      if (dist(center, j) < r) out.push_back(j);
    return out;
  }

  double ball_weight(int center, double r) const {
    double s = 0;
    for (int j = 0; j < n_; ++j)
      if (dist(center, j) < r) s += weight(j);
    return s;
  }

  std::string label(int i) const {
    std::ostringstream os;
    if (!ipts_.empty()) {
      if (backend_ == Backend::FreeWord) {
        if (ipts_[i].empty()) os << "e";
        for (int g : ipts_[i]) {
          char c = char('a' + std::abs(g) - 1);
          os << (g > 0 ? c : char(std::toupper(c)));
        }
      } else {
        os << "(";
        for (std::size_t k = 0; k < ipts_[i].size(); ++k)
          os << (k ? "," : "") << ipts_[i][k];
        os << ")";
      }
    } else if (!dpts_.empty()) {
      os << "(";
      for (std::size_t k = 0; k < dpts_[i].size(); ++k) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4g", dpts_[i][k]);
        os << (k ? "," : "") << buf;
      }
      os << ")";
    } else {
      os << "#" << i;
    }
    return os.str();
  }

  const std::vector<std::vector<int>>& int_points() const { return ipts_; }
  const std::vector<std::vector<double>>& real_points() const { return dpts_; }
  const std::vector<double>& raw_weights() const { return weights_; }
  const std::vector<double>& matrix_lower() const { return dmat_; }

  void set_weights(std::vector<double> w) {
    if (!w.empty()) {
      if (int(w.size()) != n_) throw Error(Errc::io, "weight count does not match point count");
      for (double x : w)
        if (!(x > 0)) throw Error(Errc::io, "point weights must be strictly positive");
    }
    weights_ = std::move(w);
  }

  void set_basepoint(int o) {
    if (o < 0 || o >= n_) throw Error(Errc::usage, "basepoint index out of range");
    basepoint_ = o;
    refresh_radii();
  }

  // --- generators -------------------------------------------------------

  static FiniteMetricSpace generate(const SpaceSpec& spec, std::size_t cap = kDefaultPointCap) {
    check_cap(spec, cap);
    switch (spec.kind) {
      case SpaceKind::Zn: return gen_zn(spec, cap);
      case SpaceKind::FreeGroup: return gen_free(spec, cap);
      case SpaceKind::HeisenbergZ: return gen_heis(spec, cap);
      case SpaceKind::HeisenbergRCloud: return gen_heis_cloud(spec);
      case SpaceKind::HyperbolicDisk: return gen_hyperbolic(spec);
      case SpaceKind::Fan: return gen_fan(spec);
      case SpaceKind::Ladder: return gen_ladder(spec);
      case SpaceKind::Tree: return gen_tree(spec, cap);
      case SpaceKind::File:
        throw Error(Errc::usage, "file-backed spaces are constructed by the loader");
    }
    throw Error(Errc::usage, "unknown space kind");
  }

  static FiniteMetricSpace from_matrix(SpaceSpec spec, int n, std::vector<double> lower,
                                       int basepoint = 0) {
    if (n <= 0) throw Error(Errc::io, "matrix space needs at least one point");
    if (lower.size() != std::size_t(n) * (n - 1) / 2)
      throw Error(Errc::io, "distance matrix has wrong length");
    FiniteMetricSpace s;
    s.spec_ = std::move(spec);
    s.backend_ = Backend::Matrix;
    s.n_ = n;
    s.dmat_ = std::move(lower);
    for (double d : s.dmat_)
      if (!(d > 0)) throw Error(Errc::io, "off-diagonal distances must be positive");
    s.basepoint_ = basepoint;
    s.finish();
    return s;
  }

  static FiniteMetricSpace from_euclid2(SpaceSpec spec, std::vector<std::array<double, 2>> pts,
                                        int basepoint = 0) {
    FiniteMetricSpace s;
    s.spec_ = std::move(spec);
    s.backend_ = Backend::Euclid2;
    s.n_ = int(pts.size());
    for (auto& p : pts) s.dpts_.push_back({p[0], p[1]});
    s.basepoint_ = basepoint;
    s.finish();
    return s;
  }

  // Closed-form / closed-enough point-count estimate used for cap rejection.
  static double estimate_count(const SpaceSpec& spec) {
    switch (spec.kind) {
      case SpaceKind::Zn: return l1_ball_count(spec.dims, spec.radius);
      case SpaceKind::FreeGroup: {
        double q = 2.0 * spec.rank - 1.0;
        if (spec.rank <= 1) return 2.0 * spec.radius + 1.0;
        return 1.0 + 2.0 * spec.rank * (std::pow(q, spec.radius) - 1.0) / (q - 1.0);
      }
      case SpaceKind::HeisenbergZ: {
        double r = spec.radius + 1.0;
        return 0.5 * r * r * r * r + 8.0;  // loose upper envelope of quartic growth
      }
      case SpaceKind::HeisenbergRCloud: return double(spec.count);
      case SpaceKind::HyperbolicDisk: return double(spec.count);
      case SpaceKind::Fan: return 1.0 + double(spec.arm_samples) * (spec.arms + 1.0);
      case SpaceKind::Ladder: return 64.0 * spec.rungs;
      case SpaceKind::Tree: {
        double q = spec.degree - 1.0;
        if (spec.degree <= 2) return 2.0 * spec.depth + 1.0;
        return 1.0 + spec.degree * (std::pow(q, spec.depth) - 1.0) / (q - 1.0);
      }
      case SpaceKind::File: return 0.0;
    }
    return 0.0;
  }

  static double l1_ball_count(int d, int R) {
    // sum_k 2^k C(d,k) C(R,k)
    double total = 0;
    for (int k = 0; k <= std::min(d, R); ++k) {
      double term = std::pow(2.0, k);
      for (int j = 0; j < k; ++j) term *= double(d - j) / double(j + 1);
      for (int j = 0; j < k; ++j) term *= double(R - j) / double(j + 1);
      total += term;
    }
    return total;
  }

 private:
  SpaceSpec spec_;
  Backend backend_ = Backend::Matrix;
  int n_ = 0;
  std::vector<std::vector<int>> ipts_;
  std::vector<std::vector<double>> dpts_;
  std::vector<double> weights_;  // empty means all ones
  std::vector<double> radius_;
  std::vector<double> dmat_;
  std::vector<int> tree_parent_, tree_depth_;
  std::unordered_map<std::uint64_t, int> heis_wl_;
  int basepoint_ = 0;
  double trunc_radius_ = 0;

  static void check_cap(const SpaceSpec& spec, std::size_t cap) {
    double est = estimate_count(spec);
    if (est > double(cap)) {
      std::ostringstream os;
      os << "space " << spec.describe() << " would have ~" << std::uint64_t(est)
         << " points, over the cap of " << cap;
      throw Error(Errc::cap, os.str());
    }
  }

  void refresh_radii() {
    radius_.assign(n_, 0.0);
    for (int i = 0; i < n_; ++i) radius_[i] = dist(basepoint_, i);
  }

  void finish() {
    if (n_ <= 0) throw Error(Errc::assertion, "empty space");
    refresh_radii();
    trunc_radius_ = *std::max_element(radius_.begin(), radius_.end());
  }

  static FiniteMetricSpace gen_zn(const SpaceSpec& spec, std::size_t cap) {
    if (spec.dims < 1 || spec.radius < 0) throw Error(Errc::usage, "zn needs dims >= 1, radius >= 0");
    FiniteMetricSpace s;
    s.spec_ = spec;
    s.backend_ = Backend::L1Lattice;
    std::unordered_map<std::vector<int>, int, detail::IntVecHash> seen;
    std::queue<std::vector<int>> q;
    std::vector<int> origin(spec.dims, 0);
    seen[origin] = 0;
    s.ipts_.push_back(origin);
    q.push(origin);
    std::vector<int> depth{0};
    while (!q.empty()) {
      auto cur = q.front();
      q.pop();
      int d = depth[seen[cur]];
      if (d == spec.radius) continue;
      for (int axis = 0; axis < spec.dims; ++axis) {
        for (int step : {+1, -1}) {
          auto nxt = cur;
          nxt[axis] += step;
          if (seen.count(nxt)) continue;
          if (s.ipts_.size() >= cap) throw Error(Errc::cap, "zn generation exceeded point cap");
          seen[nxt] = int(s.ipts_.size());
          depth.push_back(d + 1);
          s.ipts_.push_back(nxt);
          q.push(nxt);
        }
      }
    }
    s.n_ = int(s.ipts_.size());
    s.basepoint_ = 0;
    s.finish();
    s.trunc_radius_ = spec.radius;
    return s;
  }

  static FiniteMetricSpace gen_free(const SpaceSpec& spec, std::size_t cap) {
    if (spec.rank < 1 || spec.radius < 0) throw Error(Errc::usage, "free-group needs rank >= 1");
    FiniteMetricSpace s;
    s.spec_ = spec;
    s.backend_ = Backend::FreeWord;
    // letters +-1 .. +-rank; a reduced word never follows g by -g
    std::queue<int> q;
    s.ipts_.push_back({});
    q.push(0);
    while (!q.empty()) {
      int id = q.front();
      q.pop();
      const auto cur = s.ipts_[id];
      if (int(cur.size()) == spec.radius) continue;
      for (int g = 1; g <= spec.rank; ++g) {
        for (int letter : {g, -g}) {
          if (!cur.empty() && cur.back() == -letter) continue;
          if (s.ipts_.size() >= cap) throw Error(Errc::cap, "free-group generation exceeded point cap");
          auto nxt = cur;
          nxt.push_back(letter);
          int nid = int(s.ipts_.size());
          s.ipts_.push_back(std::move(nxt));
          q.push(nid);
        }
      }
    }
    s.n_ = int(s.ipts_.size());
    s.basepoint_ = 0;
    s.finish();
    s.trunc_radius_ = spec.radius;
    return s;
  }

  static FiniteMetricSpace gen_heis(const SpaceSpec& spec, std::size_t cap) {
    if (spec.radius < 0) throw Error(Errc::usage, "heisenberg-z needs radius >= 0");
    FiniteMetricSpace s;
    s.spec_ = spec;
    s.backend_ = Backend::HeisWord;
    // breadth-first word lengths out to 2R so that d(g,h) = wl(g^{-1}h) is
    // always a table hit for g,h in the R ball
    const int R = spec.radius, R2 = 2 * spec.radius;
    const std::array<detail::Heis, 4> gens{{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}}};
    std::queue<detail::Heis> q;
    s.heis_wl_[detail::heis_key(0, 0, 0)] = 0;
    q.push({0, 0, 0});
    s.ipts_.push_back({0, 0, 0});
    while (!q.empty()) {
      detail::Heis cur = q.front();
      q.pop();
      int d = s.heis_wl_.at(detail::heis_key(cur.x, cur.y, cur.z));
      if (d == R2) continue;
      for (const auto& g : gens) {
        detail::Heis nxt = detail::heis_mul(cur, g);
        auto key = detail::heis_key(nxt.x, nxt.y, nxt.z);
        if (s.heis_wl_.count(key)) continue;
        s.heis_wl_[key] = d + 1;
        if (d + 1 <= R) {
          if (s.ipts_.size() >= cap) throw Error(Errc::cap, "heisenberg generation exceeded point cap");
          s.ipts_.push_back({nxt.x, nxt.y, nxt.z});
        }
        q.push(nxt);
      }
    }
    s.n_ = int(s.ipts_.size());
    s.basepoint_ = 0;
    s.finish();
    s.trunc_radius_ = spec.radius;
    return s;
  }

  static FiniteMetricSpace gen_tree(const SpaceSpec& spec, std::size_t cap) {
    if (spec.degree < 2 || spec.depth < 0) throw Error(Errc::usage, "tree needs degree >= 2");
    FiniteMetricSpace s;
    s.spec_ = spec;
    s.backend_ = Backend::TreeGraph;
    s.tree_parent_.push_back(-1);
    s.tree_depth_.push_back(0);
    std::size_t head = 0;
    while (head < s.tree_parent_.size()) {
      int id = int(head++);
      int d = s.tree_depth_[id];
      if (d == spec.depth) continue;
      int children = (id == 0) ? spec.degree : spec.degree - 1;
      for (int c = 0; c < children; ++c) {
        if (s.tree_parent_.size() >= cap) throw Error(Errc::cap, "tree generation exceeded point cap");
        s.tree_parent_.push_back(id);
        s.tree_depth_.push_back(d + 1);
      }
    }
    s.n_ = int(s.tree_parent_.size());
    s.basepoint_ = 0;
    s.finish();
    s.trunc_radius_ = spec.depth;
    return s;
  }

  static FiniteMetricSpace gen_fan(const SpaceSpec& spec) {
    if (spec.arms < 1) throw Error(Errc::usage, "fan needs arms >= 1");
    if (spec.arm_samples < 1) throw Error(Errc::usage, "fan needs arm_samples >= 1");
    // apex at the origin; one straight arm to (1,0) and arms n=1..A to (1,1/n),
    // each sampled at arm_samples intervals; ambient plane distance
    const int kSteps = spec.arm_samples;
    std::vector<std::array<double, 2>> pts;
    pts.push_back({0.0, 0.0});
    auto add_arm = [&](double tip_y) {
      for (int j = 1; j <= kSteps; ++j) {
        double t = double(j) / kSteps;
        pts.push_back({t, t * tip_y});
      }
    };
    add_arm(0.0);
    for (int n = 1; n <= spec.arms; ++n) add_arm(1.0 / n);
    return from_euclid2(spec, std::move(pts), 0);
  }

  static FiniteMetricSpace gen_ladder(const SpaceSpec& spec) {
    if (spec.rungs < 1) throw Error(Errc::usage, "ladder needs rungs >= 1");
    // stacked square boundaries: side 2^n, centers rising so each square's
    // bottom edge lies on the previous square's top edge; 64 samples per
    // square; duplicates where edges overlap are kept once
    std::vector<std::array<double, 2>> pts;
    std::unordered_set<std::uint64_t> seen;
    auto key_part = [](double v) {
      std::uint64_t u;
      static_assert(sizeof v == sizeof u);
      std::memcpy(&u, &v, sizeof u);
      return u;
    };
    auto push = [&](double x, double y) {
      std::uint64_t k = key_part(x) * 1099511628211ull ^ key_part(y);
      if (seen.insert(k).second) pts.push_back({x, y});
    };
    double cy = 1.0;
    double side = 2.0;
    for (int n = 1; n <= spec.rungs; ++n) {
      double h = side / 2.0;
      double step = side / 16.0;
      // counterclockwise from the bottom-center, 64 samples of the perimeter
      for (int k = 0; k < 64; ++k) {
        double sarc = k * step;
        double x, y;
        if (sarc < h) {  // bottom-center to bottom-right corner
          x = sarc;
          y = cy - h;
        } else if (sarc < h + side) {  // up the right side
          x = h;
          y = cy - h + (sarc - h);
        } else if (sarc < h + 2 * side) {  // across the top
          x = h - (sarc - h - side);
          y = cy + h;
        } else if (sarc < h + 3 * side) {  // down the left side
          x = -h;
          y = cy + h - (sarc - h - 2 * side);
        } else {  // bottom-left corner back toward bottom-center
          x = -h + (sarc - h - 3 * side);
          y = cy - h;
        }
        push(x, y);
      }
      double next_side = side * 2.0;
      cy += 1.5 * side;
      side = next_side;
    }
    return from_euclid2(spec, std::move(pts), 0);
  }

  static FiniteMetricSpace gen_heis_cloud(const SpaceSpec& spec) {
    if (spec.count < 1 || !(spec.box > 0))
      throw Error(Errc::usage, "heisenberg-r-cloud needs count >= 1, box > 0");
    FiniteMetricSpace s;
    s.spec_ = spec;
    s.backend_ = Backend::HeisNorm;
    SplitMix64 rng(spec.seed);
    s.dpts_.push_back({0.0, 0.0, 0.0});
    for (int i = 1; i < spec.count; ++i) {
      double x = rng.uniform(-spec.box, spec.box);
      double y = rng.uniform(-spec.box, spec.box);
      double z = rng.uniform(-spec.box, spec.box);
      s.dpts_.push_back({x, y, z});
    }
    s.n_ = int(s.dpts_.size());
    s.basepoint_ = 0;
    s.finish();
    return s;
  }

  static FiniteMetricSpace gen_hyperbolic(const SpaceSpec& spec) {
    if (spec.count < 1 || !(spec.max_radius > 0))
      throw Error(Errc::usage, "hyperbolic-disk needs count >= 1, max-radius > 0");
    FiniteMetricSpace s;
    s.spec_ = spec;
    s.backend_ = Backend::HyperPolar;
    SplitMix64 rng(spec.seed);
    s.dpts_.push_back({0.0, 0.0});
    double area = std::cosh(spec.max_radius) - 1.0;
    constexpr double kTwoPi = 6.283185307179586476925287;
    for (int i = 1; i < spec.count; ++i) {
      // uniform in hyperbolic area: P(radius < r) ~ cosh(r) - 1
      double r = std::acosh(1.0 + rng.uniform() * area);
      double theta = rng.uniform() * kTwoPi;
      s.dpts_.push_back({r, theta});
    }
    s.n_ = int(s.dpts_.size());
    s.basepoint_ = 0;
    s.finish();
    return s;
  }
};

}  // namespace cch
