#pragma once

// Ponzi-scheme certificates: route one unit of mass from every vertex of a
// region out to a sink annulus through the graph, with per-edge capacity
// K * rho(edge length from the basepoint). Feasibility is a max-flow value,
// the resulting flow converts to a 1-chain whose boundary is +1 on the
// region, and the smallest workable K is found by bisection. Certificates
// carry a per-source tail decomposition so they can be transplanted onto a
// larger space that the carrier sub-lattice covers coboundedly.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cch/chains.hpp"
#include "cch/common.hpp"
#include "cch/control.hpp"
#include "cch/flow.hpp"
#include "cch/rips.hpp"
#include "cch/space.hpp"

namespace cch {

struct PonziRegion {
  std::vector<int> F;      // vertex ids, ascending
  std::vector<int> sinks;  // vertex ids, ascending
  double R = 0;
  double margin = 0;  // truncation radius minus R
};

// F = vertices within R of the basepoint, sinks = everything beyond. The
// annulus must be at least one graph hop (3 eps) thick, otherwise the
// truncation edge would clip the outgoing capacity of the region boundary.
inline PonziRegion ball_region(const FiniteMetricSpace& s, const RipsGraph& g, double R) {
  PonziRegion out;
  out.R = R;
  out.margin = s.truncation_radius() - R;
  if (out.margin < 3.0 * g.eps - kTol)
    throw Error(Errc::usage, "sink annulus thinner than one graph hop");
  for (int v = 0; v < g.size(); ++v) {
    if (s.radius_of(g.members[v]) <= R + kTol)
      out.F.push_back(v);
    else
      out.sinks.push_back(v);
  }
  return out;
}

struct PonziCertificate {
  std::vector<int> F_points;     // point ids, ascending
  std::vector<int> sink_points;  // point ids, ascending
  Chain1 chain;
  std::vector<std::pair<int, Chain1>> tails;  // per F point, each ships one unit
  double K = 0;                               // declared control bound
  double P = 0;                               // declared propagation bound
  ControlFunction rho = ControlFunction::constant();
  double eps = 0;
  double margin = 0;
};

struct PonziFeasibility {
  bool feasible = false;
  double flow = 0;
  double deficit = 0;  // units of region mass the network could not absorb
  int sources = 0;
  std::optional<int> unreachable;  // F vertex with no path to any sink
  PonziCertificate cert;           // filled on success
};

namespace detail {

inline constexpr double kFlowDust = 1e-12;

inline void check_region_sets(const RipsGraph& g, const std::vector<int>& F,
                              const std::vector<int>& sinks) {
  std::vector<char> mark(g.size(), 0);
  for (int v : F) {
    if (v < 0 || v >= g.size() || mark[v]) throw Error(Errc::usage, "bad region vertex set");
    mark[v] = 1;
  }
  for (int v : sinks) {
    if (v < 0 || v >= g.size() || mark[v]) throw Error(Errc::usage, "bad sink vertex set");
    mark[v] = 1;
  }
}

inline std::vector<double> edge_control_weights(const FiniteMetricSpace& s, const RipsGraph& g,
                                                const ControlFunction& rho) {
  std::vector<double> w(g.edges.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& [u, v] = g.edges[i];
    w[i] = rho(std::max(s.radius_of(g.members[u]), s.radius_of(g.members[v])));
  }
  return w;
}

struct PonziNetwork {
  FlowNetwork net;
  int S = 0, T = 0;
  std::vector<std::pair<int, int>> edge_handles;  // forward/backward per Rips edge
};

inline PonziNetwork build_ponzi_network(const RipsGraph& g, const std::vector<int>& F,
                                        const std::vector<int>& sinks,
                                        const std::vector<double>& edge_w, double K) {
  PonziNetwork pn{FlowNetwork(g.size() + 2), g.size(), g.size() + 1, {}};
  const double inf = std::numeric_limits<double>::infinity();
  for (int v : F) pn.net.add_arc(pn.S, v, 1.0);
  for (int v : sinks) pn.net.add_arc(v, pn.T, inf);
  pn.edge_handles.reserve(g.edges.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& [u, v] = g.edges[i];
    int h1 = pn.net.add_arc(u, v, K * edge_w[i]);
    int h2 = pn.net.add_arc(v, u, K * edge_w[i]);
    pn.edge_handles.push_back({h1, h2});
  }
  return pn;
}

inline double feasibility_slack(double need) { return std::max(kTol, kTol * need); }

// Per-vertex outgoing net flows, sorted by head vertex.
using NetFlow = std::vector<std::vector<std::pair<int, double>>>;

// Removes circulation: net flows must be acyclic before they are cut into
// per-source paths, or the paths would not add up to the chain.
inline void cancel_flow_cycles(NetFlow& out) {
  int n = int(out.size());
  while (true) {
    std::vector<int> color(n, 0);  // 0 fresh, 1 on path, 2 done
    bool cancelled = false;
    for (int start = 0; start < n && !cancelled; ++start) {
      if (color[start]) continue;
      std::vector<std::pair<int, int>> path;  // (vertex, arc index)
      color[start] = 1;
      path.push_back({start, 0});
      while (!path.empty()) {
        auto& [u, idx] = path.back();
        while (idx < int(out[u].size()) && out[u][idx].second <= kFlowDust) ++idx;
        if (idx == int(out[u].size())) {
          color[u] = 2;
          path.pop_back();
          continue;
        }
        int v = out[u][idx].first;
        if (color[v] == 2) {
          ++idx;
          continue;
        }
        if (color[v] == 1) {
          std::size_t pos = 0;
          while (path[pos].first != v) ++pos;
          double m = std::numeric_limits<double>::infinity();
          for (std::size_t k = pos; k < path.size(); ++k)
            m = std::min(m, out[path[k].first][path[k].second].second);
          for (std::size_t k = pos; k < path.size(); ++k) {
            auto& amt = out[path[k].first][path[k].second].second;
            amt = std::max(0.0, amt - m);
          }
          cancelled = true;
          break;
        }
        color[v] = 1;
        path.push_back({v, 0});
      }
    }
    if (!cancelled) return;
  }
}

}  // namespace detail

// Builds the flow network, solves it, and on success converts the flow into
// a certificate: chain coefficients are net edge flows oriented so that the
// boundary is +1 at every F vertex, and the flow is cut into per-source
// tails (smallest-head-first paths) for later transplantation.
inline PonziFeasibility ponzi_feasible(const FiniteMetricSpace& s, const RipsGraph& g,
                                       const std::vector<int>& F, const std::vector<int>& sinks,
                                       const ControlFunction& rho, double K) {
  if (!(K > 0)) throw Error(Errc::usage, "control constant must be positive");
  detail::check_region_sets(g, F, sinks);

  PonziFeasibility out;
  out.sources = int(F.size());
  if (F.empty()) {
    out.feasible = true;
    out.cert.K = K;
    out.cert.P = 3.0 * g.eps;
    out.cert.rho = rho;
    out.cert.eps = g.eps;
    out.cert.margin = s.truncation_radius();
    for (int v : sinks) out.cert.sink_points.push_back(g.members[v]);
    std::sort(out.cert.sink_points.begin(), out.cert.sink_points.end());
    return out;
  }

  // every source must see a sink at all
  std::vector<char> reach(g.size(), 0);
  std::queue<int> q;
  for (int v : sinks) {
    reach[v] = 1;
    q.push(v);
  }
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int w : g.adj[u])
      if (!reach[w]) {
        reach[w] = 1;
        q.push(w);
      }
  }
  for (int v : F)
    if (!reach[v]) {
      out.unreachable = v;
      out.deficit = double(F.size());
      return out;
    }

  auto edge_w = detail::edge_control_weights(s, g, rho);
  auto pn = detail::build_ponzi_network(g, F, sinks, edge_w, K);
  double need = double(F.size());
  out.flow = pn.net.max_flow(pn.S, pn.T);
  if (out.flow < need - detail::feasibility_slack(need)) {
    out.deficit = need - out.flow;
    return out;
  }
  out.feasible = true;

  detail::NetFlow net(g.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& [u, v] = g.edges[i];
    double f = pn.net.flow_on(pn.edge_handles[i].first) - pn.net.flow_on(pn.edge_handles[i].second);
    if (f > detail::kFlowDust)
      net[u].push_back({v, f});
    else if (f < -detail::kFlowDust)
      net[v].push_back({u, -f});
  }
  for (auto& lst : net) std::sort(lst.begin(), lst.end());
  detail::cancel_flow_cycles(net);

  PonziCertificate& cert = out.cert;
  for (int u = 0; u < g.size(); ++u)
    for (const auto& [v, f] : net[u])
      if (f > detail::kFlowDust) cert.chain.add(g.members[v], g.members[u], f);

  std::vector<char> is_sink(g.size(), 0);
  for (int v : sinks) is_sink[v] = 1;
  std::vector<int> F_sorted = F;
  std::sort(F_sorted.begin(), F_sorted.end());
  for (int x : F_sorted) {
    double needed = 1.0;
    Chain1 tail;
    while (needed > kFlowTol) {
      std::vector<std::pair<int, int>> arcs;  // (vertex, arc index)
      int cur = x;
      while (!is_sink[cur]) {
        int idx = 0;
        while (idx < int(net[cur].size()) && net[cur][idx].second <= detail::kFlowDust) ++idx;
        if (idx == int(net[cur].size()))
          throw Error(Errc::assertion, "flow decomposition stalled at a starved vertex");
        arcs.push_back({cur, idx});
        cur = net[cur][idx].first;
        if (int(arcs.size()) > g.size() + 1)
          throw Error(Errc::assertion, "flow decomposition walked a cycle");
      }
      double m = needed;
      for (const auto& [u, i] : arcs) m = std::min(m, net[u][i].second);
      double amount = (m >= needed - kFlowTol) ? needed : m;
      for (const auto& [u, i] : arcs) {
        auto& amt = net[u][i].second;
        amt = std::max(0.0, amt - amount);
        tail.add(g.members[net[u][i].first], g.members[u], amount);
      }
      needed -= amount;
    }
    cert.tails.push_back({g.members[x], std::move(tail)});
  }
  std::sort(cert.tails.begin(), cert.tails.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  for (int v : F) cert.F_points.push_back(g.members[v]);
  for (int v : sinks) cert.sink_points.push_back(g.members[v]);
  std::sort(cert.F_points.begin(), cert.F_points.end());
  std::sort(cert.sink_points.begin(), cert.sink_points.end());
  cert.K = K;
  cert.P = 3.0 * g.eps;
  cert.rho = rho;
  cert.eps = g.eps;
  double far = 0;
  for (int p : cert.F_points) far = std::max(far, s.radius_of(p));
  cert.margin = s.truncation_radius() - far;
  return out;
}

inline PonziFeasibility ponzi_feasible(const FiniteMetricSpace& s, const RipsGraph& g,
                                       const PonziRegion& region, const ControlFunction& rho,
                                       double K) {
  return ponzi_feasible(s, g, region.F, region.sinks, rho, K);
}

struct CertReport {
  bool pass = true;
  bool boundary_ok = true, control_ok = true, propagation_ok = true, support_ok = true;
  std::optional<int> boundary_witness;                 // point with wrong coefficient
  std::optional<std::pair<int, int>> support_witness;  // pair outside the graph
  double boundary_error = 0;                           // worst |coefficient - 1| on F
  double measured_K = 0;
  double measured_P = 0;
};

// Checks the four certificate conditions: boundary +1 on every F point,
// control norm within the declared K, propagation within the declared P, and
// support contained in the graph's edge set.
inline CertReport verify_certificate(const FiniteMetricSpace& s, const RipsGraph& g,
                                     const PonziCertificate& cert) {
  CertReport r;
  Chain0 b = boundary1(cert.chain);
  for (int p : cert.F_points) {
    double err = std::abs(b.at(p) - 1.0);
    if (err > r.boundary_error) r.boundary_error = err;
    if (err > kTol && !r.boundary_witness) {
      r.boundary_ok = false;
      r.boundary_witness = p;
    }
  }
  r.measured_K = control_norm(s, cert.chain, cert.rho);
  r.control_ok = r.measured_K <= cert.K * (1.0 + kTol) + kTol;
  r.measured_P = propagation(s, cert.chain);
  r.propagation_ok = r.measured_P <= cert.P + kTol;
  for (const auto& [uv, a] : cert.chain.coef) {
    int vu = g.vertex_of(uv.first), vv = g.vertex_of(uv.second);
    if (vu < 0 || vv < 0 || !g.has_edge(vu, vv)) {
      r.support_ok = false;
      r.support_witness = uv;
      break;
    }
  }
  r.pass = r.boundary_ok && r.control_ok && r.propagation_ok && r.support_ok;
  return r;
}

struct MinConstant {
  double K_star = std::numeric_limits<double>::infinity();
  bool finite = false;
  int solves = 0;
};

// Smallest K at which the region drains, by doubling then bisection to the
// given relative tolerance. The returned value is feasible; the value one
// tolerance step below is not. Infinite when even the cap cannot drain it.
inline MinConstant min_control_constant(const FiniteMetricSpace& s, const RipsGraph& g,
                                        const std::vector<int>& F, const std::vector<int>& sinks,
                                        const ControlFunction& rho, double tol = 1e-3,
                                        double cap = 1073741824.0) {
  if (!(tol > 0)) throw Error(Errc::usage, "tolerance must be positive");
  detail::check_region_sets(g, F, sinks);
  MinConstant out;
  if (F.empty()) {
    out.K_star = 0;
    out.finite = true;
    return out;
  }

  std::vector<char> reach(g.size(), 0);
  std::queue<int> q;
  for (int v : sinks) {
    reach[v] = 1;
    q.push(v);
  }
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int w : g.adj[u])
      if (!reach[w]) {
        reach[w] = 1;
        q.push(w);
      }
  }
  for (int v : F)
    if (!reach[v]) return out;

  auto edge_w = detail::edge_control_weights(s, g, rho);
  double need = double(F.size());
  double slack = detail::feasibility_slack(need);
  auto feasible_at = [&](double K) {
    ++out.solves;
    auto pn = detail::build_ponzi_network(g, F, sinks, edge_w, K);
    return pn.net.max_flow(pn.S, pn.T) >= need - slack;
  };

  double lo, hi;
  if (feasible_at(1.0)) {
    hi = 1.0;
    lo = 0.5;
    while (feasible_at(lo)) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-12) {
        out.K_star = hi;
        out.finite = true;
        return out;
      }
    }
  } else {
    lo = 1.0;
    hi = 2.0;
    while (!feasible_at(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > cap) return out;
    }
  }
  while (hi - lo > tol * hi) {
    double mid = 0.5 * (lo + hi);
    if (feasible_at(mid))
      hi = mid;
    else
      lo = mid;
  }
  out.K_star = hi;
  out.finite = true;
  return out;
}

struct SweepRow {
  double R = 0;
  int region_size = 0;
  double K_star = std::numeric_limits<double>::infinity();
  bool finite = false;
  double margin = 0;
  int solves = 0;
  double seconds = 0;
};

inline std::vector<SweepRow> min_constant_sweep(const FiniteMetricSpace& s, const RipsGraph& g,
                                                const std::vector<double>& radii,
                                                const ControlFunction& rho, double tol = 1e-3) {
  std::vector<SweepRow> rows;
  rows.reserve(radii.size());
  for (double R : radii) {
    auto t0 = std::chrono::steady_clock::now();
    PonziRegion region = ball_region(s, g, R);
    MinConstant mc = min_control_constant(s, g, region.F, region.sinks, rho, tol);
    auto t1 = std::chrono::steady_clock::now();
    SweepRow row;
    row.R = R;
    row.region_size = int(region.F.size());
    row.K_star = mc.K_star;
    row.finite = mc.finite;
    row.margin = region.margin;
    row.solves = mc.solves;
    row.seconds = std::chrono::duration<double>(t1 - t0).count();
    rows.push_back(row);
  }
  return rows;
}

struct TailExtension {
  PonziCertificate cert;  // on the ambient space
  int added = 0;          // tails grafted onto uncovered vertices
  int max_new_per_anchor = 0;
  double anchor_bound = 0;  // provable cap on the recomputed control norm
  bool within_bound = false;
  double C = 0;
};

// Transplants a certificate from a sub-lattice onto an ambient graph that
// the sub-lattice covers within distance C. Every uncovered vertex w picks
// its nearest covered point y (ties to the smaller id); when y carries a
// tail, w gets the bridged tail [y,w] plus y's tail, joining the region with
// boundary +1; when y lies in the sink annulus, w joins the sinks. Stacked
// coefficients stay under K * (1 + A) where A is the largest number of new
// tails sharing one anchor, and the bridge edges alone need 1/rho(0).
inline TailExtension extend_tails(const FiniteMetricSpace& sub, const PonziCertificate& cert,
                                  const FiniteMetricSpace& full, const RipsGraph& gfull,
                                  const std::vector<int>& embed, double C) {
  if (int(embed.size()) != sub.size()) throw Error(Errc::usage, "embedding size mismatch");
  if (!(C > 0)) throw Error(Errc::usage, "coboundedness radius must be positive");
  for (int i = 0; i < sub.size(); ++i) {
    if (embed[i] < 0 || embed[i] >= full.size())
      throw Error(Errc::usage, "embedding hits a point outside the ambient space");
    for (int j = i + 1; j < sub.size(); ++j)
      if (std::abs(full.dist(embed[i], embed[j]) - sub.dist(i, j)) > kTol)
        throw Error(Errc::assertion, "embedding does not preserve distances");
  }
  if (embed[sub.basepoint()] != full.basepoint())
    throw Error(Errc::assertion, "embedding moves the basepoint");

  std::unordered_map<int, int> sub_of;
  for (int i = 0; i < sub.size(); ++i)
    if (!sub_of.emplace(embed[i], i).second)
      throw Error(Errc::usage, "embedding repeats a point");

  std::unordered_set<int> F_sub(cert.F_points.begin(), cert.F_points.end());
  std::unordered_map<int, const Chain1*> tail_of;
  for (const auto& [p, t] : cert.tails) tail_of.emplace(p, &t);
  for (int p : cert.F_points)
    if (!tail_of.count(p))
      throw Error(Errc::assertion, "certificate lacks a tail for a region point");

  TailExtension out;
  out.C = C;
  PonziCertificate& ext = out.cert;
  ext.rho = cert.rho;
  ext.eps = gfull.eps;

  // chains in the incoming certificate are keyed by sub point ids; re-key
  // them through the embedding
  auto map_sub_chain = [&](const Chain1& c) {
    Chain1 m;
    for (const auto& [uv, a] : c.coef) m.add(embed[uv.first], embed[uv.second], a);
    return m;
  };

  ext.chain = map_sub_chain(cert.chain);
  for (const auto& [p, t] : cert.tails) ext.tails.push_back({embed[p], map_sub_chain(t)});
  for (int p : cert.F_points) ext.F_points.push_back(embed[p]);
  for (int p : cert.sink_points) ext.sink_points.push_back(embed[p]);

  std::unordered_map<int, Chain1> mapped_tail;
  for (const auto& [p, t] : cert.tails) mapped_tail.emplace(embed[p], map_sub_chain(t));

  std::unordered_map<int, int> new_per_anchor;
  for (int v = 0; v < gfull.size(); ++v) {
    int w = gfull.members[v];
    if (sub_of.count(w)) continue;
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < sub.size(); ++i) {
      int y = embed[i];
      double d = full.dist(w, y);
      if (d < best_d - kTol || (d < best_d + kTol && (best < 0 || y < best))) {
        best = y;
        best_d = d;
      }
    }
    if (best < 0 || best_d > C + kTol)
      throw Error(Errc::assertion, "vertex beyond the coboundedness radius of the sub-lattice");
    if (F_sub.count(sub_of.at(best))) {
      Chain1 t;
      t.add(best, w, 1.0);  // bridge edge, boundary +1 at w and -1 at the anchor
      t.axpy(1.0, mapped_tail.at(best));
      ext.chain.axpy(1.0, t);
      ext.F_points.push_back(w);
      ext.tails.push_back({w, std::move(t)});
      ++out.added;
      int& a = new_per_anchor[best];
      ++a;
      out.max_new_per_anchor = std::max(out.max_new_per_anchor, a);
    } else {
      ext.sink_points.push_back(w);
    }
  }

  std::sort(ext.F_points.begin(), ext.F_points.end());
  std::sort(ext.sink_points.begin(), ext.sink_points.end());
  std::sort(ext.tails.begin(), ext.tails.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  ext.K = control_norm(full, ext.chain, ext.rho);
  ext.P = propagation(full, ext.chain);
  double far = 0;
  for (int p : ext.F_points) far = std::max(far, full.radius_of(p));
  ext.margin = full.truncation_radius() - far;

  out.anchor_bound =
      std::max(cert.K * (1.0 + double(out.max_new_per_anchor)), 1.0 / cert.rho(0.0));
  out.within_bound = ext.K <= out.anchor_bound + kTol;
  return out;
}

struct DualityReport {
  bool pass = true;
  long subsets_checked = 0;
  double constant = 0;     // K* times max valency times the shift constant
  double worst_ratio = 0;  // largest subset size over rho-weighted boundary mass
  std::optional<std::vector<int>> witness;  // vertices of a violating subset
};

// Exhaustive dual side on a small region: every nonempty subset of F must
// satisfy |S| <= K* * maxval * L(3 eps) * sum of rho over the hop boundary
// of S. The boundary takes both sides of every crossing edge.
inline DualityReport ponzi_duality_check(const FiniteMetricSpace& s, const RipsGraph& g,
                                         const std::vector<int>& F, double K_star,
                                         const ControlFunction& rho) {
  if (F.size() > 20) throw Error(Errc::cap, "region too large for subset enumeration");
  detail::check_region_sets(g, F, {});
  DualityReport out;
  double shift = rho_constants(rho, 3.0 * g.eps).L;
  out.constant = K_star * double(g.max_valency) * shift;
  int k = int(F.size());
  std::vector<char> in_S(g.size(), 0);
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    ++out.subsets_checked;
    for (int i = 0; i < k; ++i) in_S[F[i]] = (mask >> i) & 1u;
    double mass = 0;
    for (int x = 0; x < g.size(); ++x) {
      bool crossing = false;
      for (int y : g.adj[x])
        if (in_S[x] != in_S[y]) {
          crossing = true;
          break;
        }
      if (crossing) mass += rho(s.radius_of(g.members[x]));
    }
    double size = double(std::popcount(mask));
    double ratio = mass > 0 ? size / mass : std::numeric_limits<double>::infinity();
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    if (size > out.constant * mass + kTol) {
      out.pass = false;
      if (!out.witness) {
        std::vector<int> wit;
        for (int i = 0; i < k; ++i)
          if ((mask >> i) & 1u) wit.push_back(F[i]);
        out.witness = std::move(wit);
      }
    }
    for (int i = 0; i < k; ++i) in_S[F[i]] = 0;
  }
  return out;
}

}  // namespace cch
