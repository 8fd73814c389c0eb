#pragma once

// Max-flow on a directed network with real capacities (level graph plus
// blocking flow). Arcs whose residual drops below a fixed tolerance count as
// saturated, so rounding dust cannot keep the search alive.

#include <limits>
#include <queue>
#include <vector>

#include "cch/common.hpp"

namespace cch {

// Residual capacity below this is treated as zero.
inline constexpr double kFlowTol = 1e-9;

class FlowNetwork {
 public:
  explicit FlowNetwork(int n) : adj_(n) {}

  int size() const { return int(adj_.size()); }

  // Directed arc with the given capacity; the returned handle reads back the
  // flow after a solve.
  int add_arc(int from, int to, double cap) {
    if (from < 0 || to < 0 || from >= size() || to >= size() || from == to || cap < 0)
      throw Error(Errc::usage, "bad flow arc");
    int fpos = int(adj_[from].size());
    int rpos = int(adj_[to].size());
    adj_[from].push_back({to, cap, rpos});
    adj_[to].push_back({from, 0.0, fpos});
    handles_.push_back({from, fpos, cap});
    return int(handles_.size()) - 1;
  }

  double max_flow(int src, int dst) {
    double total = 0.0;
    while (level_bfs(src, dst)) {
      iter_.assign(size(), 0);
      while (true) {
        double pushed = blocking_dfs(src, dst, std::numeric_limits<double>::infinity());
        if (pushed <= kFlowTol) break;
        total += pushed;
      }
    }
    return total;
  }

  double flow_on(int handle) const {
    const Handle& h = handles_[handle];
    return h.cap0 - adj_[h.vertex][h.index].cap;
  }

 private:
  struct Arc {
    int to;
    double cap;
    int rev;
  };
  struct Handle {
    int vertex;
    int index;
    double cap0;
  };

  bool level_bfs(int src, int dst) {
    level_.assign(size(), -1);
    std::queue<int> q;
    level_[src] = 0;
    q.push(src);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (const Arc& a : adj_[u])
        if (a.cap > kFlowTol && level_[a.to] < 0) {
          level_[a.to] = level_[u] + 1;
          q.push(a.to);
        }
    }
    return level_[dst] >= 0;
  }

  double blocking_dfs(int u, int dst, double limit) {
    if (u == dst) return limit;
    for (int& i = iter_[u]; i < int(adj_[u].size()); ++i) {
      Arc& a = adj_[u][i];
      if (a.cap <= kFlowTol || level_[a.to] != level_[u] + 1) continue;
      double pushed = blocking_dfs(a.to, dst, std::min(limit, a.cap));
      if (pushed > kFlowTol) {
        a.cap -= pushed;
        adj_[a.to][a.rev].cap += pushed;
        return pushed;
      }
    }
    return 0.0;
  }

  std::vector<std::vector<Arc>> adj_;
  std::vector<Handle> handles_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

}  // namespace cch
