// On a 3-regular tree the minimal control constant stays bounded as the
// scheme region grows: the exponential boundary can absorb any ball with the
// trivial control function. Sweeps depth and prints K* at half the radius.

#include <cstdio>

#include "cch/control.hpp"
#include "cch/net.hpp"
#include "cch/ponzi.hpp"
#include "cch/rips.hpp"
#include "cch/space.hpp"

using namespace cch;

int main() {
  std::printf("%6s  %8s  %8s  %10s\n", "depth", "points", "R", "K*");
  for (int depth = 5; depth <= 9; ++depth) {
    SpaceSpec sp;
    sp.kind = SpaceKind::Tree;
    sp.degree = 3;
    sp.depth = depth;
    FiniteMetricSpace s = FiniteMetricSpace::generate(sp);
    PointedNet net = build_maximal_net(s, 1.0);
    RipsGraph g = build_rips(s, net);

    // largest ball whose sink annulus is still one graph hop thick
    double R = depth - 3.0;
    auto rows = min_constant_sweep(s, g, {R}, ControlFunction::constant());
    std::printf("%6d  %8d  %8.1f  %10.4f\n", depth, s.size(), R,
                rows.front().K_star);
  }
  std::printf("bounded K* at every depth is the non-amenability signature\n");
  return 0;
}
