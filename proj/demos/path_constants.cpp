// Smallest interesting example: the 5-point path with hop distances.
// Computes the exact isoperimetric constant of the middle interval and the
// matching Sobolev constant, then shows both optimizers.

#include <cstdio>

#include "cch/inequalities.hpp"
#include "cch/net.hpp"
#include "cch/rips.hpp"
#include "cch/space.hpp"

using namespace cch;

int main() {
  // path 0-1-2-3-4, basepoint at the center, matrix backend
  SpaceSpec sp;
  sp.kind = SpaceKind::File;
  sp.path = "path5";
  std::vector<double> lower = {1, 2, 1, 3, 2, 1, 4, 3, 2, 1};
  FiniteMetricSpace s = FiniteMetricSpace::from_matrix(sp, 5, std::move(lower), 2);

  // eps = 1/3 makes every point a net member and Rips edges exactly the hops
  PointedNet net = build_maximal_net(s, 1.0 / 3.0);
  RipsGraph g = build_rips(s, net);
  std::printf("5-path: %d net members, %zu Rips edges\n", net.size(), g.edges.size());

  ControlFunction rho = ControlFunction::constant();
  IsoperimetricReport iso = iso_constant_exact(s, g, rho, 1.0);
  std::printf("isoperimetric constant %.4f over %lld candidate sets\n", iso.value,
              iso.enumerated);
  std::printf("  best set (point ids):");
  for (int v : iso.best_set) std::printf(" %d", net.members[std::size_t(v)]);
  std::printf("\n  boundary size %zu\n", iso.boundary.size());

  SobolevReport sob = sobolev_constant(s, g, rho, SobolevWeights::Counting, 1.0);
  std::printf("sobolev constant %.4f, %d random test functions stayed below: %s\n", sob.value,
              sob.samples, sob.samples_ok ? "yes" : "no");
  std::printf("  optimizer is the indicator of:");
  for (const auto& [v, val] : sob.eta)
    if (val != 0.0) std::printf(" %d", net.members[std::size_t(v)]);
  std::printf("\n");
  return 0;
}
