#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <map>
#include <utility>
#include <vector>

#include "cch/chains.hpp"
#include "cch/flow.hpp"
#include "cch/net.hpp"
#include "cch/ponzi.hpp"
#include "cch/rips.hpp"
#include "cch/rng.hpp"
#include "cch/space.hpp"

using namespace cch;

namespace {

SpaceSpec zn(int dims, int radius) {
  SpaceSpec sp;
  sp.kind = SpaceKind::Zn;
  sp.dims = dims;
  sp.radius = radius;
  return sp;
}

SpaceSpec tree_spec(int degree, int depth) {
  SpaceSpec sp;
  sp.kind = SpaceKind::Tree;
  sp.degree = degree;
  sp.depth = depth;
  return sp;
}

SpaceSpec named(const char* label) {
  SpaceSpec sp;
  sp.kind = SpaceKind::File;
  sp.path = label;
  return sp;
}

FiniteMetricSpace matrix_space(const char* label, int n, std::vector<double> lower) {
  return FiniteMetricSpace::from_matrix(named(label), n, std::move(lower));
}

// id order on the integer line: 0, +1, -1, +2, -2, ...
int line_id(int c) { return c == 0 ? 0 : (c > 0 ? 2 * c - 1 : -2 * c); }

struct Built {
  FiniteMetricSpace s;
  PointedNet net;
  RipsGraph g;
};

Built build(FiniteMetricSpace s, double eps) {
  auto net = build_maximal_net(s, eps);
  auto g = build_rips(s, net);
  return {std::move(s), std::move(net), std::move(g)};
}

double worst_coef_gap(const Chain1& a, const Chain1& b) {
  Chain1 diff = a;
  diff.axpy(-1.0, b);
  double worst = 0;
  for (const auto& [uv, c] : diff.coef) worst = std::max(worst, std::abs(c));
  return worst;
}

}  // namespace

TEST_CASE("boundary of a pair and of a telescoping path") {
  Chain1 c;
  c.add(3, 7, 2.5);
  Chain0 b = boundary1(c);
  CHECK(b.at(7) == Catch::Approx(2.5));
  CHECK(b.at(3) == Catch::Approx(-2.5));
  CHECK(b.support_size() == 2);

  // a unit path 0 -> 1 -> 2 -> 3 telescopes to endpoints only
  Chain1 path;
  path.add(0, 1, 1.0);
  path.add(1, 2, 1.0);
  path.add(2, 3, 1.0);
  Chain0 bp = boundary1(path);
  CHECK(bp.at(0) == Catch::Approx(-1.0));
  CHECK(bp.at(3) == Catch::Approx(1.0));
  CHECK(bp.at(1) == 0.0);
  CHECK(bp.at(2) == 0.0);
  CHECK(bp.support_size() == 2);

  // a pair and its reversal cancel exactly
  Chain1 z;
  z.add(2, 5, 1.0);
  z.add(5, 2, 1.0);
  CHECK(z.zero());
  CHECK(z.at(2, 5) == 0.0);

  // sign-aware reads
  Chain1 e;
  e.add(9, 4, 1.5);
  CHECK(e.at(9, 4) == Catch::Approx(1.5));
  CHECK(e.at(4, 9) == Catch::Approx(-1.5));
}

TEST_CASE("boundary is linear over random chains") {
  SplitMix64 rng(7);
  auto random_chain = [&] {
    Chain1 c;
    int terms = 3 + int(rng.below(12));
    for (int t = 0; t < terms; ++t) {
      int u = int(rng.below(31)), v = int(rng.below(31));
      c.add(u, v, rng.uniform(-2.0, 2.0));
    }
    return c;
  };

  for (int round = 0; round < 50; ++round) {
    Chain1 a = random_chain(), b = random_chain();
    double alpha = rng.uniform(-3.0, 3.0);
    Chain1 combo = a;
    combo.axpy(alpha, b);

    // recombine the boundaries independently and sweep every pair read
    Chain0 expect = boundary1(a);
    expect.axpy(alpha, boundary1(b));
    Chain0 got = boundary1(combo);
    for (int x = 0; x < 31; ++x) CHECK(got.at(x) == Catch::Approx(expect.at(x)).margin(1e-12));

    std::map<int, double> direct;
    for (int u = 0; u < 31; ++u)
      for (int v = u + 1; v < 31; ++v) {
        double cv = combo.at(u, v);
        direct[v] += cv;
        direct[u] -= cv;
      }
    for (const auto& [x, val] : direct) CHECK(got.at(x) == Catch::Approx(val).margin(1e-12));
  }
}

TEST_CASE("control norm and propagation measure the support") {
  auto s = FiniteMetricSpace::generate(zn(1, 5));
  ControlFunction one = ControlFunction::constant();
  ControlFunction aff = ControlFunction::affine(1.0);

  Chain1 z;
  CHECK(control_norm(s, z, one) == 0.0);
  CHECK(propagation(s, z) == 0.0);

  Chain1 c;
  c.add(line_id(0), line_id(1), 5.0);
  CHECK(control_norm(s, c, one) == Catch::Approx(5.0));
  CHECK(propagation(s, c) == Catch::Approx(1.0));

  // coefficient 6 between coordinates 0 and +2: outer radius 2, affine
  // weight 3, so the norm drops to 2
  Chain1 c2;
  c2.add(line_id(2), line_id(0), 6.0);
  CHECK(control_norm(s, c2, aff) == Catch::Approx(2.0));

  c2.add(line_id(2), line_id(-2), 1.0);
  CHECK(propagation(s, c2) == Catch::Approx(4.0));
}

TEST_CASE("max flow saturates bottlenecks") {
  FlowNetwork net(4);
  int h1 = net.add_arc(0, 1, 1.0);
  int h2 = net.add_arc(1, 3, 0.5);
  CHECK(net.max_flow(0, 3) == Catch::Approx(0.5));
  CHECK(net.flow_on(h1) == Catch::Approx(0.5));
  CHECK(net.flow_on(h2) == Catch::Approx(0.5));

  FlowNetwork diamond(4);
  diamond.add_arc(0, 1, 1.0);
  diamond.add_arc(0, 2, 1.0);
  diamond.add_arc(1, 3, 1.0);
  diamond.add_arc(2, 3, 1.0);
  CHECK(diamond.max_flow(0, 3) == Catch::Approx(2.0));

  FlowNetwork bad(2);
  CHECK_THROWS_AS(bad.add_arc(0, 0, 1.0), Error);
  CHECK_THROWS_AS(bad.add_arc(0, 5, 1.0), Error);
  CHECK_THROWS_AS(bad.add_arc(0, 1, -1.0), Error);
}

TEST_CASE("a single edge drains one unit") {
  auto built = build(matrix_space("pair", 2, {1.0}), 1.0 / 3.0);
  const auto& s = built.s;
  const auto& g = built.g;
  REQUIRE(g.size() == 2);
  REQUIRE(g.edges.size() == 1);
  ControlFunction one = ControlFunction::constant();

  auto empty = ponzi_feasible(s, g, {}, {0, 1}, one, 1.0);
  CHECK(empty.feasible);
  CHECK(empty.cert.chain.zero());
  CHECK(empty.sources == 0);

  auto ok = ponzi_feasible(s, g, {0}, {1}, one, 1.0);
  REQUIRE(ok.feasible);
  CHECK(ok.flow == Catch::Approx(1.0));
  CHECK(ok.cert.chain.at(1, 0) == Catch::Approx(1.0));
  CHECK(boundary1(ok.cert.chain).at(0) == Catch::Approx(1.0));
  CHECK(ok.cert.K == Catch::Approx(1.0));
  CHECK(ok.cert.P == Catch::Approx(1.0));
  CHECK(ok.cert.F_points == std::vector<int>{0});
  CHECK(ok.cert.sink_points == std::vector<int>{1});
  REQUIRE(ok.cert.tails.size() == 1);
  CHECK(ok.cert.tails[0].first == 0);
  CHECK(worst_coef_gap(ok.cert.tails[0].second, ok.cert.chain) == 0.0);
  CHECK(verify_certificate(s, g, ok.cert).pass);

  auto short_cap = ponzi_feasible(s, g, {0}, {1}, one, 0.9);
  CHECK_FALSE(short_cap.feasible);
  CHECK(short_cap.deficit == Catch::Approx(0.1).margin(1e-9));
  CHECK(short_cap.cert.chain.zero());

  // the affine weight on the one edge is 2, so half a unit of control is
  // exactly enough
  auto mc = min_control_constant(s, g, {0}, {1}, ControlFunction::affine(1.0));
  REQUIRE(mc.finite);
  CHECK(mc.K_star == Catch::Approx(0.5).margin(0.002));
  CHECK(mc.solves >= 3);
  CHECK_FALSE(ponzi_feasible(s, g, {0}, {1}, ControlFunction::affine(1.0), 0.49).feasible);
  CHECK(ponzi_feasible(s, g, {0}, {1}, ControlFunction::affine(1.0), 0.51).feasible);

  CHECK_THROWS_AS(ponzi_feasible(s, g, {0}, {1}, one, 0.0), Error);
  CHECK_THROWS_AS(ponzi_feasible(s, g, {0, 0}, {1}, one, 1.0), Error);
  CHECK_THROWS_AS(ponzi_feasible(s, g, {0}, {0}, one, 1.0), Error);
}

TEST_CASE("line regions drain at the predicted thresholds") {
  auto built = build(FiniteMetricSpace::generate(zn(1, 50)), 1.0);
  const auto& s = built.s;
  const auto& g = built.g;
  REQUIRE(g.size() == 101);
  ControlFunction one = ControlFunction::constant();
  ControlFunction aff = ControlFunction::affine(1.0);

  // the tight cut sits at the outermost sphere: 12 crossing edges on the
  // line, total mass 2R+1, so K* = (2R+1)/12 for flat control and
  // (2R+1)/(12R+32) for affine control (the crossing weights sum to 12R+32)
  std::vector<double> radii{10, 20, 30, 40};
  auto flat = min_constant_sweep(s, g, radii, one);
  auto slanted = min_constant_sweep(s, g, radii, aff);
  REQUIRE(flat.size() == 4);
  REQUIRE(slanted.size() == 4);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    double R = radii[i];
    REQUIRE(flat[i].finite);
    REQUIRE(slanted[i].finite);
    CHECK(flat[i].region_size == int(2 * R + 1));
    CHECK(flat[i].margin == Catch::Approx(50.0 - R));
    double flat_exact = (2 * R + 1) / 12.0;
    double slant_exact = (2 * R + 1) / (12.0 * R + 32.0);
    CHECK(flat[i].K_star == Catch::Approx(flat_exact).epsilon(0.002));
    CHECK(slanted[i].K_star == Catch::Approx(slant_exact).epsilon(0.002));
    CHECK(slanted[i].K_star < flat[i].K_star);
    if (i) {
      CHECK(flat[i].K_star > flat[i - 1].K_star);
      CHECK(slanted[i].K_star > slanted[i - 1].K_star);
    }
  }

  // feasibility flips right at the threshold, independently of the search
  double k20 = 41.0 / 12.0;
  PonziRegion region = ball_region(s, g, 20.0);
  CHECK_FALSE(ponzi_feasible(s, g, region, one, 0.98 * k20).feasible);
  auto feas = ponzi_feasible(s, g, region, one, 1.02 * k20);
  REQUIRE(feas.feasible);
  auto report = verify_certificate(s, g, feas.cert);
  CHECK(report.pass);
  CHECK(report.measured_K <= 1.02 * k20 + 1e-9);
  CHECK(report.measured_P <= 3.0 + 1e-9);

  std::vector<int> want_F;
  for (int i = 0; i <= 40; ++i) want_F.push_back(i);
  CHECK(feas.cert.F_points == want_F);
  CHECK(feas.cert.margin == Catch::Approx(30.0));

  // the tails cut the chain into one unit per source
  REQUIRE(feas.cert.tails.size() == 41);
  Chain1 acc;
  for (const auto& [p, t] : feas.cert.tails) {
    CHECK(boundary1(t).at(p) == Catch::Approx(1.0).margin(1e-9));
    CHECK(propagation(s, t) <= 3.0 + 1e-9);
    acc.axpy(1.0, t);
  }
  CHECK(worst_coef_gap(acc, feas.cert.chain) <= 1e-6);
}

TEST_CASE("trivalent tree regions are near critical") {
  auto built = build(FiniteMetricSpace::generate(tree_spec(3, 8)), 1.0 / 3.0);
  const auto& s = built.s;
  const auto& g = built.g;
  REQUIRE(g.size() == 766);
  REQUIRE(g.edges.size() == 765);

  PonziRegion region = ball_region(s, g, 7.0);
  CHECK(region.F.size() == 382);
  CHECK(region.sinks.size() == 384);

  // the cut below depth k carries mass 3*2^k - 2 over 3*2^k edges, tightest
  // at the leaf layer: K* = 1 - 1/192
  auto mc = min_control_constant(s, g, region.F, region.sinks, ControlFunction::constant());
  REQUIRE(mc.finite);
  CHECK(mc.K_star == Catch::Approx(191.0 / 192.0).epsilon(0.002));
}

TEST_CASE("certificate checker flags each defect") {
  auto built = build(matrix_space("path3", 3, {1.0, 2.0, 1.0}), 1.0 / 3.0);
  const auto& s = built.s;
  const auto& g = built.g;
  REQUIRE(g.edges.size() == 2);  // 0-1 and 1-2, no chord

  ControlFunction one = ControlFunction::constant();
  auto feas = ponzi_feasible(s, g, {0}, {1, 2}, one, 1.0);
  REQUIRE(feas.feasible);
  REQUIRE(verify_certificate(s, g, feas.cert).pass);

  PonziCertificate bad = feas.cert;
  bad.chain.add(0, 1, 0.5);
  auto r1 = verify_certificate(s, g, bad);
  CHECK_FALSE(r1.pass);
  CHECK_FALSE(r1.boundary_ok);
  REQUIRE(r1.boundary_witness.has_value());
  CHECK(*r1.boundary_witness == 0);
  CHECK(r1.boundary_error == Catch::Approx(0.5));

  bad = feas.cert;
  bad.K *= 0.5;
  auto r2 = verify_certificate(s, g, bad);
  CHECK_FALSE(r2.pass);
  CHECK_FALSE(r2.control_ok);
  CHECK(r2.boundary_ok);

  bad = feas.cert;
  bad.P = 0.5;
  auto r3 = verify_certificate(s, g, bad);
  CHECK_FALSE(r3.pass);
  CHECK_FALSE(r3.propagation_ok);

  bad = feas.cert;
  bad.chain.add(0, 2, 0.25);  // distance 2, not an edge of the graph
  auto r4 = verify_certificate(s, g, bad);
  CHECK_FALSE(r4.pass);
  CHECK_FALSE(r4.support_ok);
  REQUIRE(r4.support_witness.has_value());
  CHECK(*r4.support_witness == std::make_pair(0, 2));
}

TEST_CASE("certificates transplant across a covering embedding") {
  auto sub = build(matrix_space("pair", 2, {1.0}), 1.0 / 3.0);
  ControlFunction one = ControlFunction::constant();
  auto base = ponzi_feasible(sub.s, sub.g, {0}, {1}, one, 1.0);
  REQUIRE(base.feasible);

  // identity embedding: nothing to add, everything maps through
  auto trivial = extend_tails(sub.s, base.cert, sub.s, sub.g, {0, 1}, 1.0);
  CHECK(trivial.added == 0);
  CHECK(trivial.max_new_per_anchor == 0);
  CHECK(trivial.cert.chain.at(1, 0) == Catch::Approx(1.0));
  CHECK(trivial.cert.K == Catch::Approx(1.0));
  CHECK(trivial.within_bound);
  CHECK(verify_certificate(sub.s, sub.g, trivial.cert).pass);

  // star with a pendant third point at distance 1 from the center: the
  // pendant rides the center's tail, which doubles the shared edge
  auto star = build(matrix_space("star", 3, {1.0, 1.0, 2.0}), 1.0 / 3.0);
  REQUIRE(star.g.edges.size() == 2);
  auto ext = extend_tails(sub.s, base.cert, star.s, star.g, {0, 1}, 2.0);
  CHECK(ext.added == 1);
  CHECK(ext.max_new_per_anchor == 1);
  CHECK(ext.cert.chain.at(0, 1) == Catch::Approx(-2.0));
  CHECK(ext.cert.chain.at(0, 2) == Catch::Approx(1.0));
  CHECK(ext.cert.F_points == std::vector<int>{0, 2});
  CHECK(ext.cert.sink_points == std::vector<int>{1});
  CHECK(ext.cert.K == Catch::Approx(2.0));
  CHECK(ext.anchor_bound == Catch::Approx(2.0));
  CHECK(ext.within_bound);
  REQUIRE(ext.cert.tails.size() == 2);
  CHECK(ext.cert.tails[1].first == 2);
  CHECK(ext.cert.tails[1].second.at(0, 2) == Catch::Approx(1.0));
  CHECK(verify_certificate(star.s, star.g, ext.cert).pass);

  // bad embeddings are rejected: distance-distorting, basepoint-moving,
  // wrong size, and one whose pendant lies beyond the covering radius
  CHECK_THROWS_AS(extend_tails(sub.s, base.cert, star.s, star.g, {1, 2}, 2.0), Error);
  CHECK_THROWS_AS(extend_tails(sub.s, base.cert, star.s, star.g, {2, 0}, 2.0), Error);
  CHECK_THROWS_AS(extend_tails(sub.s, base.cert, star.s, star.g, {0}, 2.0), Error);
  CHECK_THROWS_AS(extend_tails(sub.s, base.cert, star.s, star.g, {0, 1}, 0.5), Error);
}

TEST_CASE("sublattice certificates extend to the ambient line") {
  auto full = build(FiniteMetricSpace::generate(zn(1, 10)), 1.0);
  REQUIRE(full.g.size() == 21);

  std::vector<int> evens{0, 2, -2, 4, -4, 6, -6, 8, -8, 10, -10};
  std::vector<double> lower;
  for (std::size_t i = 1; i < evens.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) lower.push_back(std::abs(evens[i] - evens[j]));
  auto sub = build(matrix_space("even-line", int(evens.size()), std::move(lower)), 1.0);
  REQUIRE(sub.g.size() == 11);

  std::vector<int> embed;
  for (int c : evens) embed.push_back(line_id(c));
  for (int c : {0, 1, -1, 7, -10}) REQUIRE(full.s.int_points()[line_id(c)][0] == c);

  ControlFunction aff = ControlFunction::affine(1.0);
  PonziRegion region = ball_region(sub.s, sub.g, 6.0);
  REQUIRE(region.F.size() == 7);
  CHECK(region.margin == Catch::Approx(4.0));

  // consecutive evens are one hop apart; the cut at radius r has one edge
  // per side of weight K(r+3) against mass r+1, binding at r = 6: 7/18
  auto mc = min_control_constant(sub.s, sub.g, region.F, region.sinks, aff);
  REQUIRE(mc.finite);
  CHECK(mc.K_star == Catch::Approx(7.0 / 18.0).epsilon(0.002));

  auto feas = ponzi_feasible(sub.s, sub.g, region, aff, 0.4);
  REQUIRE(feas.feasible);
  REQUIRE(verify_certificate(sub.s, sub.g, feas.cert).pass);

  auto ext = extend_tails(sub.s, feas.cert, full.s, full.g, embed, 2.0);
  CHECK(ext.added == 8);             // odd coordinates -7..7 join the region
  CHECK(ext.max_new_per_anchor == 2);  // +1 and -1 both anchor at the origin

  std::vector<int> want_F;
  for (int i = 0; i <= 14; ++i) want_F.push_back(i);
  std::vector<int> want_sinks{15, 16, 17, 18, 19, 20};
  CHECK(ext.cert.F_points == want_F);
  CHECK(ext.cert.sink_points == want_sinks);
  CHECK(ext.cert.margin == Catch::Approx(3.0));

  CHECK(ext.anchor_bound == Catch::Approx(1.2));
  CHECK(ext.within_bound);
  CHECK(ext.cert.K <= 0.4 * 3.0 + 1.0 + 1e-9);  // also under the loose shift bound
  CHECK(verify_certificate(full.s, full.g, ext.cert).pass);
}

TEST_CASE("region size is dominated by weighted boundary mass") {
  auto built = build(FiniteMetricSpace::generate(zn(1, 10)), 1.0);
  const auto& s = built.s;
  const auto& g = built.g;
  REQUIRE(g.max_valency == 6);
  ControlFunction one = ControlFunction::constant();

  PonziRegion region = ball_region(s, g, 4.0);
  REQUIRE(region.F.size() == 9);

  auto dr = ponzi_duality_check(s, g, region.F, 0.75, one);
  CHECK(dr.pass);
  CHECK(dr.subsets_checked == 511);
  CHECK(dr.constant == Catch::Approx(4.5));
  CHECK(dr.worst_ratio <= dr.constant + 1e-6);
  CHECK_FALSE(dr.witness.has_value());

  // an absurdly small constant is caught, smallest violating subset first
  auto bad = ponzi_duality_check(s, g, region.F, 0.01, one);
  CHECK_FALSE(bad.pass);
  REQUIRE(bad.witness.has_value());
  CHECK(*bad.witness == std::vector<int>{region.F[0]});

  std::vector<int> all;
  for (int v = 0; v < g.size(); ++v) all.push_back(v);
  CHECK_THROWS_AS(ponzi_duality_check(s, g, all, 1.0, one), Error);
}

TEST_CASE("wide line example stays feasible at unit control") {
  auto built = build(FiniteMetricSpace::generate(zn(1, 210)), 1.0);
  const auto& s = built.s;
  const auto& g = built.g;
  REQUIRE(g.size() == 421);

  PonziRegion region = ball_region(s, g, 200.0);
  CHECK(region.F.size() == 401);
  auto feas = ponzi_feasible(s, g, region, ControlFunction::affine(1.0), 1.0);
  REQUIRE(feas.feasible);
  auto report = verify_certificate(s, g, feas.cert);
  CHECK(report.pass);
  CHECK(report.measured_P <= 3.0 + 1e-9);
  CHECK(feas.cert.tails.size() == 401);
}

TEST_CASE("disconnected regions are reported unreachable") {
  // two far components: 0-1 and 2-3
  auto built = build(matrix_space("split", 4, {1.0, 100.0, 100.0, 100.0, 100.0, 1.0}), 1.0 / 3.0);
  const auto& s = built.s;
  const auto& g = built.g;
  REQUIRE(g.edges.size() == 2);
  ControlFunction one = ControlFunction::constant();

  auto feas = ponzi_feasible(s, g, {0, 2}, {1}, one, 1.0);
  CHECK_FALSE(feas.feasible);
  REQUIRE(feas.unreachable.has_value());
  CHECK(*feas.unreachable == 2);
  CHECK(feas.deficit == Catch::Approx(2.0));
  CHECK(feas.flow == 0.0);

  auto mc = min_control_constant(s, g, {0, 2}, {1}, one);
  CHECK_FALSE(mc.finite);
  CHECK(std::isinf(mc.K_star));
  CHECK(mc.solves == 0);

  // the sink annulus must be at least one hop thick
  auto line = build(FiniteMetricSpace::generate(zn(1, 10)), 1.0);
  CHECK_THROWS_AS(ball_region(line.s, line.g, 8.5), Error);
  CHECK(ball_region(line.s, line.g, 7.0).F.size() == 15);
}
