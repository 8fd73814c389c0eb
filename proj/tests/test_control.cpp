#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "cch/control.hpp"

using namespace cch;

TEST_CASE("control formulas anchor at one") {
  auto variants = {ControlFunction::constant(), ControlFunction::affine(1.0),
                   ControlFunction::power(1.0, 2.0), ControlFunction::log(1.0)};
  for (const auto& rho : variants) {
    INFO(rho.describe());
    CHECK(rho(0.0) == 1.0);
    CHECK_THROWS_AS(rho(-0.1), Error);
    double prev = rho(0.0);
    for (double t : {0.1, 0.5, 1.0, 3.0, 10.0, 100.0}) {
      double cur = rho(t);
      CHECK(cur >= prev - 1e-15);
      prev = cur;
    }
  }
  CHECK(ControlFunction::affine(1.0)(5.0) == 6.0);
  CHECK(ControlFunction::power(1.0, 2.0)(3.0) == 10.0);
  CHECK(ControlFunction::constant()(42.0) == 1.0);
  CHECK(std::abs(ControlFunction::log(1.0)(std::exp(1.0) - 1.0) - 2.0) <= 1e-12);
}

TEST_CASE("control parsing round trips") {
  auto a = parse_rho("affine:1.5");
  CHECK(a.kind == RhoKind::Affine);
  CHECK(a.C == 1.5);
  auto p = parse_rho("power:2,0.5");
  CHECK(p.kind == RhoKind::Power);
  CHECK(p.C == 2.0);
  CHECK(p.p == 0.5);
  auto l = parse_rho("log:3");
  CHECK(l.kind == RhoKind::Log);
  CHECK(l.C == 3.0);
  CHECK(parse_rho("constant").kind == RhoKind::Constant);

  for (const char* bad : {"affine", "power:1", "quadratic:1", "constant:1", "affine:x", "power:1;2"})
    CHECK_THROWS_AS(parse_rho(bad), Error);
}

TEST_CASE("shift and scale constants are valid and near tight") {
  for (double eps : {0.5, 1.0, 2.0}) {
    INFO("eps=" << eps);
    {
      auto r = rho_constants(ControlFunction::constant(), eps);
      CHECK(r.L == 1.0);
      CHECK(r.M == 1.0);
      CHECK(r.valid);
      CHECK(r.near_tight);
    }
    {
      auto r = rho_constants(ControlFunction::affine(1.0), eps);
      CHECK(r.L == 1.0 + eps);
      CHECK(r.M == std::max(1.0, eps));
      CHECK(r.L_closed_form);
      CHECK(r.valid);
      CHECK(r.near_tight);
    }
    {
      auto r = rho_constants(ControlFunction::power(2.0, 1.7), eps);
      CHECK(r.M == std::max(1.0, std::pow(eps, 1.7)));
      CHECK_FALSE(r.L_closed_form);
      CHECK(r.L >= 1.0);
      CHECK(r.valid);
      CHECK(r.near_tight);
    }
    {
      auto r = rho_constants(ControlFunction::log(2.0), eps);
      CHECK(r.L == 1.0 + 2.0 * std::log1p(eps));
      CHECK(r.M_closed_form == (eps <= 1.0));
      if (eps <= 1.0) CHECK(r.M == 1.0);
      CHECK(r.valid);
      CHECK(r.near_tight);
    }
  }
  CHECK_THROWS_AS(rho_constants(ControlFunction::affine(1.0), 0.0), Error);
}

TEST_CASE("growth classifier separates shapes") {
  auto make = [](std::vector<double> Rs, auto&& f) {
    std::vector<GrowthPoint> t;
    for (double R : Rs) t.push_back({R, f(R)});
    return t;
  };
  std::vector<double> Rs{20, 30, 40, 50, 60, 70, 80, 90, 100};

  // slope recovered despite small alternating noise
  {
    int sign = 1;
    std::vector<GrowthPoint> t;
    for (double R : Rs) {
      t.push_back({R, R / 12.0 + 0.001 * sign});
      sign = -sign;
    }
    auto fit = classify_growth(t);
    CHECK(fit.chosen == RhoKind::Affine);
    CHECK(std::abs(fit.a - 1.0 / 12.0) <= 0.01);
    CHECK(fit.r2 >= 0.99);
  }
  {
    auto fit = classify_growth(make(Rs, [](double R) { return 3.0 * std::log1p(R) + 1.0; }));
    CHECK(fit.chosen == RhoKind::Log);
    CHECK(std::abs(fit.a - 3.0) <= 0.05);
  }
  {
    auto fit = classify_growth(make(Rs, [](double R) { return 0.05 * std::pow(R, 1.5) + 1.0; }));
    CHECK(fit.chosen == RhoKind::Power);
    CHECK(std::abs(fit.p - 1.5) <= 1e-9);
    CHECK(std::abs(fit.a - 0.05) <= 1e-6);
  }
  // flat-with-jitter stays constant instead of chasing the jitter
  {
    int sign = 1;
    std::vector<GrowthPoint> t;
    for (double R : Rs) {
      t.push_back({R, 2.0 + 0.005 * sign});
      sign = -sign;
    }
    auto fit = classify_growth(t);
    CHECK(fit.chosen == RhoKind::Constant);
    CHECK(std::abs(fit.b - 2.0) <= 0.01);
  }
  // geometric saturation toward a ceiling reads as bounded, not affine
  {
    std::vector<GrowthPoint> t;
    for (int k = 8; k <= 12; ++k) t.push_back({double(k), 2.0 - 4.0 / 3.0 * std::pow(2.0, -k)});
    auto fit = classify_growth(t);
    CHECK(fit.chosen == RhoKind::Constant);
  }
}

TEST_CASE("growth classifier is scale equivariant and validates input") {
  std::vector<GrowthPoint> t;
  for (double R : {10.0, 20.0, 30.0, 40.0, 50.0, 60.0}) t.push_back({R, R / 7.0 + 0.5});
  auto base = classify_growth(t);
  for (auto& row : t) row.K *= 7.0;
  auto scaled = classify_growth(t);
  CHECK(base.chosen == scaled.chosen);
  CHECK(std::abs(scaled.a - 7.0 * base.a) <= 1e-9);

  std::vector<GrowthPoint> narrow{{1, 1}, {2, 2}, {3, 3}, {4, 4}};
  CHECK_THROWS_AS(classify_growth(narrow), Error);
  std::vector<GrowthPoint> unsorted{{1, 1}, {3, 2}, {2, 3}, {4, 4}, {5, 5}};
  CHECK_THROWS_AS(classify_growth(unsorted), Error);

  auto fit = classify_growth(t);
  REQUIRE(fit.models.size() == 4);
  CHECK(fit.models[0].kind == RhoKind::Constant);
  CHECK(fit.models[1].kind == RhoKind::Affine);
  CHECK(fit.models[2].kind == RhoKind::Log);
  CHECK(fit.models[3].kind == RhoKind::Power);
  for (const auto& m : fit.models) CHECK(m.sse >= 0.0);
}
