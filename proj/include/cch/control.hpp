#pragma once

// Control functions rho with rho(0) = 1, non-decreasing, and their shift and
// scale comparison constants: rho(eps + t) <= L(eps) rho(t) and
// rho(t eps) <= M(eps) rho(t). Also the growth classifier for measured
// K*(R) tables.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cch/common.hpp"

namespace cch {

enum class RhoKind { Constant, Affine, Power, Log };

inline const char* to_string(RhoKind k) {
  switch (k) {
    case RhoKind::Constant: return "constant";
    case RhoKind::Affine: return "affine";
    case RhoKind::Power: return "power";
    case RhoKind::Log: return "log";
  }
  return "?";
}

struct ControlFunction {
  RhoKind kind = RhoKind::Constant;
  double C = 1.0;
  double p = 1.0;

  double operator()(double t) const {
    if (t < 0) throw Error(Errc::usage, "control functions take t >= 0");
    switch (kind) {
      case RhoKind::Constant: return 1.0;
      case RhoKind::Affine: return C * t + 1.0;
      case RhoKind::Power: return C * std::pow(t, p) + 1.0;
      case RhoKind::Log: return 1.0 + C * std::log1p(t);
    }
    return 1.0;
  }

  std::string describe() const {
    std::ostringstream os;
    os << to_string(kind);
    if (kind == RhoKind::Affine || kind == RhoKind::Log)
      os << "(" << C << ")";
    else if (kind == RhoKind::Power)
      os << "(" << C << "," << p << ")";
    return os.str();
  }

  static ControlFunction constant() { return {RhoKind::Constant, 0.0, 1.0}; }
  static ControlFunction affine(double C) {
    require_param(C);
    return {RhoKind::Affine, C, 1.0};
  }
  static ControlFunction power(double C, double p) {
    require_param(C);
    if (!(p > 0)) throw Error(Errc::usage, "power control needs exponent p > 0");
    return {RhoKind::Power, C, p};
  }
  static ControlFunction log(double C) {
    require_param(C);
    return {RhoKind::Log, C, 1.0};
  }

 private:
  static void require_param(double C) {
    if (!(C >= 0)) throw Error(Errc::usage, "control coefficients must be nonnegative");
  }
};

// parse "constant", "affine:C", "power:C,p", "log:C"
inline ControlFunction parse_rho(const std::string& text) {
  auto colon = text.find(':');
  std::string name = text.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto one = [&]() {
    double C;
    std::istringstream is(args);
    char junk;
    if (!(is >> C) || (is >> junk)) throw Error(Errc::usage, "bad control parameter: " + text);
    return C;
  };
  if (name == "constant" && args.empty()) return ControlFunction::constant();
  if (name == "affine") return ControlFunction::affine(one());
  if (name == "log") return ControlFunction::log(one());
  if (name == "power") {
    double C, p;
    char comma;
    std::istringstream is(args);
    if (!(is >> C >> comma >> p) || comma != ',')
      throw Error(Errc::usage, "power control wants power:C,p");
    return ControlFunction::power(C, p);
  }
  throw Error(Errc::usage, "unknown control function: " + text);
}

namespace detail {

// log-spaced grid including t = 0, used for constant estimation/verification
inline std::vector<double> rho_grid(int points = 1000, double lo = 1e-4, double hi = 1e4) {
  std::vector<double> ts{0.0};
  for (int i = 0; i < points; ++i)
    ts.push_back(lo * std::pow(hi / lo, double(i) / double(points - 1)));
  return ts;
}

// sup of ratio(t) over t >= 0, by grid scan plus golden-section refinement
// around the best bracket
template <class F>
double grid_sup(F&& ratio, const std::vector<double>& grid) {
  std::size_t arg = 0;
  double best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double v = ratio(grid[i]);
    if (v > best) best = v, arg = i;
  }
  double lo = grid[arg > 0 ? arg - 1 : 0];
  double hi = grid[std::min(arg + 1, grid.size() - 1)];
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = ratio(x1), f2 = ratio(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = ratio(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = ratio(x1);
    }
  }
  return std::max({best, f1, f2});
}

}  // namespace detail

struct RhoConstants {
  double L = 1;
  double M = 1;
  bool L_closed_form = true;   // false when grid-estimated
  bool M_closed_form = true;
  bool valid = false;          // never violated on the verification grid
  bool near_tight = false;     // both constants achieved within 5% somewhere
  double worst_L_ratio = 0;    // max over grid of rho(eps+t)/rho(t)
  double worst_M_ratio = 0;
};

// Shift and scale comparison constants for rho at the given eps, verified on
// a 1000-point log grid.
inline RhoConstants rho_constants(const ControlFunction& rho, double eps) {
  if (!(eps > 0)) throw Error(Errc::usage, "rho constants need eps > 0");
  RhoConstants out;
  auto shift_ratio = [&](double t) { return rho(eps + t) / rho(t); };
  auto scale_ratio = [&](double t) { return rho(eps * t) / rho(t); };

  switch (rho.kind) {
    case RhoKind::Constant:
      out.L = out.M = 1.0;
      break;
    case RhoKind::Affine:
      // (C(t+eps)+1) <= (1+C eps)(Ct+1), equality at t=0
      out.L = 1.0 + rho.C * eps;
      // (C t eps + 1) <= max(1,eps)(Ct+1): ratio tends to eps, caps at 1
      out.M = std::max(1.0, eps);
      break;
    case RhoKind::Power:
      out.L = detail::grid_sup(shift_ratio, detail::rho_grid(4000));
      out.L_closed_form = false;
      out.M = std::max(1.0, std::pow(eps, rho.p));
      break;
    case RhoKind::Log:
      // log(1+t+eps) <= log(1+t) + log(1+eps) makes 1 + C log(1+eps) valid,
      // with equality at t=0
      out.L = 1.0 + rho.C * std::log1p(eps);
      if (eps <= 1.0) {
        out.M = 1.0;  // t eps <= t and rho is non-decreasing
      } else {
        out.M = detail::grid_sup(scale_ratio, detail::rho_grid(4000));
        out.M_closed_form = false;
      }
      break;
  }

  auto grid = detail::rho_grid(1000);
  double wl = 0, wm = 0;
  for (double t : grid) {
    wl = std::max(wl, shift_ratio(t));
    wm = std::max(wm, scale_ratio(t));
  }
  out.worst_L_ratio = wl;
  out.worst_M_ratio = wm;
  out.valid = wl <= out.L * (1.0 + 1e-9) && wm <= out.M * (1.0 + 1e-9);
  out.near_tight = wl >= out.L / 1.05 && wm >= out.M / 1.05;
  return out;
}

struct GrowthPoint {
  double R = 0;
  double K = 0;
};

struct GrowthModel {
  RhoKind kind;
  double a = 0, b = 0, p = 1;  // K ~ a * shape(R) + b
  double sse = 0;
};

struct GrowthFit {
  RhoKind chosen = RhoKind::Constant;
  double a = 0, b = 0, p = 1;
  double r2 = 0;
  std::vector<GrowthModel> models;  // all candidates, by ascending complexity
};

// Least-squares classification of a K*(R) table against the four built-in
// shapes. The simplest shape within 10% of the best residual wins.
inline GrowthFit classify_growth(const std::vector<GrowthPoint>& table) {
  if (table.size() < 5)
    throw Error(Errc::usage, "growth classification needs at least 5 samples");
  for (std::size_t i = 1; i < table.size(); ++i)
    if (!(table[i].R > table[i - 1].R))
      throw Error(Errc::usage, "growth table must have strictly increasing R");

  const std::size_t n = table.size();
  double mean_k = 0;
  for (const auto& row : table) mean_k += row.K;
  mean_k /= double(n);
  double sst = 0;
  for (const auto& row : table) sst += (row.K - mean_k) * (row.K - mean_k);

  // least squares of K against a * x + b for a given shape x = shape(R)
  auto fit_linear = [&](auto&& shape) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& row : table) {
      double x = shape(row.R);
      sx += x;
      sy += row.K;
      sxx += x * x;
      sxy += x * row.K;
    }
    double denom = double(n) * sxx - sx * sx;
    GrowthModel m{RhoKind::Constant, 0, mean_k, 1, 0};
    if (std::abs(denom) > 1e-12) {
      m.a = (double(n) * sxy - sx * sy) / denom;
      m.b = (sy - m.a * sx) / double(n);
    }
    for (const auto& row : table) {
      double e = row.K - (m.a * shape(row.R) + m.b);
      m.sse += e * e;
    }
    return m;
  };

  GrowthFit out;
  {
    GrowthModel m{RhoKind::Constant, 0, mean_k, 1, sst};
    out.models.push_back(m);
  }
  {
    auto m = fit_linear([](double R) { return R; });
    m.kind = RhoKind::Affine;
    out.models.push_back(m);
  }
  {
    auto m = fit_linear([](double R) { return std::log1p(R); });
    m.kind = RhoKind::Log;
    out.models.push_back(m);
  }
  {
    GrowthModel best{RhoKind::Power, 0, 0, 1, std::numeric_limits<double>::infinity()};
    for (double p = 0.3; p <= 3.0 + 1e-9; p += 0.05) {
      auto m = fit_linear([p](double R) { return std::pow(R, p); });
      if (m.sse < best.sse) {
        best = GrowthModel{RhoKind::Power, m.a, m.b, p, m.sse};
      }
    }
    out.models.push_back(best);
  }

  // a table that is flat to within 2% of its level has no growth to model;
  // without this, any smooth saturation curve would look faintly affine
  double lo = table.front().K, hi = lo;
  for (const auto& row : table) {
    lo = std::min(lo, row.K);
    hi = std::max(hi, row.K);
  }
  if (hi - lo <= 0.02 * std::max(std::abs(mean_k), 1e-300)) {
    out.chosen = RhoKind::Constant;
    out.b = mean_k;
    out.r2 = 0;
    return out;
  }

  double min_sse = std::numeric_limits<double>::infinity();
  for (const auto& m : out.models) min_sse = std::min(min_sse, m.sse);
  // complexity order: constant, affine, log, power
  for (const auto& m : out.models) {
    if (m.sse <= 1.1 * min_sse + 1e-12) {
      out.chosen = m.kind;
      out.a = m.a;
      out.b = m.b;
      out.p = m.p;
      out.r2 = sst > 0 ? 1.0 - m.sse / sst : 1.0;
      return out;
    }
  }
  return out;  // unreachable
}

}  // namespace cch
