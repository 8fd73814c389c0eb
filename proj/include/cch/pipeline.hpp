#pragma once

// End-to-end runs. A config names the space, the scale, the control
// function, and the analysis stages; the pipeline builds space, net and
// graph, runs the stages in dependency order, and assembles a report in
// which every checked inequality carries both of its sides. A failed check
// stops the run and leaves a partial report. Everything except wall-time
// fields is deterministic for a fixed config and seed, at any thread count.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "cch/common.hpp"
#include "cch/control.hpp"
#include "cch/hyperbolicity.hpp"
#include "cch/inequalities.hpp"
#include "cch/io.hpp"
#include "cch/net.hpp"
#include "cch/partition.hpp"
#include "cch/ponzi.hpp"
#include "cch/rips.hpp"
#include "cch/rng.hpp"
#include "cch/space.hpp"
#include "cch/version.hpp"

namespace cch {

struct SweepRange {
  double rmin = 0, rmax = 0, step = 0;
  bool active() const { return step > 0 && rmax >= rmin - kTol; }
};

inline const std::vector<std::string>& known_stages() {
  static const std::vector<std::string> k = {"partition", "control", "ponzi", "iso",
                                             "sobolev",   "delta",   "crosscheck"};
  return k;
}

inline const std::vector<std::string>& default_stages() {
  static const std::vector<std::string> k = {"partition", "control", "ponzi",
                                             "iso",       "sobolev", "delta"};
  return k;
}

struct RunConfig {
  SpaceSpec space;
  std::string space_file;  // when set, the space is loaded instead of generated
  double eps = 1.0;
  ControlFunction rho = ControlFunction::constant();
  SweepRange sweep;
  double margin = -1.0;  // safe margin for the set-side searches, <0: one hop
  int max_vertices = 20;
  int restarts = 8;
  int samples = 2000;
  double tolerance = 1e-3;  // bisection tolerance for K*
  std::uint64_t seed = 1;
  int threads = 1;  // 0 requests autodetection, which the report logs
  std::vector<std::string> stages;  // empty: the default analysis set
  std::string out_dir;
  std::string report_path, csv_path;
};

inline Json config_to_json(const RunConfig& c) {
  Json j{{"format_version", kFormatVersion}, {"kind", "config"}};
  j["space"] = spec_to_json(c.space);
  j["space_file"] = c.space_file;
  j["eps"] = c.eps;
  j["rho"] = rho_to_json(c.rho);
  j["sweep"] = Json{{"rmin", c.sweep.rmin}, {"rmax", c.sweep.rmax}, {"step", c.sweep.step}};
  j["margin"] = c.margin;
  j["max_vertices"] = c.max_vertices;
  j["restarts"] = c.restarts;
  j["samples"] = c.samples;
  j["tolerance"] = c.tolerance;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["stages"] = c.stages;
  j["out_dir"] = c.out_dir;
  j["report_path"] = c.report_path;
  j["csv_path"] = c.csv_path;
  return j;
}

inline RunConfig config_from_json(const Json& j) {
  expect_doc(j, "config");
  RunConfig c;
  if (j.contains("space")) c.space = spec_from_json(need(j, "space"));
  c.space_file = field_or(j, "space_file", std::string());
  c.eps = field_or(j, "eps", c.eps);
  if (j.contains("rho")) c.rho = rho_from_json(need(j, "rho"));
  if (j.contains("sweep")) {
    const Json& sw = need(j, "sweep");
    c.sweep.rmin = field_or(sw, "rmin", 0.0);
    c.sweep.rmax = field_or(sw, "rmax", 0.0);
    c.sweep.step = field_or(sw, "step", 0.0);
  }
  c.margin = field_or(j, "margin", c.margin);
  c.max_vertices = field_or(j, "max_vertices", c.max_vertices);
  c.restarts = field_or(j, "restarts", c.restarts);
  c.samples = field_or(j, "samples", c.samples);
  c.tolerance = field_or(j, "tolerance", c.tolerance);
  c.seed = field_or(j, "seed", c.seed);
  c.threads = field_or(j, "threads", c.threads);
  c.stages = field_or(j, "stages", std::vector<std::string>{});
  c.out_dir = field_or(j, "out_dir", std::string());
  c.report_path = field_or(j, "report_path", std::string());
  c.csv_path = field_or(j, "csv_path", std::string());
  return c;
}

inline void validate_config(const RunConfig& c) {
  if (!(c.eps > 0)) throw Error(Errc::usage, "config eps must be positive");
  if (!(c.tolerance > 0)) throw Error(Errc::usage, "config tolerance must be positive");
  if (c.samples <= 0) throw Error(Errc::usage, "config samples must be positive");
  if (c.restarts < 0) throw Error(Errc::usage, "config restarts must be nonnegative");
  if (c.threads < 0) throw Error(Errc::usage, "config threads must be nonnegative");
  if (c.max_vertices <= 0) throw Error(Errc::usage, "config max_vertices must be positive");
  for (const auto& st : c.stages) {
    bool known = false;
    for (const auto& k : known_stages()) known = known || st == k;
    if (!known) throw Error(Errc::usage, "unknown pipeline stage '" + st + "'");
  }
  if (!c.space_file.empty()) {
    std::ifstream probe(c.space_file);
    if (!probe) throw Error(Errc::io, "referenced space file does not exist: " + c.space_file);
  }
}

// a config that cannot be opened is an I/O failure, a config that opens but
// does not describe a run is the caller's mistake
inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open " + path);
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::usage, "malformed config: " + path);
  RunConfig c;
  try {
    c = config_from_json(j);
  } catch (const Error& e) {
    throw Error(Errc::usage, std::string("malformed config: ") + e.what());
  }
  validate_config(c);
  return c;
}

// resolves a relative output path into the default output directory
inline std::string resolve_out(const std::string& path, const std::string& out_dir) {
  if (path.empty() || out_dir.empty()) return path;
  if (path.front() == '/' || path.find('/') != std::string::npos) return path;
  return out_dir + "/" + path;
}

struct PipelineResult {
  Json report;
  bool partial = false;
  int exit_code = 0;
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

inline PipelineResult run_pipeline(const RunConfig& cfg) {
  validate_config(cfg);
  PipelineResult out;
  Json& rep = out.report;
  rep = Json{{"format_version", kFormatVersion}, {"kind", "report"}};
  rep["tool"] = std::string(kToolName) + " " + kToolVersion;
  rep["config"] = config_to_json(cfg);
  rep["stages"] = Json::array();
  rep["assertions"] = Json::array();
  rep["status"] = "complete";

  int threads = cfg.threads == 0 ? effective_threads(0) : cfg.threads;
  rep["threads_autodetected"] = cfg.threads == 0;

  // records the check, then aborts the run if it failed
  auto check = [&](const std::string& name, double lhs, double rhs, bool pass) {
    rep["assertions"].push_back(
        Json{{"name", name}, {"lhs", lhs}, {"rhs", rhs}, {"relation", "<="}, {"pass", pass}});
    if (!pass) throw Error(Errc::assertion, "assertion failed: " + name);
  };

  auto t_all = std::chrono::steady_clock::now();
  std::string current = "space";

  try {
    // --- construction ---------------------------------------------------
    auto t0 = std::chrono::steady_clock::now();
    FiniteMetricSpace s = cfg.space_file.empty()
                              ? FiniteMetricSpace::generate(cfg.space)
                              : space_from_json(load_json_file(cfg.space_file));
    Json st_space{{"name", "space"},
                  {"size", s.size()},
                  {"space_kind", to_string(s.spec().kind)},
                  {"basepoint", s.basepoint()},
                  {"truncation_radius", s.truncation_radius()},
                  {"seconds", detail::seconds_since(t0)}};
    rep["stages"].push_back(std::move(st_space));

    current = "net";
    t0 = std::chrono::steady_clock::now();
    PointedNet net = build_maximal_net(s, cfg.eps);
    NetCheck nc = verify_net(s, net);
    Json st_net{{"name", "net"},
                {"eps", net.eps},
                {"members", net.size()},
                {"separated", nc.separated},
                {"covering", nc.covering},
                {"seconds", detail::seconds_since(t0)}};
    rep["stages"].push_back(std::move(st_net));
    check("net_separation_and_coverage", double(!nc.separated) + double(!nc.covering), 0.0,
          nc.pass());

    current = "rips";
    t0 = std::chrono::steady_clock::now();
    RipsGraph g = build_rips(s, net);
    ValencyBoundReport vb = valency_bound_check(s, g);
    Connectivity conn = check_connectivity(g);
    Json st_rips{{"name", "rips"},
                 {"vertices", g.size()},
                 {"edges", g.edges.size()},
                 {"max_valency", g.max_valency},
                 {"valency_histogram", g.valency_histogram},
                 {"components", conn.components},
                 {"seconds", detail::seconds_since(t0)}};
    rep["stages"].push_back(std::move(st_rips));
    check("rips_valency_bound", double(vb.max_valency), vb.bound, vb.pass);

    // --- analyses -------------------------------------------------------
    const auto& stages = cfg.stages.empty() ? default_stages() : cfg.stages;
    for (const auto& stage : stages) {
      current = stage;
      t0 = std::chrono::steady_clock::now();
      Json st{{"name", stage}};

      if (stage == "partition") {
        PartitionOfUnity part(s, net);
        SplitMix64 rng(cfg.seed ^ 0x9a2ULL);
        int draws = std::min(cfg.samples, s.size());
        double worst = 0;
        for (int t = 0; t < draws; ++t) {
          int x = int(rng.below(std::uint64_t(s.size())));
          double total = 0;
          for (const auto& [pos, v] : part.phis(x)) total += v;
          worst = std::max(worst, std::abs(total - 1.0));
        }
        auto lip = verify_partition_lipschitz(part, cfg.samples, cfg.seed);
        st["sampled_points"] = draws;
        st["max_sum_deviation"] = worst;
        st["lipschitz_ratio"] = lip.max_ratio;
        st["lipschitz_bound"] = lip.bound;
        st["seconds"] = detail::seconds_since(t0);
        rep["stages"].push_back(st);
        check("partition_sums_to_one", worst, 1e-9, worst <= 1e-9);
        check("partition_lipschitz", lip.max_ratio, lip.bound, lip.pass);
      } else if (stage == "control") {
        RhoConstants at_eps = rho_constants(cfg.rho, cfg.eps);
        RhoConstants at_3eps = rho_constants(cfg.rho, 3.0 * cfg.eps);
        st["rho"] = rho_to_json(cfg.rho);
        st["L_eps"] = at_eps.L;
        st["M_eps"] = at_eps.M;
        st["L_3eps"] = at_3eps.L;
        st["M_3eps"] = at_3eps.M;
        st["seconds"] = detail::seconds_since(t0);
        rep["stages"].push_back(st);
        check("control_constants_valid", double(!at_eps.valid) + double(!at_3eps.valid), 0.0,
              at_eps.valid && at_3eps.valid);
      } else if (stage == "ponzi") {
        std::vector<double> radii;
        if (cfg.sweep.active())
          for (double r = cfg.sweep.rmin; r <= cfg.sweep.rmax + kTol; r += cfg.sweep.step)
            radii.push_back(r);
        else
          radii.push_back(0.5 * s.truncation_radius());
        auto rows = min_constant_sweep(s, g, radii, cfg.rho, cfg.tolerance);
        Json jrows = Json::array();
        const SweepRow* last_finite = nullptr;
        for (const auto& row : rows) {
          jrows.push_back(Json{{"R", row.R},
                               {"region_size", row.region_size},
                               {"K_star", row.finite ? Json(row.K_star) : Json()},
                               {"feasible_at_cap", row.finite},
                               {"margin", row.margin},
                               {"solves", row.solves},
                               {"runtime_seconds", row.seconds}});
          if (row.finite) last_finite = &row;
        }
        st["rows"] = std::move(jrows);
        st["seconds"] = detail::seconds_since(t0);
        rep["stages"].push_back(st);
        if (last_finite) {
          auto region = ball_region(s, g, last_finite->R);
          double K = last_finite->K_star * (1.0 + 10.0 * cfg.tolerance) + 1e-9;
          auto feas = ponzi_feasible(s, g, region.F, region.sinks, cfg.rho, K);
          check("sweep_cap_feasible", double(!feas.feasible), 0.0, feas.feasible);
          auto cr = verify_certificate(s, g, feas.cert);
          Json& back = rep["stages"].back();
          back["certificate"] = certificate_to_json(feas.cert, cfg.seed);
          back["certificate_measured_K"] = cr.measured_K;
          back["certificate_measured_P"] = cr.measured_P;
          back["seconds"] = detail::seconds_since(t0);
          check("certificate_verifies", cr.measured_K, K * (1.0 + kTol) + kTol, cr.pass);
        }
      } else if (stage == "iso") {
        IsoperimetricReport ir;
        try {
          ir = iso_constant_exact(s, g, cfg.rho, cfg.margin, cfg.max_vertices, threads);
        } catch (const Error& e) {
          if (e.code != Errc::cap) throw;
          ir = iso_constant_greedy(s, g, cfg.rho, cfg.margin, cfg.restarts, cfg.seed, threads);
        }
        st["method"] = ir.method;
        st["finite"] = ir.finite;
        st["value"] = ir.finite ? Json(ir.value) : Json();
        st["best_set"] = ir.best_set;
        st["safe_count"] = ir.safe_count;
        st["enumerated"] = ir.enumerated;
        st["seconds"] = detail::seconds_since(t0);
        rep["stages"].push_back(st);
      } else if (stage == "sobolev") {
        auto tr = transfer_check(s, g, cfg.rho, cfg.margin, cfg.max_vertices, cfg.restarts,
                                 cfg.seed, threads);
        auto side = [&](const SobolevReport& r) {
          return Json{{"weights", r.weights},
                      {"method", r.method},
                      {"finite", r.finite},
                      {"value", r.finite ? Json(r.value) : Json()},
                      {"best_set", r.best_set},
                      {"safe_count", r.safe_count},
                      {"samples", r.samples},
                      {"worst_sample", r.worst_sample},
                      {"samples_ok", r.samples_ok}};
        };
        st["counting"] = side(tr.counting_report);
        st["measure"] = side(tr.measure_report);
        st["f_hat"] = tr.f_hat;
        st["g_hat"] = tr.g_hat;
        st["factor"] = tr.factor;
        st["seconds"] = detail::seconds_since(t0);
        rep["stages"].push_back(st);
        check("sobolev_samples_counting", tr.counting_report.worst_sample,
              tr.counting_report.value * (1.0 + 1e-9) + 1e-12, tr.counting_report.samples_ok);
        check("sobolev_samples_measure", tr.measure_report.worst_sample,
              tr.measure_report.value * (1.0 + 1e-9) + 1e-12, tr.measure_report.samples_ok);
        check("transfer_counting_le", tr.counting, tr.factor * tr.measure, tr.counting_le);
        check("transfer_measure_le", tr.measure, tr.factor * tr.counting, tr.measure_le);
      } else if (stage == "delta") {
        long quads = std::max(20000L, long(cfg.samples));
        auto de = estimate_delta(s, quads, cfg.seed);
        st["delta"] = de.delta;
        st["exhaustive"] = de.exhaustive;
        st["quadruples"] = de.quadruples;
        st["witness"] = std::vector<int>(de.witness.begin(), de.witness.end());
        st["seconds"] = detail::seconds_since(t0);
        rep["stages"].push_back(st);
      } else if (stage == "crosscheck") {
        auto cc = iso_sobolev_crosscheck(s, g, cfg.rho, cfg.margin, cfg.max_vertices, threads);
        st["iso"] = cc.iso_report.finite ? Json(cc.iso) : Json();
        st["sobolev"] = cc.sobolev_report.finite ? Json(cc.sobolev) : Json();
        st["finite_agree"] = cc.finite_agree;
        st["lower_bound"] = cc.lower_bound;
        st["shift"] = cc.shift;
        st["valency"] = cc.valency;
        st["seconds"] = detail::seconds_since(t0);
        rep["stages"].push_back(st);
        check("crosscheck_finiteness", double(!cc.finite_agree), 0.0, cc.finite_agree);
        if (cc.iso_report.finite && cc.sobolev_report.finite) {
          check("crosscheck_lower", cc.lower_bound, cc.sobolev * (1.0 + 1e-9) + 1e-12,
                cc.sobolev_above);
          check("crosscheck_order", cc.sobolev, cc.iso * (1.0 + 1e-9) + 1e-12, cc.iso_above);
        }
      }
    }
  } catch (const Error& e) {
    rep["status"] = "partial";
    rep["error"] = Json{{"stage", current}, {"code", int(e.code)}, {"message", e.what()}};
    out.partial = true;
    out.exit_code = int(e.code);
  }

  rep["timing"] = Json{{"total_seconds", detail::seconds_since(t_all)}};
  return out;
}

// --- report emission --------------------------------------------------------

inline void validate_report(const Json& rep) {
  expect_doc(rep, "report");
  if (!need(rep, "tool").is_string()) throw Error(Errc::io, "report tool must be a string");
  if (!need(rep, "config").is_object())
    throw Error(Errc::io, "report config must be an object");
  std::string status = field<std::string>(rep, "status");
  if (status != "complete" && status != "partial")
    throw Error(Errc::io, "report status must be complete or partial");
  const Json& stages = need(rep, "stages");
  if (!stages.is_array()) throw Error(Errc::io, "report stages must be an array");
  for (const Json& st : stages) {
    if (!st.is_object() || !st.contains("name") || !st["name"].is_string() ||
        !st.contains("seconds") || !st["seconds"].is_number())
      throw Error(Errc::io, "report stage entries need a name and a duration");
  }
  const Json& asserts = need(rep, "assertions");
  if (!asserts.is_array()) throw Error(Errc::io, "report assertions must be an array");
  for (const Json& a : asserts) {
    if (!a.is_object() || !a.contains("name") || !a.contains("lhs") || !a["lhs"].is_number() ||
        !a.contains("rhs") || !a["rhs"].is_number() || !a.contains("pass") ||
        !a["pass"].is_boolean())
      throw Error(Errc::io, "report assertions need name, numeric lhs and rhs, and pass");
  }
}

inline constexpr const char* kSweepCsvHeader = "R,K_star,feasible_at_cap,runtime_seconds\n";

inline std::string sweep_rows_csv(const std::vector<SweepRow>& rows) {
  std::string csv = kSweepCsvHeader;
  for (const auto& r : rows) {
    csv += Json(r.R).dump();
    csv += ",";
    csv += r.finite ? Json(r.K_star).dump() : std::string("inf");
    csv += r.finite ? ",1," : ",0,";
    csv += Json(r.seconds).dump();
    csv += "\n";
  }
  return csv;
}

// CSV of the ponzi sweep: one row per R, header always present
inline std::string sweep_csv(const Json& rep) {
  std::string csv = kSweepCsvHeader;
  auto stages = rep.find("stages");
  if (stages == rep.end()) return csv;
  for (const Json& st : *stages) {
    if (field_or(st, "name", std::string()) != "ponzi") continue;
    auto rows = st.find("rows");
    if (rows == st.end()) continue;
    for (const Json& row : *rows) {
      csv += Json(row.at("R")).dump();
      csv += ",";
      csv += row.at("K_star").is_null() ? "inf" : row.at("K_star").dump();
      csv += ",";
      csv += row.at("feasible_at_cap").get<bool>() ? "1" : "0";
      csv += ",";
      csv += row.at("runtime_seconds").dump();
      csv += "\n";
    }
  }
  return csv;
}

inline void emit_report(const Json& rep, const std::string& json_path,
                        const std::string& csv_path) {
  validate_report(rep);
  if (!json_path.empty()) save_json_file(rep, json_path);
  if (!csv_path.empty()) save_text_file(csv_path, sweep_csv(rep));
}

// strips wall-time fields and the thread request, the only values allowed
// to differ between reruns of one config
inline void strip_volatile(Json& j) {
  if (j.is_object()) {
    j.erase("seconds");
    j.erase("runtime_seconds");
    j.erase("timing");
    j.erase("threads");
    j.erase("threads_autodetected");
    for (auto& [k, v] : j.items()) strip_volatile(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip_volatile(v);
  }
}

inline bool reports_match(Json a, Json b) {
  strip_volatile(a);
  strip_volatile(b);
  return a == b;
}

}  // namespace cch
