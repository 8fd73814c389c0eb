// cch: build finite metric spaces, nets and Rips graphs, then measure
// isoperimetric, Sobolev, flow-scheme and hyperbolicity constants on them.
//
// Every subcommand reads and writes the self-contained JSON documents
// produced by its upstream subcommands, so a single file is always enough
// to continue a computation elsewhere. Reports go to stdout as JSON unless
// -o is given. Sweep CSVs have columns R,K_star,feasible_at_cap (1 or 0),
// runtime_seconds; edge lists have columns p,q,dist. Relative -o paths land
// in $CCH_OUT_DIR when that is set.
//
// Exit codes: 0 ok, 1 usage, 2 I/O, 3 enumeration cap, 4 failed check.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cch/io.hpp"
#include "cch/pipeline.hpp"

namespace {

using namespace cch;

std::string out_dir_env() {
  const char* v = std::getenv("CCH_OUT_DIR");
  return v == nullptr ? "" : v;
}

std::string outpath(const std::string& p) { return resolve_out(p, out_dir_env()); }

// JSON to stdout, or to -o with a one-line confirmation
void emit_doc(const Json& doc, const std::string& out, const std::string& what) {
  if (out.empty()) {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::string path = outpath(out);
  save_json_file(doc, path);
  std::cout << "wrote " << what << " to " << path << "\n";
}

void emit_text(const std::string& text, const std::string& out, const std::string& what) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::string path = outpath(out);
  save_text_file(path, text);
  std::cout << "wrote " << what << " to " << path << "\n";
}

// --- report serializers -----------------------------------------------------

Json iso_json(const IsoperimetricReport& r) {
  return Json{{"kind", "iso-report"},
              {"method", r.method},
              {"finite", r.finite},
              {"value", r.finite ? Json(r.value) : Json()},
              {"best_set", r.best_set},
              {"boundary", r.boundary},
              {"margin", r.margin},
              {"safe_count", r.safe_count},
              {"enumerated", r.enumerated},
              {"rho", r.rho_desc}};
}

Json sobolev_json(const SobolevReport& r) {
  return Json{{"kind", "sobolev-report"},
              {"weights", r.weights},
              {"method", r.method},
              {"finite", r.finite},
              {"value", r.finite ? Json(r.value) : Json()},
              {"best_set", r.best_set},
              {"eta", r.eta},
              {"margin", r.margin},
              {"safe_count", r.safe_count},
              {"enumerated", r.enumerated},
              {"samples", r.samples},
              {"worst_sample", r.worst_sample},
              {"samples_ok", r.samples_ok},
              {"f_hat", r.f_hat},
              {"g_hat", r.g_hat},
              {"rho", r.rho_desc}};
}

Json cert_report_json(const CertReport& r) {
  Json j{{"kind", "certificate-check"},
         {"pass", r.pass},
         {"boundary_ok", r.boundary_ok},
         {"control_ok", r.control_ok},
         {"propagation_ok", r.propagation_ok},
         {"support_ok", r.support_ok},
         {"boundary_error", r.boundary_error},
         {"measured_K", r.measured_K},
         {"measured_P", r.measured_P}};
  j["boundary_witness"] = r.boundary_witness ? Json(*r.boundary_witness) : Json();
  j["support_witness"] = r.support_witness ? Json(*r.support_witness) : Json();
  return j;
}

Json rho_constants_json(const RhoConstants& rc) {
  return Json{{"L", rc.L},
              {"M", rc.M},
              {"L_closed_form", rc.L_closed_form},
              {"M_closed_form", rc.M_closed_form},
              {"valid", rc.valid},
              {"near_tight", rc.near_tight},
              {"worst_L_ratio", rc.worst_L_ratio},
              {"worst_M_ratio", rc.worst_M_ratio}};
}

// --- shared flag groups -----------------------------------------------------

void add_space_options(CLI::App* cmd, SpaceSpec& sp, std::string& kind) {
  cmd->add_option("--kind", kind,
                  "space kind: zn, free-group, heisenberg-z, heisenberg-r-cloud, "
                  "hyperbolic-disk, fan, ladder, tree, file");
  cmd->add_option("--dims", sp.dims, "zn dimensions");
  cmd->add_option("--radius", sp.radius, "word/ball radius for zn, free-group, heisenberg-z");
  cmd->add_option("--rank", sp.rank, "free group rank");
  cmd->add_option("--arms", sp.arms, "fan arm count");
  cmd->add_option("--arm-samples", sp.arm_samples, "fan points per arm");
  cmd->add_option("--rungs", sp.rungs, "ladder rungs");
  cmd->add_option("--count", sp.count, "point count for cloud kinds");
  cmd->add_option("--degree", sp.degree, "tree degree");
  cmd->add_option("--depth", sp.depth, "tree depth");
  cmd->add_option("--box", sp.box, "heisenberg cloud half side");
  cmd->add_option("--max-radius", sp.max_radius, "hyperbolic disk radius");
  cmd->add_option("--gen-seed", sp.seed, "generator seed for cloud kinds");
  cmd->add_option("--path", sp.path, "distance matrix file for kind 'file'");
}

SpaceSpec resolve_spec(SpaceSpec sp, const std::string& kind) {
  auto k = space_kind_from(kind);
  if (!k) throw Error(Errc::usage, "unknown space kind '" + kind + "'");
  sp.kind = *k;
  return sp;
}

FiniteMetricSpace load_space_file(const std::string& path) {
  return space_from_json(load_json_file(path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coarse-geometric constants on finite metric spaces"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);
  int exit_code = 0;

  // --- space ---------------------------------------------------------------
  auto* space_cmd = app.add_subcommand("space", "generate and inspect space documents");
  space_cmd->require_subcommand(1);

  auto* space_gen = space_cmd->add_subcommand("gen", "generate a space document");
  {
    static SpaceSpec sp;
    static std::string kind = "zn";
    static std::string out;
    add_space_options(space_gen, sp, kind);
    space_gen->add_option("-o,--out", out, "output file (stdout when omitted)");
    space_gen->callback([&]() {
      FiniteMetricSpace s = FiniteMetricSpace::generate(resolve_spec(sp, kind));
      emit_doc(space_to_json(s), out, "space");
    });
  }

  auto* space_info = space_cmd->add_subcommand("info", "summarize a space document");
  {
    static std::string file;
    space_info->add_option("space-file", file, "space document")->required();
    space_info->callback([&]() {
      FiniteMetricSpace s = load_space_file(file);
      double wmin = s.weight(0), wmax = s.weight(0);
      for (int i = 1; i < s.size(); ++i) {
        wmin = std::min(wmin, s.weight(i));
        wmax = std::max(wmax, s.weight(i));
      }
      std::cout << Json{{"kind", "space-info"},
                        {"space_kind", to_string(s.spec().kind)},
                        {"size", s.size()},
                        {"basepoint", s.basepoint()},
                        {"truncation_radius", s.truncation_radius()},
                        {"matrix_backed", s.backend() == FiniteMetricSpace::Backend::Matrix},
                        {"weight_min", wmin},
                        {"weight_max", wmax}}
                       .dump(2)
                << "\n";
    });
  }

  // --- net -----------------------------------------------------------------
  auto* net_cmd = app.add_subcommand("net", "maximal separated nets");
  net_cmd->require_subcommand(1);

  auto* net_build = net_cmd->add_subcommand("build", "build a maximal eps net");
  {
    static double eps = 1.0;
    static std::string file, out;
    net_build->add_option("--eps", eps, "net scale")->required();
    net_build->add_option("space-file", file, "space document")->required();
    net_build->add_option("-o,--out", out, "output file (stdout when omitted)");
    net_build->callback([&]() {
      FiniteMetricSpace s = load_space_file(file);
      PointedNet net = build_maximal_net(s, eps);
      NetCheck nc = verify_net(s, net);
      if (!nc.pass()) throw Error(Errc::assertion, "built net fails separation or coverage");
      emit_doc(net_to_json(s, net), out, "net");
    });
  }

  // --- rips ----------------------------------------------------------------
  auto* rips_cmd = app.add_subcommand("rips", "Rips graphs on nets");
  rips_cmd->require_subcommand(1);

  auto* rips_build = rips_cmd->add_subcommand("build", "build the Rips graph of a net");
  {
    static std::string file, out;
    rips_build->add_option("net-file", file, "net document")->required();
    rips_build->add_option("-o,--out", out, "output file (stdout when omitted)");
    rips_build->callback([&]() {
      LoadedNet ln = net_from_json(load_json_file(file));
      RipsGraph g = build_rips(ln.s, ln.net);
      emit_doc(graph_to_json(ln.s, ln.net, g), out, "graph");
    });
  }

  auto* rips_edges = rips_cmd->add_subcommand("edges", "export the edge list as CSV p,q,dist");
  {
    static std::string file, out;
    rips_edges->add_option("graph-file", file, "graph document")->required();
    rips_edges->add_option("-o,--out", out, "output file (stdout when omitted)");
    rips_edges->callback([&]() {
      LoadedGraph lg = load_graph_file(file);
      std::string csv = "p,q,dist\n";
      for (const auto& [u, v] : lg.g.edges) {
        int p = lg.net.members[std::size_t(u)], q = lg.net.members[std::size_t(v)];
        csv += std::to_string(p) + "," + std::to_string(q) + "," + Json(lg.s.dist(p, q)).dump();
        csv += "\n";
      }
      emit_text(csv, out, "edge list");
    });
  }

  // --- partition -----------------------------------------------------------
  auto* part_cmd = app.add_subcommand("partition", "subordinate partitions of unity");
  part_cmd->require_subcommand(1);

  auto* part_check = part_cmd->add_subcommand("check", "measure partition constants vs bounds");
  {
    static double eps = 0.0;
    static int samples = 2000;
    static std::uint64_t seed = 0;
    static std::string space_file, net_file, out;
    part_check->add_option("--eps", eps, "expected net scale (cross-checked against the net)");
    part_check->add_option("--samples", samples, "sampled points and pairs");
    part_check->add_option("--seed", seed, "sampling seed");
    part_check->add_option("space-file", space_file, "space document")->required();
    part_check->add_option("net-file", net_file, "net document")->required();
    part_check->add_option("-o,--out", out, "output file (stdout when omitted)");
    part_check->callback([&]() {
      Json space_doc = load_json_file(space_file);
      Json net_doc = load_json_file(net_file);
      if (field<std::string>(net_doc, "space_hash") != hash_hex(space_doc))
        throw Error(Errc::io, "net file was built from a different space");
      LoadedNet ln = net_from_json(net_doc);
      if (eps > 0 && std::abs(eps - ln.net.eps) > kTol)
        throw Error(Errc::usage, "net file was built at a different eps");

      PartitionOfUnity part(ln.s, ln.net);
      SplitMix64 rng(seed ^ 0x9a2ULL);
      int draws = std::min(samples, ln.s.size());
      double worst = 0;
      for (int t = 0; t < draws; ++t) {
        int x = int(rng.below(std::uint64_t(ln.s.size())));
        double total = 0;
        for (const auto& [pos, v] : part.phis(x)) total += v;
        worst = std::max(worst, std::abs(total - 1.0));
      }
      auto lip = verify_partition_lipschitz(part, samples, seed);
      bool pass = worst <= 1e-9 && lip.pass;
      emit_doc(Json{{"kind", "partition-report"},
                    {"eps", ln.net.eps},
                    {"covering_number", lip.net_count},
                    {"sampled_points", draws},
                    {"max_sum_deviation", worst},
                    {"sum_tolerance", 1e-9},
                    {"lipschitz_ratio", lip.max_ratio},
                    {"lipschitz_bound", lip.bound},
                    {"pairs_checked", lip.pairs_checked},
                    {"pass", pass}},
               out, "partition report");
      if (!pass) throw Error(Errc::assertion, "partition constants exceed their bounds");
    });
  }

  // --- control ---------------------------------------------------------------
  auto* control_cmd = app.add_subcommand("control", "control functions and growth fits");
  control_cmd->require_subcommand(1);

  auto* control_constants = control_cmd->add_subcommand(
      "constants", "shift and scale comparison constants of a control function");
  {
    static std::string rho_text = "constant";
    static double eps = 1.0;
    control_constants->add_option("--rho", rho_text, "constant | affine:C | power:C,p | log:C");
    control_constants->add_option("--eps", eps, "scale");
    control_constants->callback([&]() {
      ControlFunction rho = parse_rho(rho_text);
      std::cout << Json{{"kind", "control-constants"},
                        {"rho", rho_flag(rho)},
                        {"eps", eps},
                        {"at_eps", rho_constants_json(rho_constants(rho, eps))},
                        {"at_3eps", rho_constants_json(rho_constants(rho, 3.0 * eps))}}
                       .dump(2)
                << "\n";
    });
  }

  auto* control_fit =
      control_cmd->add_subcommand("fit", "classify the growth of a K*(R) table");
  {
    static std::string file, out;
    control_fit->add_option("table-file", file, "CSV with columns R,K (sweep CSVs work)")
        ->required();
    control_fit->add_option("-o,--out", out, "output file (stdout when omitted)");
    control_fit->callback([&]() {
      std::ifstream in(file);
      if (!in) throw Error(Errc::io, "cannot open " + file);
      std::vector<GrowthPoint> table;
      int skipped = 0;
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',')) continue;
        try {
          double R = std::stod(a), K = std::stod(b);
          if (std::isfinite(R) && std::isfinite(K))
            table.push_back({R, K});
          else
            ++skipped;
        } catch (const std::exception&) {
          ++skipped;  // header or non-numeric row
        }
      }
      GrowthFit fit = classify_growth(table);
      Json models = Json::array();
      for (const auto& m : fit.models)
        models.push_back(Json{
            {"shape", to_string(m.kind)}, {"a", m.a}, {"b", m.b}, {"p", m.p}, {"sse", m.sse}});
      emit_doc(Json{{"kind", "growth-fit"},
                    {"chosen", to_string(fit.chosen)},
                    {"a", fit.a},
                    {"b", fit.b},
                    {"p", fit.p},
                    {"r2", fit.r2},
                    {"rows", table.size()},
                    {"skipped_rows", skipped},
                    {"models", models}},
               out, "growth fit");
    });
  }

  // --- ponzi -----------------------------------------------------------------
  auto* ponzi_cmd = app.add_subcommand("ponzi", "controlled flow schemes");
  ponzi_cmd->require_subcommand(1);

  auto* ponzi_sweep =
      ponzi_cmd->add_subcommand("sweep", "minimal feasible K* over a range of ball radii");
  {
    static std::string rho_text = "constant";
    static double rmin = 0, rmax = 0, step = 0, tol = 1e-3;
    static std::string file, out;
    ponzi_sweep->add_option("--rho", rho_text, "constant | affine:C | power:C,p | log:C");
    ponzi_sweep->add_option("--rmin", rmin, "first radius")->required();
    ponzi_sweep->add_option("--rmax", rmax, "last radius")->required();
    ponzi_sweep->add_option("--step", step, "radius step")->required();
    ponzi_sweep->add_option("--tol", tol, "bisection tolerance for K*");
    ponzi_sweep->add_option("graph-file", file, "graph document")->required();
    ponzi_sweep->add_option("-o,--out", out, "CSV output (stdout when omitted)");
    ponzi_sweep->callback([&]() {
      if (!(step > 0) || rmax < rmin - kTol)
        throw Error(Errc::usage, "sweep needs rmin <= rmax and a positive step");
      LoadedGraph lg = load_graph_file(file);
      std::vector<double> radii;
      for (double r = rmin; r <= rmax + kTol; r += step) radii.push_back(r);
      auto rows = min_constant_sweep(lg.s, lg.g, radii, parse_rho(rho_text), tol);
      emit_text(sweep_rows_csv(rows), out, "sweep");
    });
  }

  auto* ponzi_certify =
      ponzi_cmd->add_subcommand("certify", "produce a flow certificate for one ball");
  {
    static std::string rho_text = "constant";
    static double radius = 0, cap = 0, tol = 1e-3;
    static std::uint64_t seed = 0;
    static std::string file, out;
    ponzi_certify->add_option("--rho", rho_text, "constant | affine:C | power:C,p | log:C");
    ponzi_certify->add_option("--radius", radius, "ball radius for the scheme region")
        ->required();
    ponzi_certify->add_option("--cap", cap, "control constant K (0: minimal feasible plus slack)");
    ponzi_certify->add_option("--tol", tol, "bisection tolerance when --cap is 0");
    ponzi_certify->add_option("--seed", seed, "seed recorded in the certificate");
    ponzi_certify->add_option("graph-file", file, "graph document")->required();
    ponzi_certify->add_option("-o,--out", out, "output file (stdout when omitted)");
    ponzi_certify->callback([&]() {
      LoadedGraph lg = load_graph_file(file);
      ControlFunction rho = parse_rho(rho_text);
      auto region = ball_region(lg.s, lg.g, radius);
      double K = cap;
      if (K <= 0) {
        MinConstant mc = min_control_constant(lg.s, lg.g, region.F, region.sinks, rho, tol);
        if (!mc.finite)
          throw Error(Errc::assertion, "no feasible scheme at any cap for this region");
        K = mc.K_star * (1.0 + 10.0 * tol) + 1e-9;
      }
      auto feas = ponzi_feasible(lg.s, lg.g, region.F, region.sinks, rho, K);
      if (!feas.feasible) throw Error(Errc::assertion, "region is infeasible at the given cap");
      emit_doc(certificate_to_json(feas.cert, seed), out, "certificate");
    });
  }

  auto* ponzi_verify = ponzi_cmd->add_subcommand("verify", "check a certificate against a graph");
  {
    static std::string cert_file, graph_file, out;
    ponzi_verify->add_option("cert-file", cert_file, "certificate document")->required();
    ponzi_verify->add_option("graph-file", graph_file, "graph document")->required();
    ponzi_verify->add_option("-o,--out", out, "output file (stdout when omitted)");
    ponzi_verify->callback([&]() {
      PonziCertificate cert = certificate_from_json(load_json_file(cert_file));
      LoadedGraph lg = load_graph_file(graph_file);
      CertReport cr = verify_certificate(lg.s, lg.g, cert);
      emit_doc(cert_report_json(cr), out, "certificate check");
      if (!cr.pass) throw Error(Errc::assertion, "certificate rejected");
    });
  }

  // --- set and function constants -------------------------------------------
  auto* iso_cmd = app.add_subcommand("iso", "isoperimetric constant of the safe region");
  {
    static std::string rho_text = "constant", mode = "exact";
    static double margin = -1.0;
    static int max_vertices = 20, restarts = 8, threads = 1;
    static std::uint64_t seed = 1;
    static std::string file, out;
    iso_cmd->add_option("--rho", rho_text, "constant | affine:C | power:C,p | log:C");
    iso_cmd->add_option("--mode", mode, "exact | greedy")
        ->check(CLI::IsMember({"exact", "greedy"}));
    iso_cmd->add_option("--margin", margin, "safe margin (default: one graph hop)");
    iso_cmd->add_option("--max-vertices", max_vertices, "exhaustive search cap");
    iso_cmd->add_option("--restarts", restarts, "greedy random restarts");
    iso_cmd->add_option("--seed", seed, "greedy seed");
    iso_cmd->add_option("--threads", threads, "worker threads");
    iso_cmd->add_option("graph-file", file, "graph document")->required();
    iso_cmd->add_option("-o,--out", out, "output file (stdout when omitted)");
    iso_cmd->callback([&]() {
      LoadedGraph lg = load_graph_file(file);
      ControlFunction rho = parse_rho(rho_text);
      IsoperimetricReport r =
          mode == "exact"
              ? iso_constant_exact(lg.s, lg.g, rho, margin, max_vertices, threads)
              : iso_constant_greedy(lg.s, lg.g, rho, margin, restarts, seed, threads);
      emit_doc(iso_json(r), out, "iso report");
    });
  }

  auto* sob_cmd = app.add_subcommand("sobolev", "Sobolev constant over safe test functions");
  {
    static std::string rho_text = "constant", weights = "counting";
    static double margin = -1.0;
    static int max_vertices = 20, restarts = 8, threads = 1, samples = 10000;
    static std::uint64_t seed = 1;
    static bool exact_only = false;
    static std::string file, out;
    sob_cmd->add_option("--rho", rho_text, "constant | affine:C | power:C,p | log:C");
    sob_cmd->add_option("--weights", weights, "counting | measure")
        ->check(CLI::IsMember({"counting", "measure"}));
    sob_cmd->add_option("--margin", margin, "safe margin (default: one graph hop)");
    sob_cmd->add_option("--max-vertices", max_vertices, "exhaustive search cap");
    sob_cmd->add_option("--restarts", restarts, "greedy random restarts");
    sob_cmd->add_option("--samples", samples, "random test functions sampled");
    sob_cmd->add_option("--seed", seed, "search and sampling seed");
    sob_cmd->add_option("--threads", threads, "worker threads");
    sob_cmd->add_flag("--exact-only", exact_only, "refuse the greedy fallback");
    sob_cmd->add_option("graph-file", file, "graph document")->required();
    sob_cmd->add_option("-o,--out", out, "output file (stdout when omitted)");
    sob_cmd->callback([&]() {
      LoadedGraph lg = load_graph_file(file);
      SobolevWeights w = weights == "counting" ? SobolevWeights::Counting : SobolevWeights::Measure;
      SobolevReport r = sobolev_constant(lg.s, lg.g, parse_rho(rho_text), w, margin, max_vertices,
                                         !exact_only, restarts, seed, threads, samples);
      emit_doc(sobolev_json(r), out, "sobolev report");
    });
  }

  auto* cross_cmd =
      app.add_subcommand("crosscheck", "set and function constants bracket each other");
  {
    static std::string rho_text = "constant";
    static double margin = -1.0;
    static int max_vertices = 20, threads = 1;
    static std::string file, out;
    cross_cmd->add_option("--rho", rho_text, "constant | affine:C | power:C,p | log:C");
    cross_cmd->add_option("--margin", margin, "safe margin (default: one graph hop)");
    cross_cmd->add_option("--max-vertices", max_vertices, "exhaustive search cap");
    cross_cmd->add_option("--threads", threads, "worker threads");
    cross_cmd->add_option("graph-file", file, "graph document")->required();
    cross_cmd->add_option("-o,--out", out, "output file (stdout when omitted)");
    cross_cmd->callback([&]() {
      LoadedGraph lg = load_graph_file(file);
      auto cc = iso_sobolev_crosscheck(lg.s, lg.g, parse_rho(rho_text), margin, max_vertices,
                                       threads);
      emit_doc(Json{{"kind", "crosscheck-report"},
                    {"pass", cc.pass},
                    {"finite_agree", cc.finite_agree},
                    {"iso", cc.iso_report.finite ? Json(cc.iso) : Json()},
                    {"sobolev", cc.sobolev_report.finite ? Json(cc.sobolev) : Json()},
                    {"lower_bound", cc.lower_bound},
                    {"shift", cc.shift},
                    {"valency", cc.valency},
                    {"iso_report", iso_json(cc.iso_report)},
                    {"sobolev_report", sobolev_json(cc.sobolev_report)}},
               out, "crosscheck report");
      if (!cc.pass) throw Error(Errc::assertion, "bracketing inequalities failed");
    });
  }

  // --- delta ----------------------------------------------------------------
  auto* delta_cmd = app.add_subcommand("delta", "four-point hyperbolicity defect");
  {
    static long quadruples = 20000;
    static std::uint64_t seed = 0;
    static std::string file, out;
    delta_cmd->add_option("--quadruples", quadruples, "random quadruples sampled");
    delta_cmd->add_option("--seed", seed, "sampling seed");
    delta_cmd->add_option("space-file", file, "space document")->required();
    delta_cmd->add_option("-o,--out", out, "output file (stdout when omitted)");
    delta_cmd->callback([&]() {
      FiniteMetricSpace s = load_space_file(file);
      DeltaEstimate de = estimate_delta(s, quadruples, seed);
      emit_doc(Json{{"kind", "delta-report"},
                    {"delta", de.delta},
                    {"exhaustive", de.exhaustive},
                    {"quadruples", de.quadruples},
                    {"witness", de.witness}},
               out, "delta report");
    });
  }

  // --- pipeline --------------------------------------------------------------
  auto* pipe_cmd = app.add_subcommand("pipeline", "space -> net -> rips -> analyses -> report");
  {
    static std::string config_file;
    static SpaceSpec sp;
    static std::string kind = "zn";
    static std::string space_file, rho_text, stages_text, report_out, csv_out;
    static double eps = 0, margin = 0, tol = 0, rmin = 0, rmax = 0, step = 0;
    static int max_vertices = 0, restarts = 0, samples = 0, threads = -1;
    static std::uint64_t seed = 0;
    pipe_cmd->add_option("config-file", config_file, "config document (flags override it)");
    add_space_options(pipe_cmd, sp, kind);
    pipe_cmd->add_option("--space-file", space_file, "load the space instead of generating");
    pipe_cmd->add_option("--eps", eps, "net scale");
    pipe_cmd->add_option("--rho", rho_text, "constant | affine:C | power:C,p | log:C");
    pipe_cmd->add_option("--stages", stages_text,
                         "comma list from: partition, control, ponzi, iso, sobolev, delta, "
                         "crosscheck");
    pipe_cmd->add_option("--margin", margin, "safe margin for set searches");
    pipe_cmd->add_option("--max-vertices", max_vertices, "exhaustive search cap");
    pipe_cmd->add_option("--restarts", restarts, "greedy restarts");
    pipe_cmd->add_option("--samples", samples, "sampling effort");
    pipe_cmd->add_option("--tol", tol, "bisection tolerance for K*");
    pipe_cmd->add_option("--rmin", rmin, "sweep start radius");
    pipe_cmd->add_option("--rmax", rmax, "sweep end radius");
    pipe_cmd->add_option("--step", step, "sweep radius step");
    pipe_cmd->add_option("--seed", seed, "master seed");
    pipe_cmd->add_option("--threads", threads, "worker threads (0: autodetect, logged)");
    pipe_cmd->add_option("-o,--report", report_out, "report JSON path (stdout when omitted)");
    pipe_cmd->add_option("--csv", csv_out, "sweep CSV path");
    pipe_cmd->callback([&]() {
      RunConfig cfg;
      if (!config_file.empty()) cfg = load_config(config_file);
      bool kind_given = pipe_cmd->count("--kind") > 0;
      if (kind_given || config_file.empty()) cfg.space = resolve_spec(sp, kind);
      if (pipe_cmd->count("--dims")) cfg.space.dims = sp.dims;
      if (pipe_cmd->count("--radius")) cfg.space.radius = sp.radius;
      if (pipe_cmd->count("--rank")) cfg.space.rank = sp.rank;
      if (pipe_cmd->count("--arms")) cfg.space.arms = sp.arms;
      if (pipe_cmd->count("--arm-samples")) cfg.space.arm_samples = sp.arm_samples;
      if (pipe_cmd->count("--rungs")) cfg.space.rungs = sp.rungs;
      if (pipe_cmd->count("--count")) cfg.space.count = sp.count;
      if (pipe_cmd->count("--degree")) cfg.space.degree = sp.degree;
      if (pipe_cmd->count("--depth")) cfg.space.depth = sp.depth;
      if (pipe_cmd->count("--box")) cfg.space.box = sp.box;
      if (pipe_cmd->count("--max-radius")) cfg.space.max_radius = sp.max_radius;
      if (pipe_cmd->count("--gen-seed")) cfg.space.seed = sp.seed;
      if (pipe_cmd->count("--path")) cfg.space.path = sp.path;
      if (pipe_cmd->count("--space-file")) cfg.space_file = space_file;
      if (pipe_cmd->count("--eps")) cfg.eps = eps;
      if (pipe_cmd->count("--rho")) cfg.rho = parse_rho(rho_text);
      if (pipe_cmd->count("--margin")) cfg.margin = margin;
      if (pipe_cmd->count("--max-vertices")) cfg.max_vertices = max_vertices;
      if (pipe_cmd->count("--restarts")) cfg.restarts = restarts;
      if (pipe_cmd->count("--samples")) cfg.samples = samples;
      if (pipe_cmd->count("--tol")) cfg.tolerance = tol;
      if (pipe_cmd->count("--rmin")) cfg.sweep.rmin = rmin;
      if (pipe_cmd->count("--rmax")) cfg.sweep.rmax = rmax;
      if (pipe_cmd->count("--step")) cfg.sweep.step = step;
      if (pipe_cmd->count("--seed")) cfg.seed = seed;
      if (pipe_cmd->count("--threads")) cfg.threads = threads;
      if (pipe_cmd->count("--stages")) {
        cfg.stages.clear();
        std::istringstream ss(stages_text);
        std::string st;
        while (std::getline(ss, st, ','))
          if (!st.empty()) cfg.stages.push_back(st);
      }
      if (pipe_cmd->count("-o")) cfg.report_path = report_out;
      if (pipe_cmd->count("--csv")) cfg.csv_path = csv_out;
      if (cfg.out_dir.empty()) cfg.out_dir = out_dir_env();
      validate_config(cfg);

      PipelineResult res = run_pipeline(cfg);
      std::string jpath = resolve_out(cfg.report_path, cfg.out_dir);
      std::string cpath = resolve_out(cfg.csv_path, cfg.out_dir);
      emit_report(res.report, jpath, cpath);
      if (jpath.empty())
        std::cout << res.report.dump(2) << "\n";
      else
        std::cout << "wrote report to " << jpath << "\n";
      if (!cpath.empty()) std::cout << "wrote sweep to " << cpath << "\n";
      if (res.partial) {
        const Json& err = res.report["error"];
        std::cerr << "pipeline stopped in stage " << err["stage"] << ": "
                  << err["message"].get<std::string>() << "\n";
      }
      exit_code = res.exit_code;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : int(Errc::usage);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return int(e.code);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return int(Errc::usage);
  }
  return exit_code;
}
