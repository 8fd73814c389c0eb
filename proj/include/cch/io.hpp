#pragma once

// JSON artifact formats: spaces, nets, graphs, flow certificates. Every
// document carries a format version, and each derived artifact embeds its
// upstream document plus a content hash, so a single file is always enough
// to reproduce the objects it describes. Loaders rebuild from first
// principles and cross-check against the stored data instead of trusting it.

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cch/chains.hpp"
#include "cch/common.hpp"
#include "cch/control.hpp"
#include "cch/net.hpp"
#include "cch/ponzi.hpp"
#include "cch/rips.hpp"
#include "cch/rng.hpp"
#include "cch/space.hpp"
#include "cch/version.hpp"

namespace cch {

using Json = nlohmann::json;

// --- files ----------------------------------------------------------------

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open " + path);
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::io, "malformed document: " + path);
  return j;
}

inline void save_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io, "cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw Error(Errc::io, "write failed: " + path);
}

inline void save_json_file(const Json& j, const std::string& path) {
  save_text_file(path, j.dump(2) + "\n");
}

inline std::string hash_hex(const Json& j) {
  std::ostringstream os;
  os << std::hex << fnv1a64(j.dump());
  return os.str();
}

// --- guarded field access -------------------------------------------------

inline const Json& need(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(Errc::io, std::string("document is missing field '") + key + "'");
  return *it;
}

template <typename T>
inline T field(const Json& j, const char* key) {
  try {
    return need(j, key).get<T>();
  } catch (const Json::exception&) {
    throw Error(Errc::io, std::string("field '") + key + "' has the wrong type");
  }
}

template <typename T>
inline T field_or(const Json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const Json::exception&) {
    throw Error(Errc::io, std::string("field '") + key + "' has the wrong type");
  }
}

inline void expect_doc(const Json& j, const char* kind) {
  if (!j.is_object()) throw Error(Errc::io, "document is not an object");
  int v = field<int>(j, "format_version");
  if (v != kFormatVersion)
    throw Error(Errc::io, "unsupported format version " + std::to_string(v));
  std::string k = field<std::string>(j, "kind");
  if (k != kind)
    throw Error(Errc::io, "expected a " + std::string(kind) + " document, found " + k);
}

// --- space specs and control functions ------------------------------------

inline Json spec_to_json(const SpaceSpec& sp) {
  return Json{{"kind", to_string(sp.kind)}, {"dims", sp.dims},
              {"radius", sp.radius},        {"rank", sp.rank},
              {"arms", sp.arms},            {"arm_samples", sp.arm_samples},
              {"rungs", sp.rungs},          {"count", sp.count},
              {"degree", sp.degree},        {"depth", sp.depth},
              {"box", sp.box},              {"max_radius", sp.max_radius},
              {"seed", sp.seed},            {"path", sp.path}};
}

inline SpaceSpec spec_from_json(const Json& j) {
  SpaceSpec sp;
  auto kind = space_kind_from(field<std::string>(j, "kind"));
  if (!kind) throw Error(Errc::io, "unknown space kind in document");
  sp.kind = *kind;
  sp.dims = field_or(j, "dims", sp.dims);
  sp.radius = field_or(j, "radius", sp.radius);
  sp.rank = field_or(j, "rank", sp.rank);
  sp.arms = field_or(j, "arms", sp.arms);
  sp.arm_samples = field_or(j, "arm_samples", sp.arm_samples);
  sp.rungs = field_or(j, "rungs", sp.rungs);
  sp.count = field_or(j, "count", sp.count);
  sp.degree = field_or(j, "degree", sp.degree);
  sp.depth = field_or(j, "depth", sp.depth);
  sp.box = field_or(j, "box", sp.box);
  sp.max_radius = field_or(j, "max_radius", sp.max_radius);
  sp.seed = field_or(j, "seed", sp.seed);
  sp.path = field_or(j, "path", sp.path);
  return sp;
}

inline Json rho_to_json(const ControlFunction& rho) {
  return Json{{"kind", to_string(rho.kind)}, {"C", rho.C}, {"p", rho.p}};
}

inline ControlFunction rho_from_json(const Json& j) {
  std::string kind = field<std::string>(j, "kind");
  double C = field_or(j, "C", 0.0), p = field_or(j, "p", 1.0);
  if (kind == "constant") return ControlFunction::constant();
  if (kind == "affine") return ControlFunction::affine(C);
  if (kind == "power") return ControlFunction::power(C, p);
  if (kind == "log") return ControlFunction::log(C);
  throw Error(Errc::io, "unknown control function kind " + kind);
}

// command-line form accepted by parse_rho, with round-trippable numbers
inline std::string rho_flag(const ControlFunction& rho) {
  auto num = [](double v) { return Json(v).dump(); };
  switch (rho.kind) {
    case RhoKind::Constant: return "constant";
    case RhoKind::Affine: return "affine:" + num(rho.C);
    case RhoKind::Power: return "power:" + num(rho.C) + "," + num(rho.p);
    case RhoKind::Log: return "log:" + num(rho.C);
  }
  return "constant";
}

// --- spaces ---------------------------------------------------------------

inline Json space_to_json(const FiniteMetricSpace& s) {
  Json doc{{"format_version", kFormatVersion}, {"kind", "space"}};
  doc["spec"] = spec_to_json(s.spec());
  doc["basepoint"] = s.basepoint();
  Json pts = Json::array();
  for (int i = 0; i < s.size(); ++i) {
    Json p{{"id", i}};
    if (!s.int_points().empty())
      p["coords"] = s.int_points()[i];
    else if (!s.real_points().empty())
      p["coords"] = s.real_points()[i];
    pts.push_back(std::move(p));
  }
  doc["points"] = std::move(pts);
  Json w = Json::array();
  for (int i = 0; i < s.size(); ++i) w.push_back(s.weight(i));
  doc["weights"] = std::move(w);
  if (s.backend() == FiniteMetricSpace::Backend::Matrix)
    doc["distance_matrix"] = s.matrix_lower();
  return doc;
}

inline FiniteMetricSpace space_from_json(const Json& doc) {
  expect_doc(doc, "space");
  SpaceSpec spec = spec_from_json(need(doc, "spec"));
  int basepoint = field<int>(doc, "basepoint");
  const Json& pts = need(doc, "points");
  if (!pts.is_array() || pts.empty()) throw Error(Errc::io, "space document has no points");
  int n = int(pts.size());

  FiniteMetricSpace s;
  if (doc.contains("distance_matrix")) {
    auto lower = field<std::vector<double>>(doc, "distance_matrix");
    s = FiniteMetricSpace::from_matrix(std::move(spec), n, std::move(lower), basepoint);
  } else {
    if (spec.kind == SpaceKind::File)
      throw Error(Errc::io, "file-backed space document lacks its distance matrix");
    s = FiniteMetricSpace::generate(spec);
    if (s.size() != n)
      throw Error(Errc::io, "regenerated space size does not match the document");
    if (s.basepoint() != basepoint) s.set_basepoint(basepoint);
  }
  auto w = field_or(doc, "weights", std::vector<double>{});
  bool unit = std::all_of(w.begin(), w.end(), [](double x) { return x == 1.0; });
  if (!w.empty() && !unit) s.set_weights(std::move(w));
  return s;
}

// --- nets -----------------------------------------------------------------

inline Json net_to_json(const FiniteMetricSpace& s, const PointedNet& net) {
  Json doc{{"format_version", kFormatVersion}, {"kind", "net"}};
  doc["space"] = space_to_json(s);
  doc["space_hash"] = hash_hex(doc["space"]);
  doc["eps"] = net.eps;
  std::vector<int> sorted = net.members;
  std::sort(sorted.begin(), sorted.end());
  doc["members"] = sorted;
  doc["insertion_order"] = net.members;
  return doc;
}

struct LoadedNet {
  FiniteMetricSpace s;
  PointedNet net;
};

inline LoadedNet net_from_json(const Json& doc) {
  expect_doc(doc, "net");
  const Json& space_doc = need(doc, "space");
  if (field<std::string>(doc, "space_hash") != hash_hex(space_doc))
    throw Error(Errc::io, "net document hash does not match its space");
  LoadedNet out{space_from_json(space_doc), {}};
  double eps = field<double>(doc, "eps");
  out.net = build_maximal_net(out.s, eps);
  auto order = field<std::vector<int>>(doc, "insertion_order");
  if (out.net.members != order)
    throw Error(Errc::io, "net members do not reproduce from the space document");
  return out;
}

// --- graphs ---------------------------------------------------------------

inline Json graph_to_json(const FiniteMetricSpace& s, const PointedNet& net, const RipsGraph& g) {
  Json doc{{"format_version", kFormatVersion}, {"kind", "graph"}};
  doc["net"] = net_to_json(s, net);
  doc["eps"] = g.eps;
  doc["adjacency"] = g.adj;
  doc["valency_histogram"] = g.valency_histogram;
  doc["edge_count"] = g.edges.size();
  return doc;
}

struct LoadedGraph {
  FiniteMetricSpace s;
  PointedNet net;
  RipsGraph g;
};

inline LoadedGraph graph_from_json(const Json& doc) {
  expect_doc(doc, "graph");
  LoadedNet up = net_from_json(need(doc, "net"));
  LoadedGraph out{std::move(up.s), std::move(up.net), {}};
  out.g = build_rips(out.s, out.net);
  if (out.g.adj != field<std::vector<std::vector<int>>>(doc, "adjacency"))
    throw Error(Errc::io, "graph adjacency does not reproduce from the net document");
  return out;
}

inline LoadedGraph load_graph_file(const std::string& path) {
  return graph_from_json(load_json_file(path));
}

// --- chains and certificates ----------------------------------------------

inline Json chain_to_json(const Chain1& c) {
  Json arr = Json::array();
  for (const auto& [uv, a] : c.coef) arr.push_back(Json::array({uv.first, uv.second, a}));
  return arr;
}

inline Chain1 chain_from_json(const Json& arr) {
  if (!arr.is_array()) throw Error(Errc::io, "chain must be an array of [u, v, coef] rows");
  Chain1 c;
  for (const auto& row : arr) {
    if (!row.is_array() || row.size() != 3)
      throw Error(Errc::io, "chain rows must be [u, v, coef]");
    try {
      c.add(row[0].get<int>(), row[1].get<int>(), row[2].get<double>());
    } catch (const Json::exception&) {
      throw Error(Errc::io, "chain rows must be [u, v, coef]");
    }
  }
  return c;
}

inline Json certificate_to_json(const PonziCertificate& cert, std::uint64_t seed = 0) {
  Json doc{{"format_version", kFormatVersion}, {"kind", "certificate"}};
  doc["F"] = cert.F_points;
  doc["sinks"] = cert.sink_points;
  doc["edges"] = chain_to_json(cert.chain);
  Json tails = Json::array();
  for (const auto& [anchor, t] : cert.tails)
    tails.push_back(Json{{"anchor", anchor}, {"edges", chain_to_json(t)}});
  doc["tails"] = std::move(tails);
  doc["K"] = cert.K;
  doc["P"] = cert.P;
  doc["rho"] = rho_to_json(cert.rho);
  doc["eps"] = cert.eps;
  doc["margin"] = cert.margin;
  doc["seed"] = seed;
  return doc;
}

inline PonziCertificate certificate_from_json(const Json& doc) {
  expect_doc(doc, "certificate");
  PonziCertificate cert;
  cert.F_points = field<std::vector<int>>(doc, "F");
  cert.sink_points = field<std::vector<int>>(doc, "sinks");
  cert.chain = chain_from_json(need(doc, "edges"));
  for (const Json& t : need(doc, "tails")) {
    cert.tails.push_back(
        {field<int>(t, "anchor"), chain_from_json(need(t, "edges"))});
  }
  cert.K = field<double>(doc, "K");
  cert.P = field<double>(doc, "P");
  cert.rho = rho_from_json(need(doc, "rho"));
  cert.eps = field<double>(doc, "eps");
  cert.margin = field<double>(doc, "margin");
  return cert;
}

}  // namespace cch
