#pragma once

// Model files (JSON) and machine-readable suite reports.
//
// Model schema "hodgewp-model/1":
//   name, type ("nilpotent_orbit" | "picard_fuchs"), role ("vhs" | "classifier_fixture"),
//   weight, dim, Q (row-major), samples (list of points), notes,
//   orbit:  N (list of matrices), A ({"i,j,...": vector}), radius
//   PF:     pf {order, coeffs, r_max}, basis (optional)
//   optional gauge ({"i,j,...": scalar}) and defaults {mu, ray {r0, factor, count, angle}}.
// A complex entry is a number or a [re, im] pair; a point is a list of m entries
// (a bare entry when m = 1).

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hodgewp/error.hpp"
#include "hodgewp/report.hpp"
#include "hodgewp/vhs_models.hpp"

namespace hodgewp {

inline constexpr const char* kModelSchema = "hodgewp-model/1";
inline constexpr const char* kSuiteSchema = "hodgewp-suite/1";

using json = nlohmann::json;

struct RayDefaults {
  std::optional<double> r0, factor, angle;
  std::optional<int> count;
};

struct ModelFile {
  VhsModel model;
  std::string path;
  std::string notes;
  std::optional<double> mu;
  RayDefaults ray;
  std::optional<GaugeFactor> gauge;
};

namespace io {

inline std::string where(const std::string& ptr) { return ptr.empty() ? "/" : ptr; }

[[noreturn]] inline void fail(const std::string& ptr, const std::string& msg) {
  throw Error(ErrorKind::Input, where(ptr) + ": " + msg);
}

inline const json& field(const json& j, const std::string& key, const std::string& ptr) {
  if (!j.is_object()) fail(ptr, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(ptr, "missing field '" + key + "'");
  return *it;
}

inline double real_of(const json& j, const std::string& ptr) {
  if (!j.is_number()) fail(ptr, "expected a number");
  return j.get<double>();
}

inline int int_of(const json& j, const std::string& ptr) {
  if (!j.is_number_integer()) fail(ptr, "expected an integer");
  return j.get<int>();
}

inline cplx complex_of(const json& j, const std::string& ptr) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail(ptr, "expected a number or an [re, im] pair");
}

inline Vec vector_of(const json& j, int dim, const std::string& ptr) {
  if (!j.is_array()) fail(ptr, "expected an array");
  if (dim >= 0 && static_cast<int>(j.size()) != dim)
    fail(ptr, "expected " + std::to_string(dim) + " entries, got " + std::to_string(j.size()));
  Vec v(j.size());
  for (size_t k = 0; k < j.size(); ++k) v(k) = complex_of(j[k], ptr + "/" + std::to_string(k));
  return v;
}

inline Mat matrix_of(const json& j, int rows, int cols, const std::string& ptr) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    fail(ptr, "expected " + std::to_string(rows) + " rows");
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) m.row(r) = vector_of(j[r], cols, ptr + "/" + std::to_string(r)).transpose();
  return m;
}

inline std::vector<int> multi_index_of(const std::string& key, int m, const std::string& ptr) {
  std::vector<int> a;
  std::stringstream ss(key);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size() || v < 0) throw std::invalid_argument(tok);
      a.push_back(v);
    } catch (const std::exception&) {
      fail(ptr, "bad multi-index '" + key + "'");
    }
  }
  if (static_cast<int>(a.size()) != m)
    fail(ptr, "multi-index '" + key + "' has " + std::to_string(a.size()) + " entries, expected " + std::to_string(m));
  return a;
}

inline std::string multi_index_key(const std::vector<int>& a) {
  std::string s;
  for (size_t k = 0; k < a.size(); ++k) s += (k ? "," : "") + std::to_string(a[k]);
  return s;
}

inline json complex_json(cplx z) {
  if (z.imag() == 0) return z.real();
  return json::array({z.real(), z.imag()});
}

inline json vector_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(complex_json(v(k)));
  return a;
}

inline json matrix_json(const Mat& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(vector_json(m.row(r).transpose()));
  return a;
}

// 1-based line and column of a byte offset.
inline std::pair<size_t, size_t> line_col(const std::string& text, size_t byte) {
  size_t line = 1, col = 1;
  for (size_t k = 0; k < std::min(byte, text.size()); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace io

inline json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // byte points one past the offending character
    auto [line, col] = io::line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string msg = e.what();
    auto p = msg.find(": ", msg.find("parse error"));
    std::string detail = p == std::string::npos ? msg : msg.substr(p + 2);
    throw Error(ErrorKind::Input, source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + detail);
  }
}

inline ModelFile model_from_json(const json& j) {
  using namespace io;
  if (!j.is_object()) fail("", "model file must be a JSON object");
  if (j.contains("schema") && j["schema"] != kModelSchema)
    fail("/schema", "unsupported schema " + j["schema"].dump() + ", expected \"" + kModelSchema + "\"");
  const std::string type = field(j, "type", "").is_string() ? j["type"].get<std::string>() : "";
  const int n = int_of(field(j, "weight", ""), "/weight");
  const int d = int_of(field(j, "dim", ""), "/dim");
  if (n < 1) fail("/weight", "weight must be >= 1");
  if (d < 2) fail("/dim", "dim must be >= 2");

  ModelFile out;
  std::optional<Mat> q;
  if (j.contains("Q")) q = matrix_of(j["Q"], d, d, "/Q");

  if (type == "nilpotent_orbit") {
    if (!q) fail("", "missing field 'Q'");
    NilpotentOrbitModel orb;
    orb.q = PolarizationForm(*q, n);
    const json& nj = field(j, "N", "");
    if (!nj.is_array() || nj.empty()) fail("/N", "expected a non-empty list of matrices");
    for (size_t k = 0; k < nj.size(); ++k) orb.n.push_back(matrix_of(nj[k], d, d, "/N/" + std::to_string(k)));
    const int m = orb.m();
    const json& aj = field(j, "A", "");
    if (!aj.is_object() || aj.empty()) fail("/A", "expected an object of multi-index -> vector");
    for (auto it = aj.begin(); it != aj.end(); ++it)
      orb.a[multi_index_of(it.key(), m, "/A")] = vector_of(it.value(), d, "/A/" + it.key());
    if (j.contains("radius")) orb.radius = real_of(j["radius"], "/radius");
    out.model = VhsModel(std::move(orb));
  } else if (type == "picard_fuchs") {
    const json& pj = field(j, "pf", "");
    PicardFuchsModel pf;
    pf.order = int_of(field(pj, "order", "/pf"), "/pf/order");
    if (pf.order != d) fail("/pf/order", "order must equal dim");
    if (pf.order != n + 1) fail("/pf/order", "order must equal weight + 1");
    const json& cj = field(pj, "coeffs", "/pf");
    if (!cj.is_array() || static_cast<int>(cj.size()) != pf.order + 1)
      fail("/pf/coeffs", "expected order + 1 coefficient polynomials");
    for (size_t k = 0; k < cj.size(); ++k) {
      Vec c = vector_of(cj[k], -1, "/pf/coeffs/" + std::to_string(k));
      pf.coeffs.emplace_back(c.data(), c.data() + c.size());
    }
    pf.r_max = real_of(field(pj, "r_max", "/pf"), "/pf/r_max");
    if (!(pf.r_max > 0)) fail("/pf/r_max", "must be positive");
    if (j.contains("basis")) pf.basis = matrix_of(j["basis"], d, d, "/basis");
    pf.q = q;
    pf.name = j.value("name", "");
    out.model = VhsModel(std::move(pf));
  } else {
    fail("/type", "expected \"nilpotent_orbit\" or \"picard_fuchs\"");
  }

  VhsModel& mdl = out.model;
  mdl.name = j.value("name", std::string("unnamed"));
  mdl.role = j.value("role", std::string("vhs"));
  if (mdl.role != "vhs" && mdl.role != "classifier_fixture")
    fail("/role", "expected \"vhs\" or \"classifier_fixture\"");
  out.notes = j.value("notes", std::string());
  if (j.contains("samples")) {
    const json& sj = j["samples"];
    if (!sj.is_array()) fail("/samples", "expected a list of points");
    for (size_t k = 0; k < sj.size(); ++k) {
      std::string ptr = "/samples/" + std::to_string(k);
      Vec z = mdl.m() == 1 && !(sj[k].is_array() && sj[k].size() == 1) ? Vec::Constant(1, complex_of(sj[k], ptr))
                                                                          : vector_of(sj[k], mdl.m(), ptr);
      mdl.samples.emplace_back(z.data(), z.data() + z.size());
    }
  }
  if (j.contains("gauge")) {
    GaugeFactor g;
    for (auto it = j["gauge"].begin(); it != j["gauge"].end(); ++it)
      g.terms[multi_index_of(it.key(), mdl.m(), "/gauge")] = complex_of(it.value(), "/gauge/" + it.key());
    out.gauge = g;
    mdl = mdl.with_gauge(g);
  }
  if (j.contains("defaults")) {
    const json& dj = j["defaults"];
    if (dj.contains("mu")) out.mu = real_of(dj["mu"], "/defaults/mu");
    if (dj.contains("ray")) {
      const json& rj = dj["ray"];
      if (rj.contains("r0")) out.ray.r0 = real_of(rj["r0"], "/defaults/ray/r0");
      if (rj.contains("factor")) out.ray.factor = real_of(rj["factor"], "/defaults/ray/factor");
      if (rj.contains("angle")) out.ray.angle = real_of(rj["angle"], "/defaults/ray/angle");
      if (rj.contains("count")) out.ray.count = int_of(rj["count"], "/defaults/ray/count");
    }
  }
  return out;
}

inline ModelFile parse_model(const std::string& text, const std::string& source = "<string>") {
  return model_from_json(parse_json_text(text, source));
}

inline ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Input, "cannot open model file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  ModelFile f = parse_model(ss.str(), path);
  f.path = path;
  return f;
}

inline json model_to_json(const ModelFile& f) {
  using namespace io;
  const VhsModel& m = f.model;
  json j;
  j["schema"] = kModelSchema;
  j["name"] = m.name;
  j["role"] = m.role;
  j["weight"] = m.weight();
  j["dim"] = m.dim();
  if (m.is_orbit()) {
    const auto& o = m.orbit();
    j["type"] = "nilpotent_orbit";
    j["Q"] = matrix_json(o.q.matrix());
    j["N"] = json::array();
    for (const auto& nn : o.n) j["N"].push_back(matrix_json(nn));
    j["A"] = json::object();
    for (const auto& [idx, v] : o.a) j["A"][multi_index_key(idx)] = vector_json(v);
    j["radius"] = o.radius;
  } else {
    const auto& pf = m.picard_fuchs();
    j["type"] = "picard_fuchs";
    json c = json::array();
    for (const auto& poly : pf.coeffs) {
      json p = json::array();
      for (cplx x : poly) p.push_back(complex_json(x));
      c.push_back(p);
    }
    j["pf"] = {{"order", pf.order}, {"coeffs", c}, {"r_max", pf.r_max}};
    if (pf.basis) j["basis"] = matrix_json(*pf.basis);
    if (pf.q) j["Q"] = matrix_json(*pf.q);
  }
  json s = json::array();
  for (const auto& z : m.samples) {
    json p = json::array();
    for (cplx x : z) p.push_back(complex_json(x));
    s.push_back(p);
  }
  j["samples"] = s;
  if (f.gauge) {
    j["gauge"] = json::object();
    for (const auto& [idx, c] : f.gauge->terms) j["gauge"][multi_index_key(idx)] = complex_json(c);
  }
  json defaults = json::object();
  if (f.mu) defaults["mu"] = *f.mu;
  json ray = json::object();
  if (f.ray.r0) ray["r0"] = *f.ray.r0;
  if (f.ray.factor) ray["factor"] = *f.ray.factor;
  if (f.ray.count) ray["count"] = *f.ray.count;
  if (f.ray.angle) ray["angle"] = *f.ray.angle;
  if (!ray.empty()) defaults["ray"] = ray;
  if (!defaults.empty()) j["defaults"] = defaults;
  if (!f.notes.empty()) j["notes"] = f.notes;
  return j;
}

inline void save_model(const ModelFile& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Input, "cannot write " + path);
  out << model_to_json(f).dump(2) << "\n";
}

// Non-finite residuals are written as null.
inline json report_to_json(const ValidationReport& rep) {
  json j;
  j["schema"] = kSuiteSchema;
  j["subject"] = rep.subject;
  j["pass"] = rep.passed();
  j["checks"] = json::array();
  for (const auto& c : rep.checks) {
    json k;
    k["name"] = c.name;
    k["ref"] = c.ref;
    k["residual"] = std::isfinite(c.residual) ? json(c.residual) : json(nullptr);
    k["tolerance"] = std::isfinite(c.tolerance) ? json(c.tolerance) : json(nullptr);
    k["pass"] = c.pass;
    if (!c.note.empty()) k["note"] = c.note;
    j["checks"].push_back(k);
  }
  return j;
}

}  // namespace hodgewp
