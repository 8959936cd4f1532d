#pragma once

// Command-line front end.  Exit codes: 0 all predicates pass, 1 a predicate
// failed, 2 input or domain error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hodgewp/dim1_asymptotics.hpp"
#include "hodgewp/model_io.hpp"
#include "hodgewp/plot.hpp"
#include "hodgewp/sweep.hpp"
#include "hodgewp/verification.hpp"

namespace hodgewp::cli {

enum Exit { kPass = 0, kPredicateFailed = 1, kInputError = 2 };

inline constexpr const char* kCsvColumns = R"(CSV columns (sweep):
  index, z<k>_re, z<k>_im      point coordinates
  r, log_inv_r                 max |z_k| and log(1/r)
  --wp:    wp_g<ij>_re/_im     WP metric in z-coordinates (upper triangle)
           wp_hsc              holomorphic sectional curvature along z_1 (usual sign)
           wp_ric_lo/_hi       eigenvalue range of Ric relative to g
           wp_sign_flip        1 where wp_hsc changed sign since the previous row
           wp_positive_ok      g positive definite
  --ph:    ph_mu, ph_h<ij>_re/_im, ph_hsc, ph_scalar, ph_positive_ok
           (n = 4, mu = m+2) ph_min_bisectional, ph_sectional_excess, ph_final_ratio,
           ph_bisectional_ok, ph_sectional_ok, ph_final_ok
  --hodge: hodge_h<ij>_re/_im, hodge_g_over_h, hodge_identity_residual, hodge_identity_ok
  --dim1:  dim1_lambda, dim1_abs_f111, dim1_abs_f1111, dim1_a, dim1_h, dim1_rho,
           dim1_rho_formula, dim1_formula_ok
Columns ending in _ok are predicates (1 = pass); the exit code is 0 iff all are 1.)";

// "0.01", "1e-5-2e-6i", "-3i", "i"
inline cplx parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw Error(ErrorKind::Input, "empty number");
  auto real = [&](const std::string& t) {
    size_t used = 0;
    double v = 0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Input, "bad number '" + text + "'");
    }
    if (used != t.size()) throw Error(ErrorKind::Input, "bad number '" + text + "'");
    return v;
  };
  if (s.back() != 'i') return {real(s), 0.0};
  s.pop_back();
  size_t split = std::string::npos;
  for (size_t k = 1; k < s.size(); ++k)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') split = k;
  std::string re = split == std::string::npos ? "" : s.substr(0, split);
  std::string im = split == std::string::npos ? s : s.substr(split);
  double iv = im.empty() || im == "+" ? 1.0 : im == "-" ? -1.0 : real(im);
  return {re.empty() ? 0.0 : real(re), iv};
}

// "z1,z2;z1,z2;..."
inline std::vector<Point> parse_points(const std::string& text) {
  std::vector<Point> pts;
  std::stringstream ss(text);
  std::string p;
  while (std::getline(ss, p, ';')) {
    if (p.empty()) continue;
    Point z;
    std::stringstream cs(p);
    std::string c;
    while (std::getline(cs, c, ',')) z.push_back(parse_complex(c));
    pts.push_back(z);
  }
  return pts;
}

// key=value tokens, e.g. "r0=1e-5 factor=0.5".
inline std::map<std::string, std::string> parse_kv(const std::vector<std::string>& tokens,
                                                   const std::vector<std::string>& allowed, const std::string& what) {
  std::map<std::string, std::string> kv;
  for (const auto& tok : tokens) {
    std::stringstream ss(tok);
    std::string part;
    while (std::getline(ss, part, ' ')) {
      if (part.empty()) continue;
      auto eq = part.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::Input, what + ": expected key=value, got '" + part + "'");
      std::string k = part.substr(0, eq);
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
        std::string a;
        for (const auto& x : allowed) a += (a.empty() ? "" : ", ") + x;
        throw Error(ErrorKind::Input, what + ": unknown key '" + k + "' (allowed: " + a + ")");
      }
      kv[k] = part.substr(eq + 1);
    }
  }
  return kv;
}

inline double kv_double(const std::map<std::string, std::string>& kv, const std::string& k, double fallback) {
  auto it = kv.find(k);
  if (it == kv.end()) return fallback;
  cplx v = parse_complex(it->second);
  if (v.imag() != 0) throw Error(ErrorKind::Input, k + " must be real");
  return v.real();
}

inline int kv_int(const std::map<std::string, std::string>& kv, const std::string& k, int fallback) {
  auto it = kv.find(k);
  if (it == kv.end()) return fallback;
  try {
    size_t used = 0;
    int v = std::stoi(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(k);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Input, k + " must be an integer");
  }
}

// Built-in ray: r0 = min(e^{-2 pi}, domain/2), factor 0.5, count 10, angle 0; model defaults override.
inline SweepSpec default_ray(const ModelFile& f) {
  SweepSpec s;
  s.kind = SweepSpec::Ray;
  s.r0 = f.ray.r0.value_or(std::min(std::exp(-2 * kPi), 0.5 * f.model.domain_radius()));
  s.factor = f.ray.factor.value_or(0.5);
  s.count = f.ray.count.value_or(10);
  s.angle = f.ray.angle.value_or(0.0);
  return s;
}

inline std::vector<Point> default_points(const ModelFile& f, int count = 5) {
  if (!f.model.samples.empty()) return f.model.samples;
  SweepSpec s = default_ray(f);
  s.count = count;
  return sweep_points(s, f.model);
}

inline void print_report(std::ostream& os, const ValidationReport& r) {
  os << r.subject << ": " << (r.passed() ? "PASS" : "FAIL") << "\n";
  for (const auto& c : r.checks) {
    os << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.name << "  residual " << detail::fmt(c.residual)
       << "  tol " << detail::fmt(c.tolerance);
    if (!c.note.empty()) os << "  (" << c.note << ")";
    os << "\n";
  }
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Input, "cannot write " + path);
  out << text;
}

inline json matrix_out(const Mat& m) { return io::matrix_json(m); }

// -------------------------------------------------------------------------

inline int cmd_validate(const ModelFile& f, const std::optional<std::string>& points, std::ostream& out) {
  const VhsModel& m = f.model;
  ValidationReport all;
  all.subject = "validate " + m.name;
  all.append(validate_polarization(m.polarization()), "Q: ");
  if (m.is_orbit()) all.append(validate_orbit_model(m.orbit()), "orbit: ");
  if (m.role == "classifier_fixture") {
    all.add_flag("wp-geometry checklist", "axioms 1, 2, 4", true, "skipped: classifier fixture, not a VHS");
  } else {
    std::vector<Point> pts = points ? parse_points(*points) : default_points(f);
    all.append(wp_geometry_checklist(m, pts), "");
  }
  print_report(out, all);
  return all.passed() ? kPass : kPredicateFailed;
}

struct SweepArgs {
  std::vector<std::string> ray, grid;
  std::optional<std::string> points;
  bool wp = false, hodge = false, dim1 = false;
  std::optional<std::string> ph;
  std::optional<std::string> out;
  std::vector<std::string> svg;
  int threads = 1;
  int pairs = 50;
  std::uint64_t seed = kDefaultSeed;
};

inline SweepSpec sweep_spec(const ModelFile& f, const SweepArgs& a, bool ph_given) {
  SweepSpec s = default_ray(f);
  int kinds = (!a.ray.empty()) + (!a.grid.empty()) + (a.points.has_value());
  if (kinds > 1) throw Error(ErrorKind::Input, "--ray, --grid and --points are mutually exclusive");
  if (!a.grid.empty()) {
    auto kv = parse_kv(a.grid, {"x0", "x1", "y0", "y1", "nx", "ny", "n"}, "--grid");
    s.kind = SweepSpec::Grid;
    s.x0 = kv_double(kv, "x0", 0);
    s.x1 = kv_double(kv, "x1", 0);
    s.y0 = kv_double(kv, "y0", 0);
    s.y1 = kv_double(kv, "y1", 0);
    int n = kv_int(kv, "n", 5);
    s.nx = kv_int(kv, "nx", n);
    s.ny = kv_int(kv, "ny", n);
  } else if (a.points) {
    s.kind = SweepSpec::List;
    s.points = parse_points(*a.points);
  } else {
    auto kv = parse_kv(a.ray, {"r0", "factor", "count", "angle"}, "--ray");
    s.r0 = kv_double(kv, "r0", s.r0);
    s.factor = kv_double(kv, "factor", s.factor);
    s.count = kv_int(kv, "count", s.count);
    s.angle = kv_double(kv, "angle", s.angle);
  }
  s.q.wp = a.wp || !(ph_given || a.hodge || a.dim1);
  s.q.ph = ph_given;
  s.q.hodge = a.hodge;
  s.q.dim1 = a.dim1;
  if (ph_given && a.ph && !a.ph->empty()) {
    cplx mu = parse_complex(*a.ph);
    s.q.mu = mu.real();
  } else if (f.mu) {
    s.q.mu = f.mu;
  }
  s.q.pairs = a.pairs;
  s.q.seed = a.seed;
  s.threads = a.threads > 0 ? a.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return s;
}

inline int cmd_sweep(const ModelFile& f, const SweepArgs& a, bool ph_given, std::ostream& out, std::ostream& err) {
  SweepSpec spec = sweep_spec(f, a, ph_given);
  SweepResult res = run_sweep(f.model, spec);
  std::string csv = csv_text(res.table);
  if (a.out) write_text(*a.out, csv);
  else out << csv;
  for (const auto& s : a.svg) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Input, "--svg expects column=path, got '" + s + "'");
    PlotOptions po;
    if (spec.kind == SweepSpec::Grid) po.x_column = "z1_re";
    std::string col = s.substr(0, eq);
    po.log_y = col.find("_g") != std::string::npos || col.find("_h1") != std::string::npos || col == "dim1_lambda";
    emit_plot(res.table, col, s.substr(eq + 1), po);
  }
  for (int j : res.sign_flips)
    err << "sign change of wp_hsc between rows " << j - 1 << " and " << j << "\n";
  for (const auto& p : res.failed_predicates) err << "predicate failed: " << p << "\n";
  return res.passed() ? kPass : kPredicateFailed;
}

inline int cmd_curvature(const ModelFile& f, const std::string& at, std::optional<double> mu, std::ostream& out) {
  std::vector<Point> pts = parse_points(at);
  if (pts.size() != 1) throw Error(ErrorKind::Input, "--at expects exactly one point");
  SweepSpec s;
  s.kind = SweepSpec::List;
  s.points = pts;
  sweep_points(s, f.model);
  GeometryOptions go;
  go.mu = mu ? mu : f.mu;
  go.dim1 = f.model.weight() == 3 && f.model.m() == 1;
  PointGeometry pg = compute_point(f.model, pts[0], go);
  const int m = pg.m();
  json j;
  j["model"] = f.model.name;
  j["z"] = io::vector_json(Eigen::Map<const Vec>(pts[0].data(), m));
  j["curvature_convention"] = kCurvatureConvention;
  j["wp"] = {{"g", matrix_out(pg.g.in_z_coordinates())},
             {"ricci", matrix_out(pg.ric.in_z_coordinates())},
             {"holomorphic_sectional", pg.wp_sectional()}};
  bool ok = pg.g.min_eigenvalue() > 0;
  if (pg.h) {
    json ph = {{"mu", pg.mu}, {"h", matrix_out(pg.h->in_z_coordinates())}};
    ok = ok && pg.h->min_eigenvalue() > 0;
    if (pg.rt) {
      ph["holomorphic_sectional"] = *pg.ph_sectional();
      const int n = f.model.weight();
      if (detail::fourfold_applies(n, m, pg.mu)) {
        FourfoldPointBound b = fourfold_point_bound(*pg.rt, *pg.h, 50, kDefaultSeed);
        ph["min_bisectional"] = b.min_bisectional;
        ph["sectional_excess"] = b.sectional_excess;
        ph["final_ratio"] = b.final_ratio;
        ok = ok && b.min_bisectional >= -1e-12 && b.sectional_excess <= 1e-12 && b.final_ratio <= 1;
      }
    }
    j["partial_hodge"] = ph;
  }
  if (pg.hodge) j["hodge"] = {{"h", matrix_out(pg.hodge->in_z_coordinates())}};
  if (pg.yukawa) {
    const auto& y = *pg.yukawa;
    j["dim1"] = {{"lambda", y.lambda}, {"f111", io::complex_json(y.f111)}, {"f1111", io::complex_json(y.f1111)},
                 {"A", y.a}, {"h", y.h}, {"rt", y.rt}, {"rho", y.rho}, {"rho_formula", rho_two_fraction(y.x, y.y)}};
  }
  j["pass"] = ok;
  out << j.dump(2) << "\n";
  return ok ? kPass : kPredicateFailed;
}

struct AsymptoticsArgs {
  std::vector<double> us{20, 50, 100, 200};
  std::vector<double> radii;
  double mu = 0.5;
  int s = 0;
  std::optional<double> scan_r0;
  int scan_count = 40;
};

inline json asymptotics_json(const ModelFile& f, const AsymptoticsArgs& a, bool& ok) {
  const VhsModel& m = f.model;
  if (m.m() != 1) throw Error(ErrorKind::Domain, "asymptotics need m = 1");
  BoundaryModel1D b = boundary_model(m);
  json j;
  j["model"] = m.name;
  j["variable"] = b.variable;
  j["delta"] = b.delta;
  WeightPolynomial w = weight_polynomial(b);
  j["weight_polynomial"] = {{"degree", w.degree}, {"coeffs", w.coeffs}, {"imag_residual", w.imag_residual}};
  CompletenessResult c = completeness_test(b);
  j["completeness"] = {{"complete", c.complete}, {"ratio", c.ratio}};
  Classification cl = boundary_classifier(b);
  const char* kinds[] = {"case1", "case2", "inconclusive"};
  j["classifier"] = {{"kind", kinds[cl.kind]}, {"k", cl.k}, {"l", cl.l}, {"degenerate", cl.degenerate},
                     {"no_pure_terms", cl.no_pure_terms}, {"rotation_residual", cl.rotation_residual},
                     {"leading", cl.leading}, {"note", cl.note}};
  ok = true;
  if (c.complete && m.role == "vhs") {
    LeadingResult lr = wp_leading(m, b, a.us);
    j["leading"] = {{"l", lr.l}, {"limit", lr.limit}, {"u", lr.u}, {"scaled", lr.scaled},
                    {"deviation", lr.deviation}, {"monotone", lr.monotone}};
  }
  std::vector<double> radii = a.radii;
  if (radii.empty())
    for (int k = 0; k < 10; ++k) radii.push_back(b.delta / 4 * std::pow(0.5, k + 1));
  json tr = json::array();
  for (double r : radii) {
    TruncationResult t = truncation_bound(b, a.mu, a.s, r);
    tr.push_back({{"r", r}, {"k0", t.k0}, {"l0", t.l0}, {"C", t.c}, {"bound", t.bound},
                  {"empirical", t.empirical}, {"pass", t.pass}});
    ok = ok && t.pass;
  }
  j["truncation"] = {{"mu", a.mu}, {"s", a.s}, {"points", tr}};
  if (m.role == "vhs") {
    double r0 = a.scan_r0.value_or(std::min(std::exp(-2 * kPi), 0.5 * m.domain_radius()));
    BoundednessScan sc = curvature_boundedness_scan(m, b, r0, a.scan_count);
    if (sc.refused) {
      j["boundedness"] = {{"refused", true}, {"reason", sc.reason}};
    } else {
      j["boundedness"] = {{"refused", false}, {"sup_abs_rho", sc.sup_abs}, {"trend", sc.trend}, {"pass", sc.pass}};
      ok = ok && sc.pass;
    }
  }
  j["pass"] = ok;
  return j;
}

struct VerifyArgs {
  std::string suite = "all";
  std::optional<std::string> points;
  std::string fault = "none";
  bool no_fd = false;
  std::optional<std::string> out;
};

inline Fault parse_fault(const std::string& s) {
  for (Fault f : {Fault::None, Fault::FlippedQ, Fault::DroppedK, Fault::DroppedGamma, Fault::DroppedCurvatureTerm})
    if (s == to_string(f)) return f;
  throw Error(ErrorKind::Input, "unknown fault '" + s +
                                    "' (none, flipped-Q, dropped-K, dropped-Gamma, dropped-curvature-term)");
}

inline json verify_json(const ModelFile& f, const VerifyArgs& a, bool& ok) {
  const VhsModel& m = f.model;
  if (m.role != "vhs") throw Error(ErrorKind::Domain, "verification needs a VHS model (role is " + m.role + ")");
  const std::vector<std::string> suites{"lemmas", "ph-curvature", "hodge", "fourfold", "gauge"};
  if (a.suite != "all" && std::find(suites.begin(), suites.end(), a.suite) == suites.end())
    throw Error(ErrorKind::Input, "unknown suite '" + a.suite + "' (all, lemmas, ph-curvature, hodge, fourfold, gauge)");
  auto want = [&](const std::string& s) { return a.suite == "all" || a.suite == s; };
  std::vector<Point> pts = a.points ? parse_points(*a.points) : default_points(f);
  json j;
  j["schema"] = kSuiteSchema;
  j["model"] = m.name;
  j["fault"] = a.fault;
  j["points"] = json::array();
  for (const auto& z : pts) j["points"].push_back(io::vector_json(Eigen::Map<const Vec>(z.data(), z.size())));
  j["reports"] = json::array();
  ok = true;
  auto add = [&](const ValidationReport& r) {
    j["reports"].push_back(report_to_json(r));
    ok = ok && r.passed();
  };
  if (want("lemmas")) {
    SuiteOptions so;
    so.fault = parse_fault(a.fault);
    so.with_fd = !a.no_fd;
    add(lemma_suite(m, pts, so));
  }
  if (want("ph-curvature") && m.weight() >= 3 && !a.no_fd) add(ph_curvature_report(m, pts, f.mu));
  if (want("hodge")) add(hodge_identity_report(m, pts));
  if (want("fourfold") && m.weight() == 4) {
    GeometryOptions go;
    go.mu = m.m() + 2.0;
    go.hodge = false;
    std::vector<FourfoldPointBound> b;
    for (size_t k = 0; k < pts.size(); ++k) {
      PointGeometry pg = compute_point(m, pts[k], go);
      b.push_back(fourfold_point_bound(*pg.rt, *pg.h, 50, kDefaultSeed + k));
    }
    add(fourfold_report(b, kDefaultSeed));
  }
  if (want("gauge")) add(gauge_report(m, pts));
  j["pass"] = ok;
  return j;
}

inline int cmd_report(const ModelFile& f, const std::string& dir, std::ostream& out) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const VhsModel& m = f.model;
  const std::string base = (fs::path(dir) / m.name).string();
  std::ostringstream summary;
  summary << "# " << m.name << "\n\n";
  bool ok = true;

  std::ostringstream val;
  ok = cmd_validate(f, std::nullopt, val) == kPass && ok;
  write_text(base + "_validate.txt", val.str());
  summary << "- validate: " << (val.str().find(": PASS") != std::string::npos ? "pass" : "FAIL") << "\n";

  if (m.role == "vhs") {
    SweepSpec s = default_ray(f);
    s.q.ph = true;
    s.q.hodge = true;
    s.q.dim1 = m.weight() == 3 && m.m() == 1;
    if (f.mu) s.q.mu = f.mu;
    SweepResult sw = run_sweep(m, s);
    write_text(base + "_sweep.csv", csv_text(sw.table));
    for (const char* col : {"wp_hsc", "ph_hsc", "dim1_rho"})
      if (sw.table.column(col) >= 0) emit_plot(sw.table, col, base + "_" + col + ".svg");
    summary << "- sweep: " << sw.table.rows.size() << " rows, " << sw.sign_flips.size()
            << " sign changes of wp_hsc, predicates " << (sw.passed() ? "pass" : "FAIL") << "\n";
    ok = ok && sw.passed();

    VerifyArgs va;
    bool vok = true;
    json vj = verify_json(f, va, vok);
    write_text(base + "_suite.json", vj.dump(2) + "\n");
    summary << "- verify: " << (vok ? "pass" : "FAIL") << "\n";
    ok = ok && vok;
  }
  if (m.m() == 1) {
    bool aok = true;
    json aj = asymptotics_json(f, AsymptoticsArgs{}, aok);
    write_text(base + "_asymptotics.json", aj.dump(2) + "\n");
    summary << "- asymptotics: classifier " << aj["classifier"]["kind"].get<std::string>() << ", weight degree "
            << aj["weight_polynomial"]["degree"].get<int>() << ", " << (aok ? "pass" : "FAIL") << "\n";
    ok = ok && aok;
  }
  write_text(base + "_summary.md", summary.str());
  out << summary.str();
  return ok ? kPass : kPredicateFailed;
}

// -------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"hodgewp: WP, partial Hodge and Hodge metrics of variations of Hodge structure"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hodgewp 0.1.0");

  std::string model_path;
  std::optional<std::string> points;

  auto* validate = app.add_subcommand("validate", "check Q, the nilpotent data and the WP-geometry axioms");
  validate->add_option("model", model_path, "model JSON file")->required();
  validate->add_option("--points", points, "points 'z1,z2;...' (default: model samples)");

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "metrics and curvature along a ray, a grid or a point list");
  sweep->add_option("model", model_path, "model JSON file")->required();
  sweep->add_option("--ray", sa.ray, "r0= factor= count= angle=")->expected(1, 4);
  sweep->add_option("--grid", sa.grid, "x0= x1= y0= y1= nx= ny= (or n=)")->expected(1, 7);
  sweep->add_option("--points", sa.points, "explicit points 'z1,z2;...'");
  sweep->add_flag("--wp", sa.wp, "WP metric and curvature (default)");
  auto* ph_opt = sweep->add_option("--ph", sa.ph, "partial Hodge metric, optional mu (default m+3, m+2 for n = 4)")
                     ->expected(0, 1);
  sweep->add_flag("--hodge", sa.hodge, "Hodge metric by Hom norms");
  sweep->add_flag("--dim1", sa.dim1, "Yukawa chain and scalar curvature (n = 3, m = 1)");
  sweep->add_option("--out", sa.out, "CSV path (default stdout)");
  sweep->add_option("--svg", sa.svg, "column=path, repeatable");
  sweep->add_option("--threads", sa.threads, "worker threads (0 = all cores)");
  sweep->add_option("--pairs", sa.pairs, "random (X, Y) pairs per point for the fourfold bound");
  sweep->add_option("--seed", sa.seed, "seed for the (X, Y) pairs");
  sweep->footer(kCsvColumns);

  std::string at;
  std::optional<double> cmu;
  auto* curv = app.add_subcommand("curvature", "all tensors at one point, as JSON");
  curv->add_option("model", model_path, "model JSON file")->required();
  curv->add_option("--at", at, "point 'z1,z2'")->required();
  curv->add_option("--mu", cmu, "partial Hodge parameter");

  AsymptoticsArgs aa;
  auto* asym = app.add_subcommand("asymptotics", "boundary analysis at z = 0 (m = 1), as JSON");
  asym->add_option("model", model_path, "model JSON file")->required();
  asym->add_option("--u", aa.us, "values of log(1/r) for the leading-term check");
  asym->add_option("--radii", aa.radii, "radii for the truncation bound (default 10 in (0, delta/4))");
  asym->add_option("--mu", aa.mu, "truncation degree");
  asym->add_option("--s", aa.s, "derivative order for the truncation bound");
  asym->add_option("--scan-r0", aa.scan_r0, "start radius of the boundedness scan");
  asym->add_option("--scan-count", aa.scan_count, "halvings in the boundedness scan");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "identity suites and finite-difference oracles, as JSON");
  verify->add_option("model", model_path, "model JSON file")->required();
  verify->add_option("--suite", va.suite, "all | lemmas | ph-curvature | hodge | fourfold | gauge");
  verify->add_option("--points", va.points, "points 'z1,z2;...' (default: model samples)");
  verify->add_option("--fault", va.fault, "none | flipped-Q | dropped-K | dropped-Gamma | dropped-curvature-term");
  verify->add_flag("--no-fd", va.no_fd, "skip the finite-difference checks");
  verify->add_option("--out", va.out, "JSON path (default stdout)");

  std::string dir = "report";
  auto* report = app.add_subcommand("report", "validate, sweep, verify and asymptotics into a directory");
  report->add_option("model", model_path, "model JSON file")->required();
  report->add_option("--dir", dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::CallForVersion&) {
    out << "hodgewp 0.1.0\n";
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    ModelFile f = load_model(model_path);
    if (validate->parsed()) return cmd_validate(f, points, out);
    if (sweep->parsed()) return cmd_sweep(f, sa, ph_opt->count() > 0, out, err);
    if (curv->parsed()) return cmd_curvature(f, at, cmu, out);
    if (asym->parsed()) {
      bool ok = true;
      out << asymptotics_json(f, aa, ok).dump(2) << "\n";
      return ok ? kPass : kPredicateFailed;
    }
    if (verify->parsed()) {
      bool ok = true;
      std::string text = verify_json(f, va, ok).dump(2) + "\n";
      if (va.out) write_text(*va.out, text);
      else out << text;
      return ok ? kPass : kPredicateFailed;
    }
    if (report->parsed()) return cmd_report(f, dir, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace hodgewp::cli
