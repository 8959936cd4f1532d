// Acceptance criteria 1-10; one PASS/FAIL line each, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "support.hpp"

using namespace hodgewp;
using testing::load;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string sci(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2e", x);
  return b;
}

const std::vector<const char*> kVhsModels{"model_a.json", "model_c.json", "quintic.json", "quintic_integral.json",
                                          "cubic_m2.json"};

std::vector<Point> model_a_ray() { return testing::ray(std::exp(-2 * kPi), 0.5, 10); }

Outcome crit_wp_exact() {
  Outcome o;
  auto f = load("model_a.json");
  double worst = 0;
  for (const auto& z : model_a_ray()) {
    double r = std::abs(z[0]), u = std::log(1 / r);
    double lam = compute_point(f.model, z).g.in_z_coordinates()(0, 0).real();
    worst = std::max(worst, std::abs(lam * r * r * u * u - 0.75));
  }
  o.note("max |lambda r^2 u^2 - 3/4| = " + sci(worst));
  o.require(worst <= 1e-10, "tolerance 1e-10");
  return o;
}

Outcome crit_strominger() {
  Outcome o;
  auto f = load("model_a.json");
  double closed = 0, fd = 0;
  for (const auto& z : model_a_ray()) {
    PointGeometry pg = compute_point(f.model, z);
    double g = pg.g.h(0, 0).real();
    double r = pg.r.r(0, 0, 0, 0).real();
    closed = std::max(closed, std::abs(r / (g * g) - 2.0 / 3));
    CurvatureField rf = fd_curvature(wp_metric_function(f.model, z, pg.jet.scale), 1, z, pg.jet.scale);
    fd = std::max(fd, std::abs(rf.r(0, 0, 0, 0).real() - r) / std::abs(r));
  }
  o.note("closed form " + sci(closed) + ", FD relative " + sci(fd));
  o.require(closed <= 1e-10, "closed form 2/3");
  o.require(fd <= 1e-4, "FD oracle 1e-4");
  return o;
}

Outcome crit_scalar_curvature() {
  Outcome o;
  auto f = load("model_a.json");
  double closed = 0, kk = 0, fd = 0, cancel = 0, hodge = 0;
  for (const auto& z : model_a_ray()) {
    PointGeometry pg = compute_point(f.model, z);
    const YukawaChain1D& y = *pg.yukawa;
    closed = std::max({closed, std::abs(y.rho + 0.2), std::abs(*pg.ph_sectional() + 0.2)});
    kk = std::max(kk, std::abs(rho_two_fraction(y.x, y.y) + 0.2));
    cancel = std::max(cancel, std::abs(y.f1111) * std::abs(z[0]) / std::abs(y.f111));
    // Hodge metric and partial Hodge metric with mu = m + 3 coincide for n = 3
    hodge = std::max(hodge, rel_diff(pg.hodge->h, pg.h->h));
    CurvatureField rf = fd_curvature(ph_metric_function(f.model, z, pg.jet.scale, pg.mu), 1, z, pg.jet.scale);
    double h = pg.h->h(0, 0).real();
    fd = std::max(fd, std::abs(-rf.r(0, 0, 0, 0).real() / (h * h) + 0.2) / 0.2);
  }
  o.note("rho " + sci(closed) + ", two-fraction " + sci(kk) + ", F_1111 " + sci(cancel) + ", Hodge = omega_4 " +
         sci(hodge) + ", FD " + sci(fd));
  o.require(closed <= 1e-9 && kk <= 1e-9, "closed form -1/5");
  o.require(cancel <= 1e-9, "F_1111 cancellation");
  o.require(hodge <= 1e-9, "Hodge constant m+3");
  o.require(fd <= 1e-4, "FD oracle 1e-4");
  return o;
}

Outcome crit_fourfold() {
  Outcome o;
  auto f = load("model_c.json");
  GeometryOptions go;
  go.mu = f.model.m() + 2.0;
  std::vector<FourfoldPointBound> pts;
  double ratio_min = INFINITY, rt_min = INFINITY;
  for (const auto& z : testing::ray(std::exp(-2 * kPi), 0.5, 5)) {
    PointGeometry pg = compute_point(f.model, z, go);
    double h = pg.h->h(0, 0).real(), rt = pg.rt->r(0, 0, 0, 0).real();
    rt_min = std::min(rt_min, rt);
    ratio_min = std::min(ratio_min, rt / (h * h));
    pts.push_back(fourfold_point_bound(*pg.rt, *pg.h, 50, kDefaultSeed));
  }
  ValidationReport rep = fourfold_report(pts, kDefaultSeed);
  o.note("min R~ = " + sci(rt_min) + ", min R~/h^2 - 1/5 = " + sci(ratio_min - 0.2) + ", final ratio " +
         sci(rep.find("final bound")->residual) + ", seed " + std::to_string(kDefaultSeed));
  o.require(rt_min >= 0, "R~ >= 0");
  o.require(ratio_min >= 0.2 - 1e-12, "R~/h^2 >= 1/5");
  o.require(rep.passed(), "fourfold predicates");
  return o;
}

Outcome crit_hodge_identities() {
  Outcome o;
  double worst = 0;
  for (const char* name : kVhsModels) {
    auto f = load(name);
    ValidationReport rep = hodge_identity_report(f.model, f.model.samples);
    worst = std::max(worst, rep.find("hodge closed form")->residual);
  }
  o.note("max relative residual " + sci(worst));
  o.require(worst <= 1e-8, "tolerance 1e-8");
  return o;
}

Outcome crit_quintic_signs() {
  Outcome o;
  auto f = load("quintic.json");
  const double lo = 1e-5, hi = 0.8 * std::pow(5.0, -5);
  double kmin = INFINITY, kmax = -INFINITY;
  for (int j = 1; j < 60; ++j) {
    double r = lo * std::pow(hi / lo, j / 60.0);
    double k = compute_point(f.model, {cplx(r, 0)}).wp_sectional();
    kmin = std::min(kmin, k);
    kmax = std::max(kmax, k);
  }
  o.note("WP holomorphic sectional range [" + sci(kmin) + ", " + sci(kmax) + "]");
  o.require(kmin < 0 && kmax > 0, "both signs");
  return o;
}

Outcome crit_lemma_suites() {
  Outcome o;
  double worst_closed = 0, worst_fd = 0;
  for (const char* name : {"model_a.json", "model_c.json", "quintic.json"}) {
    auto f = load(name);
    ValidationReport rep = lemma_suite(f.model, f.model.samples);
    for (const auto& c : rep.checks) {
      double& w = c.tolerance <= 1e-8 ? worst_closed : worst_fd;
      w = std::max(w, c.residual);
    }
    if (!rep.passed()) o.require(false, std::string(name) + " " + rep.first_failure()->name);
  }
  o.note("closed-form max " + sci(worst_closed) + ", FD max " + sci(worst_fd));
  int caught = 0;
  const std::vector<Point> pts{{cplx(0.01, 0.02)}, {cplx(std::exp(-2 * kPi), 0)}};
  auto a = load("model_a.json");
  for (Fault fault : {Fault::FlippedQ, Fault::DroppedK, Fault::DroppedGamma, Fault::DroppedCurvatureTerm}) {
    SuiteOptions opt;
    opt.fault = fault;
    bool failed = !lemma_suite(a.model, pts, opt).passed();
    caught += failed;
    o.require(failed, std::string("fault ") + to_string(fault) + " went unnoticed");
  }
  o.note(std::to_string(caught) + "/4 faults caught");
  return o;
}

Outcome crit_ph_curvature() {
  Outcome o;
  double worst = 0;
  for (const char* name : kVhsModels) {
    auto f = load(name);
    ValidationReport rep = ph_curvature_report(f.model, f.model.samples, f.mu);
    worst = std::max(worst, rep.max_residual());
    o.require(rep.passed(), name);
  }
  o.note("max relative difference " + sci(worst));
  return o;
}

Outcome crit_asymptotics() {
  Outcome o;
  auto a = boundary_model(load("model_a.json").model);
  auto c = boundary_model(load("model_c.json").model);
  BoundaryModel1D flat = a;
  flat.n.setZero();
  int da = weight_polynomial(a).degree, dc = weight_polynomial(c).degree, df = weight_polynomial(flat).degree;
  o.note("degrees " + std::to_string(da) + "/" + std::to_string(dc) + "/" + std::to_string(df));
  o.require(da == 3 && dc == 4 && df == 0, "weight degrees 3, 4, 0");

  Vec e3 = Vec::Zero(4);
  e3(3) = 1;
  BoundaryModel1D kernel = a;
  kernel.a = {e3};
  bool table = completeness_test(a).complete && completeness_test(c).complete &&
               completeness_test(boundary_model(load("quintic.json").model)).complete &&
               !completeness_test(flat).complete && !completeness_test(kernel).complete &&
               !completeness_test(boundary_model(load("case2.json").model)).complete;
  o.require(table, "completeness truth table");

  int dominated = 0, total = 0;
  for (const char* name : {"model_a.json", "model_c.json", "quintic.json", "case2.json"}) {
    BoundaryModel1D b = boundary_model(load(name).model);
    for (int k = 0; k < 10; ++k) {
      ++total;
      dominated += truncation_bound(b, 0.5, 0, b.delta / 4 * std::pow(0.5, k + 1)).pass;
    }
  }
  o.note("truncation " + std::to_string(dominated) + "/" + std::to_string(total));
  o.require(dominated == total, "truncation dominance");

  auto fa = load("model_a.json");
  BoundednessScan s = curvature_boundedness_scan(fa.model, a, std::exp(-2 * kPi), 40);
  o.note("scan trend " + sci(s.trend));
  o.require(!s.refused && s.pass, "boundedness scan");
  return o;
}

Outcome crit_gauge() {
  Outcome o;
  double worst = 0;
  for (const char* name : kVhsModels) {
    auto f = load(name);
    ValidationReport rep = gauge_report(f.model, f.model.samples);
    worst = std::max(worst, rep.max_residual());
    o.require(rep.passed(), name);
  }
  o.note("max relative change " + sci(worst));
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double limit;  // seconds
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "MODEL-A WP asymptotic constant", 1, crit_wp_exact},
      {2, "MODEL-A WP curvature 2/3, FD oracle", 5, crit_strominger},
      {3, "MODEL-A scalar curvature -1/5", 5, crit_scalar_curvature},
      {4, "MODEL-C fourfold bounds", 10, crit_fourfold},
      {5, "Hodge metric closed forms", 10, crit_hodge_identities},
      {6, "quintic WP curvature takes both signs", 30, crit_quintic_signs},
      {7, "identity suites and faults", 30, crit_lemma_suites},
      {8, "omega_mu curvature vs FD", 60, crit_ph_curvature},
      {9, "boundary asymptotics", 10, crit_asymptotics},
      {10, "gauge invariance", 5, crit_gauge},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit) o.require(false, "runtime over " + sci(c.limit) + " s");
    failed += !o.pass;
    std::printf("criterion %2d %s  %-40s %7.3f s  %s\n", c.id, o.pass ? "PASS" : "FAIL", c.title, secs,
                o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
