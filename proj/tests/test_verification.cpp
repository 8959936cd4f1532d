#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace hodgewp;
using testing::load;

namespace {

const cplx kA{0.3, 0.1};

Mat scalar(cplx v) {
  Mat m(1, 1);
  m(0, 0) = v;
  return m;
}

// g(t) = exp(|a + t|^2): R = g d dbar log g = g
FrameFunction exp_metric() {
  return [](const std::vector<cplx>& t) { return scalar(std::exp(std::norm(kA + t[0]))); };
}

SuiteOptions no_fd() {
  SuiteOptions o;
  o.with_fd = false;
  return o;
}

}  // namespace

TEST_CASE("difference operators on known functions", "[fd]") {
  FDConfig cfg;
  cfg.eta = 1e-3;
  FrameFunction c = [](const std::vector<cplx>&) { return scalar(cplx(2.5, -1)); };
  CHECK(fd_d(c, 1, 0, cfg).norm() == 0.0);
  CHECK(fd_d_dbar(c, 1, 0, 0, cfg).norm() == 0.0);

  // f = w^2 conj(w), w = a + t: d f = 2 w conj(w), dbar f = w^2, d dbar f = 2 w
  FrameFunction f = [](const std::vector<cplx>& t) {
    cplx w = kA + t[0];
    return scalar(w * w * std::conj(w));
  };
  CHECK(std::abs(fd_d(f, 1, 0, cfg)(0, 0) - 2.0 * kA * std::conj(kA)) < 1e-10);
  CHECK(std::abs(fd_dbar(f, 1, 0, cfg)(0, 0) - kA * kA) < 1e-10);
  CHECK(std::abs(fd_d_dbar(f, 1, 0, 0, cfg)(0, 0) - 2.0 * kA) < 1e-8);

  // two variables: f = t1 conj(t2) has d_1 dbar_2 f = 1 and d_2 dbar_1 f = 0
  FrameFunction g = [](const std::vector<cplx>& t) { return scalar((kA + t[0]) * std::conj(t[1])); };
  CHECK(std::abs(fd_d_dbar(g, 2, 0, 1, cfg)(0, 0) - 1.0) < 1e-8);
  CHECK(std::abs(fd_d_dbar(g, 2, 1, 0, cfg)(0, 0)) < 1e-8);
}

TEST_CASE("FD curvature oracle on analytic metrics", "[fd]") {
  FDConfig cfg;
  cfg.eta = 1e-3;
  FrameFunction flat = [](const std::vector<cplx>&) { return Mat(Mat::Identity(2, 2)); };
  CHECK(fd_curvature(flat, 2, {cplx(0.1), cplx(0.2)}, {1, 1}, cfg).r.norm() == 0.0);

  CurvatureField r = fd_curvature(exp_metric(), 1, {kA}, {1}, cfg);
  const double g0 = std::exp(std::norm(kA));
  CHECK(std::abs(r.r(0, 0, 0, 0) - g0) < 1e-7 * g0);
}

TEST_CASE("one Richardson step gains at least an order of magnitude", "[fd]") {
  const double g0 = std::exp(std::norm(kA));
  for (double eta : {0.05, 0.02}) {
    FDConfig plain, rich;
    plain.eta = rich.eta = eta;
    plain.levels = 1;
    rich.levels = 2;
    double e1 = std::abs(fd_curvature(exp_metric(), 1, {kA}, {1}, plain).r(0, 0, 0, 0) - g0);
    double e2 = std::abs(fd_curvature(exp_metric(), 1, {kA}, {1}, rich).r(0, 0, 0, 0) - g0);
    INFO("eta = " << eta << " plain " << e1 << " richardson " << e2);
    CHECK(e2 * 10 <= e1);
  }
  FDConfig cfg;
  CHECK(cfg.tolerance("closed") == 1e-8);
  CHECK(cfg.tolerance("fd") == 1e-4);
  CHECK_THROWS_AS(cfg.tolerance("nope"), Error);
}

TEST_CASE("WP metric from differences of the potential", "[fd][wp]") {
  auto a = load("model_a.json");
  for (double r : {std::exp(-2 * kPi), std::exp(-4 * kPi), 0.01}) {
    Point z{cplx(r, 0)};
    MetricField fd = fd_metric_from_potential(a.model, z);
    MetricField cf = compute_point(a.model, z).g;
    CHECK(rel_diff(fd.h, cf.h) < 1e-6);
  }
  auto c = load("cubic_m2.json");
  for (const auto& z : c.model.samples)
    CHECK(rel_diff(fd_metric_from_potential(c.model, z).h, compute_point(c.model, z).g.h) < 1e-6);
}

TEST_CASE("identity suite passes on the shipped models", "[suite]") {
  for (const char* name : {"model_a.json", "model_c.json", "quintic.json", "cubic_m2.json"}) {
    auto f = load(name);
    ValidationReport rep = lemma_suite(f.model, f.model.samples);
    INFO(name << ": " << (rep.first_failure() ? rep.first_failure()->name : std::string("-")));
    CHECK(rep.passed());
    for (const char* check : {"D-Omega-isotropic", "dbar-D-Omega", "dbar-K", "metric-from-D-Omega",
                              "DD-Omega-isotropic", "DD-Omega-vs-D-Omega", "DD-commute", "fd-metric", "fd-strominger"})
      CHECK(rep.find(check) != nullptr);
    if (f.model.weight() >= 3) {
      CHECK(rep.find("T-low-components") != nullptr);
      CHECK(rep.find("dbar-DD-Omega") != nullptr);
    }
    for (const auto& c : rep.checks) {
      INFO(c.name);
      CHECK(c.tolerance <= 1e-3);
    }
  }
}

TEST_CASE("fault injection is detected", "[suite][faults]") {
  auto a = load("model_a.json");
  const std::vector<Point> pts{{cplx(0.01, 0.02)}, {cplx(std::exp(-2 * kPi), 0)}};
  for (Fault fault : {Fault::FlippedQ, Fault::DroppedK, Fault::DroppedGamma, Fault::DroppedCurvatureTerm}) {
    SuiteOptions o;
    o.fault = fault;
    ValidationReport rep = lemma_suite(a.model, pts, o);
    INFO(to_string(fault));
    CHECK_FALSE(rep.passed());
  }
  // the flipped pairing is invisible on the real axis for the pure orbit, but not elsewhere
  SuiteOptions o;
  o.fault = Fault::FlippedQ;
  CHECK_FALSE(lemma_suite(a.model, {{cplx(0.01, 0.02)}}, o).passed());
  auto q = load("quintic.json");
  CHECK_FALSE(lemma_suite(q.model, q.model.samples, o).passed());

  SuiteOptions clean = no_fd();
  CHECK(lemma_suite(a.model, pts, clean).passed());
}

TEST_CASE("omega_mu curvature agrees with differences of h", "[suite][fd]") {
  for (const char* name : {"model_a.json", "model_c.json", "quintic.json", "quintic_integral.json", "cubic_m2.json"}) {
    auto f = load(name);
    ValidationReport rep = ph_curvature_report(f.model, f.model.samples, f.mu);
    INFO(name << " residual " << rep.max_residual());
    CHECK(rep.passed());
    CHECK(rep.find("ph-curvature")->tolerance == 1e-3);
  }
}

TEST_CASE("Hodge identity, domination and gauge reports", "[suite]") {
  for (const char* name : {"model_a.json", "model_c.json", "quintic.json", "quintic_integral.json", "cubic_m2.json"}) {
    auto f = load(name);
    INFO(name);
    ValidationReport h = hodge_identity_report(f.model, f.model.samples);
    CHECK(h.passed());
    CHECK(h.find("hodge closed form")->residual < 1e-8);
    ValidationReport g = gauge_report(f.model, f.model.samples);
    CHECK(g.passed());
    CHECK(g.find("gauge f = 2")->residual < 1e-9);
    CHECK(g.find("gauge f = 1 + z/2")->residual < 1e-9);
  }
}

TEST_CASE("gauge transformations leave scalars unchanged", "[gauge][property]") {
  auto q = load("quintic.json");
  GaugeFactor f;
  f.terms[{0}] = cplx(1.5, -0.5);
  f.terms[{1}] = cplx(300.0, 0);
  f.terms[{2}] = cplx(0, 1e6);
  VhsModel gm = q.model.with_gauge(f);
  for (const auto& z : q.model.samples) {
    PointGeometry a = compute_point(q.model, z), b = compute_point(gm, z);
    CHECK(rel_diff(a.g.in_z_coordinates(), b.g.in_z_coordinates()) < 1e-9);
    CHECK(std::abs(a.wp_sectional() - b.wp_sectional()) < 1e-9);
    CHECK(std::abs(*a.ph_sectional() - *b.ph_sectional()) < 1e-9);
    CHECK(std::abs(a.yukawa->rho - b.yukawa->rho) < 1e-9);
    // the section itself does change
    CHECK((a.jet.value() - b.jet.value()).norm() > 1e-3 * a.jet.value().norm());
  }
}

TEST_CASE("fourfold report records its seed", "[fourfold]") {
  auto c = load("model_c.json");
  std::vector<FourfoldPointBound> pts;
  GeometryOptions go;
  go.mu = 3.0;
  for (const auto& z : testing::ray(std::exp(-2 * kPi), 0.5, 5)) {
    PointGeometry pg = compute_point(c.model, z, go);
    pts.push_back(fourfold_point_bound(*pg.rt, *pg.h, 50, kDefaultSeed));
  }
  ValidationReport rep = fourfold_report(pts, kDefaultSeed);
  CHECK(rep.passed());
  CHECK(rep.subject.find(std::to_string(kDefaultSeed)) != std::string::npos);
  CHECK(rep.subject.find("nonpositive") != std::string::npos);
  // same seed, same samples
  PointGeometry pg = compute_point(c.model, {cplx(0.01, 0)}, go);
  CHECK(fourfold_point_bound(*pg.rt, *pg.h, 20, 7).final_ratio == fourfold_point_bound(*pg.rt, *pg.h, 20, 7).final_ratio);
}
