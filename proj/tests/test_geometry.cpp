#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace hodgewp;
using testing::load;

namespace {

// For a one-variable orbit with constant A and weight polynomial of degree l,
// (Omega, conj Omega) = c u^l with u = log 1/|z|, so
//   g = l / (4 |z|^2 u^2)  and  R_{1 1bar 1 1bar} / g^2 = 2 / l.
double poincare_lambda(int l, cplx z) {
  double r = std::abs(z), u = std::log(1 / r);
  return l / (4 * r * r * u * u);
}

std::vector<Point> mixed_points() {
  return {{cplx(std::exp(-2 * kPi), 0)}, {cplx(std::exp(-4 * kPi), 0)}, {cplx(0.01, 0.02)},
          {cplx(-0.03, 0.001)}, {cplx(1e-3, 0)}, {cplx(0.2, -0.3)}};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("MODEL-A quantities are multiples of one Poincare metric", "[wp][closed-form]") {
  auto f = load("model_a.json");
  for (const auto& z : mixed_points()) {
    INFO("z = " << z[0]);
    PointGeometry pg = compute_point(f.model, z);
    const double g = pg.g.in_z_coordinates()(0, 0).real();
    const double gt = pg.g.h(0, 0).real();
    CHECK(rel(g, poincare_lambda(3, z[0])) < 1e-10);
    CHECK(std::abs(pg.wp_sectional() + 2.0 / 3) < 1e-10);
    CHECK(std::abs(pg.r.r(0, 0, 0, 0).real() / (gt * gt) - 2.0 / 3) < 1e-10);
    CHECK(rel(pg.ric.h(0, 0).real(), -2.0 / 3 * gt) < 1e-10);
    // R = 2 g^2 - F  in one variable
    CHECK(rel(pg.f(0, 0, 0, 0).real(), 4.0 / 3 * gt * gt) < 1e-10);
    CHECK(pg.mu == 4.0);
    CHECK(rel(pg.h->h(0, 0).real(), 10.0 / 3 * gt) < 1e-10);
    CHECK(rel(pg.hodge->h(0, 0).real(), 10.0 / 3 * gt) < 1e-10);
    // h = (5/2) / (r^2 u^2) is itself Poincare, so its curvature ratio is 1/5
    CHECK(std::abs(*pg.ph_sectional() + 0.2) < 1e-9);

    const YukawaChain1D& y = *pg.yukawa;
    CHECK(std::abs(y.rho + 0.2) < 1e-9);
    CHECK(std::abs(rho_two_fraction(y.x, y.y) - y.rho) < 1e-9);
    CHECK(rel(y.lambda, g) < 1e-10);
    // (Omega, theta^3 Omega) = 1 / (8 pi^3) and F_1111 cancels
    CHECK(std::abs(y.f111 * std::pow(z[0], 3) - 1 / (8 * std::pow(kPi, 3))) < 1e-12);
    CHECK(std::abs(y.f1111) * std::abs(z[0]) < 1e-9 * std::abs(y.f111));
  }
}

TEST_CASE("MODEL-C fourfold closed forms and curvature bounds", "[wp][ph][fourfold]") {
  auto f = load("model_c.json");
  for (const auto& z : mixed_points()) {
    INFO("z = " << z[0]);
    GeometryOptions go;
    go.mu = 3.0;
    PointGeometry pg = compute_point(f.model, z, go);
    const double gt = pg.g.h(0, 0).real();
    CHECK(rel(pg.g.in_z_coordinates()(0, 0).real(), poincare_lambda(4, z[0])) < 1e-10);
    CHECK(std::abs(pg.wp_sectional() + 0.5) < 1e-10);
    CHECK(rel(pg.h->h(0, 0).real(), 2.5 * gt) < 1e-10);
    CHECK(rel(pg.hodge->h(0, 0).real(), 5.0 * gt) < 1e-10);
    // R~ / h^2 = 1/5 = 1/(m+4): the sectional bound is attained
    const double hh = pg.h->h(0, 0).real();
    CHECK(pg.rt->r(0, 0, 0, 0).real() >= 0);
    CHECK(std::abs(pg.rt->r(0, 0, 0, 0).real() / (hh * hh) - 0.2) < 1e-9);
    // (Omega, theta^4 Omega) = 1 / (16 pi^4)
    const double s = pg.jet.scale[0];
    cplx xi_z = (*pg.xi)(0, 0, 0, 0) / std::pow(s, 4);
    CHECK(std::abs(xi_z * std::pow(z[0], 4) - 1 / (16 * std::pow(kPi, 4))) < 1e-12);

    FourfoldPointBound b = fourfold_point_bound(*pg.rt, *pg.h, 50, kDefaultSeed);
    CHECK(b.min_bisectional >= -1e-12);
    CHECK(b.sectional_excess <= 1e-12);
    CHECK(b.final_ratio <= 1.0);
    CHECK(std::abs(-b.scalar_curvature + 0.2) < 1e-9);
  }
}

TEST_CASE("cubic two-moduli metric is the log-Hessian of the cubic form", "[wp][m2]") {
  auto f = load("cubic_m2.json");
  const auto& orb = f.model.orbit();
  double kappa[2][2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) kappa[i][j][k] = orb.n[i](3 + k, 1 + j).real();
  std::vector<Point> pts = f.model.samples;
  pts.push_back({cplx(0.1, 0.1), cplx(1e-4, -2e-4)});
  for (const auto& z : pts) {
    INFO("z = " << z[0] << ", " << z[1]);
    double u[2] = {std::log(1 / std::abs(z[0])), std::log(1 / std::abs(z[1]))};
    double p = 0, d1[2] = {0, 0}, d2[2][2] = {{0, 0}, {0, 0}};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          p += kappa[i][j][k] * u[i] * u[j] * u[k];
          d1[i] += 3 * kappa[i][j][k] * u[j] * u[k];
          d2[i][j] += 6 * kappa[i][j][k] * u[k];
        }
    Mat want(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double hess = d2[i][j] / p - d1[i] * d1[j] / (p * p);
        // d u_i / d z_i = -1 / (2 z_i)
        want(i, j) = -hess / (4.0 * z[i] * std::conj(z[j]));
      }
    PointGeometry pg = compute_point(f.model, z);
    CHECK(rel_diff(pg.g.in_z_coordinates(), want) < 1e-10);
  }
}

TEST_CASE("curvature identities hold on every shipped model", "[wp][ph][property]") {
  for (const char* name : {"model_a.json", "model_c.json", "quintic.json", "quintic_integral.json", "cubic_m2.json"}) {
    auto f = load(name);
    const int n = f.model.weight();
    for (const auto& z : f.model.samples) {
      INFO(name << " at z1 = " << z[0]);
      PointGeometry pg = compute_point(f.model, z);
      const int m = pg.m();
      const Mat& g = pg.g.h;
      CHECK((g - g.adjoint()).norm() < 1e-12 * g.norm());
      CHECK(pg.g.min_eigenvalue() > 0);
      CHECK(kahler_symmetry_residual(pg.r.r) < 1e-10);

      Mat gi = upper_inverse(g);
      double worst_s = 0, worst_ric = 0, worst_h = 0;
      const double scale = g.norm() * g.norm();
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          cplx ric = 0, trf = 0;
          for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) {
              cplx s = g(i, j) * g(k, l) + g(i, l) * g(k, j) - pg.f(i, j, k, l);
              worst_s = std::max(worst_s, std::abs(pg.r.r(i, j, k, l) - s) / scale);
              ric -= gi(k, l) * pg.r.r(i, j, k, l);
              trf += gi(k, l) * pg.f(i, j, k, l);
            }
          worst_ric = std::max(worst_ric, std::abs(pg.ric.h(i, j) - ric) / g.norm());
          cplx h = (pg.mu - m - 1) * g(i, j) + trf;
          worst_h = std::max(worst_h, std::abs(pg.h->h(i, j) - h) / g.norm());
        }
      CHECK(worst_s < 1e-12);
      CHECK(worst_ric < 1e-10);
      CHECK(worst_h < 1e-10);
      CHECK(pg.h->min_eigenvalue() > 0);
      if (pg.rt) CHECK(kahler_symmetry_residual(pg.rt->r) < 1e-8);

      if (n == 3 || n == 4) CHECK(rel_diff(pg.hodge->h, hodge_metric_closed_form(g, pg.ric.h, n)) < 1e-8);
      // WP is dominated by the Hodge metric: h^H - g is positive semidefinite
      CHECK(min_hermitian_eigenvalue(pg.hodge->h - g) > -1e-10 * g.norm());
    }
  }
}

TEST_CASE("partial Hodge metric needs mu > m + 1", "[ph][errors]") {
  auto f = load("model_a.json");
  GeometryOptions go;
  go.mu = 2.0;
  try {
    compute_point(f.model, {cplx(0.01, 0)}, go);
    FAIL("mu = m + 1 accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parameter);
  }
  CHECK(default_mu(1, 3) == 4.0);
  CHECK(default_mu(2, 4) == 4.0);
}

TEST_CASE("curvature fields carry the sign convention", "[wp]") {
  auto f = load("model_a.json");
  PointGeometry pg = compute_point(f.model, {cplx(0.01, 0)});
  CHECK(pg.r.convention == kCurvatureConvention);
  CHECK(std::string(kCurvatureConvention).find("nonpositive") != std::string::npos);
  CHECK(pg.r.r(0, 0, 0, 0).real() > 0);  // nonpositive in the stated convention
  CHECK(pg.wp_sectional() < 0);
}

TEST_CASE("quintic WP sectional curvature takes both signs", "[wp][pf]") {
  auto fr = load("quintic.json");
  auto zi = load("quintic_integral.json");
  const double top = 0.8 * std::pow(5.0, -5);
  int pos = 0, neg = 0;
  for (int j = 0; j <= 40; ++j) {
    double r = 1e-5 * std::pow(top / 1e-5, j / 40.0) * (j == 40 ? 0.999 : 1.0);
    double k = compute_point(fr.model, {cplx(r, 0)}).wp_sectional();
    (k > 0 ? pos : neg)++;
  }
  CHECK(pos > 0);
  CHECK(neg > 0);
  // with the zeta(3) correction the sign change moves below 1e-5
  CHECK(compute_point(zi.model, {cplx(1e-5, 0)}).wp_sectional() > 0);
  CHECK(compute_point(zi.model, {cplx(2.5e-6, 0)}).wp_sectional() < 0);
  // both tend to -2/3 at the puncture
  CHECK(std::abs(compute_point(fr.model, {cplx(1e-10, 0)}).wp_sectional() + 2.0 / 3) < 1e-5);
}
