#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace hodgewp;
using testing::load;

namespace {

double poly(const std::vector<double>& c, double u) {
  double s = 0;
  for (size_t j = c.size(); j-- > 0;) s = s * u + c[j];
  return s;
}

BoundaryModel1D with_a0(BoundaryModel1D b, Vec a0) {
  b.a = {std::move(a0)};
  return b;
}

}  // namespace

TEST_CASE("weight polynomials of the shift orbits", "[asymptotics]") {
  const double tp = 2 * kPi;
  auto a = boundary_model(load("model_a.json").model);
  auto c = boundary_model(load("model_c.json").model);
  WeightPolynomial wa = weight_polynomial(a), wc = weight_polynomial(c);
  CHECK(wa.degree == 3);
  CHECK(wc.degree == 4);
  // sum_j 1 / (j! (n-j)!) = 2^n / n!
  CHECK(std::abs(wa.coeffs[3] - 4.0 / 3 / std::pow(tp, 3)) < 1e-14);
  CHECK(std::abs(wc.coeffs[4] - 2.0 / 3 / std::pow(tp, 4)) < 1e-14);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(wa.coeffs[j]) < 1e-14);
  CHECK(wa.imag_residual < 1e-14);

  // equals (Omega, conj Omega) on the positive axis when A is constant
  auto fa = load("model_a.json");
  for (double u : {1.0, 5.0, 20.0, 80.0}) {
    Vec om = testing::orbit_value(fa.model.orbit().n[0], fa.model.orbit().a0(), cplx(std::exp(-u), 0));
    double p = fa.model.polarization().pair_bar(om, om).real();
    CHECK(std::abs(poly(wa.coeffs, u) - p) < 1e-12 * p);
  }

  BoundaryModel1D flat = a;
  flat.n.setZero();
  CHECK(weight_polynomial(flat).degree == 0);
}

TEST_CASE("completeness truth table", "[asymptotics]") {
  auto a = boundary_model(load("model_a.json").model);
  const int d = a.dim();
  Vec e0 = Vec::Zero(d), e3 = Vec::Zero(d);
  e0(0) = 1;
  e3(3) = 1;
  CHECK(completeness_test(a).complete);
  CHECK(completeness_test(with_a0(a, e0 + 0.5 * e3)).complete);
  CHECK_FALSE(completeness_test(with_a0(a, e3)).complete);  // kernel of the shift
  BoundaryModel1D flat = a;
  flat.n.setZero();
  CHECK_FALSE(completeness_test(flat).complete);
  CHECK_FALSE(completeness_test(boundary_model(load("case2.json").model)).complete);
  CHECK(completeness_test(boundary_model(load("quintic.json").model)).complete);
  CHECK(std::abs(completeness_test(a).ratio - 1.0) < 1e-15);
}

TEST_CASE("leading WP asymptotics approach l/4", "[asymptotics]") {
  const std::vector<double> us{20, 50, 100, 200};
  for (auto [name, l] : {std::pair{"model_a.json", 3}, std::pair{"model_c.json", 4}}) {
    auto f = load(name);
    LeadingResult r = wp_leading(f.model, boundary_model(f.model), us);
    CHECK(r.l == l);
    for (double s : r.scaled) CHECK(std::abs(s - l / 4.0) < 1e-10);
  }
  auto q = load("quintic.json");
  LeadingResult r = wp_leading(q.model, boundary_model(q.model), us);
  CHECK(r.l == 3);
  CHECK(r.monotone);
  CHECK(std::abs(r.scaled.back() - 0.75) < 1e-10);
  CHECK(std::abs(r.scaled.front() - 0.75) < 1e-4);

  auto c2 = load("case2.json");
  CHECK_THROWS_AS(wp_leading(c2.model, boundary_model(c2.model), us), Error);
}

TEST_CASE("boundary classifier", "[asymptotics]") {
  Classification one = boundary_classifier(boundary_model(load("model_a.json").model));
  CHECK(one.kind == Classification::Case1);
  CHECK(one.l == 3);

  Classification two = boundary_classifier(boundary_model(load("case2.json").model));
  CHECK(two.kind == Classification::Case2);
  CHECK(two.k == 1);
  CHECK(two.l == 3);
  CHECK_FALSE(two.degenerate);
  CHECK(two.no_pure_terms);
  CHECK(two.rotation_residual < 1e-10);
  // e_0 z lifted by the shift contributes (4/3) (u / 2 pi)^3 |z|^2
  CHECK(std::abs(std::abs(two.leading) - 4.0 / 3 / std::pow(2 * kPi, 3)) < 1e-10);

  BoundaryModel1D flat = boundary_model(load("model_a.json").model);
  flat.n.setZero();
  Classification z = boundary_classifier(flat);
  CHECK(z.kind == Classification::Case2);
  CHECK(z.degenerate);
  CHECK(z.l == 0);
}

TEST_CASE("truncation bound dominates the tail at ten radii", "[asymptotics]") {
  for (const char* name : {"model_a.json", "model_c.json", "quintic.json", "case2.json"}) {
    auto f = load(name);
    BoundaryModel1D b = boundary_model(f.model);
    for (double mu : {0.0, 0.5, 1.5})
      for (int s : {0, 1, 2})
        for (int k = 0; k < 10; ++k) {
          double r = b.delta / 4 * std::pow(0.5, k + 1);
          TruncationResult t = truncation_bound(b, mu, s, r);
          INFO(name << " mu=" << mu << " s=" << s << " r=" << r);
          CHECK(t.pass);
          CHECK(t.empirical <= t.bound);
          CHECK(b.degree(t.k0, t.l0) > mu);
        }
    CHECK_THROWS_AS(truncation_bound(b, 0.5, 0, b.delta / 4), Error);
    CHECK_THROWS_AS(truncation_bound(b, 0.5, -1, b.delta / 8), Error);
  }
}

TEST_CASE("scalar curvature of the Hodge metric stays bounded", "[asymptotics][dim1]") {
  auto a = load("model_a.json");
  BoundednessScan s = curvature_boundedness_scan(a.model, boundary_model(a.model), std::exp(-2 * kPi), 40);
  CHECK_FALSE(s.refused);
  CHECK(s.pass);
  CHECK(s.r.size() == 41);
  CHECK(std::abs(s.trend - 1.0) < 1e-8);
  for (double rho : s.rho) CHECK(std::abs(rho + 0.2) < 1e-9);

  auto q = load("quintic.json");
  BoundednessScan sq = curvature_boundedness_scan(q.model, boundary_model(q.model), 2e-4, 40);
  CHECK(sq.pass);
  CHECK(std::isfinite(sq.sup_abs));
  CHECK(sq.trend < 4.0);
  CHECK(std::abs(sq.rho.back() + 0.2) < 1e-3);  // the quintic approaches the orbit value

  auto c = load("model_c.json");
  BoundednessScan sc = curvature_boundedness_scan(c.model, boundary_model(c.model), 0.01, 10);
  CHECK(sc.refused);
  CHECK(sc.reason.find("hypothesis unmet") != std::string::npos);
}

TEST_CASE("two-fraction form of rho", "[dim1][property]") {
  for (int i = 0; i <= 400; ++i) {
    double x = 0.25 * i;
    double first = (4 - 4 * x + 2 * x * x) / ((2 + x) * (2 + x));
    CHECK(first <= 2.0);
    CHECK(first > 0.0);
    CHECK(rho_two_fraction(x, 0.0) == Catch::Approx(-first).epsilon(1e-15));
    CHECK(rho_two_fraction(x, 1.0) < rho_two_fraction(x, 0.0));
  }
  // orbit value: h = (10/3) lambda gives rho = -1/5
  auto a = load("model_a.json");
  YukawaChain1D y = yukawa_chain(a.model.jet({cplx(0.02, 0.01)}, 4), a.model.polarization());
  CHECK(std::abs(rho_two_fraction(y.x, y.y) + 0.2) < 1e-9);
  CHECK_THROWS_AS(yukawa_chain(a.model.jet({cplx(0.02, 0)}, 3), a.model.polarization()), Error);
}

TEST_CASE("Case 1 estimate on the Yukawa derivative", "[dim1]") {
  // |F_1111| <= C / (r^4 log 1/r) while F_111 ~ z^{-3}
  auto q = load("quintic.json");
  double first = 0, last = 0;
  for (int j = 0; j < 30; ++j) {
    double r = 2e-4 * std::pow(0.5, j);
    YukawaChain1D y = yukawa_chain(q.model.jet({cplx(r, 0)}, 4), q.model.polarization());
    double v = std::abs(y.f1111) * std::pow(r, 4) * std::log(1 / r);
    if (j == 0) first = v;
    last = v;
    CHECK(std::abs(y.f111) * std::pow(r, 3) > 0);
  }
  CHECK(last <= 4 * first);
}
