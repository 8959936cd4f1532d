#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace hodgewp;
using testing::load;

namespace {

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no hodgewp::Error thrown");
  return ErrorKind::Input;
}

Vec unit(int d, int k) {
  Vec v = Vec::Zero(d);
  v(k) = 1;
  return v;
}

}  // namespace

TEST_CASE("jet series match Taylor coefficients", "[jet]") {
  const int ord = 6;
  Jet t = Jet::variable(1, ord, 0, 0.0);
  Jet e = exp(t);
  Jet l = log(t + cplx(1.0));
  Jet r = reciprocal(-t + cplx(1.0));
  double fact = 1;
  for (int k = 0; k <= ord; ++k) {
    if (k > 0) fact *= k;
    MultiIndex a{};
    a[0] = static_cast<std::uint8_t>(k);
    CHECK(std::abs(e.coeff(a) - 1.0 / fact) < 1e-15);
    CHECK(std::abs(r.coeff(a) - 1.0) < 1e-14);
    if (k > 0) CHECK(std::abs(l.coeff(a) - (k % 2 ? 1.0 : -1.0) / k) < 1e-15);
  }
  // (1 + s)(2 + u) in two variables
  Jet s = Jet::variable(2, 3, 0, 1.0), u = Jet::variable(2, 3, 1, 2.0);
  Jet p = s * u;
  MultiIndex both{};
  both[0] = both[1] = 1;
  CHECK(p.value() == cplx(2.0));
  CHECK(p.coeff(unit_index(0)) == cplx(2.0));
  CHECK(p.coeff(unit_index(1)) == cplx(1.0));
  CHECK(p.coeff(both) == cplx(1.0));
  CHECK_THROWS(reciprocal(t));
}

TEST_CASE("orbit jets agree with Cauchy integrals of the closed-form section", "[models]") {
  auto f = load("model_a.json");
  const auto& orb = f.model.orbit();
  for (cplx z0 : {cplx(0.01, 0.02), cplx(std::exp(-2 * kPi), 0), cplx(-0.2, 0.05)}) {
    JetSection jet = f.model.jet({z0}, 4);
    const double s = jet.scale[0];
    auto ref = testing::cauchy_coefficients([&](cplx z) { return testing::orbit_value(orb.n[0], orb.a0(), z); }, z0,
                                            0.1 * std::abs(z0), 4);
    for (int k = 0; k <= 4; ++k) {
      MultiIndex a{};
      a[0] = static_cast<std::uint8_t>(k);
      Vec want = ref[k] * std::pow(s, k);
      CHECK((jet.coeff(a) - want).norm() <= 1e-9 * std::max(1.0, want.norm()));
    }
  }
}

TEST_CASE("two-variable orbit jet against a double Cauchy integral", "[models]") {
  auto f = load("cubic_m2.json");
  const auto& orb = f.model.orbit();
  const Point z0{cplx(0.05, 0.01), cplx(0.003, 0)};
  auto value = [&](cplx z1, cplx z2) {
    Mat x = (-kI / (2 * kPi)) * (std::log(z1) * orb.n[0] + std::log(z2) * orb.n[1]);
    Vec term = orb.a0(), total = orb.a0();
    for (int k = 1; k <= orb.dim(); ++k) {
      term = x * term / static_cast<double>(k);
      total += term;
    }
    return total;
  };
  JetSection jet = f.model.jet(z0, 3);
  const int ns = 32;
  const double r1 = 0.25 * std::abs(z0[0]), r2 = 0.25 * std::abs(z0[1]);
  Vec c11 = Vec::Zero(orb.dim());
  for (int a = 0; a < ns; ++a)
    for (int b = 0; b < ns; ++b) {
      cplx wa = std::polar(1.0, 2 * kPi * a / ns), wb = std::polar(1.0, 2 * kPi * b / ns);
      c11 += value(z0[0] + r1 * wa, z0[1] + r2 * wb) / (wa * wb);
    }
  c11 /= ns * ns * r1 * r2;
  MultiIndex both{};
  both[0] = both[1] = 1;
  Vec want = c11 * jet.scale[0] * jet.scale[1];
  CHECK((jet.coeff(both) - want).norm() <= 1e-8 * want.norm());
  CHECK((jet.value() - value(z0[0], z0[1])).norm() <= 1e-13 * want.norm() + 1e-13);
}

TEST_CASE("shift-operator orbits have closed-form values at exp(-2 pi)", "[models]") {
  const cplx z{std::exp(-2 * kPi), 0};
  // log(1/z) / (2 pi) = 1, so Omega = exp(i N) e_0 = sum_k i^k / k! e_k
  for (const char* name : {"model_a.json", "model_c.json"}) {
    auto f = load(name);
    const int d = f.model.dim();
    Vec want = Vec::Zero(d);
    double fact = 1;
    for (int k = 0; k < d; ++k) {
      if (k > 0) fact *= k;
      want += ipow(k) / fact * unit(d, k);
    }
    CHECK((f.model.jet({z}, 0).value() - want).norm() < 1e-14);
  }
  Vec a = load("model_a.json").model.jet({z}, 0).value();
  CHECK(std::abs(a(2) + 0.5) < 1e-15);
  CHECK(std::abs(a(3) - cplx(0, -1.0 / 6)) < 1e-15);
}

TEST_CASE("quintic Frobenius jets solve the operator and match the hypergeometric series", "[models][pf]") {
  auto f = load("quintic.json");
  for (cplx z0 : {cplx(1e-5, 0), cplx(5e-5, 5e-5), cplx(-1e-4, 0.3e-4), cplx(1.5e-4, 0)}) {
    JetSection jet = f.model.jet({z0}, 4);
    CHECK(pf_residual(f.model.picard_fuchs(), jet) < 1e-10);
    const double s = jet.scale[0];
    CHECK(std::abs(jet.value()(0) - testing::quintic_fundamental(z0)) < 1e-13);
    auto ref = testing::cauchy_coefficients(
        [](cplx z) {
          Vec v(1);
          v(0) = testing::quintic_fundamental(z);
          return v;
        },
        z0, 0.25 * std::abs(z0), 2);
    CHECK(std::abs(jet.coeff(unit_index(0))(0) - ref[1](0) * s) < 1e-10 * std::abs(ref[1](0) * s));
  }
  // near the origin the fundamental period is 1 + 120 z + 113400 z^2 + 168168000 z^3 + ...;
  // successive coefficients grow by less than 5^5, so the tail is geometric
  cplx w = f.model.jet({cplx(1e-5, 0)}, 0).value()(0);
  CHECK(std::abs(w - (1.0 + 120 * 1e-5 + 113400 * 1e-10 + 168168000 * 1e-15)) < 305540235000 * 1e-20 / (1 - 3125 * 1e-5));
}

TEST_CASE("derived flat pairing is antisymmetric and annihilates low derivatives", "[models][pf]") {
  for (const char* name : {"quintic.json", "quintic_integral.json"}) {
    auto f = load(name);
    const auto& q = f.model.polarization();
    CHECK(validate_polarization(q).passed());
    for (const auto& z : f.model.samples) {
      JetSection jet = f.model.jet(z, 3);
      Vec c0 = jet.value();
      double scale = c0.norm() * c0.norm();
      for (int k = 1; k <= 2; ++k) {
        MultiIndex a{};
        a[0] = static_cast<std::uint8_t>(k);
        CHECK(std::abs(q.Q(c0, jet.coeff(a))) < 1e-9 * scale);
      }
      CHECK(q.pair_bar(c0, c0).real() > 0);
    }
  }
}

TEST_CASE("jet evaluation rejects points it cannot serve", "[models][errors]") {
  auto q = load("quintic.json");
  const double rmax = q.model.picard_fuchs().r_max;
  CHECK(kind_of([&] { q.model.jet({cplx(0.9 * rmax, 0)}, 2); }) == ErrorKind::Convergence);
  auto a = load("model_a.json");
  CHECK(kind_of([&] { a.model.jet({cplx(0, 0)}, 2); }) == ErrorKind::Domain);
  CHECK(kind_of([&] { a.model.jet({cplx(1.2, 0)}, 2); }) == ErrorKind::Domain);
  CHECK(kind_of([&] { a.model.jet({cplx(0.1, 0), cplx(0.1, 0)}, 2); }) == ErrorKind::Input);
  CHECK(kind_of([&] { a.model.jet({cplx(0.1, 0)}, 5); }) == ErrorKind::Order);

  NilpotentOrbitModel flat = a.model.orbit();
  flat.n[0].setZero();
  VhsModel constant(flat);
  CHECK(kind_of([&] { compute_point(constant, {cplx(0.01, 0)}); }) == ErrorKind::Degeneracy);
}

TEST_CASE("model validation catches broken nilpotents", "[models][checklist]") {
  auto a = load("model_a.json");
  auto pts = a.model.samples;
  ValidationReport good = wp_geometry_checklist(a.model, pts);
  CHECK(good.passed());
  CHECK(good.find("axiom3 quasi-projective")->note.find("out of scope") != std::string::npos);
  CHECK(validate_orbit_model(a.model.orbit()).passed());

  NilpotentOrbitModel bad = a.model.orbit();
  bad.n[0](0, 3) = 0.1;  // closes the shift into a cycle: N^4 = 0.1 I
  ValidationReport rep = wp_geometry_checklist(VhsModel(bad), {{cplx(0.01, 0)}});
  const Check* ax4 = rep.find("axiom4 quasi-unipotent");
  REQUIRE(ax4);
  CHECK_FALSE(ax4->pass);
  CHECK(ax4->residual > 0.05);
  CHECK_FALSE(validate_orbit_model(bad).passed());
}

TEST_CASE("polarization parity and nondegeneracy", "[hodge]") {
  auto a = load("model_a.json");
  CHECK(validate_polarization(a.model.polarization()).passed());
  Mat sym = a.model.polarization().matrix().cwiseAbs().cast<cplx>();
  CHECK_FALSE(validate_polarization(PolarizationForm(sym, 3)).find("parity")->pass);
  Mat sing = Mat::Zero(4, 4);
  sing(0, 3) = 1;
  sing(3, 0) = -1;
  CHECK_FALSE(validate_polarization(PolarizationForm(sing, 3)).find("nondegenerate")->pass);
  CHECK(upper_level_min(3) == 2);
  CHECK(upper_level_min(4) == 3);
  CHECK(upper_level_min(1) == 1);
}

TEST_CASE("Hodge decompositions satisfy the Hodge-Riemann relations at every sample", "[hodge][property]") {
  for (const char* name : {"model_a.json", "model_c.json", "quintic.json", "quintic_integral.json", "cubic_m2.json"}) {
    auto f = load(name);
    const auto& q = f.model.polarization();
    const int n = q.weight(), d = q.dim();
    for (const auto& z : f.model.samples) {
      INFO(name << " at z1 = " << z[0]);
      JetSection jet = f.model.jet(z, n);
      HodgeDecompositionAt dec = decomposition_at(jet, q);
      CHECK(dec.total_dim() == d);
      CHECK(hodge_riemann_report(dec, q).passed());
      // symmetry of Hodge numbers
      for (int p = 0; p <= n; ++p) CHECK(dec.hodge_number(p) == dec.hodge_number(n - p));

      Mat sum = Mat::Zero(d, d);
      for (int p = 0; p <= n; ++p) {
        Mat pr = projector(dec, q, p);
        CHECK((pr * pr - pr).norm() < 1e-8 * std::max(1.0, pr.norm()));
        sum += pr;
      }
      CHECK((sum - Mat::Identity(d, d)).norm() < 1e-8);

      WeilOperator w = weil_operator(dec, q);
      CHECK((w.c * w.c - (n % 2 ? -1.0 : 1.0) * Mat::Identity(d, d)).norm() < 1e-7 * w.c.norm() * w.c.norm());
      // Q1(x, y) = y^H A x is a Hermitian inner product
      Mat herm = 0.5 * (w.q1_gram + w.q1_gram.adjoint());
      CHECK((w.q1_gram - herm).norm() < 1e-8 * w.q1_gram.norm());
      CHECK(min_hermitian_eigenvalue(herm) > 0);
      CHECK(transversality_residual(jet, dec, q) < 1e-8);
    }
  }
}

TEST_CASE("swapping Hodge blocks breaks the relations", "[hodge]") {
  auto f = load("model_a.json");
  const auto& q = f.model.polarization();
  HodgeDecompositionAt dec = decomposition_at(f.model.jet({cplx(0.01, 0.02)}, 3), q);
  HodgeDecompositionAt bad = dec.with_block(3, dec.block(2)).with_block(2, dec.block(3));
  CHECK_FALSE(hodge_riemann_report(bad, q).passed());
  HodgeDecompositionAt short_dec = dec.with_block(1, Mat(4, 0));
  CHECK_THROWS_AS(projector(short_dec, q, 3), Error);
}
