#pragma once

// One-variable degenerations: the F_111 / F_1111 chain and scalar curvature of the
// Hodge metric, weight polynomials, leading WP asymptotics, truncation bounds and
// the Case 1 / Case 2 classification.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hodgewp/error.hpp"
#include "hodgewp/hodge_core.hpp"
#include "hodgewp/linalg.hpp"
#include "hodgewp/report.hpp"
#include "hodgewp/vhs_models.hpp"
#include "hodgewp/wp_geometry.hpp"

namespace hodgewp {

// Values in the coordinate z (not the local frame).
struct YukawaChain1D {
  cplx z;
  double potential = 0;  // K = -log (Omega, conj Omega)
  double lambda = 0;
  cplx gamma;            // Gamma^1_11
  cplx k1;               // K_1
  cplx f111;
  cplx f1111;
  double a = 0;
  double h = 0;
  double rt = 0;  // R~_{1 1bar 1 1bar}
  double rho = 0;
  // arguments of the two-fraction form
  double x = 0, y = 0;
};

inline double rho_two_fraction(double x, double y) {
  return -(4 - 4 * x + 2 * x * x) / ((2 + x) * (2 + x)) - 2 * y / ((2 + x) * (2 + x) * (2 + x));
}

inline YukawaChain1D yukawa_chain(const JetSection& jet, const PolarizationForm& q) {
  if (q.weight() != 3 || jet.m() != 1) throw Error(ErrorKind::Domain, "Yukawa chain needs n = 3 and m = 1");
  require_order(jet, 4, "Yukawa chain");
  CovariantFrame fr = covariant_frame(jet, q);
  const double s = jet.scale[0];
  Vec c0 = jet.value(), c1 = jet.coeff(unit_index(0));
  MultiIndex i3{}, i4{};
  i3[0] = 3;
  i4[0] = 4;
  Vec c3 = jet.coeff(i3), c4 = jet.coeff(i4);
  // local frame t
  cplx f111 = q.pair(c0, 6.0 * c3);
  cplx df111 = q.pair(c0, 24.0 * c4) + q.pair(c1, 6.0 * c3);
  const double lam = fr.g(0, 0).real();
  const cplx gam = fr.gamma[0][0][0];
  const cplx k1 = fr.k[0];
  cplx f1111 = df111 - 3.0 * gam * f111 + 2.0 * k1 * f111;
  const double p = fr.p.real();
  const double e2k = 1.0 / (p * p);

  YukawaChain1D c;
  c.z = jet.z0[0];
  c.potential = -std::log(p);
  c.a = e2k * std::norm(f111) / (lam * lam);
  c.h = 2 * lam + c.a;
  c.rt = 4 * lam * lam - 4 * lam * c.a + 2 * c.a * c.a + 2 * e2k * std::norm(f1111) / (lam * c.h);
  c.rho = -c.rt / (c.h * c.h);
  c.x = e2k * std::norm(f111) / (lam * lam * lam);
  c.y = e2k * std::norm(f1111) / (lam * lam * lam * lam);
  // back to the coordinate z
  c.lambda = lam / (s * s);
  c.gamma = gam / s;
  c.k1 = k1 / s;
  c.f111 = f111 / (s * s * s);
  c.f1111 = f1111 / (s * s * s * s);
  c.a /= s * s;
  c.h /= s * s;
  c.rt /= s * s * s * s;
  return c;
}

// Omega(z) = exp((i/2pi) N log(1/z)) A(z) with A(z) = sum_k a_k z^k, i.e.
// Omega = sum A_{k,l} z^k (log 1/z)^l with A_{k,l} = (i/2pi)^l / l! N^l a_k.
struct BoundaryModel1D {
  std::string name;
  PolarizationForm q;
  Mat n;
  std::vector<Vec> a;  // a[k]
  double delta = 1.0;  // convergence radius of A
  std::string variable = "z";

  int weight() const { return q.weight(); }
  int dim() const { return q.dim(); }
  Vec a0() const { return a.empty() ? Vec::Zero(dim()) : a[0]; }
  double degree(int k, int l) const { return k - static_cast<double>(l) / (weight() + 1); }

  std::map<std::pair<int, int>, Vec> coefficients() const {
    std::map<std::pair<int, int>, Vec> out;
    for (size_t k = 0; k < a.size(); ++k) {
      Vec v = a[k];
      cplx f = 1;
      for (int l = 0; l <= weight(); ++l) {
        if (v.norm() > 0) out[{static_cast<int>(k), l}] = f * v;
        v = n * v;
        f *= kI / (2 * kPi) / static_cast<double>(l + 1);
      }
    }
    return out;
  }

  NilpotentOrbitModel as_orbit() const {
    NilpotentOrbitModel m;
    m.name = name;
    m.q = q;
    m.n = {n};
    for (size_t k = 0; k < a.size(); ++k)
      if (a[k].norm() > 0) m.a[{static_cast<int>(k)}] = a[k];
    m.radius = delta;
    return m;
  }
};

inline BoundaryModel1D boundary_model(const NilpotentOrbitModel& m) {
  if (m.m() != 1) throw Error(ErrorKind::Domain, "boundary model needs one variable");
  BoundaryModel1D b;
  b.name = m.name;
  b.q = m.q;
  b.n = m.n[0];
  b.delta = m.radius;
  int kmax = 0;
  for (const auto& [idx, v] : m.a) kmax = std::max(kmax, idx[0]);
  b.a.assign(kmax + 1, Vec::Zero(m.dim()));
  for (const auto& [idx, v] : m.a) b.a[idx[0]] = v;
  return b;
}

// Picard-Fuchs model in the variable x = z / r_max (radius 1).
inline BoundaryModel1D boundary_model(const PicardFuchsModel& pf, const PolarizationForm& q, int terms = 80) {
  detail::FrobeniusSeries series(pf);
  const int d = pf.order;
  BoundaryModel1D b;
  b.name = pf.name;
  b.q = q;
  b.n = pf.monodromy_log();
  b.delta = 1.0;
  b.variable = "z/r_max";
  Mat shift = b.n / (2.0 * kPi * kI);
  // exp(log(r_max) shift)
  Mat e = Mat::Identity(d, d), term = Mat::Identity(d, d);
  const double c = std::log(pf.r_max);
  for (int k = 1; k <= d; ++k) {
    term = term * shift * (c / k);
    e += term;
  }
  Mat lift = e * pf.basis_matrix();
  for (int k = 0; k < terms; ++k) {
    Vec s(d);
    for (int j = 0; j < d; ++j) s(j) = series.coefficient(k)[j];
    b.a.push_back(lift * s);
  }
  return b;
}

inline BoundaryModel1D boundary_model(const VhsModel& m, int terms = 80) {
  if (m.is_orbit()) {
    auto b = boundary_model(m.orbit());
    b.name = m.name;
    return b;
  }
  auto b = boundary_model(m.picard_fuchs(), m.polarization(), terms);
  b.name = m.name;
  return b;
}

struct WeightPolynomial {
  std::vector<double> coeffs;  // coefficient of u^j
  double imag_residual = 0;
  int degree = 0;
};

inline WeightPolynomial weight_polynomial(const BoundaryModel1D& b, double rel_tol = 1e-10) {
  const int n = b.weight();
  std::vector<Vec> nk{b.a0()};
  for (int j = 1; j <= n; ++j) nk.push_back(b.n * nk.back());
  std::vector<cplx> c(2 * n + 1, cplx{});
  double fj = 1;
  for (int j = 0; j <= n; ++j) {
    if (j > 0) fj *= j;
    double fk = 1;
    for (int k = 0; k <= n; ++k) {
      if (k > 0) fk *= k;
      cplx coef = b.q.phase() * std::pow(kI / (2 * kPi), j) * std::pow(-kI / (2 * kPi), k) / (fj * fk);
      c[j + k] += coef * b.q.Q(nk[j], nk[k].conjugate());
    }
  }
  WeightPolynomial w;
  double mag = 0;
  for (auto x : c) mag = std::max(mag, std::abs(x));
  for (size_t j = 0; j < c.size(); ++j) {
    w.coeffs.push_back(c[j].real());
    w.imag_residual = std::max(w.imag_residual, std::abs(c[j].imag()) / std::max(mag, 1e-300));
    if (std::abs(c[j]) > rel_tol * mag) w.degree = static_cast<int>(j);
  }
  w.coeffs.resize(w.degree + 1);
  return w;
}

struct CompletenessResult {
  bool complete = false;
  double ratio = 0;  // |N A0| / |A0|
  ValidationReport report;
};

inline CompletenessResult completeness_test(const BoundaryModel1D& b, double tol = 1e-10) {
  CompletenessResult r;
  double a0 = b.a0().norm();
  r.ratio = a0 > 0 ? (b.n * b.a0()).norm() / a0 : 0.0;
  r.complete = r.ratio > tol;
  r.report.subject = "completeness " + b.name;
  r.report.add_flag("N A0 != 0", "Hodge-complete at the puncture", r.complete,
                    "|N A0| / |A0| = " + std::to_string(r.ratio));
  return r;
}

struct LeadingResult {
  int l = 0;
  double limit = 0;                 // l / 4
  std::vector<double> u;            // log 1/r along the ray
  std::vector<double> scaled;       // lambda r^2 u^2
  double deviation = 0;             // at the largest u
  bool monotone = true;             // deviation non-increasing along the ray
};

// lambda r^2 (log 1/r)^2 -> l/4 along z = e^{-u} e^{i angle}.
inline LeadingResult wp_leading(const VhsModel& model, const BoundaryModel1D& b, const std::vector<double>& us,
                                double angle = 0.0) {
  if (!completeness_test(b).complete)
    throw Error(ErrorKind::Domain, "N A0 = 0: leading term is not logarithmic (use the boundary classifier)");
  if (model.m() != 1) throw Error(ErrorKind::Domain, "wp_leading needs m = 1");
  LeadingResult r;
  r.l = weight_polynomial(b).degree;
  r.limit = r.l / 4.0;
  double prev = INFINITY;
  for (double u : us) {
    cplx z = std::polar(std::exp(-u), angle);
    JetSection jet = model.jet({z}, 1);
    double s = jet.scale[0];
    Mat g = wp_metric(jet, model.polarization()).h;
    // lambda_z r^2 = lambda_t r^2 / s^2 with s = r
    double lam = g(0, 0).real() * std::norm(z) / (s * s);
    r.u.push_back(u);
    r.scaled.push_back(lam * u * u);
    double dev = std::abs(lam * u * u - r.limit);
    if (dev > prev * (1 + 1e-9) + 1e-14) r.monotone = false;
    prev = dev;
    r.deviation = dev;
  }
  return r;
}

struct TruncationResult {
  int k0 = 0, l0 = 0;
  double coefficient_scale = 0;  // max |A_{k,l}| (delta/4)^{k+1}
  double c = 0;
  double bound = 0;
  double empirical = 0;
  bool pass = false;
};

namespace detail {

// d^j/dz^j applied to a map (k, l) -> coefficient of z^k L^l (L = log 1/z); powers may go negative.
inline std::map<std::pair<int, int>, Vec> differentiate(const std::map<std::pair<int, int>, Vec>& t) {
  std::map<std::pair<int, int>, Vec> out;
  auto add = [&](int k, int l, const Vec& v) {
    auto it = out.find({k, l});
    if (it == out.end()) out.emplace(std::make_pair(k, l), v);
    else it->second += v;
  };
  for (const auto& [kl, v] : t) {
    auto [k, l] = kl;
    if (k != 0) add(k - 1, l, static_cast<double>(k) * v);
    if (l != 0) add(k - 1, l - 1, -static_cast<double>(l) * v);
  }
  return out;
}

inline Vec evaluate(const std::map<std::pair<int, int>, Vec>& t, cplx z, int dim) {
  Vec s = Vec::Zero(dim);
  cplx lz = -std::log(z);
  for (const auto& [kl, v] : t) s += std::pow(z, kl.first) * std::pow(lz, kl.second) * v;
  return s;
}

inline double sup_power_log(double r, int a, int b) {
  // sup over 0 < rho <= r of rho^a (log 1/rho)^b, with a >= 0
  auto f = [&](double x) { return std::pow(x, a) * std::pow(std::log(1 / x), b); };
  if (a == 0) return b <= 0 ? f(r) : INFINITY;
  if (b <= 0) return f(r);
  double crit = std::exp(-static_cast<double>(b) / a);
  return crit < r ? f(crit) : f(r);
}

}  // namespace detail

inline TruncationResult truncation_bound(const BoundaryModel1D& b, double mu, int s, double r) {
  if (!(r > 0 && r < b.delta / 4))
    throw Error(ErrorKind::Domain, "r must lie in (0, delta/4) = (0, " + std::to_string(b.delta / 4) + ")");
  if (s < 0) throw Error(ErrorKind::Parameter, "derivative order s must be nonnegative");
  const int n = b.weight();
  TruncationResult t;
  // minimal degree above mu
  double best = INFINITY;
  for (int k = 0; k <= static_cast<int>(std::ceil(mu)) + 2; ++k)
    for (int l = 0; l <= n; ++l) {
      double dg = b.degree(k, l);
      if (dg > mu && dg < best) {
        best = dg;
        t.k0 = k;
        t.l0 = l;
      }
    }
  auto coeffs = b.coefficients();
  const double q = b.delta / 4;
  for (const auto& [kl, v] : coeffs)
    t.coefficient_scale = std::max(t.coefficient_scale, v.norm() * std::pow(q, kl.first + 1));

  std::map<std::pair<int, int>, Vec> tail;
  for (const auto& [kl, v] : coeffs)
    if (b.degree(kl.first, kl.second) > mu) tail.emplace(kl, v);
  // C sums the coefficient bound over all tail pairs, including those beyond the stored order.
  const int kmax = std::max<int>(static_cast<int>(b.a.size()), t.k0 + 1) + 200;
  double c = 0;
  for (int k = t.k0; k <= kmax; ++k)
    for (int l = 0; l <= n; ++l) {
      if (!(b.degree(k, l) > mu)) continue;
      double term = std::pow(q, -k - 1) * std::pow(std::max(1, k + l), s) *
                    detail::sup_power_log(r, k - t.k0, l - t.l0);
      c += term;
    }
  t.c = t.coefficient_scale * c;
  t.bound = t.c * std::pow(r, t.k0 - s) * std::pow(std::log(1 / r), t.l0);
  auto cur = tail;
  for (int j = 0; j <= s; ++j) {
    t.empirical = std::max(t.empirical, detail::evaluate(cur, cplx(r, 0), b.dim()).norm());
    cur = detail::differentiate(cur);
  }
  t.pass = t.empirical <= t.bound;
  return t;
}

struct Classification {
  enum Kind { Case1, Case2, Inconclusive } kind = Inconclusive;
  int k = 0;
  int l = 0;
  bool degenerate = false;      // no logarithmic term at all
  bool no_pure_terms = true;    // no z^{2k} or zbar^{2k} logarithmic terms
  double rotation_residual = 0; // spread of f(r e^{i theta}) / r^{2k} over theta
  double leading = 0;           // f / r^{2k} on the positive axis
  std::string note;
};

// Case 1 iff N A0 != 0.  Otherwise expands (Omega, conj Omega) = sum c_{a,b}(L, Lbar) z^a zbar^b
// and reads off the lowest mixed term with logarithmic dependence.
inline Classification boundary_classifier(const BoundaryModel1D& b, int max_order = 4) {
  Classification c;
  if (completeness_test(b).complete) {
    c.kind = Classification::Case1;
    c.l = weight_polynomial(b).degree;
    return c;
  }
  const int n = b.weight();
  const int kk = std::min<int>(max_order, static_cast<int>(b.a.size()) - 1);
  // lifted[k][j] = (i/2pi)^j / j! N^j a_k
  std::vector<std::vector<Vec>> lifted(kk + 1);
  for (int k = 0; k <= kk; ++k) {
    Vec v = b.a[k];
    cplx f = 1;
    for (int j = 0; j <= n; ++j) {
      lifted[k].push_back(f * v);
      v = b.n * v;
      f *= kI / (2 * kPi) / static_cast<double>(j + 1);
    }
  }
  // coefficient grid of L^j Lbar^j' for z^a zbar^b
  auto grid = [&](int a, int bb) {
    std::vector<std::vector<cplx>> g(n + 1, std::vector<cplx>(n + 1));
    for (int j = 0; j <= n; ++j)
      for (int jp = 0; jp <= n; ++jp) g[j][jp] = b.q.phase() * b.q.Q(lifted[a][j], lifted[bb][jp].conjugate());
    return g;
  };
  double scale = std::abs(grid(0, 0)[0][0]);
  if (scale == 0) scale = b.a[0].squaredNorm();
  if (scale == 0) {
    c.note = "A0 = 0";
    return c;
  }
  auto log_part = [&](const std::vector<std::vector<cplx>>& g, int* l) {
    double m = 0;
    *l = 0;
    for (int j = 0; j <= n; ++j)
      for (int jp = 0; jp <= n; ++jp)
        if (j + jp > 0 && std::abs(g[j][jp]) > 1e-12 * scale) {
          m = std::max(m, std::abs(g[j][jp]));
          *l = std::max(*l, j + jp);
        }
    return m;
  };
  for (int a = 1; a <= kk; ++a) {
    int l = 0;
    if (log_part(grid(a, 0), &l) > 0 || log_part(grid(0, a), &l) > 0) c.no_pure_terms = false;
  }
  for (int tot = 2; tot <= 2 * kk; ++tot) {
    int found_l = -1;
    for (int a = 1; a < tot; ++a) {
      int bb = tot - a;
      if (a > kk || bb > kk) continue;
      int l = 0;
      if (log_part(grid(a, bb), &l) > 0) found_l = std::max(found_l, l);
    }
    if (found_l < 0) continue;
    c.kind = Classification::Case2;
    c.l = found_l;
    if (tot % 2 != 0) {
      c.note = "leading mixed degree is odd";
      c.kind = Classification::Inconclusive;
      return c;
    }
    c.k = tot / 2;
    // f(z, zbar): coefficient of u^l, sampled in theta at radius r
    auto f_at = [&](double r, double theta) {
      cplx z = std::polar(r, theta);
      cplx s = 0;
      for (int a = 1; a < tot; ++a) {
        int bb = tot - a;
        if (a > kk || bb > kk) continue;
        auto g = grid(a, bb);
        // coefficient of u^l in (u - i theta)^j (u + i theta)^j' with j + j' = l is the leading 1
        for (int j = 0; j <= n; ++j)
          if (c.l - j >= 0 && c.l - j <= n) s += g[j][c.l - j] * std::pow(z, a) * std::pow(std::conj(z), bb);
      }
      return s / scale;
    };
    const double r = 0.1 * std::min(1.0, b.delta);
    cplx f0 = f_at(r, 0.0);
    c.leading = f0.real() / std::pow(r, 2 * c.k);
    for (int t = 1; t < 16; ++t) {
      cplx ft = f_at(r, 2 * kPi * t / 16);
      c.rotation_residual = std::max(c.rotation_residual, std::abs(ft - f0) / std::max(std::abs(f0), 1e-300));
    }
    c.note = "f = c r^" + std::to_string(2 * c.k);
    return c;
  }
  c.kind = Classification::Case2;
  c.degenerate = true;
  c.l = 0;
  c.note = "no logarithmic terms through order " + std::to_string(kk);
  return c;
}

struct BoundednessScan {
  bool refused = false;
  std::string reason;
  std::vector<double> r;
  std::vector<double> rho;
  double sup_abs = 0;
  double trend = 0;  // sup |rho| over the last quarter / over the first quarter
  bool pass = false;
};

inline BoundednessScan curvature_boundedness_scan(const VhsModel& model, const BoundaryModel1D& b, double r0,
                                                  int count = 40, double angle = 0.0) {
  BoundednessScan s;
  if (model.weight() != 3 || model.m() != 1) {
    s.refused = true;
    s.reason = "hypothesis unmet: needs n = 3 and m = 1 (n = " + std::to_string(model.weight()) + ")";
    return s;
  }
  auto cls = boundary_classifier(b);
  bool complete = cls.kind == Classification::Case1 || (cls.kind == Classification::Case2 && cls.l >= 1);
  if (!complete) {
    s.refused = true;
    s.reason = "hypothesis unmet: not Hodge-complete at the puncture";
    return s;
  }
  for (int j = 0; j <= count; ++j) {
    double r = r0 * std::pow(2.0, -j);
    JetSection jet = model.jet({std::polar(r, angle)}, 4);
    YukawaChain1D y = yukawa_chain(jet, model.polarization());
    s.r.push_back(r);
    s.rho.push_back(y.rho);
    s.sup_abs = std::max(s.sup_abs, std::abs(y.rho));
  }
  const size_t qn = std::max<size_t>(1, s.rho.size() / 4);
  double first = 0, last = 0;
  for (size_t i = 0; i < qn; ++i) {
    first = std::max(first, std::abs(s.rho[i]));
    last = std::max(last, std::abs(s.rho[s.rho.size() - 1 - i]));
  }
  s.trend = last / std::max(first, 1e-300);
  s.pass = std::isfinite(s.sup_abs) && s.trend < 4.0;
  return s;
}

}  // namespace hodgewp
