#pragma once

// Partial Hodge metric omega_mu = mu g + Ric(g), the third-order chain
// T = E + DDD, the curvature of omega_mu and the fourfold Yukawa coupling.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hodgewp/error.hpp"
#include "hodgewp/hodge_core.hpp"
#include "hodgewp/linalg.hpp"
#include "hodgewp/report.hpp"
#include "hodgewp/vhs_models.hpp"
#include "hodgewp/wp_geometry.hpp"

namespace hodgewp {

inline double default_mu(int m, int n) { return n == 4 ? m + 2.0 : m + 3.0; }

// h_{i jbar} = (mu - m - 1) g_{i jbar} + g^{a bbar} F_{i jbar a bbar}
inline MetricField ph_metric(const MetricField& g, const Tensor4& f, double mu) {
  const int m = g.m();
  if (!(mu > m + 1))
    throw Error(ErrorKind::Parameter, "mu = " + std::to_string(mu) + " must exceed m + 1 = " + std::to_string(m + 1));
  Mat ginv = upper_inverse(g.h);
  Mat h = (mu - m - 1) * g.h;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) h(i, j) += ginv(a, b) * f(i, j, a, b);
  MetricField out{g.z, g.scale, h, "partial-hodge"};
  double ev = out.min_eigenvalue();
  if (!(ev > 0))
    throw Error(ErrorKind::Degeneracy, "partial Hodge metric not positive definite (min eigenvalue " +
                                           std::to_string(ev) + ")");
  return out;
}

// Indexed [k][a][i].
using Tensor3Vec = std::vector<std::vector<std::vector<Vec>>>;

struct ThirdOrderChain {
  Tensor3Vec t;    // T_{k a i}
  Tensor3Vec e;    // component in H^{n-2,2}
  Tensor3Vec ddd;  // component in H^{n-3,3}
  double mu = 0;
  double lambda = 0;  // mu - m - 1
  // Largest relative H^{n,0} + H^{n-1,1} component, and asymmetry in (k, a, i).
  double low_residual = 0;
  double symmetry_residual = 0;
  double split_residual = 0;  // |T - E - DDD| relative, picks up components outside the two blocks

  int m() const { return static_cast<int>(t.size()); }
};

inline ThirdOrderChain third_order_chain(const CovariantFrame& frame, const HodgeDecompositionAt& dec,
                                         const PolarizationForm& q, double mu, const Tolerances& tol = {}) {
  const int n = q.weight();
  const int m = frame.m();
  if (n < 3) throw Error(ErrorKind::Domain, "third-order chain needs weight n >= 3");
  if (!frame.jets || frame.jets->dd.empty() || frame.jets->dd[0][0].order() < 1)
    throw Error(ErrorKind::Order, "third-order chain needs jet order 4");
  if (!(mu > m + 1)) throw Error(ErrorKind::Parameter, "mu must exceed m + 1");
  const auto& lj = *frame.jets;

  Mat p3 = projector(dec, q, n - 3, tol);
  Mat p2 = projector(dec, q, n - 2, tol);
  Mat low = projector(dec, q, n, tol) + projector(dec, q, n - 1, tol);

  ThirdOrderChain c;
  c.mu = mu;
  c.lambda = mu - m - 1;
  auto cube = [m] { return Tensor3Vec(m, std::vector<std::vector<Vec>>(m, std::vector<Vec>(m))); };
  c.t = cube();
  c.e = cube();
  c.ddd = cube();
  for (int k = 0; k < m; ++k)
    for (int a = 0; a < m; ++a)
      for (int i = 0; i < m; ++i) {
        Vec v = lj.dd[a][i].derivative(k).value() + frame.k[k] * frame.dd[a][i];
        for (int p = 0; p < m; ++p) v -= frame.gamma[p][a][k] * frame.dd[p][i] + frame.gamma[p][i][k] * frame.dd[a][p];
        c.t[k][a][i] = v;
        c.ddd[k][a][i] = p3 * v;
        c.e[k][a][i] = p2 * v;
        double nv = std::max(v.norm(), 1e-300);
        c.low_residual = std::max(c.low_residual, (low * v).norm() / nv);
        c.split_residual = std::max(c.split_residual, (v - c.ddd[k][a][i] - c.e[k][a][i]).norm() / nv);
      }
  for (int k = 0; k < m; ++k)
    for (int a = 0; a < m; ++a)
      for (int i = 0; i < m; ++i) {
        const Vec& v = c.t[k][a][i];
        double nv = std::max(v.norm(), 1e-300);
        c.symmetry_residual = std::max({c.symmetry_residual, (v - c.t[a][k][i]).norm() / nv,
                                        (v - c.t[k][i][a]).norm() / nv});
      }
  return c;
}

// Curvature of omega_mu, term by term.
inline CurvatureField ph_curvature(const ThirdOrderChain& chain, const CovariantFrame& frame, const Mat& g,
                                   const Mat& h, const Tensor4& f, const PolarizationForm& q) {
  const int m = frame.m();
  if (!(chain.mu > m + 1)) throw Error(ErrorKind::Parameter, "mu must exceed m + 1");
  if (condition_number(h) > 1e12) throw Error(ErrorKind::Degeneracy, "partial Hodge metric is singular");
  const double mu = chain.mu;
  const cplx p = frame.p;
  Mat gi = upper_inverse(g);
  Mat hi = upper_inverse(h);

  // (E_{k a i}, conj D_b D_t Omega) / P, indexed [k][a][i][b][t]
  auto ed = [&](int k, int a, int i, int b, int t) { return q.pair_bar(chain.e[k][a][i], frame.dd[b][t]) / p; };

  Tensor4 r(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          cplx v = (mu - m - 1) * (g(i, j) * g(k, l) + g(i, l) * g(k, j)) - (mu - m) * f(i, j, k, l);
          for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
              for (int pp = 0; pp < m; ++pp)
                for (int qq = 0; qq < m; ++qq)
                  v += gi(a, b) * gi(pp, qq) *
                       (f(i, qq, a, l) * f(pp, j, k, b) + f(a, qq, k, l) * f(i, j, pp, b));
              v += gi(a, b) * q.pair_bar(chain.ddd[k][a][i], chain.ddd[l][b][j]) / p;
              v += gi(a, b) * q.pair_bar(chain.e[k][a][i], chain.e[l][b][j]) / p;
            }
          for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
              for (int gm = 0; gm < m; ++gm)
                for (int tau = 0; tau < m; ++tau)
                  for (int s = 0; s < m; ++s)
                    for (int t = 0; t < m; ++t)
                      v -= hi(s, t) * gi(a, b) * gi(gm, tau) * ed(k, a, i, b, t) *
                           (q.pair_bar(frame.dd[gm][s], chain.e[l][tau][j]) / p);
          r(i, j, k, l) = v;
        }
  return {frame.z, frame.scale, r, "partial-hodge"};
}

// xi_{ijkl} = (Omega, d_i d_j d_k d_l Omega), with multiplicity-weighted jet coefficients.
inline Tensor4 yukawa4(const JetSection& jet, const PolarizationForm& q) {
  if (q.weight() != 4) throw Error(ErrorKind::Domain, "Yukawa coupling xi needs n = 4");
  require_order(jet, 4, "Yukawa coupling");
  const int m = jet.m();
  Vec om = jet.value();
  Tensor4 xi(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          MultiIndex a{};
          a[i]++, a[j]++, a[k]++, a[l]++;
          double fact = 1;
          for (int v = 0; v < m; ++v)
            for (int s = 2; s <= a[v]; ++s) fact *= s;
          xi(i, j, k, l) = q.pair(om, fact * jet.coeff(a));
        }
  return xi;
}

// Residuals of xi = (D_k D_l Omega, D_j D_i Omega) = -(D_j D_k D_l Omega, D_i Omega) and full symmetry.
inline ValidationReport yukawa4_report(const Tensor4& xi, const CovariantFrame& frame, const ThirdOrderChain& chain,
                                       const PolarizationForm& q, const Tolerances& tol = {}) {
  ValidationReport rep;
  rep.subject = "fourfold Yukawa";
  const int m = frame.m();
  double scale = std::max(xi.norm(), 1e-300);
  double r1 = 0, r2 = 0, sym = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          cplx x = xi(i, j, k, l);
          r1 = std::max(r1, std::abs(x - q.pair(frame.dd[l][k], frame.dd[i][j])));
          r2 = std::max(r2, std::abs(x + q.pair(chain.ddd[j][k][l], frame.d.col(i))));
          sym = std::max({sym, std::abs(x - xi(j, i, k, l)), std::abs(x - xi(i, k, j, l)), std::abs(x - xi(i, j, l, k))});
        }
  rep.add("xi = (DDOmega, DDOmega)", "xi_{ijkl} = (D_k D_l Omega, D_j D_i Omega)", r1 / scale, tol.residual);
  rep.add("xi = -(DDDOmega, DOmega)", "xi_{ijkl} = -(D_j D_k D_l Omega, D_i Omega)", r2 / scale, tol.residual);
  rep.add("xi symmetric", "xi fully symmetric", sym / scale, tol.residual);
  return rep;
}

struct FourfoldPointBound {
  Point z;
  double min_bisectional = 0;      // min R~_{i ibar k kbar} / (h_{i ibar} h_{k kbar}); >= 0 expected
  double sectional_excess = 0;     // max -R~_{i ibar i ibar}/h_{i ibar}^2 + 1/(m+4); <= 0 expected
  double scalar_curvature = 0;     // h^{i jbar} h^{k lbar} R~_{i jbar k lbar}
  double final_ratio = 0;          // max |R(X,Y,X,Y)| / ((1/2 + 9/8 |rho|) |X|^2 |Y|^2)
};

namespace detail {

// R~(x, conj y, z, conj w) for coefficient vectors.
inline cplx contract(const Tensor4& r, const Vec& x, const Vec& y, const Vec& z, const Vec& w) {
  const int m = r.dim();
  cplx s = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) s += r(i, j, k, l) * x(i) * std::conj(y(j)) * z(k) * std::conj(w(l));
  return s;
}

}  // namespace detail

// Pointwise bounds for omega_mu in the convention of kCurvatureConvention.  Real tangent
// vectors are X = x + conj x with |X|^2 = 2 h(x, conj x).
inline FourfoldPointBound fourfold_point_bound(const CurvatureField& rt, const MetricField& h, int pairs,
                                               std::uint64_t seed) {
  const int m = h.m();
  const Tensor4& r = rt.r;
  FourfoldPointBound b;
  b.z = h.z;
  b.min_bisectional = INFINITY;
  b.sectional_excess = -INFINITY;
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k)
      b.min_bisectional = std::min(b.min_bisectional, r(i, i, k, k).real() / (h.h(i, i).real() * h.h(k, k).real()));
  for (int i = 0; i < m; ++i)
    b.sectional_excess = std::max(b.sectional_excess, holomorphic_sectional(r, h.h, i) + 1.0 / (m + 4));
  Mat hi = upper_inverse(h.h);
  cplx rho = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) rho += hi(i, j) * hi(k, l) * r(i, j, k, l);
  b.scalar_curvature = rho.real();

  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  auto herm = [&](const Vec& x, const Vec& y) { return (y.adjoint() * h.h.transpose() * x)(0, 0); };
  const double bound = 0.5 + 9.0 / 8.0 * std::abs(b.scalar_curvature);
  b.final_ratio = 0;
  for (int s = 0; s < pairs; ++s) {
    Vec x(m), y(m);
    for (int i = 0; i < m; ++i) x(i) = cplx(nd(gen), nd(gen));
    for (int i = 0; i < m; ++i) y(i) = cplx(nd(gen), nd(gen));
    // Gram-Schmidt for the real inner product Re h(x, conj y)
    y -= (herm(y, x).real() / herm(x, x).real()) * x;
    double nx = 2 * herm(x, x).real();
    double ny = 2 * herm(y, y).real();
    if (ny < 1e-14 * nx) continue;
    double rxy = 2 * (detail::contract(r, x, y, x, y).real() - detail::contract(r, x, x, y, y).real());
    b.final_ratio = std::max(b.final_ratio, std::abs(rxy) / (bound * nx * ny));
  }
  return b;
}

inline constexpr std::uint64_t kDefaultSeed = 20240917ULL;

inline ValidationReport fourfold_report(const std::vector<FourfoldPointBound>& points, std::uint64_t seed) {
  ValidationReport rep;
  rep.subject = "fourfold bounds (seed " + std::to_string(seed) + "; " + kCurvatureConvention + ")";
  double bis = INFINITY, sec = -INFINITY, fin = 0;
  for (const auto& p : points) {
    bis = std::min(bis, p.min_bisectional);
    sec = std::max(sec, p.sectional_excess);
    fin = std::max(fin, p.final_ratio);
  }
  Check& c1 = rep.add("bisectional", "R~_{i ibar k kbar} >= 0", -bis, 1e-12,
                      "residual is minus the smallest normalized entry");
  c1.pass = bis >= -1e-12;
  rep.add("holomorphic sectional", "sectional curvature <= -1/(m+4)", sec, 1e-12,
          "residual is max of sectional + 1/(m+4)");
  rep.add("final bound", "|R(X,Y,X,Y)| <= (1/2 + 9/8 |rho|) |X|^2 |Y|^2", fin, 1.0,
          "residual is the worst ratio to the bound");
  return rep;
}

}  // namespace hodgewp
