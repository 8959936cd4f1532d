#pragma once

// Weil-Petersson metric, the covariant derivatives D_i Omega and D_j D_i Omega,
// the tensor F and the curvature and Ricci tensors.
//
// Everything is computed from jets in 2m variables (t, s): t for the holomorphic
// coordinates and s standing in for their conjugates, so that (Omega, conj Omega)
// and every quantity derived from it is a jet that can be differentiated in
// either group.

#include <memory>
#include <string>
#include <vector>

#include "hodgewp/error.hpp"
#include "hodgewp/hodge_core.hpp"
#include "hodgewp/linalg.hpp"
#include "hodgewp/vhs_models.hpp"

namespace hodgewp {

inline const char* kCurvatureConvention =
    "R_{i jbar k lbar} = d_k dbar_l g_{i jbar} - g^{p qbar} d_k g_{i qbar} dbar_l g_{p jbar}; "
    "nonpositive bisectional curvature means R_{i ibar k kbar} >= 0";

struct MetricField {
  Point z;
  std::vector<double> scale;  // metric entries are in the frame z = z0 + scale * t
  Mat h;
  std::string role;

  int m() const { return static_cast<int>(h.rows()); }
  double min_eigenvalue() const { return min_hermitian_eigenvalue(h); }
  // Entries with respect to the coordinates z.
  Mat in_z_coordinates() const {
    Mat out = h;
    for (int i = 0; i < m(); ++i)
      for (int j = 0; j < m(); ++j) out(i, j) /= scale[i] * scale[j];
    return out;
  }
};

struct CurvatureField {
  Point z;
  std::vector<double> scale;
  Tensor4 r;
  std::string role;
  std::string convention = kCurvatureConvention;
};

inline double kahler_symmetry_residual(const Tensor4& r) {
  const int m = r.dim();
  double worst = 0;
  double scale = std::max(r.norm(), 1e-300);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          cplx v = r(i, j, k, l);
          worst = std::max({worst, std::abs(v - r(k, j, i, l)), std::abs(v - r(i, l, k, j)),
                            std::abs(std::conj(v) - r(j, i, l, k))});
        }
  return worst / scale;
}

namespace detail {

// Jets of the whole covariant chain at one point.
struct LocalJets {
  int m = 0;
  int order = 0;
  VecJet omega;                             // holomorphic, in 2m variables
  Jet p;                                    // (Omega, conj Omega)
  Jet logp;
  std::vector<Jet> k;                       // K_i
  std::vector<std::vector<Jet>> g;          // g[i][j] = g_{i jbar}
  std::vector<std::vector<Jet>> ginv;       // ginv[a][b] = g^{a bbar}
  std::vector<std::vector<std::vector<Jet>>> gamma;  // gamma[k][i][j] = Gamma^k_{ij}
  std::vector<VecJet> d;                    // D_i Omega
  std::vector<std::vector<VecJet>> dd;      // dd[j][i] = D_j D_i Omega
};

// A constant section has no first-order part; every metric built from it is zero.
inline void require_nonconstant(const JetSection& jet) {
  if (jet.order() < 1) return;
  for (int i = 0; i < jet.m(); ++i)
    if (jet.coeff(unit_index(i)).norm() > 0) return;
  throw Error(ErrorKind::Degeneracy, "d Omega = 0 at the point: constant section, g = 0");
}

inline std::shared_ptr<LocalJets> build_local_jets(const JetSection& jet, const PolarizationForm& q,
                                                   int depth) {
  auto lj = std::make_shared<LocalJets>();
  const int m = jet.m();
  const int nv = 2 * m;
  lj->m = m;
  lj->order = jet.order();
  if (depth >= 1) require_nonconstant(jet);
  for (const auto& c : jet.omega.c) lj->omega.c.push_back(c.embedded(nv, 0));
  VecJet obar = lj->omega.conj_swapped();
  lj->p = q.pair(lj->omega, obar);
  cplx p0 = lj->p.value();
  if (!(p0.real() > 0) || std::abs(p0.imag()) > 1e-8 * std::abs(p0))
    throw Error(ErrorKind::HodgeRiemann, "(Omega, conj Omega) is not positive at the point");
  lj->logp = log(lj->p);
  if (depth < 1) return lj;

  for (int i = 0; i < m; ++i) lj->k.push_back(-lj->logp.derivative(i));
  for (int i = 0; i < m; ++i) lj->d.push_back(lj->omega.derivative(i) + lj->k[i] * lj->omega);
  if (depth < 2) return lj;

  lj->g.assign(m, {});
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) lj->g[i].push_back(-lj->logp.derivative(i).derivative(m + j));
  auto inv = invert(lj->g);
  lj->ginv.assign(m, std::vector<Jet>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) lj->ginv[a][b] = inv[b][a];
  if (depth < 3) return lj;

  lj->gamma.assign(m, std::vector<std::vector<Jet>>(m, std::vector<Jet>(m)));
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Jet acc = lj->ginv[k][0] * lj->g[i][0].derivative(j);
        for (int qq = 1; qq < m; ++qq) acc += lj->ginv[k][qq] * lj->g[i][qq].derivative(j);
        lj->gamma[k][i][j] = acc;
      }
  lj->dd.assign(m, std::vector<VecJet>(m));
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      VecJet v = lj->d[i].derivative(j) + lj->k[j] * lj->d[i];
      for (int k = 0; k < m; ++k) v -= lj->gamma[k][i][j] * lj->d[k];
      lj->dd[j][i] = v;
    }
  return lj;
}

}  // namespace detail

// Values of the covariant chain at a point, plus the jets that produced them.
struct CovariantFrame {
  Point z;
  std::vector<double> scale;
  int weight = 0;
  cplx p;                    // (Omega, conj Omega)
  Vec omega;
  std::vector<cplx> k;       // K_i
  Mat d;                     // column i is D_i Omega
  Mat g;                     // g_{i jbar}
  Mat ginv;                  // ginv(a, b) = g^{a bbar}
  std::vector<std::vector<std::vector<cplx>>> gamma;  // gamma[k][i][j]
  std::vector<std::vector<Vec>> dd;                   // dd[j][i] = D_j D_i Omega
  std::shared_ptr<const detail::LocalJets> jets;

  int m() const { return static_cast<int>(g.rows()); }
};

inline MetricField wp_metric(const JetSection& jet, const PolarizationForm& q) {
  require_order(jet, 1, "WP metric");
  detail::require_nonconstant(jet);
  const int m = jet.m();
  Vec om = jet.value();
  cplx p = q.pair_bar(om, om);
  if (!(p.real() > 0)) throw Error(ErrorKind::HodgeRiemann, "(Omega, conj Omega) <= 0");
  Mat g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Vec di = jet.coeff(unit_index(i));
      Vec dj = jet.coeff(unit_index(j));
      g(i, j) = -q.pair_bar(di, dj) / p + q.pair_bar(di, om) * q.pair_bar(om, dj) / (p * p);
    }
  MetricField out{jet.z0, jet.scale, g, "wp"};
  double ev = out.min_eigenvalue();
  if (!(ev > 1e-12 * std::max(g.norm(), 1e-300)))
    throw Error(ErrorKind::Degeneracy, "WP metric is not positive definite (min eigenvalue " +
                                           std::to_string(ev) + ")");
  return out;
}

// depth 3 gives Christoffel symbols and D_j D_i Omega (jet order >= 3).
inline CovariantFrame covariant_frame(const JetSection& jet, const PolarizationForm& q, int depth = 3) {
  require_order(jet, depth, "covariant frame");
  wp_metric(jet, q);
  auto lj = detail::build_local_jets(jet, q, depth);
  const int m = jet.m();
  const int d = jet.dim();
  CovariantFrame f;
  f.z = jet.z0;
  f.scale = jet.scale;
  f.weight = q.weight();
  f.p = lj->p.value();
  f.omega = jet.value();
  for (int i = 0; i < m; ++i) f.k.push_back(lj->k[i].value());
  f.d = Mat(d, m);
  for (int i = 0; i < m; ++i) f.d.col(i) = lj->d[i].value();
  if (depth >= 2) {
    f.g = Mat(m, m);
    f.ginv = Mat(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        f.g(i, j) = lj->g[i][j].value();
        f.ginv(i, j) = lj->ginv[i][j].value();
      }
  }
  if (depth >= 3) {
    f.gamma.assign(m, std::vector<std::vector<cplx>>(m, std::vector<cplx>(m)));
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) f.gamma[k][i][j] = lj->gamma[k][i][j].value();
    f.dd.assign(m, std::vector<Vec>(m));
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) f.dd[j][i] = lj->dd[j][i].value();
  }
  f.jets = lj;
  return f;
}

// Residuals of (D_i Omega, conj Omega) = 0, (D_j D_i Omega, conj Omega) = 0,
// (D_j D_i Omega, conj D_l Omega) = 0 and D_j D_i Omega = D_i D_j Omega.
inline ValidationReport frame_report(const CovariantFrame& f, const PolarizationForm& q,
                                     const Tolerances& tol = {}) {
  ValidationReport rep;
  rep.subject = "covariant frame";
  const int m = f.m();
  double r1 = 0, r2 = 0, r3 = 0, sym = 0;
  for (int i = 0; i < m; ++i) {
    Vec di = f.d.col(i);
    r1 = std::max(r1, std::abs(q.pair_bar(di, f.omega)) / (di.norm() * f.omega.norm()));
    for (int j = 0; j < m && !f.dd.empty(); ++j) {
      const Vec& x = f.dd[j][i];
      double nx = std::max(x.norm(), 1e-300);
      r2 = std::max(r2, std::abs(q.pair_bar(x, f.omega)) / (nx * f.omega.norm()));
      for (int l = 0; l < m; ++l)
        r3 = std::max(r3, std::abs(q.pair_bar(x, f.d.col(l))) / (nx * f.d.col(l).norm()));
      sym = std::max(sym, (x - f.dd[i][j]).norm() / nx);
    }
  }
  rep.add("DOmega-orthogonal", "(D_i Omega, conj Omega) = 0", r1, tol.residual);
  if (!f.dd.empty()) {
    rep.add("DDOmega-orthogonal-Omega", "(D_j D_i Omega, conj Omega) = 0", r2, tol.residual);
    rep.add("DDOmega-orthogonal-DOmega", "(D_j D_i Omega, conj D_l Omega) = 0", r3, tol.residual);
    rep.add("DDOmega-symmetric", "D_j D_i Omega = D_i D_j Omega", sym, tol.residual);
  }
  return rep;
}

// F_{i jbar k lbar} = (D_k D_i Omega, conj D_l D_j Omega) / (Omega, conj Omega)
inline Tensor4 f_tensor(const CovariantFrame& f, const PolarizationForm& q) {
  if (f.dd.empty()) throw Error(ErrorKind::Order, "F tensor needs second covariant derivatives");
  const int m = f.m();
  Tensor4 t(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) t(i, j, k, l) = q.pair_bar(f.dd[k][i], f.dd[l][j]) / f.p;
  return t;
}

inline CurvatureField wp_curvature(const CovariantFrame& f, const Tensor4& ft, const Mat& g) {
  const int m = static_cast<int>(g.rows());
  Tensor4 r(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) r(i, j, k, l) = g(i, j) * g(k, l) + g(i, l) * g(k, j) - ft(i, j, k, l);
  return {f.z, f.scale, r, "wp"};
}

// R_{i jbar} = -g^{k lbar} R_{i jbar k lbar}
inline MetricField wp_ricci(const CurvatureField& r, const MetricField& g) {
  const int m = g.m();
  Mat ginv = upper_inverse(g.h);
  Mat ric = Mat::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) ric(i, j) -= ginv(k, l) * r.r(i, j, k, l);
  return {g.z, g.scale, ric, "ricci"};
}

// -(m+1) g + g^{k lbar} F_{i jbar k lbar}
inline Mat ricci_from_f(const Tensor4& ft, const Mat& g) {
  const int m = static_cast<int>(g.rows());
  Mat ginv = upper_inverse(g);
  Mat ric = -static_cast<double>(m + 1) * g;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) ric(i, j) += ginv(k, l) * ft(i, j, k, l);
  return ric;
}

// Holomorphic sectional curvature of a Kaehler metric along e_i, in the usual sign:
// -R_{i ibar i ibar} / h_{i ibar}^2.
inline double holomorphic_sectional(const Tensor4& r, const Mat& h, int i) {
  return -r(i, i, i, i).real() / std::norm(h(i, i));
}

}  // namespace hodgewp
