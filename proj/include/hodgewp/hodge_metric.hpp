#pragma once

// Hodge metric as the sum of Hilbert-Schmidt norms of the tangent action
// H^{p,q} -> H^{p-1,q+1} in Q1-orthonormal bases.

#include <string>
#include <vector>

#include "hodgewp/error.hpp"
#include "hodgewp/hodge_core.hpp"
#include "hodgewp/linalg.hpp"
#include "hodgewp/report.hpp"
#include "hodgewp/vhs_models.hpp"
#include "hodgewp/wp_geometry.hpp"

namespace hodgewp {

inline const char* kHodgeNormalization =
    "h^H(a, b) = sum_p tr(X_b|_p^* X_a|_p), Q1-orthonormal bases, no extra factor";

struct TangentAction {
  int direction = 0;
  // maps[p]: matrix of H^{p,n-p} -> H^{p-1,n-p+1} (rows: target basis, cols: source basis); maps[0] empty.
  std::vector<Mat> maps;
  double leak_residual = 0;  // relative component of d_a e outside F^{p-1} (upper levels)

  double block_norm2(int p) const { return maps[p].size() ? maps[p].squaredNorm() : 0.0; }
};

namespace detail {

// Q1-orthonormal basis of a block.
inline Mat q1_orthonormal(const Mat& v, const Mat& a) {
  if (v.cols() == 0) return v;
  Mat gram = v.adjoint() * a * v;
  Eigen::LLT<Mat> llt(hermitian_part(gram));
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::HodgeRiemann, "Q1 is not positive on a Hodge block");
  Mat lh = llt.matrixL().adjoint();
  return lh.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(v);
}

struct ActionContext {
  int n = 0;
  std::vector<Mat> u;     // Q1-orthonormal basis per block
  std::vector<Mat> proj;  // projectors per block
  Mat a;                  // Q1 Gram matrix
};

inline ActionContext action_context(const HodgeDecompositionAt& dec, const PolarizationForm& q,
                                    const Tolerances& tol) {
  ActionContext c;
  c.n = q.weight();
  WeilOperator w = weil_operator(dec, q, tol);
  c.a = w.q1_gram;
  for (int p = 0; p <= c.n; ++p) {
    c.u.push_back(q1_orthonormal(dec.block(p), c.a));
    c.proj.push_back(projector(dec, q, p, tol));
  }
  return c;
}

// Coefficients in the orthonormal basis of block p.
inline Mat coords(const ActionContext& c, int p, const Mat& x) { return c.u[p].adjoint() * c.a * x; }

}  // namespace detail

inline TangentAction tangent_action(const JetSection& jet, const HodgeDecompositionAt& dec, const PolarizationForm& q,
                                    int alpha, const Tolerances& tol = {}) {
  const int n = q.weight();
  const int m = jet.m();
  const int pmin = upper_level_min(n);
  require_order(jet, n - pmin + 1, "tangent action");
  if (alpha < 0 || alpha >= m) throw Error(ErrorKind::Input, "direction out of range");
  detail::ActionContext c = detail::action_context(dec, q, tol);
  TangentAction t;
  t.direction = alpha;
  t.maps.assign(n + 1, Mat());

  // Upper levels: write e = sum_a w_a c_a over |a| <= n-p and differentiate the holomorphic extension.
  std::vector<Mat> raw(n + 1);  // X e in ambient coordinates, projected to H^{p-1}
  for (int p = n; p >= pmin; --p) {
    std::vector<MultiIndex> idx;
    for (int deg = 0; deg <= n - p; ++deg)
      for (const auto& a : detail::indices_of_degree(m, deg)) idx.push_back(a);
    Mat span(q.dim(), idx.size());
    Mat dspan(q.dim(), idx.size());
    for (size_t k = 0; k < idx.size(); ++k) {
      span.col(k) = jet.coeff(idx[k]);
      MultiIndex b = idx[k];
      b[alpha] += 1;
      dspan.col(k) = static_cast<double>(b[alpha]) * jet.coeff(b);
    }
    const Mat& e = c.u[p];
    Mat w = span.completeOrthogonalDecomposition().solve(e);
    double fit = (span * w - e).norm() / std::max(e.norm(), 1e-300);
    if (fit > 1e-6) throw Error(ErrorKind::Degeneracy, "Hodge block not spanned by derivative frame");
    Mat de = dspan * w;
    Mat outside = de;
    for (int r = p - 1; r <= n; ++r) outside -= c.proj[r] * de;
    t.leak_residual = std::max(t.leak_residual, outside.norm() / std::max(de.norm(), 1e-300));
    raw[p] = c.proj[p - 1] * de;
    t.maps[p] = detail::coords(c, p - 1, raw[p]);
  }
  // Lower levels by Q(X a, b) = -Q(a, X b) for a in H^p, b in H^{n-p+1}.
  const Mat& qm = q.matrix();
  for (int p = pmin - 1; p >= 1; --p) {
    const Mat& ua = c.u[p];
    const Mat& ut = c.u[p - 1];
    const Mat& ub = c.u[n - p + 1];
    const Mat& xb = raw[n - p + 1];
    Mat s = ut.transpose() * qm * ub;
    Mat rhs = -(ua.transpose() * qm * xb).transpose();  // rhs(k, col) = -Q(a_col, X b_k)
    Mat y = s.transpose().partialPivLu().solve(rhs);
    raw[p] = ut * y;
    t.maps[p] = y;
  }
  return t;
}

inline MetricField hodge_metric_direct(const JetSection& jet, const HodgeDecompositionAt& dec,
                                       const PolarizationForm& q, const Tolerances& tol = {}) {
  const int m = jet.m();
  const int n = q.weight();
  std::vector<TangentAction> acts;
  for (int a = 0; a < m; ++a) acts.push_back(tangent_action(jet, dec, q, a, tol));
  Mat h = Mat::Zero(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int p = 1; p <= n; ++p) h(a, b) += (acts[b].maps[p].adjoint() * acts[a].maps[p]).trace();
  MetricField out{jet.z0, jet.scale, h, "hodge"};
  if (!(out.min_eigenvalue() > 0)) throw Error(ErrorKind::Degeneracy, "Hodge metric not positive definite");
  return out;
}

// Closed forms: (m+3) g + Ric for n = 3, 2(m+2) g + 2 Ric for n = 4.
inline Mat hodge_metric_closed_form(const Mat& g, const Mat& ric, int n) {
  const int m = static_cast<int>(g.rows());
  if (n == 3) return (m + 3.0) * g + ric;
  if (n == 4) return 2.0 * (m + 2.0) * g + 2.0 * ric;
  throw Error(ErrorKind::Domain, "closed-form Hodge metric only for n = 3, 4");
}

struct DominationPoint {
  Point z;
  double g_over_h = 0;      // largest generalized eigenvalue of g relative to h^H
  double ric_lo = 0, ric_hi = 0;  // generalized eigenvalue range of Ric relative to h^H
};

inline DominationPoint domination_point(const Mat& g, const Mat& hh, const Mat& ric, const Point& z) {
  Eigen::LLT<Mat> llt(hermitian_part(hh));
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::Degeneracy, "Hodge metric not positive definite");
  auto rel = [&](const Mat& x) {
    Mat l = llt.matrixL();
    Mat y = l.triangularView<Eigen::Lower>().solve(hermitian_part(x));
    Mat s = l.triangularView<Eigen::Lower>().solve(y.adjoint().eval());
    return hermitian_eigenvalues(s);
  };
  DominationPoint d;
  d.z = z;
  d.g_over_h = rel(g).maxCoeff();
  if (ric.size()) {
    RVec e = rel(ric);
    d.ric_lo = e.minCoeff();
    d.ric_hi = e.maxCoeff();
  }
  return d;
}

// Passes with the empirical constant C = sup g/h^H when C is finite and positive.
inline ValidationReport domination_report(const std::vector<DominationPoint>& pts) {
  ValidationReport rep;
  rep.subject = "WP domination by the Hodge metric";
  double c = 0, lo = INFINITY, hi = -INFINITY;
  for (const auto& p : pts) {
    c = std::max(c, p.g_over_h);
    lo = std::min(lo, p.ric_lo);
    hi = std::max(hi, p.ric_hi);
  }
  Check& k = rep.add("g <= C h^H", "WP metric bounded by the Hodge metric", c, INFINITY,
                     "residual is the empirical constant C");
  k.pass = std::isfinite(c) && c > 0;
  rep.add_flag("Ric range", "generalized eigenvalues of Ric relative to h^H", true,
               "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return rep;
}

}  // namespace hodgewp
