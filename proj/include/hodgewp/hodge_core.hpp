#pragma once

// Polarized Hodge structures on an ambient C^d: the form Q, the pairing
// (x, y) = i^n Q(x, y), Hodge decompositions, the Weil operator and Q1.

#include <string>
#include <vector>

#include "hodgewp/error.hpp"
#include "hodgewp/linalg.hpp"
#include "hodgewp/report.hpp"

namespace hodgewp {

class PolarizationForm {
 public:
  PolarizationForm() = default;
  PolarizationForm(Mat q, int weight) : q_(std::move(q)), n_(weight) {
    if (q_.rows() == 0 || q_.rows() != q_.cols())
      throw Error(ErrorKind::Input, "polarization must be a nonempty square matrix");
    if (n_ < 1) throw Error(ErrorKind::Input, "weight must be positive");
  }

  int dim() const { return static_cast<int>(q_.rows()); }
  int weight() const { return n_; }
  const Mat& matrix() const { return q_; }
  cplx phase() const { return ipow(n_); }

  cplx Q(const Vec& x, const Vec& y) const { return x.transpose() * q_ * y; }
  // (x, y) = i^n Q(x, y); no conjugation.
  cplx pair(const Vec& x, const Vec& y) const { return phase() * Q(x, y); }
  // (x, conj y)
  cplx pair_bar(const Vec& x, const Vec& y) const { return pair(x, y.conjugate()); }

  Jet pair(const VecJet& x, const VecJet& y) const {
    Jet r = bilinear(x, q_, y);
    return r *= phase();
  }

  PolarizationForm scaled(cplx s) const { return PolarizationForm(s * q_, n_); }

 private:
  Mat q_;
  int n_ = 0;
};

inline ValidationReport validate_polarization(const PolarizationForm& q, const Tolerances& tol = {}) {
  ValidationReport rep;
  rep.subject = "polarization";
  if (q.dim() < 2) throw Error(ErrorKind::Input, "polarization needs d >= 2");
  const Mat& m = q.matrix();
  const double sign = q.weight() % 2 == 0 ? 1.0 : -1.0;
  double scale = std::max(m.norm(), 1e-300);
  rep.add("parity", "Q^T = (-1)^n Q", (m.transpose() - sign * m).norm() / scale, tol.residual);
  double cond = condition_number(m);
  rep.add("nondegenerate", "Q nondegenerate", cond, 1.0 / tol.rank,
          "residual is the condition number");
  return rep;
}

// Bases of H^{p,n-p} stored by p; column vectors in C^d.
class HodgeDecompositionAt {
 public:
  HodgeDecompositionAt() = default;
  HodgeDecompositionAt(std::vector<cplx> z, int weight, std::vector<Mat> blocks)
      : z_(std::move(z)), n_(weight), blocks_(std::move(blocks)) {
    if (static_cast<int>(blocks_.size()) != n_ + 1)
      throw Error(ErrorKind::Input, "decomposition needs n+1 blocks");
  }

  const std::vector<cplx>& point() const { return z_; }
  int weight() const { return n_; }
  int ambient_dim() const {
    for (const auto& b : blocks_)
      if (b.rows() > 0) return static_cast<int>(b.rows());
    return 0;
  }
  int hodge_number(int p) const { return static_cast<int>(blocks_.at(p).cols()); }
  std::vector<int> hodge_numbers() const {
    std::vector<int> h;
    for (int p = n_; p >= 0; --p) h.push_back(hodge_number(p));
    return h;
  }
  int total_dim() const {
    int s = 0;
    for (const auto& b : blocks_) s += static_cast<int>(b.cols());
    return s;
  }
  const Mat& block(int p) const { return blocks_.at(p); }

  // F^p = sum over r >= p of H^{r, n-r}
  Mat filtration(int p) const {
    const int d = ambient_dim();
    int cols = 0;
    for (int r = std::max(p, 0); r <= n_; ++r) cols += hodge_number(r);
    Mat f(d, cols);
    int c = 0;
    for (int r = n_; r >= std::max(p, 0); --r) {
      f.middleCols(c, hodge_number(r)) = blocks_[r];
      c += hodge_number(r);
    }
    return f;
  }

  HodgeDecompositionAt with_block(int p, Mat b) const {
    HodgeDecompositionAt out = *this;
    out.blocks_.at(p) = std::move(b);
    return out;
  }

 private:
  std::vector<cplx> z_;
  int n_ = 0;
  std::vector<Mat> blocks_;
};

namespace detail {

inline void check_dims(const HodgeDecompositionAt& dec, const PolarizationForm& q) {
  if (dec.total_dim() != q.dim() || dec.ambient_dim() != q.dim())
    throw Error(ErrorKind::Input, "decomposition dimensions " + std::to_string(dec.total_dim()) +
                                      " do not match d = " + std::to_string(q.dim()));
  if (dec.weight() != q.weight()) throw Error(ErrorKind::Input, "decomposition weight differs from Q");
}

// Hermitian form H_p(x, y) = i^{p-q} x^T Q conj(y) restricted to a block basis: entry (a, b).
inline Mat block_gram(const Mat& v, const PolarizationForm& q, int p) {
  const int n = q.weight();
  return ipow(p - (n - p)) * (v.transpose() * q.matrix() * v.conjugate());
}

}  // namespace detail

// Q1-orthogonal projector onto H^{p, n-p}, as a d x d matrix.
inline Mat projector(const HodgeDecompositionAt& dec, const PolarizationForm& q, int p,
                     const Tolerances& tol = {}) {
  detail::check_dims(dec, q);
  const Mat& v = dec.block(p);
  const int d = q.dim();
  if (v.cols() == 0) return Mat::Zero(d, d);
  // coefficients c of v solve (V^H Q^T V) c = V^H Q^T x
  Mat w = v.adjoint() * q.matrix().transpose();
  Mat g = w * v;
  double cond = condition_number(g);
  if (!(cond < 1.0 / tol.rank))
    throw Error(ErrorKind::Singularity,
                "Gram matrix of H^{" + std::to_string(p) + "," + std::to_string(q.weight() - p) +
                    "} has condition number " + std::to_string(cond));
  return v * g.partialPivLu().solve(w);
}

inline Vec project_pq(const Vec& v, const HodgeDecompositionAt& dec, const PolarizationForm& q, int p,
                      const Tolerances& tol = {}) {
  return projector(dec, q, p, tol) * v;
}

struct WeilOperator {
  Mat c;        // C restricted to H^{p,q} is i^{p-q}
  Mat q1_gram;  // A with Q1(x, y) = y^H A x
};

inline WeilOperator weil_operator(const HodgeDecompositionAt& dec, const PolarizationForm& q,
                                  const Tolerances& tol = {}) {
  const int n = q.weight();
  Mat c = Mat::Zero(q.dim(), q.dim());
  for (int p = 0; p <= n; ++p) c += ipow(2 * p - n) * projector(dec, q, p, tol);
  // Q1(x, y) = Q(Cx, conj y) = y^H (Q^T C) x
  return {c, q.matrix().transpose() * c};
}

inline ValidationReport hodge_riemann_report(const HodgeDecompositionAt& dec, const PolarizationForm& q,
                                             const Tolerances& tol = {}) {
  detail::check_dims(dec, q);
  ValidationReport rep;
  rep.subject = "hodge-riemann";
  const int n = q.weight();
  const Mat& qm = q.matrix();

  std::vector<Mat> unit(n + 1);
  for (int p = 0; p <= n; ++p) {
    unit[p] = dec.block(p);
    for (int k = 0; k < unit[p].cols(); ++k) {
      double nk = unit[p].col(k).norm();
      if (nk > 0) unit[p].col(k) /= nk;
    }
  }

  double first = 0;
  for (int p = 0; p <= n; ++p)
    for (int r = 0; r <= n; ++r) {
      if (r == n - p || unit[p].cols() == 0 || unit[r].cols() == 0) continue;
      first = std::max(first, (unit[p].transpose() * qm * unit[r]).cwiseAbs().maxCoeff());
    }
  rep.add("first-relation", "Q(H^{p,q}, H^{p',q'}) = 0 unless p' = n-p", first, tol.residual);

  double conj_res = 0;
  for (int p = 0; p <= n; ++p) {
    const Mat& a = unit[p];
    const Mat& b = unit[n - p];
    if (a.cols() != b.cols()) {
      conj_res = INFINITY;
      break;
    }
    if (a.cols() == 0) continue;
    // distance of conj(b) from span(a)
    Mat basis = column_basis(a, tol.rank);
    Mat cb = b.conjugate();
    conj_res = std::max(conj_res, (cb - basis * (basis.adjoint() * cb)).norm());
  }
  rep.add("conjugation", "H^{p,q} = conj H^{q,p}", conj_res, tol.residual);

  for (int p = n; p >= 0; --p) {
    if (unit[p].cols() == 0) continue;
    Mat h = detail::block_gram(unit[p], q, p);
    double herm = (h - h.adjoint()).norm();
    double ev = min_hermitian_eigenvalue(h);
    std::string tag = "H^{" + std::to_string(p) + "," + std::to_string(n - p) + "}";
    rep.add("hermitian " + tag, "i^{p-q} Q(x, conj y) Hermitian", herm, tol.residual);
    Check& c = rep.add("positivity " + tag, "i^{p-q} Q(x, conj x) > 0", -ev, 0.0,
                       "residual is minus the smallest eigenvalue");
    c.pass = ev > 0;
  }

  Mat full = dec.filtration(0);
  double spread = condition_number(full);
  rep.add("spans", "blocks span C^d", spread, 1.0 / tol.rank, "residual is the condition number");
  return rep;
}

}  // namespace hodgewp
