#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "hodgewp/jet.hpp"

namespace hodgewp {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline const cplx kI{0.0, 1.0};

// i^k for integer k.
inline cplx ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

inline Eigen::JacobiSVD<Mat> svd_of(const Mat& a, bool full_v = false) {
  unsigned opts = Eigen::ComputeThinU | (full_v ? Eigen::ComputeFullV : Eigen::ComputeThinV);
  return Eigen::JacobiSVD<Mat>(a, opts);
}

inline int numerical_rank(const RVec& sv, double rel_tol) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++r;
  return r;
}

inline double condition_number(const Mat& a) {
  if (a.size() == 0) return 1.0;
  auto s = svd_of(a).singularValues();
  double lo = s(s.size() - 1);
  return lo == 0.0 ? INFINITY : s(0) / lo;
}

// Orthonormal basis of the column span.
inline Mat column_basis(const Mat& a, double rel_tol, int* rank = nullptr) {
  auto svd = svd_of(a);
  int r = numerical_rank(svd.singularValues(), rel_tol);
  if (rank) *rank = r;
  return svd.matrixU().leftCols(r);
}

// Orthonormal basis of {x : a x = 0}.
inline Mat null_space(const Mat& a, double rel_tol) {
  const int n = static_cast<int>(a.cols());
  if (a.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  int r = numerical_rank(svd.singularValues(), rel_tol);
  return svd.matrixV().rightCols(n - r);
}

inline Mat hermitian_part(const Mat& a) { return 0.5 * (a + a.adjoint()); }

inline RVec hermitian_eigenvalues(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double min_hermitian_eigenvalue(const Mat& a) {
  if (a.size() == 0) return INFINITY;
  return hermitian_eigenvalues(a)(0);
}

inline double rel_diff(const Mat& a, const Mat& b) {
  double scale = std::max({a.norm(), b.norm(), 1e-300});
  return (a - b).norm() / scale;
}

inline double rel_diff(cplx a, cplx b) {
  double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

// Dense rank-4 array indexed (i, j, k, l), i.e. R_{i jbar k lbar}.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int m) : m_(m), a_(static_cast<size_t>(m) * m * m * m, cplx{}) {}
  int dim() const { return m_; }
  cplx& operator()(int i, int j, int k, int l) { return a_[((i * m_ + j) * m_ + k) * m_ + l]; }
  cplx operator()(int i, int j, int k, int l) const { return a_[((i * m_ + j) * m_ + k) * m_ + l]; }
  double norm() const {
    double s = 0;
    for (auto x : a_) s += std::norm(x);
    return std::sqrt(s);
  }
  Tensor4& operator+=(const Tensor4& o) {
    for (size_t t = 0; t < a_.size(); ++t) a_[t] += o.a_[t];
    return *this;
  }
  Tensor4& operator-=(const Tensor4& o) {
    for (size_t t = 0; t < a_.size(); ++t) a_[t] -= o.a_[t];
    return *this;
  }
  Tensor4& operator*=(cplx s) {
    for (auto& x : a_) x *= s;
    return *this;
  }
  friend Tensor4 operator+(Tensor4 a, const Tensor4& b) { return a += b; }
  friend Tensor4 operator-(Tensor4 a, const Tensor4& b) { return a -= b; }
  friend Tensor4 operator*(cplx s, Tensor4 a) { return a *= s; }

 private:
  int m_ = 0;
  std::vector<cplx> a_;
};

inline double rel_diff(const Tensor4& a, const Tensor4& b) {
  double scale = std::max({a.norm(), b.norm(), 1e-300});
  return (a - b).norm() / scale;
}

// Inverse of a Hermitian metric written with upper indices: ginv(a, b) = g^{a bbar},
// so that sum_b g^{a bbar} g_{c bbar} = delta_ac.
inline Mat upper_inverse(const Mat& g) { return g.inverse().transpose(); }

// Vector of jets, one per ambient coordinate.
struct VecJet {
  std::vector<Jet> c;

  VecJet() = default;
  explicit VecJet(std::vector<Jet> comps) : c(std::move(comps)) {}
  int dim() const { return static_cast<int>(c.size()); }
  int order() const { return c.empty() ? 0 : c[0].order(); }

  Vec value() const {
    Vec v(dim());
    for (int a = 0; a < dim(); ++a) v(a) = c[a].value();
    return v;
  }
  Vec coeff(const MultiIndex& idx) const {
    Vec v(dim());
    for (int a = 0; a < dim(); ++a) v(a) = c[a].coeff(idx);
    return v;
  }
  VecJet derivative(int var) const {
    VecJet r;
    for (const auto& x : c) r.c.push_back(x.derivative(var));
    return r;
  }
  VecJet conj_swapped() const {
    VecJet r;
    for (const auto& x : c) r.c.push_back(conj_swap(x));
    return r;
  }
  VecJet& operator+=(const VecJet& o) {
    for (int a = 0; a < dim(); ++a) c[a] += o.c[a];
    return *this;
  }
  VecJet& operator-=(const VecJet& o) {
    for (int a = 0; a < dim(); ++a) c[a] -= o.c[a];
    return *this;
  }
  friend VecJet operator+(VecJet a, const VecJet& b) { return a += b; }
  friend VecJet operator-(VecJet a, const VecJet& b) { return a -= b; }
  friend VecJet operator*(const Jet& s, const VecJet& v) {
    VecJet r;
    for (const auto& x : v.c) r.c.push_back(s * x);
    return r;
  }
  friend VecJet operator*(cplx s, VecJet v) {
    for (auto& x : v.c) x *= s;
    return v;
  }
};

// Bilinear form x^T Q y on jets.
inline Jet bilinear(const VecJet& x, const Mat& q, const VecJet& y) {
  const int d = x.dim();
  Jet acc;
  bool first = true;
  for (int a = 0; a < d; ++a) {
    Jet qy;
    bool any = false;
    for (int b = 0; b < d; ++b) {
      if (q(a, b) == cplx{}) continue;
      if (!any) {
        qy = q(a, b) * y.c[b];
        any = true;
      } else {
        qy += q(a, b) * y.c[b];
      }
    }
    if (!any) continue;
    Jet term = x.c[a] * qy;
    if (first) {
      acc = term;
      first = false;
    } else {
      acc += term;
    }
  }
  if (first) {
    const int ord = std::min(x.order(), y.order());
    return Jet(x.c[0].nvars(), ord);
  }
  return acc;
}

// Inverse of a square matrix of jets by Neumann expansion around the constant part.
inline std::vector<std::vector<Jet>> invert(const std::vector<std::vector<Jet>>& g) {
  const int m = static_cast<int>(g.size());
  const int nv = g[0][0].nvars();
  const int ord = g[0][0].order();
  Mat g0(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) g0(i, j) = g[i][j].value();
  Mat g0inv = g0.inverse();
  // E = G0^{-1} (G - G0), Ginv = sum_k (-E)^k G0^{-1}
  std::vector<std::vector<Jet>> e(m, std::vector<Jet>(m, Jet(nv, ord)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        Jet gk = g[k][j];
        gk[0] = 0;
        e[i][j] += g0inv(i, k) * gk;
      }
  std::vector<std::vector<Jet>> out(m, std::vector<Jet>(m, Jet(nv, ord)));
  std::vector<std::vector<Jet>> pw(m, std::vector<Jet>(m, Jet(nv, ord)));
  for (int i = 0; i < m; ++i) pw[i][i] = Jet::constant(nv, ord, 1.0);
  for (int k = 0; k <= ord; ++k) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int l = 0; l < m; ++l) out[i][j] += g0inv(l, j) * pw[i][l];
    if (k == ord) break;
    std::vector<std::vector<Jet>> next(m, std::vector<Jet>(m, Jet(nv, ord)));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int l = 0; l < m; ++l) next[i][j] -= pw[i][l] * e[l][j];
    pw = std::move(next);
  }
  return out;
}

}  // namespace hodgewp
