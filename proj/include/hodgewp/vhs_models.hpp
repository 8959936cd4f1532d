#pragma once

// Period sections from nilpotent orbits and Picard-Fuchs operators, and the
// Hodge decomposition built from their derivative frames.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hodgewp/error.hpp"
#include "hodgewp/hodge_core.hpp"
#include "hodgewp/jet.hpp"
#include "hodgewp/linalg.hpp"
#include "hodgewp/report.hpp"

namespace hodgewp {

using Point = std::vector<cplx>;

// Taylor data of Omega at z0 in local coordinates t, where z = z0 + scale * t.
// coeff(a) is d^a Omega / a! with respect to t.  All tensors computed from a jet
// live in the t-frame; scalar invariants do not depend on the scale.
struct JetSection {
  Point z0;
  std::vector<double> scale;
  VecJet omega;
  bool near_branch_cut = false;

  int m() const { return static_cast<int>(z0.size()); }
  int dim() const { return omega.dim(); }
  int order() const { return omega.order(); }
  Vec value() const { return omega.value(); }
  Vec coeff(const MultiIndex& a) const { return omega.coeff(a); }
};

inline void require_order(const JetSection& jet, int order, const char* what) {
  if (jet.order() < order)
    throw Error(ErrorKind::Order, std::string(what) + " needs jet order " + std::to_string(order) +
                                      ", have " + std::to_string(jet.order()));
}

// Multiplies the section by a holomorphic function given by its jet (same frame).
inline JetSection gauged(const JetSection& jet, const Jet& f) {
  JetSection out = jet;
  for (auto& c : out.omega.c) c = f * c;
  return out;
}

// -------------------------------------------------------------------------
// Nilpotent orbits  Omega = exp(sum_i zeta_i N_i) A(z),  zeta_i = (i/2pi) log(1/z_i)

struct NilpotentOrbitModel {
  std::string name;
  PolarizationForm q;
  std::vector<Mat> n;                 // one nilpotent per variable
  std::map<std::vector<int>, Vec> a;  // multi-index -> coefficient of z^a
  double radius = 1.0;                // convergence radius of A(z)

  int m() const { return static_cast<int>(n.size()); }
  int weight() const { return q.weight(); }
  int dim() const { return q.dim(); }
  Vec a0() const {
    auto it = a.find(std::vector<int>(m(), 0));
    return it == a.end() ? Vec::Zero(dim()) : it->second;
  }
};

inline ValidationReport validate_orbit_model(const NilpotentOrbitModel& model, const Tolerances& tol = {}) {
  ValidationReport rep = validate_polarization(model.q, tol);
  rep.subject = "nilpotent orbit " + model.name;
  const Mat& q = model.q.matrix();
  const int n = model.weight();
  double nnorm = 0, inv = 0, comm = 0;
  for (const auto& ni : model.n) {
    Mat pw = Mat::Identity(model.dim(), model.dim());
    for (int k = 0; k <= n; ++k) pw = pw * ni;
    double s = std::max(1.0, ni.norm());
    nnorm = std::max(nnorm, pw.norm() / std::pow(s, n + 1));
    inv = std::max(inv, (ni.transpose() * q + q * ni).norm() / (s * std::max(q.norm(), 1e-300)));
    for (const auto& nj : model.n) comm = std::max(comm, (ni * nj - nj * ni).norm() / (s * s));
  }
  rep.add("nilpotent", "N^{n+1} = 0", nnorm, tol.residual);
  rep.add("infinitesimal-isometry", "Q(Nx, y) + Q(x, Ny) = 0", inv, tol.residual);
  rep.add("commuting", "[N_i, N_j] = 0", comm, tol.residual);
  double a0 = model.a0().norm();
  rep.add_flag("A0-nonzero", "A_0 != 0", a0 > 0);
  return rep;
}

namespace detail {

inline bool near_cut(cplx z) { return std::abs(std::abs(std::arg(z)) - kPi) < 1e-6; }

inline std::vector<double> default_scale(const Point& z0) {
  std::vector<double> s;
  for (auto z : z0) s.push_back(std::abs(z) > 0 ? std::abs(z) : 1.0);
  return s;
}

// Jet of z^a in the local frame.
inline Jet monomial_jet(const Point& z0, const std::vector<double>& scale, const std::vector<int>& a,
                        int order) {
  const int m = static_cast<int>(z0.size());
  Jet r = Jet::constant(m, order, 1.0);
  for (int i = 0; i < m; ++i) {
    Jet zi = Jet::variable(m, order, i, z0[i], scale[i]);
    for (int k = 0; k < a[i]; ++k) r = r * zi;
  }
  return r;
}

inline VecJet apply(const Mat& a, const VecJet& v) {
  VecJet r;
  const int d = v.dim();
  for (int i = 0; i < d; ++i) {
    Jet acc(v.c[0].nvars(), v.order());
    for (int j = 0; j < d; ++j)
      if (a(i, j) != cplx{}) acc += a(i, j) * v.c[j];
    r.c.push_back(acc);
  }
  return r;
}

}  // namespace detail

inline JetSection orbit_jet(const NilpotentOrbitModel& model, const Point& z0, int order,
                            std::optional<std::vector<double>> scale = std::nullopt) {
  const int m = model.m();
  const int d = model.dim();
  if (static_cast<int>(z0.size()) != m)
    throw Error(ErrorKind::Input, "point has " + std::to_string(z0.size()) + " coordinates, model has " +
                                      std::to_string(m));
  if (order < 0 || order > 4) throw Error(ErrorKind::Order, "jet order must be in 0..4");
  JetSection out;
  out.z0 = z0;
  out.scale = scale ? *scale : detail::default_scale(z0);
  for (int i = 0; i < m; ++i) {
    if (z0[i] == cplx{}) throw Error(ErrorKind::Domain, "coordinate z_" + std::to_string(i + 1) + " = 0");
    if (std::abs(z0[i]) >= 1.0)
      throw Error(ErrorKind::Domain, "coordinate z_" + std::to_string(i + 1) + " outside the unit disk");
    if (detail::near_cut(z0[i])) out.near_branch_cut = true;
  }

  // A(z)
  VecJet acc;
  for (int k = 0; k < d; ++k) acc.c.emplace_back(m, order);
  for (const auto& [idx, coef] : model.a) {
    Jet mono = detail::monomial_jet(z0, out.scale, idx, order);
    for (int k = 0; k < d; ++k)
      if (coef(k) != cplx{}) acc.c[k] += coef(k) * mono;
  }

  std::vector<Jet> zeta;
  for (int i = 0; i < m; ++i)
    zeta.push_back(log(Jet::variable(m, order, i, z0[i], out.scale[i])) * (-kI / (2 * kPi)));

  // exp(X) A with X = sum zeta_i N_i; terminates by nilpotency, with a cap for
  // models that violate it (the checklist reports those).
  VecJet term = acc;
  VecJet total = acc;
  double ref = std::max(acc.value().norm(), 1e-300);
  for (int k = 1; k <= 200; ++k) {
    VecJet next;
    for (int c = 0; c < d; ++c) next.c.emplace_back(m, order);
    for (int i = 0; i < m; ++i) {
      if (model.n[i].norm() == 0) continue;
      next += zeta[i] * detail::apply(model.n[i], term);
    }
    term = (1.0 / k) * next;
    total += term;
    double mag = 0;
    for (const auto& cj : term.c)
      for (auto x : cj.coefficients()) mag = std::max(mag, std::abs(x));
    if (mag == 0.0 || (k > d && mag < 1e-18 * ref)) break;
  }
  out.omega = total;
  return out;
}

// -------------------------------------------------------------------------
// Picard-Fuchs operators  L = sum_j c_j(z) theta^j  with a maximally unipotent point at 0.

struct PicardFuchsModel {
  std::string name;
  int order = 0;                             // d
  std::vector<std::vector<cplx>> coeffs;     // coeffs[j][k]: coefficient of z^k in c_j
  double r_max = 1.0;                        // nearest singularity
  std::optional<Mat> basis;                  // Omega = basis * (Frobenius solutions)
  std::optional<Mat> q;                      // polarization in the Omega basis

  int weight() const { return order - 1; }
  int dim() const { return order; }

  // Default basis divides the j-th Frobenius solution by (2 pi i)^j.
  Mat basis_matrix() const {
    if (basis) return *basis;
    Mat b = Mat::Zero(order, order);
    for (int j = 0; j < order; ++j) b(j, j) = std::pow(2.0 * kPi * kI, -j);
    return b;
  }

  // Logarithm of monodromy in the Omega basis: Omega = exp(zeta N) A(z).
  Mat monodromy_log() const {
    Mat nw = Mat::Zero(order, order);
    for (int j = 1; j < order; ++j) nw(j, j - 1) = 2.0 * kPi * kI;
    Mat b = basis_matrix();
    return b * nw * b.inverse();
  }
};

namespace detail {

// Frobenius coefficients in the rescaled variable x = z / r_max.  Entry k is a jet in
// epsilon of order d-1; its s-th coefficient multiplies x^k in S_s.
class FrobeniusSeries {
 public:
  explicit FrobeniusSeries(const PicardFuchsModel& pf) : d_(pf.order), rho_(pf.r_max) {
    if (d_ < 1 || static_cast<int>(pf.coeffs.size()) != d_ + 1)
      throw Error(ErrorKind::Input, "Picard-Fuchs operator needs order+1 coefficient polynomials");
    if (!(rho_ > 0)) throw Error(ErrorKind::Input, "r_max must be positive");
    cplx lead = pf.coeffs[d_].empty() ? cplx{} : pf.coeffs[d_][0];
    if (std::abs(lead) == 0.0) throw Error(ErrorKind::Input, "c_d(0) = 0: not a maximally unipotent point");
    for (int j = 0; j < d_; ++j)
      if (!pf.coeffs[j].empty() && std::abs(pf.coeffs[j][0]) > 1e-14 * std::abs(lead))
        throw Error(ErrorKind::Input, "indicial polynomial is not c theta^d: c_" + std::to_string(j) +
                                          "(0) != 0");
    size_t deg = 0;
    for (const auto& c : pf.coeffs) deg = std::max(deg, c.size());
    // p_[i][j]: coefficient of theta^j in P_i, normalized by c_d(0), scaled by rho^i.
    p_.assign(deg, std::vector<cplx>(d_ + 1, cplx{}));
    for (int j = 0; j <= d_; ++j)
      for (size_t i = 0; i < pf.coeffs[j].size(); ++i)
        p_[i][j] = pf.coeffs[j][i] / lead * std::pow(rho_, static_cast<double>(i));
    b_.push_back(Jet::constant(1, ord(), 1.0));
  }

  int ord() const { return std::max(d_ - 1, 0); }
  double rho() const { return rho_; }

  const Jet& coefficient(int k) {
    while (static_cast<int>(b_.size()) <= k) extend();
    return b_[k];
  }

 private:
  Jet poly_at(int i, double k) const {
    // P_i(k + eps) by Horner
    Jet x = Jet::variable(1, ord(), 0, k, 1.0);
    Jet r = Jet::constant(1, ord(), p_[i][d_]);
    for (int j = d_ - 1; j >= 0; --j) r = r * x + p_[i][j];
    return r;
  }

  void extend() {
    const int k = static_cast<int>(b_.size());
    Jet rhs(1, ord());
    for (int i = 1; i < static_cast<int>(p_.size()) && i <= k; ++i) rhs -= poly_at(i, k - i) * b_[k - i];
    b_.push_back(rhs / poly_at(0, k));
  }

  int d_;
  double rho_;
  std::vector<std::vector<cplx>> p_;
  std::vector<Jet> b_;
};

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

inline JetSection pf_jet(const PicardFuchsModel& model, cplx z0, int order) {
  if (order < 0 || order > 4) throw Error(ErrorKind::Order, "jet order must be in 0..4");
  if (z0 == cplx{}) throw Error(ErrorKind::Domain, "z = 0 is the singular point");
  const double q = std::abs(z0) / model.r_max;
  if (q >= 0.8)
    throw Error(ErrorKind::Convergence, "|z| / r_max = " + std::to_string(q) +
                                            " exceeds 0.8; tail ratio estimate " + std::to_string(q));
  detail::FrobeniusSeries series(model);
  const int d = model.order;
  const double s = std::abs(z0);
  const cplx x0 = z0 / model.r_max;
  const double sigma = s / model.r_max;

  // S_j(x0 + sigma t) as jets in t
  std::vector<Jet> sj(d, Jet(1, order));
  double total = 0;
  std::vector<double> recent;
  for (int k = 0;; ++k) {
    if (k > 20000) throw Error(ErrorKind::Convergence, "Frobenius series did not converge");
    const Jet& bk = series.coefficient(k);
    double mag = 0;
    for (int r = 0; r <= std::min(order, k); ++r) {
      // coefficient of t^r in (x0 + sigma t)^k
      cplx f = detail::binomial(k, r) * std::pow(x0, k - r) * std::pow(sigma, static_cast<double>(r));
      for (int j = 0; j < d; ++j) {
        cplx add = bk[j] * f;
        sj[j][r] += add;
        mag = std::max(mag, std::abs(add));
      }
    }
    for (int j = 0; j < d; ++j) total = std::max(total, std::abs(sj[j][0]));
    recent.push_back(mag);
    if (k >= 12) {
      double ratio = 0;
      for (size_t i = recent.size() - 8; i + 1 < recent.size(); ++i)
        if (recent[i] > 0) ratio = std::max(ratio, recent[i + 1] / recent[i]);
      ratio = std::max(ratio, q);
      if (ratio < 1.0) {
        double tail = mag * ratio / (1.0 - ratio);
        if (tail < 1e-13 * std::max(total, 1e-300)) break;
      }
    }
  }

  Jet logz = log(Jet::variable(1, order, 0, z0, s));
  std::vector<Jet> lpow(d, Jet::constant(1, order, 1.0));
  for (int p = 1; p < d; ++p) lpow[p] = lpow[p - 1] * logz * (1.0 / p);  // log^p / p!

  std::vector<Jet> w(d, Jet(1, order));
  for (int j = 0; j < d; ++j)
    for (int t = 0; t <= j; ++t) w[j] += lpow[j - t] * sj[t];

  Mat b = model.basis_matrix();
  JetSection out;
  out.z0 = {z0};
  out.scale = {s};
  out.near_branch_cut = detail::near_cut(z0);
  for (int a = 0; a < d; ++a) {
    Jet acc(1, order);
    for (int j = 0; j < d; ++j)
      if (b(a, j) != cplx{}) acc += b(a, j) * w[j];
    out.omega.c.push_back(acc);
  }
  return out;
}

// Residual of L Omega = 0 at the jet's base point, relative to the largest term.
inline double pf_residual(const PicardFuchsModel& model, const JetSection& jet) {
  const int d = model.order;
  require_order(jet, d, "ODE residual");
  const cplx z0 = jet.z0[0];
  const double s = jet.scale[0];
  Jet z = Jet::variable(1, jet.order(), 0, z0, s);
  double worst = 0;
  for (const auto& comp : jet.omega.c) {
    Jet th = comp;
    cplx sum = 0;
    double mag = 0;
    for (int j = 0; j <= d; ++j) {
      cplx cj = 0;
      for (size_t k = 0; k < model.coeffs[j].size(); ++k) cj += model.coeffs[j][k] * std::pow(z0, static_cast<int>(k));
      cplx term = cj * th.value();
      sum += term;
      mag = std::max(mag, std::abs(term));
      if (j < d) th = z * th.derivative(0) * (1.0 / s);
    }
    if (mag > 0) worst = std::max(worst, std::abs(sum) / mag);
  }
  return worst;
}

// Q with parity (-1)^n and Q(Omega, theta^k Omega) = 0 for k < n as identities in
// (log z, z) through order 2d; normalized so that (Omega, conj Omega) > 0 near z = 0.
inline PolarizationForm derive_flat_pairing(const PicardFuchsModel& model, const Tolerances& tol = {}) {
  const int d = model.order;
  const int n = d - 1;
  if (n < 1) throw Error(ErrorKind::Input, "operator order must be at least 2");
  detail::FrobeniusSeries series(model);
  const int kx = 2 * d;   // x-degree
  const int kl = 2 * n;   // log-degree
  const double c = std::log(model.r_max);
  Mat b = model.basis_matrix();

  using Grid = std::vector<std::vector<cplx>>;  // [log power][x power]
  auto zero_grid = [&] { return Grid(kl + 1, std::vector<cplx>(kx + 1, cplx{})); };

  // Frobenius solutions w_j = sum_t (l + c)^{j-t}/(j-t)! S_t(x), l = log x.
  std::vector<Grid> w(d, zero_grid());
  for (int j = 0; j < d; ++j)
    for (int t = 0; t <= j; ++t) {
      const int e = j - t;
      double fact = 1;
      for (int i = 2; i <= e; ++i) fact *= i;
      for (int p = 0; p <= e; ++p) {
        double lc = detail::binomial(e, p) * std::pow(c, e - p) / fact;
        for (int k = 0; k <= kx; ++k) w[j][p][k] += lc * series.coefficient(k)[t];
      }
    }
  std::vector<Grid> v(d, zero_grid());
  for (int a = 0; a < d; ++a)
    for (int j = 0; j < d; ++j)
      for (int p = 0; p <= kl; ++p)
        for (int k = 0; k <= kx; ++k) v[a][p][k] += b(a, j) * w[j][p][k];

  auto theta = [&](const Grid& g) {
    Grid r = zero_grid();
    for (int p = 0; p <= kl; ++p)
      for (int k = 0; k <= kx; ++k) {
        r[p][k] += static_cast<double>(k) * g[p][k];
        if (p > 0) r[p - 1][k] += static_cast<double>(p) * g[p][k];
      }
    return r;
  };
  auto product = [&](const Grid& x, const Grid& y) {
    Grid r = zero_grid();
    for (int p = 0; p <= kl; ++p)
      for (int k = 0; k <= kx; ++k) {
        if (x[p][k] == cplx{}) continue;
        for (int p2 = 0; p + p2 <= kl; ++p2)
          for (int k2 = 0; k + k2 <= kx; ++k2) r[p + p2][k + k2] += x[p][k] * y[p2][k2];
      }
    return r;
  };

  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  std::vector<std::pair<int, int>> unknowns;
  for (int a = 0; a < d; ++a)
    for (int bb = (n % 2 == 0 ? a : a + 1); bb < d; ++bb) unknowns.push_back({a, bb});

  std::vector<std::vector<cplx>> rows;
  std::vector<Grid> th(d);
  for (int a = 0; a < d; ++a) th[a] = v[a];
  for (int k = 0; k < n; ++k) {
    if (k > 0)
      for (int a = 0; a < d; ++a) th[a] = theta(th[a]);
    std::vector<Grid> cols;
    for (auto [a, bb] : unknowns) {
      Grid g = product(v[a], th[bb]);
      if (a != bb) {
        Grid h = product(v[bb], th[a]);
        for (int p = 0; p <= kl; ++p)
          for (int x = 0; x <= kx; ++x) g[p][x] += sign * h[p][x];
      }
      cols.push_back(std::move(g));
    }
    for (int p = 0; p <= kl; ++p)
      for (int x = 0; x <= kx; ++x) {
        std::vector<cplx> row;
        bool any = false;
        for (const auto& g : cols) {
          row.push_back(g[p][x]);
          if (g[p][x] != cplx{}) any = true;
        }
        if (any) rows.push_back(std::move(row));
      }
  }
  Mat sys(rows.size(), unknowns.size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t u = 0; u < unknowns.size(); ++u) sys(r, u) = rows[r][u];
  Mat ns = null_space(sys, tol.rank);
  if (ns.cols() != 1)
    throw Error(ErrorKind::Ambiguity, "flat pairing solution space has dimension " + std::to_string(ns.cols()));

  Mat qm = Mat::Zero(d, d);
  for (size_t u = 0; u < unknowns.size(); ++u) {
    auto [a, bb] = unknowns[u];
    qm(a, bb) = ns(u, 0);
    if (a != bb) qm(bb, a) = sign * ns(u, 0);
  }
  // Fix the complex scale: real-positive (Omega, conj Omega) at a reference point.
  PolarizationForm q0(qm, n);
  Vec om = pf_jet(model, 0.05 * model.r_max, 0).value();
  cplx pv = q0.pair_bar(om, om);
  if (std::abs(pv) == 0) throw Error(ErrorKind::Degeneracy, "derived pairing vanishes on Omega");
  qm *= std::conj(pv) / std::abs(pv);
  Eigen::Index r, cc;
  qm.cwiseAbs().maxCoeff(&r, &cc);
  qm /= std::abs(qm(r, cc));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (std::abs(qm(i, j).imag()) < 1e-12) qm(i, j).imag(0);
      if (std::abs(qm(i, j).real()) < 1e-12) qm(i, j).real(0);
    }
  return PolarizationForm(qm, n);
}

// -------------------------------------------------------------------------
// Holomorphic gauge factors f(z) given by finitely many monomials.

struct GaugeFactor {
  std::map<std::vector<int>, cplx> terms;

  Jet jet(const Point& z0, const std::vector<double>& scale, int order) const {
    const int m = static_cast<int>(z0.size());
    Jet r(m, order);
    for (const auto& [idx, c] : terms) r += c * detail::monomial_jet(z0, scale, idx, order);
    return r;
  }
};

// A model of either family behind one interface.
class VhsModel {
 public:
  VhsModel() = default;
  explicit VhsModel(NilpotentOrbitModel m) : impl_(std::move(m)) {}
  explicit VhsModel(PicardFuchsModel m, const Tolerances& tol = {}) : impl_(std::move(m)) {
    auto& pf = std::get<PicardFuchsModel>(impl_);
    q_ = pf.q ? PolarizationForm(*pf.q, pf.weight()) : derive_flat_pairing(pf, tol);
  }

  std::string name;
  std::string role = "vhs";
  std::vector<Point> samples;

  bool is_orbit() const { return std::holds_alternative<NilpotentOrbitModel>(impl_); }
  const NilpotentOrbitModel& orbit() const { return std::get<NilpotentOrbitModel>(impl_); }
  const PicardFuchsModel& picard_fuchs() const { return std::get<PicardFuchsModel>(impl_); }

  const PolarizationForm& polarization() const {
    return is_orbit() ? orbit().q : q_;
  }
  int m() const { return is_orbit() ? orbit().m() : 1; }
  int weight() const { return polarization().weight(); }
  int dim() const { return polarization().dim(); }

  std::vector<Mat> monodromy_logs() const {
    if (is_orbit()) return orbit().n;
    return {picard_fuchs().monodromy_log()};
  }

  JetSection jet(const Point& z, int order, std::optional<std::vector<double>> scale = std::nullopt) const {
    if (static_cast<int>(z.size()) != m())
      throw Error(ErrorKind::Input, "point dimension " + std::to_string(z.size()) + " != m = " + std::to_string(m()));
    JetSection j;
    if (is_orbit()) {
      j = orbit_jet(orbit(), z, order, scale);
    } else {
      j = pf_jet(picard_fuchs(), z[0], order);
      if (scale) j = rescaled(j, *scale, order, z);
    }
    if (gauge_) j = gauged(j, gauge_->jet(j.z0, j.scale, order));
    return j;
  }

  VhsModel with_gauge(GaugeFactor f) const {
    VhsModel out = *this;
    out.gauge_ = std::move(f);
    return out;
  }

  // Largest modulus for sample points.
  double domain_radius() const { return is_orbit() ? 1.0 : 0.8 * picard_fuchs().r_max; }

 private:
  // Re-expresses a one-variable jet in the frame z = z0 + scale * t.
  static JetSection rescaled(const JetSection& j, const std::vector<double>& scale, int order, const Point&) {
    JetSection out = j;
    double f = scale[0] / j.scale[0];
    for (auto& c : out.omega.c) {
      double pw = 1;
      for (int r = 0; r <= order; ++r) {
        c[r] *= pw;
        pw *= f;
      }
    }
    out.scale = scale;
    return out;
  }

  std::variant<NilpotentOrbitModel, PicardFuchsModel> impl_;
  PolarizationForm q_;
  std::optional<GaugeFactor> gauge_;
};

// -------------------------------------------------------------------------
// Hodge decomposition from derivative frames.

namespace detail {

inline std::vector<MultiIndex> indices_of_degree(int m, int deg) {
  std::vector<MultiIndex> out;
  const auto& lay = JetLayout::get(m, deg);
  for (int k = 0; k < lay->size(); ++k)
    if (lay->degree(k) == deg) out.push_back(lay->index(k));
  return out;
}

inline Mat block_projector(const Mat& v, const Mat& q) {
  if (v.cols() == 0) return Mat::Zero(v.rows(), v.rows());
  Mat w = v.adjoint() * q.transpose();
  return v * (w * v).partialPivLu().solve(w);
}

}  // namespace detail

inline int upper_level_min(int n) { return n % 2 == 1 ? (n + 1) / 2 : n / 2 + 1; }

inline HodgeDecompositionAt decomposition_at(const JetSection& jet, const PolarizationForm& q,
                                             const Tolerances& tol = {}) {
  const int n = q.weight();
  const int d = q.dim();
  const int m = jet.m();
  if (jet.dim() != d) throw Error(ErrorKind::Input, "jet dimension differs from Q");
  const int pmin = upper_level_min(n);
  require_order(jet, n - pmin, "Hodge decomposition");

  std::vector<Mat> blocks(n + 1, Mat(d, 0));
  Vec om = jet.value();
  if (om.norm() == 0) throw Error(ErrorKind::Degeneracy, "Omega vanishes at the point");
  blocks[n] = om;
  double ref = om.norm();

  for (int p = n - 1; p >= pmin; --p) {
    auto idx = detail::indices_of_degree(m, n - p);
    Mat cand(d, idx.size());
    double mag = 0;
    for (size_t k = 0; k < idx.size(); ++k) {
      cand.col(k) = jet.coeff(idx[k]);
      mag = std::max(mag, cand.col(k).norm());
    }
    Mat resid = cand;
    for (int r = n; r > p; --r) resid -= detail::block_projector(blocks[r], q.matrix()) * cand;
    RVec sv = svd_of(resid).singularValues();
    int rank = 0;
    for (int k = 0; k < sv.size(); ++k)
      if (sv(k) > tol.rank * std::max(ref, mag)) ++rank;
    if (rank == 0)
      throw Error(ErrorKind::Degeneracy, "rank drop at filtration level F^" + std::to_string(p));
    Eigen::ColPivHouseholderQR<Mat> qr(resid);
    Mat chosen(d, rank);
    for (int k = 0; k < rank; ++k) chosen.col(k) = resid.col(qr.colsPermutation().indices()(k));
    blocks[p] = chosen;
  }
  for (int p = n; p >= pmin; --p) blocks[n - p] = blocks[p].conjugate();
  if (n % 2 == 0) {
    const int mid = n / 2;
    int used = 0;
    for (int p = 0; p <= n; ++p)
      if (p != mid) used += static_cast<int>(blocks[p].cols());
    Mat rowsm(used, d);
    int r = 0;
    for (int p = 0; p <= n; ++p) {
      if (p == mid) continue;
      for (int k = 0; k < blocks[p].cols(); ++k) {
        Vec b = blocks[p].col(k);
        rowsm.row(r++) = (q.matrix() * (b / b.norm()).conjugate()).transpose();
      }
    }
    blocks[mid] = null_space(rowsm, tol.rank);
  }
  HodgeDecompositionAt dec(jet.z0, n, blocks);
  if (dec.total_dim() != d)
    throw Error(ErrorKind::Degeneracy, "Hodge blocks span dimension " + std::to_string(dec.total_dim()) +
                                           " of " + std::to_string(d));
  return dec;
}

// Largest relative component of d/dz_i (frame of F^p) outside F^{p-1}, over the
// levels with holomorphic frames; the remaining levels follow by Q-duality.
inline double transversality_residual(const JetSection& jet, const HodgeDecompositionAt& dec,
                                      const PolarizationForm& q, const Tolerances& tol = {}) {
  const int n = q.weight();
  const int m = jet.m();
  const int pmin = upper_level_min(n);
  require_order(jet, n - pmin + 1, "transversality check");
  std::vector<Mat> proj(n + 1);
  for (int p = 0; p <= n; ++p) proj[p] = projector(dec, q, p, tol);
  double worst = 0;
  for (int p = n; p >= pmin; --p) {
    Mat below = Mat::Zero(q.dim(), q.dim());
    for (int r = 0; r < p - 1; ++r) below += proj[r];
    for (int deg = 0; deg <= n - p; ++deg)
      for (const auto& a : detail::indices_of_degree(m, deg))
        for (int i = 0; i < m; ++i) {
          MultiIndex b = a;
          b[i] += 1;
          Vec w = static_cast<double>(b[i]) * jet.coeff(b);
          double nw = w.norm();
          if (nw == 0) continue;
          worst = std::max(worst, (below * w).norm() / nw);
        }
  }
  return worst;
}

namespace detail {

// WP metric at the jet point straight from the first-order coefficients.
inline Mat wp_metric_values(const JetSection& jet, const PolarizationForm& q) {
  const int m = jet.m();
  Vec c0 = jet.value();
  cplx p = q.pair_bar(c0, c0);
  Mat g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Vec ci = jet.coeff(unit_index(i));
      Vec cj = jet.coeff(unit_index(j));
      g(i, j) = -q.pair_bar(ci, cj) / p + q.pair_bar(ci, c0) * q.pair_bar(c0, cj) / (p * p);
    }
  return g;
}

}  // namespace detail

inline ValidationReport wp_geometry_checklist(const VhsModel& model, const std::vector<Point>& points,
                                              const Tolerances& tol = {}) {
  ValidationReport rep;
  rep.subject = "wp-geometry checklist " + model.name;
  const auto& q = model.polarization();
  const int n = q.weight();
  double trans = 0, hr = 0;
  double min_eig = INFINITY;
  bool hr_ok = true;
  for (const auto& z : points) {
    JetSection jet = model.jet(z, n - upper_level_min(n) + 1);
    HodgeDecompositionAt dec = decomposition_at(jet, q, tol);
    ValidationReport h = hodge_riemann_report(dec, q, tol);
    hr_ok = hr_ok && h.passed();
    hr = std::max(hr, h.max_residual());
    trans = std::max(trans, transversality_residual(jet, dec, q, tol));
    min_eig = std::min(min_eig, min_hermitian_eigenvalue(detail::wp_metric_values(jet, q)));
  }
  rep.add("axiom1 transversality", "d F^p in F^{p-1}", trans, tol.residual);
  rep.add_flag("axiom1 hodge-riemann", "Hodge-Riemann relations along the samples", hr_ok);
  Check& pos = rep.add("axiom2 wp-positive", "WP metric positive definite", -min_eig, 0.0,
                       "residual is minus the smallest eigenvalue");
  pos.pass = min_eig > 0;
  rep.add_flag("axiom3 quasi-projective", "not machine-checkable", true, "out of scope; not evaluated");
  double nil = 0, nil_scale = 1;
  for (const auto& nn : model.monodromy_logs()) {
    Mat pw = Mat::Identity(q.dim(), q.dim());
    for (int k = 0; k <= n; ++k) pw = pw * nn;
    nil = std::max(nil, pw.norm());
    nil_scale = std::max(nil_scale, std::pow(std::max(1.0, nn.norm()), n + 1));
  }
  rep.add("axiom4 quasi-unipotent", "N^{n+1} = 0", nil, tol.residual * nil_scale, "residual is |N^{n+1}|");
  return rep;
}

}  // namespace hodgewp
