#pragma once

// Finite-difference oracles and the identity suite.  The oracles only evaluate
// Omega (or a metric) at displaced points; they never read jet coefficients
// beyond the value.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hodgewp/geometry.hpp"
#include "hodgewp/report.hpp"

namespace hodgewp {

struct FDConfig {
  double eta = 3e-3;  // step in the local frame, i.e. relative to |z|
  int levels = 2;     // 1 = plain central differences, 2 = one Richardson step
  std::map<std::string, double> tol{{"closed", 1e-8}, {"fd", 1e-4}};

  double tolerance(const std::string& kind) const {
    auto it = tol.find(kind);
    if (it == tol.end()) throw Error(ErrorKind::Input, "no tolerance registered for '" + kind + "'");
    return it->second;
  }
};

// Function of the local coordinates t (z = z0 + scale * t), matrix valued.
using FrameFunction = std::function<Mat(const std::vector<cplx>&)>;

namespace detail {

inline std::vector<cplx> displaced(int m, const std::vector<std::pair<int, double>>& steps) {
  std::vector<cplx> t(m, cplx{});
  for (auto [a, h] : steps) t[a % m] += a < m ? cplx(h, 0) : cplx(0, h);
  return t;
}

// Real partial derivative along real coordinate a (a < m: Re t_a, else Im t_{a-m}).
inline Mat d1_raw(const FrameFunction& f, int m, int a, double h) {
  return (f(displaced(m, {{a, h}})) - f(displaced(m, {{a, -h}}))) / (2 * h);
}

inline Mat d2_raw(const FrameFunction& f, int m, int a, int b, double h) {
  if (a == b)
    return (f(displaced(m, {{a, h}})) - 2.0 * f(displaced(m, {})) + f(displaced(m, {{a, -h}}))) / (h * h);
  return (f(displaced(m, {{a, h}, {b, h}})) - f(displaced(m, {{a, h}, {b, -h}})) -
          f(displaced(m, {{a, -h}, {b, h}})) + f(displaced(m, {{a, -h}, {b, -h}}))) /
         (4 * h * h);
}

template <typename D>
Mat richardson(D&& d, double h, int levels) {
  if (levels <= 1) return d(h);
  return (4.0 * d(h / 2) - d(h)) / 3.0;
}

}  // namespace detail

inline Mat fd_d(const FrameFunction& f, int m, int k, const FDConfig& cfg) {
  auto dx = detail::richardson([&](double h) { return detail::d1_raw(f, m, k, h); }, cfg.eta, cfg.levels);
  auto dy = detail::richardson([&](double h) { return detail::d1_raw(f, m, m + k, h); }, cfg.eta, cfg.levels);
  return 0.5 * (dx - kI * dy);
}

inline Mat fd_dbar(const FrameFunction& f, int m, int l, const FDConfig& cfg) {
  auto dx = detail::richardson([&](double h) { return detail::d1_raw(f, m, l, h); }, cfg.eta, cfg.levels);
  auto dy = detail::richardson([&](double h) { return detail::d1_raw(f, m, m + l, h); }, cfg.eta, cfg.levels);
  return 0.5 * (dx + kI * dy);
}

// d_k dbar_l f
inline Mat fd_d_dbar(const FrameFunction& f, int m, int k, int l, const FDConfig& cfg) {
  auto d2 = [&](int a, int b) {
    return detail::richardson([&](double h) { return detail::d2_raw(f, m, a, b, h); }, cfg.eta, cfg.levels);
  };
  return 0.25 * (d2(k, l) + d2(m + k, m + l) + kI * d2(k, m + l) - kI * d2(m + k, l));
}

inline FrameFunction potential_function(const VhsModel& model, const Point& z0, const std::vector<double>& scale) {
  const int m = static_cast<int>(z0.size());
  return [&model, z0, scale, m](const std::vector<cplx>& t) {
    Point z(m);
    for (int i = 0; i < m; ++i) z[i] = z0[i] + scale[i] * t[i];
    Vec om = model.jet(z, 0, scale).value();
    cplx p = model.polarization().pair_bar(om, om);
    if (!(p.real() > 0)) throw Error(ErrorKind::Domain, "stencil point has (Omega, conj Omega) <= 0");
    Mat r(1, 1);
    r(0, 0) = -std::log(p.real());
    return r;
  };
}

// -d dbar log (Omega, conj Omega) by differences, in the default frame at the point.
inline MetricField fd_metric_from_potential(const VhsModel& model, const Point& z, const FDConfig& cfg = {}) {
  const int m = model.m();
  std::vector<double> scale = detail::default_scale(z);
  FrameFunction k = potential_function(model, z, scale);
  Mat g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) g(i, j) = fd_d_dbar(k, m, i, j, cfg)(0, 0);
  return {z, scale, g, "wp-fd"};
}

// R_{i jbar k lbar} = d_k dbar_l g_{i jbar} - g^{p qbar} d_k g_{i qbar} dbar_l g_{p jbar}
inline CurvatureField fd_curvature(const FrameFunction& metric, int m, const Point& z,
                                   const std::vector<double>& scale, const FDConfig& cfg = {}) {
  Mat g0 = metric(std::vector<cplx>(m, cplx{}));
  Mat gi = upper_inverse(g0);
  std::vector<Mat> dk(m), dl(m);
  for (int k = 0; k < m; ++k) dk[k] = fd_d(metric, m, k, cfg);
  for (int l = 0; l < m; ++l) dl[l] = fd_dbar(metric, m, l, cfg);
  Tensor4 r(m);
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) {
      Mat dd = fd_d_dbar(metric, m, k, l, cfg);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          cplx v = dd(i, j);
          for (int p = 0; p < m; ++p)
            for (int qq = 0; qq < m; ++qq) v -= gi(p, qq) * dk[k](i, qq) * dl[l](p, j);
          r(i, j, k, l) = v;
        }
    }
  return {z, scale, r, "fd"};
}

inline FrameFunction wp_metric_function(const VhsModel& model, const Point& z0, const std::vector<double>& scale) {
  const int m = static_cast<int>(z0.size());
  return [&model, z0, scale, m](const std::vector<cplx>& t) {
    Point z(m);
    for (int i = 0; i < m; ++i) z[i] = z0[i] + scale[i] * t[i];
    return wp_metric_at(model, z, scale);
  };
}

inline FrameFunction ph_metric_function(const VhsModel& model, const Point& z0, const std::vector<double>& scale,
                                        double mu) {
  const int m = static_cast<int>(z0.size());
  return [&model, z0, scale, m, mu](const std::vector<cplx>& t) {
    Point z(m);
    for (int i = 0; i < m; ++i) z[i] = z0[i] + scale[i] * t[i];
    return ph_metric_at(model, z, scale, mu);
  };
}

// Injected faults, applied to the quantities under test; the checks always use the model's Q.
enum class Fault { None, FlippedQ, DroppedK, DroppedGamma, DroppedCurvatureTerm };

inline const char* to_string(Fault f) {
  switch (f) {
    case Fault::None: return "none";
    case Fault::FlippedQ: return "flipped-Q";
    case Fault::DroppedK: return "dropped-K";
    case Fault::DroppedGamma: return "dropped-Gamma";
    case Fault::DroppedCurvatureTerm: return "dropped-curvature-term";
  }
  return "?";
}

namespace detail {

// One sign flipped, parity kept.
inline PolarizationForm flipped(const PolarizationForm& q) {
  Mat m = q.matrix();
  Eigen::Index r, c;
  m.cwiseAbs().maxCoeff(&r, &c);
  m(r, c) = -m(r, c);
  if (r != c) m(c, r) = -m(c, r);
  return PolarizationForm(m, q.weight());
}

inline double rel(double num, double den) { return num / std::max(den, 1e-300); }

}  // namespace detail

struct SuiteOptions {
  FDConfig fd;
  Fault fault = Fault::None;
  bool with_fd = true;
  Tolerances tol;
};

// Identities of the covariant chain at each point, closed-form and against differences.
inline ValidationReport lemma_suite(const VhsModel& model, const std::vector<Point>& points,
                                    const SuiteOptions& opt = {}) {
  ValidationReport rep;
  rep.subject = "identity suite " + model.name + (opt.fault == Fault::None ? "" : std::string(" fault=") + to_string(opt.fault));
  const PolarizationForm& q = model.polarization();
  const PolarizationForm qt = opt.fault == Fault::FlippedQ ? detail::flipped(q) : q;
  const int n = q.weight();
  const int m = model.m();
  const double tc = opt.fd.tolerance("closed");
  const double tf = opt.fd.tolerance("fd");

  std::map<std::string, std::pair<double, double>> worst;  // name -> (residual, tolerance)
  std::map<std::string, std::string> refs;
  std::map<std::string, std::string> errors;
  auto note = [&](const std::string& name, const std::string& ref, double r, double tol) {
    auto& w = worst[name];
    if (!std::isfinite(r)) w.first = INFINITY;
    else w.first = std::max(w.first, r);
    w.second = tol;
    refs[name] = ref;
  };
  auto guard = [&](const std::string& name, const std::string& ref, double tol, const std::function<void()>& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      note(name, ref, INFINITY, tol);
      errors[name] = e.what();
    }
  };

  for (const auto& z : points) {
    const int order = n >= 3 ? 4 : 3;
    JetSection jet;
    CovariantFrame fr;
    try {
      jet = model.jet(z, order);
      fr = covariant_frame(jet, q);
    } catch (const std::exception& e) {
      note("frame", "covariant frame constructible", INFINITY, 0);
      errors["frame"] = e.what();
      continue;
    }
    if (opt.fault == Fault::FlippedQ) {
      // K_i and D_i Omega as an implementation using the corrupted form would produce them
      const Vec o = jet.value();
      for (int i = 0; i < m; ++i) {
        const Vec oi = jet.coeff(unit_index(i));
        fr.k[i] = -qt.pair_bar(oi, o) / qt.pair_bar(o, o);
        fr.d.col(i) = oi + fr.k[i] * o;
      }
    }
    if (opt.fault == Fault::DroppedK)
      for (int i = 0; i < m; ++i) fr.d.col(i) = jet.coeff(unit_index(i));
    if (opt.fault == Fault::DroppedGamma)
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
          fr.dd[j][i] = fr.jets->d[i].derivative(j).value() + fr.k[j] * fr.d.col(i);
    const Vec om = fr.omega;
    const cplx p = q.pair_bar(om, om);

    guard("D-Omega-isotropic", "(D_i Omega, conj Omega) = 0", tc, [&] {
      for (int i = 0; i < m; ++i)
        note("D-Omega-isotropic", "(D_i Omega, conj Omega) = 0", detail::rel(std::abs(q.pair_bar(fr.d.col(i), om)),
                                                                  fr.d.col(i).norm() * om.norm()), tc);
    });
    guard("metric-from-D-Omega", "g = -(D_i Omega, conj D_j Omega) / (Omega, conj Omega)", tc, [&] {
      Mat g = wp_metric(jet, q).h;
      Mat g3(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) g3(i, j) = -q.pair_bar(fr.d.col(i), fr.d.col(j)) / p;
      note("metric-from-D-Omega", "g = -(D_i Omega, conj D_j Omega) / (Omega, conj Omega)", rel_diff(g, g3), tc);
    });
    guard("DD-Omega-isotropic", "(D_j D_i Omega, conj Omega) = 0", tc, [&] {
      double r1 = 0, r2 = 0, r3 = 0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          const Vec& x = fr.dd[j][i];
          r1 = std::max(r1, detail::rel(std::abs(q.pair_bar(x, om)), x.norm() * om.norm()));
          for (int l = 0; l < m; ++l)
            r2 = std::max(r2, detail::rel(std::abs(q.pair_bar(x, fr.d.col(l))), x.norm() * fr.d.col(l).norm()));
          r3 = std::max(r3, detail::rel((x - fr.dd[i][j]).norm(), x.norm()));
        }
      note("DD-Omega-isotropic", "(D_j D_i Omega, conj Omega) = 0", r1, tc);
      note("DD-Omega-vs-D-Omega", "(D_j D_i Omega, conj D_l Omega) = 0", r2, tc);
      note("DD-commute", "D_j D_i Omega = D_i D_j Omega", r3, tc);
    });
    guard("kahler", "d_k g_{i jbar} = d_i g_{k jbar}", tc, [&] {
      const auto& lj = *fr.jets;
      double worst_k = 0, scale = 0;
      for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k)
          for (int j = 0; j < m; ++j) {
            cplx a = lj.g[i][j].derivative(k).value();
            cplx b = lj.g[k][j].derivative(i).value();
            worst_k = std::max(worst_k, std::abs(a - b));
            scale = std::max(scale, std::abs(fr.g(i, j)));
          }
      note("kahler", "d_k g_{i jbar} = d_i g_{k jbar}", detail::rel(worst_k, scale), tc);
    });
    guard("strominger-symmetry", "R has Kaehler symmetries", tc, [&] {
      Tensor4 f = f_tensor(fr, q);
      note("strominger-symmetry", "R has Kaehler symmetries",
           kahler_symmetry_residual(wp_curvature(fr, f, fr.g).r), tc);
    });
    if (n >= 3) {
      guard("T-low-components", "T has no H^{n,0} or H^{n-1,1} component", tc, [&] {
        HodgeDecompositionAt dec = decomposition_at(jet, q, opt.tol);
        ThirdOrderChain ch = third_order_chain(fr, dec, q, default_mu(m, n), opt.tol);
        note("T-low-components", "T has no H^{n,0} or H^{n-1,1} component", ch.low_residual, tc);
        note("T-symmetric", "T symmetric in (k, a, i)", ch.symmetry_residual, tc);
        if (n == 4) {
          Tensor4 xi = yukawa4(jet, q);
          ValidationReport y = yukawa4_report(xi, fr, ch, q, {opt.tol.rank, tc});
          for (const auto& c : y.checks) note("xi " + c.name, c.ref, c.residual, tc);
        }
      });
    }

    if (!opt.with_fd) continue;
    const std::vector<double> scale = jet.scale;
    // dbar_j D_i Omega = g_{i jbar} Omega, and dbar_j K_i = g_{i jbar}
    guard("dbar-D-Omega", "dbar_j D_i Omega = g_{i jbar} Omega", tf, [&] {
      for (int i = 0; i < m; ++i) {
        auto d_i = [&, i](const std::vector<cplx>& t) {
          Point zz(m);
          for (int a = 0; a < m; ++a) zz[a] = z[a] + scale[a] * t[a];
          JetSection j1 = model.jet(zz, 1, scale);
          Vec o = j1.value(), oi = j1.coeff(unit_index(i));
          cplx kk = -qt.pair_bar(oi, o) / qt.pair_bar(o, o);
          Mat out(o.size(), 2);
          out.col(0) = opt.fault == Fault::DroppedK ? oi : Vec(oi + kk * o);
          out.col(1) = Vec::Constant(o.size(), kk);
          return out;
        };
        for (int j = 0; j < m; ++j) {
          Mat db = fd_dbar(d_i, m, j, opt.fd);
          Vec lhs = db.col(0);
          note("dbar-D-Omega", "dbar_j D_i Omega = g_{i jbar} Omega",
               detail::rel((lhs - fr.g(i, j) * om).norm(), std::abs(fr.g(i, j)) * om.norm()), tf);
          note("dbar-K", "dbar_j K_i = g_{i jbar}", rel_diff(db(0, 1), fr.g(i, j)), tf);
        }
      }
    });
    guard("fd-metric", "g = -d dbar log (Omega, conj Omega)", tf, [&] {
      MetricField fdg = fd_metric_from_potential(model, z, opt.fd);
      note("fd-metric", "g = -d dbar log (Omega, conj Omega)", rel_diff(fdg.h, wp_metric(jet, q).h), tf);
    });
    guard("fd-strominger", "Strominger curvature = curvature of g", tf, [&] {
      CurvatureField fdr = fd_curvature(wp_metric_function(model, z, scale), m, z, scale, opt.fd);
      Tensor4 f = f_tensor(fr, q);
      note("fd-strominger", "Strominger curvature = curvature of g", rel_diff(wp_curvature(fr, f, fr.g).r, fdr.r), tf);
    });
    if (n >= 3) {
      guard("dbar-DD-Omega", "dbar_l D_a D_i Omega = F_{i taubar a lbar} g^{gamma taubar} D_gamma Omega", tf, [&] {
        Tensor4 f = f_tensor(fr, q);
        Mat gi = upper_inverse(fr.g);
        for (int a = 0; a < m; ++a)
          for (int i = 0; i < m; ++i) {
            auto ddf = [&, a, i](const std::vector<cplx>& t) {
              Point zz(m);
              for (int c = 0; c < m; ++c) zz[c] = z[c] + scale[c] * t[c];
              CovariantFrame f2 = covariant_frame(model.jet(zz, 3, scale), qt);
              Mat out = f2.dd[a][i];
              return out;
            };
            for (int l = 0; l < m; ++l) {
              Vec lhs = fd_dbar(ddf, m, l, opt.fd).col(0);
              Vec rhs = Vec::Zero(om.size());
              for (int gm = 0; gm < m; ++gm)
                for (int tau = 0; tau < m; ++tau) rhs += f(i, tau, a, l) * gi(gm, tau) * fr.d.col(gm);
              note("dbar-DD-Omega", "dbar_l D_a D_i Omega = F_{i taubar a lbar} g^{gamma taubar} D_gamma Omega",
                   detail::rel((lhs - rhs).norm(), std::max(rhs.norm(), fr.dd[a][i].norm() * std::abs(fr.g(0, 0)))), tf);
            }
          }
      });
      guard("fd-partial-hodge", "curvature of omega_mu = curvature of h by differences", 1e-3, [&] {
        const double mu = default_mu(m, n);
        HodgeDecompositionAt dec = decomposition_at(jet, q, opt.tol);
        Tensor4 f = f_tensor(fr, q);
        MetricField g{jet.z0, scale, fr.g, "wp"};
        MetricField h = ph_metric(g, f, mu);
        ThirdOrderChain ch = third_order_chain(fr, dec, q, mu, opt.tol);
        if (opt.fault == Fault::DroppedCurvatureTerm)
          for (auto& a : ch.ddd)
            for (auto& b : a)
              for (auto& v : b) v.setZero();
        CurvatureField rt = ph_curvature(ch, fr, fr.g, h.h, f, q);
        CurvatureField fdr = fd_curvature(ph_metric_function(model, z, scale, mu), m, z, scale, opt.fd);
        note("fd-partial-hodge", "curvature of omega_mu = curvature of h by differences", rel_diff(rt.r, fdr.r), 1e-3);
      });
    }
  }
  for (const auto& [name, w] : worst) {
    auto it = errors.find(name);
    rep.add(name, refs[name], w.first, w.second, it == errors.end() ? std::string{} : it->second);
  }
  return rep;
}

// Curvature of omega_mu from the closed formula against differences of h.
inline ValidationReport ph_curvature_report(const VhsModel& model, const std::vector<Point>& points,
                                       std::optional<double> mu = std::nullopt, const FDConfig& cfg = {},
                                       double tol = 1e-3) {
  ValidationReport rep;
  rep.subject = "omega_mu curvature vs differences " + model.name;
  if (model.weight() < 3) {
    rep.add_flag("ph-curvature", "needs n >= 3", true, "skipped: n < 3");
    return rep;
  }
  double worst = 0;
  GeometryOptions go;
  go.mu = mu;
  go.hodge = false;
  go.dim1 = false;
  for (const auto& z : points) {
    PointGeometry pg = compute_point(model, z, go);
    CurvatureField fdr = fd_curvature(ph_metric_function(model, z, pg.jet.scale, pg.mu), model.m(), z, pg.jet.scale, cfg);
    worst = std::max(worst, rel_diff(pg.rt->r, fdr.r));
  }
  rep.add("ph-curvature", "closed-form curvature of omega_mu = curvature of h by differences", worst, tol);
  return rep;
}

// Direct Hom-norm Hodge metric against the closed forms, and WP domination.
inline ValidationReport hodge_identity_report(const VhsModel& model, const std::vector<Point>& points,
                                              double tol = 1e-8) {
  ValidationReport rep;
  rep.subject = "Hodge metric identities " + model.name;
  const int n = model.weight();
  GeometryOptions go;
  go.partial_hodge = false;
  go.dim1 = false;
  double worst = 0;
  std::vector<DominationPoint> dom;
  for (const auto& z : points) {
    PointGeometry pg = compute_point(model, z, go);
    if (n == 3 || n == 4) worst = std::max(worst, rel_diff(pg.hodge->h, hodge_metric_closed_form(pg.g.h, pg.ric.h, n)));
    dom.push_back(domination_point(pg.g.h, pg.hodge->h, pg.ric.h, z));
  }
  if (n == 3 || n == 4)
    rep.add("hodge closed form", n == 3 ? "h^H = (m+3) g + Ric" : "h^H = 2(m+2) g + 2 Ric", worst, tol);
  rep.append(domination_report(dom));
  return rep;
}

// Scalars and z-coordinate tensors under Omega -> f Omega for f = 2 and f = 1 + z_1/2.
inline ValidationReport gauge_report(const VhsModel& model, const std::vector<Point>& points, double tol = 1e-9) {
  ValidationReport rep;
  rep.subject = "gauge invariance " + model.name;
  const int m = model.m();
  GaugeFactor two, lin;
  two.terms[std::vector<int>(m, 0)] = 2.0;
  lin.terms[std::vector<int>(m, 0)] = 1.0;
  std::vector<int> e1(m, 0);
  e1[0] = 1;
  lin.terms[e1] = 0.5;
  auto values = [&](const VhsModel& mdl, const Point& z) {
    PointGeometry pg = compute_point(mdl, z);
    std::vector<Mat> v{pg.g.in_z_coordinates(), pg.ric.in_z_coordinates()};
    if (pg.h) v.push_back(pg.h->in_z_coordinates());
    if (pg.hodge) v.push_back(pg.hodge->in_z_coordinates());
    Mat s(1, 3);
    s(0, 0) = pg.wp_sectional();
    s(0, 1) = pg.ph_sectional().value_or(0.0);
    s(0, 2) = pg.yukawa ? pg.yukawa->rho : 0.0;
    v.push_back(s);
    return v;
  };
  for (const auto& [label, f] : {std::pair{std::string("f = 2"), two}, std::pair{std::string("f = 1 + z/2"), lin}}) {
    VhsModel gm = model.with_gauge(f);
    double worst = 0;
    for (const auto& z : points) {
      auto a = values(model, z), b = values(gm, z);
      for (size_t k = 0; k < a.size(); ++k) worst = std::max(worst, rel_diff(a[k], b[k]));
    }
    rep.add("gauge " + label, "metrics and curvature scalars unchanged under Omega -> f Omega", worst, tol);
  }
  return rep;
}

}  // namespace hodgewp
