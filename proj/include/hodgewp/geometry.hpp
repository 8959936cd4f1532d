#pragma once

// Everything computable at one point of a model, in one pass.

#include <cmath>
#include <optional>

#include "hodgewp/dim1_asymptotics.hpp"
#include "hodgewp/hodge_metric.hpp"
#include "hodgewp/partial_hodge.hpp"
#include "hodgewp/vhs_models.hpp"
#include "hodgewp/wp_geometry.hpp"

namespace hodgewp {

struct GeometryOptions {
  std::optional<double> mu;  // defaults to default_mu(m, n)
  bool partial_hodge = true;
  bool hodge = true;
  bool dim1 = true;
  Tolerances tol;
};

struct PointGeometry {
  Point z;
  JetSection jet;
  CovariantFrame frame;
  HodgeDecompositionAt dec;
  MetricField g;
  Tensor4 f;
  CurvatureField r;
  MetricField ric;
  double mu = 0;
  std::optional<MetricField> h;
  std::optional<ThirdOrderChain> chain;
  std::optional<CurvatureField> rt;
  std::optional<MetricField> hodge;
  std::optional<YukawaChain1D> yukawa;
  std::optional<Tensor4> xi;

  int m() const { return g.m(); }
  // Holomorphic sectional curvature along e_1 in the usual sign.
  double wp_sectional() const { return holomorphic_sectional(r.r, g.h, 0); }
  std::optional<double> ph_sectional() const {
    if (!rt) return std::nullopt;
    return holomorphic_sectional(rt->r, h->h, 0);
  }
};

inline PointGeometry compute_point(const VhsModel& model, const Point& z, const GeometryOptions& opt = {}) {
  const auto& q = model.polarization();
  const int n = q.weight();
  const int m = model.m();
  const bool third = n >= 3 && opt.partial_hodge;
  PointGeometry pg;
  pg.z = z;
  pg.jet = model.jet(z, third || (opt.dim1 && n == 3 && m == 1) ? 4 : 3);
  pg.frame = covariant_frame(pg.jet, q);
  pg.g = MetricField{pg.jet.z0, pg.jet.scale, pg.frame.g, "wp"};
  pg.f = f_tensor(pg.frame, q);
  pg.r = wp_curvature(pg.frame, pg.f, pg.frame.g);
  pg.ric = MetricField{pg.jet.z0, pg.jet.scale, ricci_from_f(pg.f, pg.frame.g), "ricci"};
  pg.dec = decomposition_at(pg.jet, q, opt.tol);
  pg.mu = opt.mu ? *opt.mu : default_mu(m, n);
  if (opt.partial_hodge) {
    pg.h = ph_metric(pg.g, pg.f, pg.mu);
    if (third) {
      pg.chain = third_order_chain(pg.frame, pg.dec, q, pg.mu, opt.tol);
      pg.rt = ph_curvature(*pg.chain, pg.frame, pg.frame.g, pg.h->h, pg.f, q);
    }
  }
  if (opt.hodge) pg.hodge = hodge_metric_direct(pg.jet, pg.dec, q, opt.tol);
  if (opt.dim1 && n == 3 && m == 1) pg.yukawa = yukawa_chain(pg.jet, q);
  if (n == 4 && pg.jet.order() >= 4) pg.xi = yukawa4(pg.jet, q);
  return pg;
}

// Metric evaluators in a fixed local frame, for finite-difference oracles.
inline Mat wp_metric_at(const VhsModel& model, const Point& z, const std::vector<double>& scale) {
  return wp_metric(model.jet(z, 1, scale), model.polarization()).h;
}

inline Mat ph_metric_at(const VhsModel& model, const Point& z, const std::vector<double>& scale, double mu) {
  JetSection jet = model.jet(z, 3, scale);
  CovariantFrame fr = covariant_frame(jet, model.polarization());
  MetricField g{jet.z0, jet.scale, fr.g, "wp"};
  return ph_metric(g, f_tensor(fr, model.polarization()), mu).h;
}

}  // namespace hodgewp
