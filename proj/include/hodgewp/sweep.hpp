#pragma once

// Point sweeps (ray, grid, explicit list) producing one table row per point.

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hodgewp/geometry.hpp"
#include "hodgewp/plot.hpp"

namespace hodgewp {

struct Quantities {
  bool wp = true;
  bool ph = false;
  bool hodge = false;
  bool dim1 = false;
  std::optional<double> mu;
  int pairs = 50;
  std::uint64_t seed = kDefaultSeed;
};

struct SweepSpec {
  enum Kind { Ray, Grid, List } kind = Ray;
  // ray: z_k = r e^{i angle}, r = r0 * factor^j, j < count
  double r0 = 0.1, factor = 0.5, angle = 0;
  int count = 10;
  // grid: m = 1 box in the z-plane, m = 2 box of real (z_1, z_2)
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  int nx = 0, ny = 0;
  std::vector<Point> points;
  Quantities q;
  int threads = 1;
};

inline std::vector<Point> sweep_points(const SweepSpec& s, const VhsModel& model) {
  const int m = model.m();
  std::vector<Point> pts;
  if (s.kind == SweepSpec::Ray) {
    if (s.count < 1) throw Error(ErrorKind::Input, "ray count must be >= 1");
    if (!(s.r0 > 0) || !(s.factor > 0)) throw Error(ErrorKind::Input, "ray needs r0 > 0 and factor > 0");
    for (int j = 0; j < s.count; ++j) pts.emplace_back(m, std::polar(s.r0 * std::pow(s.factor, j), s.angle));
  } else if (s.kind == SweepSpec::Grid) {
    if (s.nx < 1 || s.ny < 1) throw Error(ErrorKind::Input, "grid resolution must be >= 1");
    auto at = [](double a, double b, int n, int k) { return n == 1 ? a : a + (b - a) * k / (n - 1); };
    for (int j = 0; j < s.ny; ++j)
      for (int i = 0; i < s.nx; ++i) {
        double x = at(s.x0, s.x1, s.nx, i), y = at(s.y0, s.y1, s.ny, j);
        if (m == 1) pts.push_back({cplx(x, y)});
        else if (m == 2) pts.push_back({cplx(x, 0), cplx(y, 0)});
        else throw Error(ErrorKind::Input, "grid sweeps need m <= 2");
      }
  } else {
    pts = s.points;
    if (pts.empty()) throw Error(ErrorKind::Input, "empty point list");
  }
  const double rad = model.domain_radius();
  for (const auto& z : pts) {
    if (static_cast<int>(z.size()) != m) throw Error(ErrorKind::Input, "point dimension differs from m");
    for (cplx c : z)
      if (!(std::abs(c) > 0) || std::abs(c) >= rad)
        throw Error(ErrorKind::Domain, "point coordinate " + format_g17(c.real()) + "+" + format_g17(c.imag()) +
                                           "i outside 0 < |z| < " + format_g17(rad));
  }
  return pts;
}

namespace detail {

inline void metric_columns(std::vector<std::string>& h, const std::string& pre, int m) {
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      std::string ij = std::to_string(i + 1) + std::to_string(j + 1);
      h.push_back(pre + ij + "_re");
      if (i != j) h.push_back(pre + ij + "_im");
    }
}

inline void metric_values(std::vector<double>& row, const Mat& g) {
  const int m = static_cast<int>(g.rows());
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      row.push_back(g(i, j).real());
      if (i != j) row.push_back(g(i, j).imag());
    }
}

inline bool fourfold_applies(int n, int m, double mu) { return n == 4 && std::abs(mu - (m + 2.0)) < 1e-12; }

}  // namespace detail

inline double sweep_mu(const VhsModel& model, const Quantities& q) {
  return q.mu ? *q.mu : default_mu(model.m(), model.weight());
}

// Column schema; predicate columns end in "_ok" (1 = pass).
inline std::vector<std::string> sweep_header(const VhsModel& model, const Quantities& q) {
  const int m = model.m();
  const int n = model.weight();
  std::vector<std::string> h{"index"};
  for (int k = 1; k <= m; ++k) {
    h.push_back("z" + std::to_string(k) + "_re");
    h.push_back("z" + std::to_string(k) + "_im");
  }
  h.push_back("r");
  h.push_back("log_inv_r");
  if (q.wp) {
    detail::metric_columns(h, "wp_g", m);
    for (const char* c : {"wp_hsc", "wp_ric_lo", "wp_ric_hi", "wp_sign_flip", "wp_positive_ok"}) h.push_back(c);
  }
  if (q.ph) {
    h.push_back("ph_mu");
    detail::metric_columns(h, "ph_h", m);
    if (n >= 3) {
      h.push_back("ph_hsc");
      h.push_back("ph_scalar");
    }
    h.push_back("ph_positive_ok");
    if (detail::fourfold_applies(n, m, sweep_mu(model, q)))
      for (const char* c : {"ph_min_bisectional", "ph_sectional_excess", "ph_final_ratio", "ph_bisectional_ok",
                            "ph_sectional_ok", "ph_final_ok"})
        h.push_back(c);
  }
  if (q.hodge) {
    detail::metric_columns(h, "hodge_h", m);
    h.push_back("hodge_g_over_h");
    if (n == 3 || n == 4) {
      h.push_back("hodge_identity_residual");
      h.push_back("hodge_identity_ok");
    }
  }
  if (q.dim1)
    for (const char* c : {"dim1_lambda", "dim1_abs_f111", "dim1_abs_f1111", "dim1_a", "dim1_h", "dim1_rho",
                          "dim1_rho_formula", "dim1_formula_ok"})
      h.push_back(c);
  return h;
}

inline std::vector<double> sweep_row(const VhsModel& model, const Point& z, const Quantities& q, int index) {
  const int m = model.m();
  const int n = model.weight();
  if (q.dim1 && (n != 3 || m != 1)) throw Error(ErrorKind::Domain, "dim1 quantities need n = 3 and m = 1");
  GeometryOptions go;
  go.mu = sweep_mu(model, q);
  go.partial_hodge = q.ph;
  go.hodge = q.hodge;
  go.dim1 = q.dim1;
  PointGeometry pg = compute_point(model, z, go);

  std::vector<double> row{static_cast<double>(index)};
  double r = 0;
  for (cplx c : z) {
    row.push_back(c.real());
    row.push_back(c.imag());
    r = std::max(r, std::abs(c));
  }
  row.push_back(r);
  row.push_back(std::log(1 / r));
  const Mat gz = pg.g.in_z_coordinates();
  if (q.wp) {
    detail::metric_values(row, gz);
    DominationPoint ric = domination_point(Mat::Zero(m, m), pg.g.h, pg.ric.h, z);
    row.push_back(pg.wp_sectional());
    row.push_back(ric.ric_lo);
    row.push_back(ric.ric_hi);
    row.push_back(0);  // sign flip, filled in after the sweep
    row.push_back(pg.g.min_eigenvalue() > 0);
  }
  if (q.ph) {
    row.push_back(pg.mu);
    detail::metric_values(row, pg.h->in_z_coordinates());
    std::optional<FourfoldPointBound> fb;
    if (pg.rt) fb = fourfold_point_bound(*pg.rt, *pg.h, detail::fourfold_applies(n, m, pg.mu) ? q.pairs : 0,
                                         q.seed + static_cast<std::uint64_t>(index));
    if (n >= 3) {
      row.push_back(*pg.ph_sectional());
      row.push_back(-fb->scalar_curvature);
    }
    row.push_back(pg.h->min_eigenvalue() > 0);
    if (detail::fourfold_applies(n, m, pg.mu)) {
      row.push_back(fb->min_bisectional);
      row.push_back(fb->sectional_excess);
      row.push_back(fb->final_ratio);
      row.push_back(fb->min_bisectional >= -1e-12);
      row.push_back(fb->sectional_excess <= 1e-12);
      row.push_back(fb->final_ratio <= 1.0);
    }
  }
  if (q.hodge) {
    detail::metric_values(row, pg.hodge->in_z_coordinates());
    row.push_back(domination_point(pg.g.h, pg.hodge->h, Mat(), z).g_over_h);
    if (n == 3 || n == 4) {
      double res = rel_diff(pg.hodge->h, hodge_metric_closed_form(pg.g.h, pg.ric.h, n));
      row.push_back(res);
      row.push_back(res <= 1e-8);
    }
  }
  if (q.dim1) {
    const YukawaChain1D& y = *pg.yukawa;
    double kk = rho_two_fraction(y.x, y.y);
    row.push_back(y.lambda);
    row.push_back(std::abs(y.f111));
    row.push_back(std::abs(y.f1111));
    row.push_back(y.a);
    row.push_back(y.h);
    row.push_back(y.rho);
    row.push_back(kk);
    row.push_back(std::abs(y.rho - kk) <= 1e-9 * std::max(1.0, std::abs(y.rho)));
  }
  return row;
}

struct SweepResult {
  CsvTable table;
  std::vector<int> sign_flips;  // rows j where wp_hsc changes sign between j-1 and j
  std::vector<std::string> failed_predicates;
  bool passed() const { return failed_predicates.empty(); }
};

inline SweepResult run_sweep(const VhsModel& model, const SweepSpec& spec) {
  const std::vector<Point> pts = sweep_points(spec, model);
  SweepResult res;
  res.table.header = sweep_header(model, spec.q);
  std::vector<std::vector<double>> rows(pts.size());
  std::vector<std::exception_ptr> errs(pts.size());
  const int nt = std::max(1, std::min<int>(spec.threads, static_cast<int>(pts.size())));
  auto work = [&](int t) {
    for (size_t i = t; i < pts.size(); i += nt) {
      try {
        rows[i] = sweep_row(model, pts[i], spec.q, static_cast<int>(i));
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  if (nt == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (size_t i = 0; i < pts.size(); ++i)
    if (errs[i]) {
      try {
        std::rethrow_exception(errs[i]);
      } catch (const Error& e) {
        throw Error(e.kind(), "point " + std::to_string(i) + ": " + e.what());
      }
    }
  res.table.rows = std::move(rows);

  const int hsc = res.table.column("wp_hsc"), flip = res.table.column("wp_sign_flip");
  if (hsc >= 0)
    for (size_t i = 1; i < res.table.rows.size(); ++i) {
      double a = res.table.rows[i - 1][hsc], b = res.table.rows[i][hsc];
      if ((a < 0 && b > 0) || (a > 0 && b < 0)) {
        res.table.rows[i][flip] = 1;
        res.sign_flips.push_back(static_cast<int>(i));
      }
    }
  for (size_t c = 0; c < res.table.header.size(); ++c) {
    const std::string& name = res.table.header[c];
    if (name.size() < 3 || name.compare(name.size() - 3, 3, "_ok") != 0) continue;
    for (const auto& r : res.table.rows)
      if (r[c] != 1) {
        res.failed_predicates.push_back(name);
        break;
      }
  }
  return res;
}

}  // namespace hodgewp
