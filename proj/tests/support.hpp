#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "hodgewp/hodgewp.hpp"

namespace testing {

using hodgewp::cplx;
using hodgewp::Mat;
using hodgewp::Point;
using hodgewp::Vec;

inline std::string asset(const std::string& name) { return std::string(HODGEWP_ASSET_DIR) + "/" + name; }

inline hodgewp::ModelFile load(const std::string& name) { return hodgewp::load_model(asset(name)); }

inline std::vector<Point> ray(double r0, double factor, int count, double angle = 0.0) {
  std::vector<Point> pts;
  for (int j = 0; j < count; ++j) pts.push_back({std::polar(r0 * std::pow(factor, j), angle)});
  return pts;
}

// Independent evaluation of a one-variable nilpotent orbit with constant A:
// exp(-(i/2pi) log(z) N) a0, summed until the powers of N vanish.
inline Vec orbit_value(const Mat& n, const Vec& a0, cplx z) {
  const cplx zeta = -cplx(0, 1) / (2 * M_PI) * std::log(z);
  Vec term = a0, total = a0;
  for (int k = 1; k <= a0.size(); ++k) {
    term = (zeta / static_cast<double>(k)) * (n * term);
    total += term;
  }
  return total;
}

// (5k)! / (k!)^5 z^k summed directly.
inline cplx quintic_fundamental(cplx z, int terms = 60) {
  cplx sum = 0, zk = 1;
  double c = 1;
  for (int k = 0; k < terms; ++k) {
    sum += c * zk;
    zk *= z;
    for (int j = 1; j <= 5; ++j) c *= 5 * k + j;
    c /= std::pow(static_cast<double>(k + 1), 5);
  }
  return sum;
}

// Taylor coefficients of f at z0 by the trapezoid rule on a circle of radius rho.
template <typename F>
std::vector<Vec> cauchy_coefficients(F&& f, cplx z0, double rho, int order, int samples = 64) {
  std::vector<Vec> out;
  std::vector<Vec> vals;
  for (int j = 0; j < samples; ++j) vals.push_back(f(z0 + std::polar(rho, 2 * M_PI * j / samples)));
  for (int k = 0; k <= order; ++k) {
    Vec acc = Vec::Zero(vals[0].size());
    for (int j = 0; j < samples; ++j) acc += std::polar(1.0, -2 * M_PI * j * k / samples) * vals[j];
    out.push_back(acc / (samples * std::pow(rho, k)));
  }
  return out;
}

}  // namespace testing
