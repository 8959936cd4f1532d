// Curvature of the one-parameter shift orbit along a ray into the puncture.
#include <cstdio>

#include "hodgewp/hodgewp.hpp"

using namespace hodgewp;

int main(int argc, char** argv) try {
  const std::string path = argc > 1 ? argv[1] : std::string(HODGEWP_ASSET_DIR) + "/model_a.json";
  ModelFile f = load_model(path);
  if (f.model.m() != 1) throw Error(ErrorKind::Input, "example expects a one-parameter model");
  const double r0 = std::abs(f.model.samples.front()[0]);
  std::printf("%-12s %-14s %-12s %-12s %-12s\n", "r", "g_zz", "wp_hsc", "ph_hsc", "rho");
  for (int j = 0; j < 6; ++j) {
    const double r = r0 * std::pow(0.1, j);
    PointGeometry pg = compute_point(f.model, {cplx(r, 0)});
    std::printf("%-12.3e %-14.6e %-12.8f %-12.8f", r, pg.g.in_z_coordinates()(0, 0).real(), pg.wp_sectional(),
                pg.ph_sectional().value_or(NAN));
    if (pg.yukawa) std::printf(" %-12.8f", pg.yukawa->rho);
    std::printf("\n");
  }
} catch (const Error& e) {
  std::fprintf(stderr, "%s\n", e.what());
  return 1;
}
