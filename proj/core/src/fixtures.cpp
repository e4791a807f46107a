#include "divflow/fixtures.hpp"

#include "divflow/error.hpp"
#include "divflow/tv1d.hpp"

namespace divflow {

std::vector<FixtureInfo> list_fixtures() {
  return {
      {"paper-remark-1d", "A=(0,1), u0 = 2-3x on (1/3,2/3) and 0 elsewhere; jump +1 at 1/3, slope -3, no jump at 2/3", 1,
       false},
      {"step-1d", "A=(0,1), u0 = 0 on (0,1/2) and 1 on (1/2,1); total variation 1", 1, false},
      {"radial-disk", "disk of radius 1, radial u0 with div u0 = 1 on r < 1/2 and 0 beyond", 2, false},
      {"crown", "disk of radius 1, div u0 = -1 on r < 0.3 and +1 on 0.4 < r < 0.7", 2, true},
      {"random-walk", "Gaussian random walk on (0,1) with increment variance sigma^2 h", 1, false},
  };
}

FaceField remark_u0(const GridPtr& grid) {
  return sample_faces(grid, [](int, std::array<double, 2> x) {
    return x[0] > 1.0 / 3.0 && x[0] < 2.0 / 3.0 ? 2.0 - 3.0 * x[0] : 0.0;
  });
}

FaceField step_u0(const GridPtr& grid) {
  return sample_faces(grid, [](int, std::array<double, 2> x) { return x[0] > 0.5 ? 1.0 : 0.0; });
}

RadialDatum radial_disk_datum() { return RadialDatum::disk(0.5, 1.0); }

RadialDatum crown_datum() { return RadialDatum{{{0.0, 0.3, -1.0}, {0.4, 0.7, 1.0}}}; }

FaceField load_fixture(const std::string& name, const FixtureParams& p) {
  if (p.n != 0 && p.n < 3) throw Error(ErrorCode::ConfigInvalid, "fixture grid size n must be >= 3");
  if (name == "paper-remark-1d") return remark_u0(Grid::line(0.0, 1.0, p.n ? p.n : 1001));
  if (name == "step-1d") return step_u0(Grid::line(0.0, 1.0, p.n ? p.n : 1001));
  if (name == "radial-disk") return lift_radial(radial_disk_datum(), Grid::disk(1.0, p.n ? p.n : 129));
  if (name == "crown") return lift_radial(crown_datum(), Grid::disk(1.0, p.n ? p.n : 129));
  if (name == "random-walk") return make_rough_path(p.n ? p.n : 2000, p.sigma, p.seed).field();
  throw Error(ErrorCode::ConfigInvalid, "unknown fixture '" + name + "'");
}

}  // namespace divflow
