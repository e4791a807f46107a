#pragma once

// Built-in initial data.

#include <cstdint>
#include <string>
#include <vector>

#include "divflow/grid.hpp"
#include "divflow/heleshaw.hpp"

namespace divflow {

struct FixtureInfo {
  std::string name;
  std::string description;
  int dim = 1;
  bool exploratory = false;
};

std::vector<FixtureInfo> list_fixtures();

struct FixtureParams {
  int n = 0;  ///< nodes per axis (faces for random-walk); 0 selects the fixture default
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

/// Throws CONFIG_INVALID for unknown names.
FaceField load_fixture(const std::string& name, const FixtureParams& params = {});

/// u0 = 2 - 3x on (1/3, 2/3) and 0 elsewhere on (0, 1).
FaceField remark_u0(const GridPtr& grid);
/// u0 = 0 on x < 1/2 and 1 beyond.
FaceField step_u0(const GridPtr& grid);

RadialDatum radial_disk_datum();  ///< g = 1 on r < 1/2
RadialDatum crown_datum();        ///< g = -1 on r < 0.3, g = 1 on 0.4 < r < 0.7

}  // namespace divflow
