#pragma once

// Stencil form of the obstacle problem shared by the solvers in this library.

#include <algorithm>
#include <array>
#include <vector>

#include "divflow/obstacle.hpp"

namespace divflow::detail {

struct BoxSystem {
  GridPtr grid;
  std::vector<double> g;   ///< div u0 (density)
  std::vector<double> lo;  ///< lower obstacle, 0 off the interior
  std::vector<double> hi;
  std::array<std::ptrdiff_t, 2> offset{1, 0};
  std::array<double, 2> inv_h2{0.0, 0.0};
  int dim = 1;
  double diag = 0.0;

  /// div(u0 + grad w) at an interior node.
  double residual(const std::vector<double>& w, std::size_t k) const {
    double r = g[k];
    for (int a = 0; a < dim; ++a) {
      const std::ptrdiff_t o = offset[a];
      r += (w[k + o] + w[k - o] - 2.0 * w[k]) * inv_h2[a];
    }
    return r;
  }

  double clamp(double x, std::size_t k) const { return std::min(std::max(x, lo[k]), hi[k]); }

  /// max |w - clamp(w + r/diag)| over interior nodes.
  double natural_residual(const std::vector<double>& w) const;
};

BoxSystem make_box_system(const ObstacleProblem& p);

/// Energy 1/2 |u0 + grad w|^2 on raw node values.
double energy(const FaceField& u0, const std::vector<double>& w);

ObstacleSolution finish(const ObstacleProblem& p, std::vector<double> w, long iterations, bool converged);

}  // namespace divflow::detail
