#pragma once

// Seeded generators for property tests. SplitMix64 keeps the streams
// independent of the standard library's distribution implementations.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "divflow/grid.hpp"

namespace gen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL) {}

  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return (next() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
  double normal() {
    const double u1 = 1.0 - uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t s_;
};

inline divflow::FaceField random_faces(const divflow::GridPtr& g, Rng& rng, double amp = 1.0) {
  divflow::FaceField u(g);
  for (int a = 0; a < g->dim(); ++a)
    for (double& x : u.component(a)) x = rng.uniform(-amp, amp);
  return u;
}

inline divflow::NodeField random_nodes(const divflow::GridPtr& g, Rng& rng, double amp = 1.0, bool interior_only = true) {
  divflow::NodeField w(g);
  for (std::size_t k = 0; k < w.size(); ++k)
    if (!interior_only || g->is_interior(k)) w[k] = rng.uniform(-amp, amp);
  return w;
}

/// Piecewise-smooth 1D signal: a few random jumps on top of a random low
/// frequency profile.
inline divflow::FaceField random_signal(const divflow::GridPtr& g, Rng& rng) {
  const int jumps = rng.integer(1, 4);
  std::vector<double> at(jumps), size(jumps);
  for (int j = 0; j < jumps; ++j) {
    at[j] = rng.uniform(g->lo(0), g->hi(0));
    size[j] = rng.uniform(-1.0, 1.0);
  }
  const double a1 = rng.uniform(-1.0, 1.0), a2 = rng.uniform(-0.5, 0.5), ph = rng.uniform(0.0, 6.0);
  return divflow::sample_faces(g, [&](int, std::array<double, 2> x) {
    double v = a1 * std::sin(2.0 * x[0] + ph) + a2 * std::cos(7.0 * x[0]);
    for (int j = 0; j < jumps; ++j)
      if (x[0] > at[j]) v += size[j];
    return v;
  });
}

}  // namespace gen
