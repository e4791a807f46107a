#include <gtest/gtest.h>

#include <cmath>

#include "divflow/error.hpp"
#include "divflow/fixtures.hpp"
#include "divflow/flow.hpp"
#include "gen.hpp"

using namespace divflow;

namespace {

// Closed form of the flow from the remark datum while t < 1 - 2 sqrt(2)/3.
struct RemarkClosedForm {
  double t;
  double a() const { return (1.0 + 2.0 * std::sqrt(3.0 * t)) / 3.0; }
  double b() const { return 1.0 - std::sqrt(1.0 + 6.0 * t) / 3.0; }
  double u(double x) const {
    if (x < 1.0 / 3.0) return 3.0 * t;
    if (x < a()) return 1.0 - 2.0 * std::sqrt(3.0 * t);
    if (x < b()) return 2.0 - 3.0 * x;
    return std::sqrt(1.0 + 6.0 * t) - 1.0;
  }
};

std::size_t nearest_node(const Grid& g, double x) {
  return static_cast<std::size_t>(std::lround((x - g.lo(0)) / g.h(0)));
}

// Convex potential: its second differences along each axis are >= 0, so
// u0 - grad psi has a smaller divergence than u0 at every interior node.
NodeField convex_potential(const GridPtr& g, gen::Rng& rng) {
  const double a = rng.uniform(0.05, 0.5);
  const double x0 = rng.uniform(-0.5, 1.5), y0 = rng.uniform(-0.5, 1.5);
  const int kinks = rng.integer(0, 3);
  std::vector<std::array<double, 4>> planes(kinks);
  for (auto& p : planes) p = {rng.uniform(0.0, 0.3), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  return sample_nodes(g, [&](std::array<double, 2> x) {
    double v = a * ((x[0] - x0) * (x[0] - x0) + (x[1] - y0) * (x[1] - y0));
    for (const auto& p : planes) v += p[0] * std::abs(p[1] * x[0] + p[2] * x[1] - p[3]);
    return v;
  });
}

}  // namespace

TEST(Evolve, DivergenceFreeDatumIsStationary) {
  auto g1 = Grid::line(0.0, 1.0, 40);
  auto g2 = Grid::rectangle({0.0, 0.0}, {1.0, 1.0}, {16, 16});
  const double times[] = {0.0, 0.01, 0.1, 1.0};
  for (const auto& u0 : {FaceField(g1, -0.7), FaceField(g2, 1.3)}) {
    auto tr = evolve(u0, times);
    for (const auto& s : tr.states) {
      EXPECT_EQ(max_abs(s.w), 0.0);
      EXPECT_EQ(max_abs_diff(s.u, u0), 0.0);
      EXPECT_TRUE(s.e_plus.empty() && s.e_minus.empty());
      EXPECT_EQ(max_abs(s.v), 0.0);
    }
  }
}

TEST(Evolve, RejectsBadTimes) {
  auto g = Grid::line(0.0, 1.0, 10);
  const double unsorted[] = {0.1, 0.05};
  const double repeated[] = {0.1, 0.1};
  const double negative[] = {-0.1};
  EXPECT_THROW(evolve(FaceField(g), unsorted), Error);
  EXPECT_THROW(evolve(FaceField(g), repeated), Error);
  EXPECT_THROW(evolve(FaceField(g), negative), Error);
}

TEST(Evolve, RemarkClosedForm) {
  auto g = Grid::line(0.0, 1.0, 1001);
  const double h = g->h(0);
  const double times[] = {0.03, 0.05};
  auto tr = evolve(remark_u0(g), times);
  ASSERT_TRUE(tr.converged());
  for (const auto& s : tr.states) {
    RemarkClosedForm cf{s.t};
    double err = 0.0;
    for (std::size_t f = 0; f < g->face_count(0); ++f) {
      const double x = g->face_center(0, f)[0];
      if (std::abs(x - 1.0 / 3.0) < 2 * h || std::abs(x - cf.a()) < 2 * h || std::abs(x - cf.b()) < 2 * h) continue;
      err = std::max(err, std::abs(s.u.component(0)[f] - cf.u(x)));
    }
    EXPECT_LE(err, 5.0 * h) << "t=" << s.t;
  }
}

TEST(Evolve, RemarkValuesAtSampleTimes) {
  EXPECT_NEAR((RemarkClosedForm{0.03}).u(0.1), 0.09, 1e-15);
  EXPECT_NEAR((RemarkClosedForm{0.03}).u(0.9), 0.086278, 1e-6);
  EXPECT_NEAR((RemarkClosedForm{0.05}).u(0.9), 0.140175, 1e-6);
  EXPECT_NEAR((RemarkClosedForm{0.03}).b(), 0.637907, 1e-6);
  EXPECT_NEAR((RemarkClosedForm{0.05}).b(), 0.619942, 1e-6);
  EXPECT_NEAR((RemarkClosedForm{0.05}).u(0.35), 1.0 - 2.0 * std::sqrt(0.15), 1e-15);
}

TEST(Velocity, RemarkFixture) {
  auto g = Grid::line(0.0, 1.0, 1001);
  const double times[] = {0.03};
  auto tr = evolve(remark_u0(g), times);
  const auto& s = tr.states[0];
  EXPECT_NEAR(s.v[nearest_node(*g, 0.2)], 0.6, 0.05);
  EXPECT_NEAR(s.v[nearest_node(*g, 1.0 / 3.0)], 1.0, 0.02);
  // on the lower contact the velocity is -1
  EXPECT_NEAR(s.v[nearest_node(*g, 0.55)], -1.0, 0.02);
  for (std::size_t k = 0; k < s.v.size(); ++k) EXPECT_LE(std::abs(s.v[k]), 1.0 + 1e-6);
  auto again = velocity_at(tr, 0.03, s.dt_probe);
  EXPECT_LE(max_abs_diff(again, s.v), 1e-4);
}

TEST(Velocity, StationaryIsZero) {
  auto g = Grid::rectangle({0.0, 0.0}, {1.0, 1.0}, {10, 10});
  Trajectory tr;
  tr.u0 = FaceField(g, 0.4);
  EXPECT_EQ(max_abs(velocity_at(tr, 0.2, 1e-3)), 0.0);
  EXPECT_THROW(velocity_at(tr, 0.2, 0.0), Error);
}

TEST(ContactSets, RemarkFixture) {
  auto g = Grid::line(0.0, 1.0, 1001);
  const double h = g->h(0), t = 0.03;
  const double times[] = {0.0, t};
  auto tr = evolve(remark_u0(g), times);
  EXPECT_TRUE(tr.states[0].e_plus.empty());
  EXPECT_TRUE(tr.states[0].e_minus.empty());

  const auto& s = tr.states[1];
  ASSERT_FALSE(s.e_plus.empty());
  for (std::size_t k : s.e_plus) EXPECT_LE(std::abs(k * h - 1.0 / 3.0), 2.0 * h);
  RemarkClosedForm cf{t};
  ASSERT_FALSE(s.e_minus.empty());
  EXPECT_NEAR(s.e_minus.front() * h, cf.a(), 2.0 * h);
  EXPECT_NEAR(s.e_minus.back() * h, cf.b(), 2.0 * h);
  EXPECT_EQ(s.e_minus.size(), s.e_minus.back() - s.e_minus.front() + 1);

  auto cs = contact_sets(tr.u0, s, s.dt_probe);
  EXPECT_EQ(cs.e_plus, s.e_plus);
  EXPECT_EQ(cs.er_plus, s.er_plus);
  EXPECT_EQ(cs.er_minus, s.er_minus);
  EXPECT_TRUE(is_subset(cs.er_minus, cs.e_minus));
}

TEST(ContactSets, ShrinkAlongTrajectory) {
  gen::Rng rng(21);
  std::vector<double> times;
  for (int i = 1; i <= 10; ++i) times.push_back(0.004 * i);
  for (int rep = 0; rep < 5; ++rep) {
    auto g = Grid::line(0.0, 1.0, 150);
    auto tr = evolve(gen::random_signal(g, rng), times);
    for (std::size_t i = 1; i < tr.states.size(); ++i) {
      EXPECT_TRUE(is_subset(tr.states[i].e_plus, tr.states[i - 1].e_plus));
      EXPECT_TRUE(is_subset(tr.states[i].e_minus, tr.states[i - 1].e_minus));
    }
  }
}

TEST(MinimizingMovements, SingleStepIsTheFlow) {
  gen::Rng rng(22);
  auto g = Grid::line(0.0, 1.0, 120);
  auto u0 = gen::random_signal(g, rng);
  auto chain = minimizing_movements(u0, 0.02, 1);
  const double times[] = {0.02};
  auto direct = evolve(u0, times);
  EXPECT_LE(max_abs_diff(chain.states[0].w, direct.states[0].w), 20.0 * chain.tol);
  EXPECT_EQ(chain.states[0].e_plus, direct.states[0].e_plus);
}

TEST(MinimizingMovements, RemarkChainMatchesDirect) {
  auto g = Grid::line(0.0, 1.0, 1001);
  auto u0 = remark_u0(g);
  FlowOptions o;
  o.with_velocity = false;
  auto chain = minimizing_movements(u0, 0.005, 6, o);
  ASSERT_EQ(chain.states.size(), 6u);
  std::vector<double> times;
  for (const auto& s : chain.states) times.push_back(s.t);
  auto direct = evolve(u0, times, o);
  for (std::size_t i = 0; i < times.size(); ++i)
    EXPECT_LE(max_abs_diff(chain.states[i].w, direct.states[i].w), 20.0 * chain.tol) << times[i];
}

TEST(MinimizingMovements, RandomSignals) {
  gen::Rng rng(23);
  for (int rep = 0; rep < 5; ++rep) {
    auto g = Grid::line(0.0, 1.0, 200);
    auto u0 = gen::random_signal(g, rng);
    auto chain = minimizing_movements(u0, 0.01, 5);
    const double times[] = {0.05};
    auto direct = evolve(u0, times);
    EXPECT_LE(max_abs_diff(chain.states.back().w, direct.states[0].w), 20.0 * chain.tol);
    EXPECT_TRUE(chain.states.back().has_velocity());
  }
}

TEST(MinimizingMovements, RejectsBadArguments) {
  auto g = Grid::line(0.0, 1.0, 10);
  EXPECT_THROW(minimizing_movements(FaceField(g), 0.0, 3), Error);
  EXPECT_THROW(minimizing_movements(FaceField(g), 0.1, 0), Error);
}

TEST(Comparison, IdenticalData) {
  gen::Rng rng(24);
  auto g = Grid::line(0.0, 1.0, 100);
  auto u0 = gen::random_signal(g, rng);
  const double times[] = {0.01, 0.03};
  auto r = compare_flows(u0, u0, times);
  EXPECT_TRUE(r.ok());
  EXPECT_FALSE(r.strict_somewhere);
  EXPECT_EQ(r.max_potential_excess, 0.0);
}

TEST(Comparison, ConvexPotentialGivesStrictOrder) {
  auto g = Grid::line(0.0, 1.0, 301);
  auto u0 = remark_u0(g);
  auto psi = sample_nodes(g, [](std::array<double, 2> x) { return 0.5 * x[0] * x[0]; });
  auto u0p = u0 - gradient(psi);
  const double times[] = {0.01, 0.02, 0.04};
  auto r = compare_flows(u0, u0p, times);
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.strict_somewhere);
}

TEST(Comparison, RandomOrderedPairs) {
  gen::Rng rng(25);
  const double times[] = {0.005, 0.02, 0.05};
  for (int rep = 0; rep < 20; ++rep) {
    const bool two = rep % 4 == 3;
    auto g = two ? Grid::rectangle({0.0, 0.0}, {1.0, 1.0}, {18, 18}) : Grid::line(0.0, 1.0, 120);
    auto u0 = two ? gen::random_faces(g, rng, 0.5) : gen::random_signal(g, rng);
    auto u0p = u0 - gradient(convex_potential(g, rng));
    auto r = compare_flows(u0, u0p, times);
    EXPECT_TRUE(r.ok()) << rep << ": " << r.potential_violations << " " << r.set_violations << " "
                        << r.velocity_violations;
  }
}

TEST(Comparison, PreconditionIsChecked) {
  auto g = Grid::line(0.0, 1.0, 60);
  auto u0 = step_u0(g);
  const double times[] = {0.01};
  try {
    compare_flows(u0 - step_u0(g), u0, times);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PreconditionViolated);
  }
}

TEST(Monotonicity, StationaryFlow) {
  auto g = Grid::line(0.0, 1.0, 30);
  const double times[] = {0.1, 0.2};
  auto r = measure_monotonicity(evolve(FaceField(g, 2.0), times));
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.max_excess, 0.0);
}

TEST(Monotonicity, RemarkJumpMass) {
  auto g = Grid::line(0.0, 1.0, 1001);
  const double times[] = {0.01, 0.02, 0.03, 0.04, 0.05};
  auto tr = evolve(remark_u0(g), times);
  EXPECT_TRUE(measure_monotonicity(tr).ok());
  const std::size_t k = nearest_node(*g, 1.0 / 3.0);
  double last = std::numeric_limits<double>::infinity();
  for (const auto& s : tr.states) {
    const double jump = s.divu.weighted(k);
    EXPECT_NEAR(jump, 1.0 - 2.0 * std::sqrt(3.0 * s.t) - 3.0 * s.t, 0.01) << s.t;
    EXPECT_LT(jump, last);
    last = jump;
  }
  EXPECT_NEAR(tr.states[2].divu.weighted(k), 0.31, 0.01);
}

TEST(Monotonicity, RandomFlows) {
  gen::Rng rng(26);
  const double times[] = {0.002, 0.01, 0.02, 0.04, 0.08};
  for (int rep = 0; rep < 20; ++rep) {
    auto g = Grid::line(0.0, 1.0, 100);
    auto r = measure_monotonicity(evolve(gen::random_signal(g, rng), times));
    EXPECT_TRUE(r.ok()) << rep;
  }
}

TEST(Extinction, DivergenceFreeIsZero) {
  EXPECT_EQ(extinction_time(FaceField(Grid::line(0.0, 1.0, 20), 3.0)), 0.0);
}

TEST(Extinction, LinearDatum) {
  auto g = Grid::line(0.0, 1.0, 201);
  auto u0 = sample_faces(g, [](int, std::array<double, 2> x) { return x[0]; });
  EXPECT_NEAR(extinction_time(u0), 0.125, 1e-6);
  auto w = unconstrained_potential(u0);
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double x = g->node_coord(k)[0];
    EXPECT_NEAR(w[k], 0.5 * x * (1.0 - x), 1e-8);
  }
  const double times[] = {0.125 + 0.01};
  auto tr = evolve(u0, times);
  EXPECT_TRUE(tr.states[0].e_plus.empty());
  EXPECT_TRUE(tr.states[0].e_minus.empty());
  EXPECT_LE(total_mass(tr.states[0].divu), 1e-6);
}

TEST(Extinction, RandomSignalsAndSquares) {
  gen::Rng rng(27);
  for (int rep = 0; rep < 6; ++rep) {
    const bool two = rep % 2;
    auto g = two ? Grid::rectangle({0.0, 0.0}, {1.0, 1.0}, {20, 20}) : Grid::line(0.0, 1.0, 150);
    auto u0 = two ? gen::random_faces(g, rng) : gen::random_signal(g, rng);
    const double T = extinction_time(u0);
    const double times[] = {0.5 * T, T + 0.01};
    auto tr = evolve(u0, times);
    EXPECT_FALSE(tr.states[0].e_plus.empty() && tr.states[0].e_minus.empty());
    EXPECT_TRUE(tr.states[1].e_plus.empty() && tr.states[1].e_minus.empty());
    EXPECT_LE(total_mass(tr.states[1].divu), 1e-6);
  }
}

TEST(Flow, Semigroup) {
  gen::Rng rng(28);
  for (int rep = 0; rep < 6; ++rep) {
    auto g = Grid::line(0.0, 1.0, 100);
    auto u0 = gen::random_signal(g, rng);
    const double s = rng.uniform(0.005, 0.03), t = s + rng.uniform(0.005, 0.03);
    FlowOptions o;
    o.with_velocity = false;
    const double ts[] = {s}, tt[] = {t}, rest[] = {t - s};
    auto us = evolve(u0, ts, o).states[0].u;
    auto ut = evolve(u0, tt, o).states[0].u;
    auto uts = evolve(us, rest, o).states[0].u;
    EXPECT_LE(max_abs_diff(uts, ut), 10.0 * flow_tol(*g, o)) << rep;
  }
}

TEST(Flow, StructureOnRandomTrajectories) {
  gen::Rng rng(29);
  const double times[] = {0.003, 0.01, 0.02, 0.035, 0.06};
  for (int rep = 0; rep < 8; ++rep) {
    const bool two = rep % 4 == 3;
    auto g = two ? Grid::rectangle({0.0, 0.0}, {1.0, 1.0}, {20, 20}) : Grid::line(0.0, 1.0, 150);
    auto u0 = two ? gen::random_faces(g, rng, 0.5) : gen::random_signal(g, rng);
    auto tr = evolve(u0, times);
    auto r = check_structure(tr);
    EXPECT_TRUE(r.ok()) << rep << " lip " << r.lipschitz_violations << " sets " << r.set_monotonicity_violations
                        << " energy " << r.energy_violations << " mass " << r.mass_violations << " v "
                        << r.velocity_bound_violations << " contact v " << r.contact_velocity_violations
                        << " kkt " << r.kkt_violations;
    EXPECT_LE(r.max_velocity, 1.0 + 1e-3);
  }
}

TEST(Flow, StructureDetectsCorruption) {
  auto g = Grid::line(0.0, 1.0, 120);
  const double times[] = {0.01, 0.02, 0.03};
  auto tr = evolve(remark_u0(g), times);
  ASSERT_TRUE(check_structure(tr).ok());
  auto bad = tr;
  std::swap(bad.states[0].e_minus, bad.states[2].e_minus);
  EXPECT_GT(check_structure(bad).set_monotonicity_violations, 0u);
  bad = tr;
  bad.states[1].v[40] = 1.5;
  EXPECT_GT(check_structure(bad).velocity_bound_violations, 0u);
}

TEST(Flow, EnergyAndMassDissipate) {
  gen::Rng rng(30);
  auto g = Grid::rectangle({0.0, 0.0}, {1.0, 1.0}, {24, 24});
  auto u0 = gen::random_faces(g, rng, 0.5);
  std::vector<double> times;
  for (int i = 0; i <= 8; ++i) times.push_back(0.002 * i);
  auto tr = evolve(u0, times);
  for (std::size_t i = 1; i < tr.states.size(); ++i) {
    EXPECT_LE(norm(tr.states[i].u), norm(tr.states[i - 1].u) + 1e-12);
    EXPECT_LE(total_mass(tr.states[i].divu), total_mass(tr.states[i - 1].divu) + 1e-6);
  }
}
