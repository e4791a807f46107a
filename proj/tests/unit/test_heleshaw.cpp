#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "divflow/error.hpp"
#include "divflow/fixtures.hpp"
#include "divflow/heleshaw.hpp"
#include "gen.hpp"

using namespace divflow;

namespace {

// Time for the front of g = c on r < R0 to shrink to R in the disk of
// radius A: c (F(R0) - F(R)) with F(R) = R^2/2 log(A/R) + R^2/4.
double closed_form_time(double c, double r0, double outer, double r) {
  auto F = [&](double x) { return x > 0.0 ? 0.5 * x * x * std::log(outer / x) + 0.25 * x * x : 0.0; };
  return c * (F(r0) - F(r));
}

double lift_l1_error(int n) {
  auto g = Grid::disk(1.0, n);
  auto d = radial_disk_datum();
  auto div = divergence(lift_radial(d, g));
  double e = 0.0;
  for (std::size_t k : g->interior_nodes()) {
    auto x = g->node_coord(k);
    e += g->node_weight(k) * std::abs(div[k] - d.g(std::hypot(x[0], x[1])));
  }
  return e;
}

std::vector<double> uniform_times(double dt, double T) {
  std::vector<double> t;
  for (int i = 1; i * dt <= T + 1e-12; ++i) t.push_back(i * dt);
  return t;
}

}  // namespace

TEST(Lift, ZeroProfile) {
  auto g = Grid::disk(1.0, 17);
  auto u = lift_radial(RadialDatum{}, g);
  EXPECT_EQ(norm(u), 0.0);
}

TEST(Lift, DiskFlux) {
  auto d = RadialDatum::disk(0.4, 1.0);
  for (double r : {0.05, 0.2, 0.39}) EXPECT_NEAR(radial_flux(d, r), r / 2.0, 1e-15);
  for (double r : {0.41, 0.7, 1.0}) EXPECT_NEAR(radial_flux(d, r), 0.16 / (2.0 * r), 1e-15);
  EXPECT_EQ(radial_flux(d, 0.0), 0.0);
}

TEST(Lift, DivergenceConvergesAtFirstOrder) {
  const double e32 = lift_l1_error(65), e64 = lift_l1_error(129);
  EXPECT_LT(e64, e32);
  EXPECT_GE(std::log2(e32 / e64), 0.9) << e32 << " " << e64;
}

TEST(Lift, FittedOrderOverFiveLevels) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const int ns[] = {33, 65, 129, 257, 513};
  for (int n : ns) {
    const double x = std::log(2.0 / (n - 1)), y = std::log(lift_l1_error(n));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (5.0 * sxy - sx * sy) / (5.0 * sxx - sx * sx);
  EXPECT_GE(slope, 0.9);
}

TEST(Lift, RejectsLineGrid) { EXPECT_THROW(lift_radial(radial_disk_datum(), Grid::line(0.0, 1.0, 5)), Error); }

TEST(RadialOracle, MatchesClosedFormTime) {
  const auto d = radial_disk_datum();
  const std::vector<double> times{0.01, 0.05, 0.1, 0.14};
  auto tr = radial_oracle(d, 1.0, times);
  ASSERT_EQ(tr.radius.size(), times.size());
  double last = 0.5;
  for (std::size_t i = 0; i < times.size(); ++i) {
    EXPECT_LT(tr.radius[i], last);
    last = tr.radius[i];
    EXPECT_NEAR(closed_form_time(1.0, 0.5, 1.0, tr.radius[i]), times[i], 1e-9) << times[i];
  }
  EXPECT_FALSE(tr.vanished);
}

TEST(RadialOracle, CollapseTime) {
  const double T = closed_form_time(1.0, 0.5, 1.0, 0.0);
  EXPECT_NEAR(T, 0.149143, 1e-6);
  auto tr = radial_oracle(radial_disk_datum(), 1.0, uniform_times(1e-4, 0.16));
  ASSERT_TRUE(tr.vanished);
  EXPECT_NEAR(tr.vanish_time, T, 2e-4);
}

TEST(RadialOracle, InfiniteDensityIsStationary) {
  auto tr = radial_oracle(RadialDatum::disk(0.5, 1e12), 1.0, std::vector<double>{0.1, 1.0});
  EXPECT_NEAR(tr.radius[1], 0.5, 1e-9);
}

TEST(RadialOracle, Preconditions) {
  const std::vector<double> t{0.1};
  EXPECT_THROW(radial_oracle(crown_datum(), 1.0, t), Error);
  EXPECT_THROW(radial_oracle(RadialDatum::disk(0.5, -1.0), 1.0, t), Error);
  EXPECT_THROW(radial_oracle(RadialDatum::disk(1.5, 1.0), 1.0, t), Error);
  EXPECT_THROW(radial_oracle(radial_disk_datum(), 1.0, std::vector<double>{0.2, 0.1}), Error);
}

TEST(Front, AreaRadius) {
  auto g = Grid::disk(1.0, 33);
  FlowState s;
  s.w = NodeField(g);
  for (std::size_t k = 0; k < 100; ++k) s.e_plus.push_back(k);
  const double h = g->h(0);
  EXPECT_NEAR(front_radius(s), std::sqrt(100.0 * h * h / std::numbers::pi), 1e-15);
}

class RadialFlow : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    auto g = Grid::disk(1.0, 65);
    auto times = uniform_times(2e-3, 0.06);
    FlowOptions o;
    o.with_velocity = false;
    traj_ = new Trajectory(evolve(lift_radial(radial_disk_datum(), g), times, o));
  }
  static void TearDownTestSuite() {
    delete traj_;
    traj_ = nullptr;
  }
  static Trajectory* traj_;
};
Trajectory* RadialFlow::traj_ = nullptr;

TEST_F(RadialFlow, ContactLawHolds) {
  ASSERT_TRUE(traj_->converged());
  auto r = evoldiv_check(*traj_);
  EXPECT_TRUE(r.ok()) << r.core_violations << " " << r.bracket_violations << " " << r.off_violations;
  EXPECT_GT(r.core_nodes, 0u);
}

TEST_F(RadialFlow, FrontTracksOracle) {
  std::vector<double> times;
  for (const auto& s : traj_->states) times.push_back(s.t);
  auto rows = compare_front(*traj_, radial_oracle(radial_disk_datum(), 1.0, times));
  double last = 1.0;
  for (const auto& r : rows) {
    EXPECT_LE(r.r_est, last + 1e-15);
    last = r.r_est;
    // h = 1/32; the area front sits O(h) outside the oracle
    EXPECT_LE(std::abs(r.r_est - r.r_oracle), 1.0 / 32.0);
  }
}

TEST_F(RadialFlow, StaysRadial) {
  for (const auto& s : traj_->states) EXPECT_LE(radial_deviation(s.w), 10.0 / 32.0);
}

TEST_F(RadialFlow, WeakFormAndReversal) {
  const auto family = default_weak_family();
  ASSERT_EQ(family.size(), 12u);
  auto fwd = weak_form_residual(*traj_, family);
  auto rev = weak_form_residual(time_reversed(*traj_), family);
  EXPECT_LE(fwd.max_residual, 0.05);
  EXPECT_GT(rev.max_residual, 3.0 * fwd.max_residual);
}

TEST_F(RadialFlow, CompareFrontNeedsSamples) {
  EXPECT_THROW(compare_front(*traj_, radial_oracle(radial_disk_datum(), 1.0, std::vector<double>{0.5e-3})), Error);
}

TEST(WeakForm, StationaryFlowHasNoResidual) {
  auto g = Grid::disk(1.0, 33);
  auto tr = evolve(FaceField(g, 0.7), uniform_times(0.01, 0.05));
  EXPECT_LE(weak_form_residual(tr, default_weak_family()).max_residual, 1e-12);
}

TEST(WeakForm, NeedsUniformSamples) {
  auto g = Grid::disk(1.0, 17);
  auto tr = evolve(FaceField(g), std::vector<double>{0.01, 0.03});
  EXPECT_THROW(weak_form_residual(tr, default_weak_family()), Error);
}

TEST(WeakForm, ResidualShrinksUnderRefinement) {
  FlowOptions o;
  o.with_velocity = false;
  auto run = [&](int n, double dt) {
    auto g = Grid::disk(1.0, n);
    auto tr = evolve(lift_radial(radial_disk_datum(), g), uniform_times(dt, 0.06), o);
    return weak_form_residual(tr, default_weak_family()).max_residual;
  };
  EXPECT_LT(run(65, 2e-3), run(33, 4e-3));
}

TEST(Evoldiv, StationaryFlow) {
  auto g = Grid::rectangle({0.0, 0.0}, {1.0, 1.0}, {12, 12});
  auto r = evoldiv_check(evolve(FaceField(g, 1.0), std::vector<double>{0.1, 0.2}));
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.edge_mass, 0.0);
}

TEST(Evoldiv, RemarkSlopeInsideLowerContact) {
  auto g = Grid::line(0.0, 1.0, 1001);
  auto tr = evolve(remark_u0(g), std::vector<double>{0.03, 0.05});
  EXPECT_TRUE(evoldiv_check(tr).ok());
  for (const auto& s : tr.states) {
    const auto& em = s.e_minus;
    for (std::size_t q = 1; q + 1 < em.size(); ++q) EXPECT_NEAR(s.divu[em[q]], -3.0, 1e-6);
  }
}

TEST(Perp, TwiceIsNegation) {
  gen::Rng rng(61);
  auto g = Grid::rectangle({0.0, 0.0}, {1.0, 1.0}, {9, 7});
  auto u = gen::random_faces(g, rng);
  auto back = perp(perp(u));
  EXPECT_EQ(max_abs_diff(back, -1.0 * u), 0.0);
  EdgeField psi = perp(u);
  auto psi2 = perp(perp(psi));
  for (std::size_t f = 0; f < psi.psi1.size(); ++f) EXPECT_EQ(psi2.psi1[f], -psi.psi1[f]);
  for (std::size_t f = 0; f < psi.psi2.size(); ++f) EXPECT_EQ(psi2.psi2[f], -psi.psi2[f]);
  EXPECT_EQ(norm(psi), norm(u));
}

TEST(Perp, RotMatchesDifferenceFormula) {
  gen::Rng rng(62);
  auto g = Grid::rectangle({0.0, 0.0}, {1.0, 1.0}, {10, 8});
  EdgeField psi(g);
  for (double& x : psi.psi1) x = rng.uniform(-1.0, 1.0);
  for (double& x : psi.psi2) x = rng.uniform(-1.0, 1.0);
  auto r = rot(psi);
  const int nx = g->nodes(0);
  const double hx = g->h(0), hy = g->h(1);
  for (std::size_t k : g->interior_nodes()) {
    auto [i, j] = g->node_ij(k);
    // psi2 on x faces (index j*(nx-1)+i), psi1 on y faces (index j*nx+i)
    const double dx = (psi.psi2[j * (nx - 1) + i] - psi.psi2[j * (nx - 1) + i - 1]) / hx;
    const double dy = (psi.psi1[j * nx + i] - psi.psi1[(j - 1) * nx + i]) / hy;
    EXPECT_NEAR(r[k], dx - dy, 1e-12);
  }
}

TEST(RotFlow, IsThePerpImageOfTheDivergenceFlow) {
  gen::Rng rng(63);
  auto g = Grid::rectangle({0.0, 0.0}, {1.0, 1.0}, {20, 20});
  EdgeField psi0(g);
  for (double& x : psi0.psi1) x = rng.uniform(-0.5, 0.5);
  for (double& x : psi0.psi2) x = rng.uniform(-0.5, 0.5);
  const std::vector<double> times{0.005, 0.01, 0.02};
  auto rf = rot_flow(psi0, times);
  auto direct = evolve(perp(psi0), times);
  ASSERT_EQ(rf.psi.size(), times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    EXPECT_EQ(max_abs_diff(perp(rf.psi[i]), direct.states[i].u), 0.0);
    EXPECT_LT(norm(rf.psi[i]), norm(psi0));
  }
  // rot psi(t) = rot psi0 on E(t) and 0 off it
  EXPECT_TRUE(evoldiv_check(rf.flow).ok());
}

TEST(RotFlow, RotFreeDatumIsStationary) {
  auto g = Grid::rectangle({0.0, 0.0}, {1.0, 1.0}, {12, 12});
  EdgeField psi0 = perp(FaceField(g, 0.8));
  for (std::size_t k : g->interior_nodes()) EXPECT_NEAR(rot(psi0)[k], 0.0, 1e-12);
  auto rf = rot_flow(psi0, std::vector<double>{0.1});
  EXPECT_EQ(max_abs_diff(perp(rf.psi[0]), perp(psi0)), 0.0);
}

TEST(RotFlow, DatumWithRotMoves) {
  auto g = Grid::rectangle({-0.5, -0.5}, {0.5, 0.5}, {16, 16});
  // perp of a radial source: rot psi0 = -g
  EdgeField psi0 = perp(lift_radial(RadialDatum::disk(0.3, 1.0), g));
  auto rf = rot_flow(psi0, std::vector<double>{0.01});
  EXPECT_GT(max_abs_diff(perp(rf.psi[0]), perp(psi0)), 1e-3);
}
