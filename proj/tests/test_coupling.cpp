#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lsle/coupling.hpp"
#include "lsle/error.hpp"
#include "lsle/parallel.hpp"

using namespace lsle;
using std::numbers::pi;

namespace {

GasState state(std::initializer_list<double> x, double kappa = 4.0, GasDomain domain = GasDomain::RealLine,
               double nu = 0.0) {
  GasState s;
  s.positions = Eigen::Map<const Eigen::VectorXd>(x.begin(), static_cast<Eigen::Index>(x.size()));
  s.kappa = kappa;
  s.domain = domain;
  s.nu = nu;
  return s;
}

void expect_code(ErrorCode code, auto&& f) {
  try {
    f();
    ADD_FAILURE() << "no error thrown";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

std::vector<double> grid(double horizon, int n) {
  std::vector<double> t;
  for (int k = 1; k <= n; ++k) t.push_back(horizon * k / n);
  return t;
}

}  // namespace

TEST(Potential, Examples) {
  const std::vector<double> zero{0.0}, one{1.0};
  EXPECT_NEAR(std::abs(complex_potential(Domain::H, {0, 1}, zero, 0.0) - Complex(0, pi / 2)), 0.0, 1e-15);
  const Complex p = complex_potential(Domain::H, {-4, 1e-14}, one, 0.0);
  EXPECT_NEAR(p.real(), std::log(5.0), 1e-12);
  EXPECT_NEAR(p.imag(), pi, 1e-12);
  const std::vector<double> x{0.5, 1.5};
  const Complex z{0.7, 0.9};
  const Complex expected = (z - 0.5) * (z + 0.5) * (z - 1.5) * (z + 1.5) * std::pow(z, 0.25);
  EXPECT_LT(std::abs(std::exp(complex_potential(Domain::O, z, x, 0.25)) - expected), 1e-12 * std::abs(expected));
  expect_code(ErrorCode::DomainViolation, [&] { complex_potential(Domain::H, {0, -1}, zero, 0.0); });
  expect_code(ErrorCode::DomainViolation, [&] { complex_potential(Domain::O, {-1, 1}, one, 0.0); });
  const std::vector<double> neg{-1.0};
  expect_code(ErrorCode::DomainViolation, [&] { complex_potential(Domain::O, {1, 1}, neg, 0.0); });
}

TEST(Martingale, InitialValueAndFrozenClosedForm) {
  const LoewnerChain chain(GasPath::constant(state({0.0}, 2.0), 0.1, 10));
  const Complex z{0.3, 1.0};
  EXPECT_LT(std::abs(martingale_observable(chain, z, 0.0) + std::log(z)), 1e-15);
  const double t = 0.1;
  const Complex g = std::sqrt(z * z + 4.0 * t);
  const Complex expected = -std::log(g) - 0.5 * std::log(z / g);
  EXPECT_LT(std::abs(martingale_observable(chain, z, t) - expected), 1e-9);
  EXPECT_NEAR(harmonic_part(chain, z, t), 2.0 / std::sqrt(2.0) * expected.imag(), 1e-9);
}

TEST(Martingale, HarmonicPartIsBoundaryStaircase) {
  const LoewnerChain chain(GasPath::constant(state({-1.0, 1.0}), 0.1, 10));
  const double eps = 1e-6;
  EXPECT_NEAR(harmonic_part(chain, {-2, eps}, 0.0), -2 * pi, 1e-4);
  EXPECT_NEAR(harmonic_part(chain, {0, eps}, 0.0), -pi, 1e-4);
  EXPECT_NEAR(harmonic_part(chain, {2, eps}, 0.0), 0.0, 1e-4);
  EXPECT_NEAR(harmonic_part(chain, {-1e3, eps}, 0.0), -2 * pi, 1e-3);
  EXPECT_NEAR(harmonic_part(chain, {1e3, eps}, 0.0), 0.0, 1e-3);
}

TEST(Martingale, SwallowedProbeThrows) {
  const LoewnerChain chain(GasPath::constant(state({0.0}), 0.3, 300));
  expect_code(ErrorCode::SwallowedProbe, [&] { martingale_observable(chain, {0, 0.5}, 0.3); });
}

TEST(QuadraticVariation, BasicProperties) {
  const LoewnerChain chain(simulate_gas(state({-1.0, 1.0}), 0.05, 200, 3));
  const QvCheck diag = qv_identity_check(chain, {0, 2}, {0, 2}, 0.05);
  EXPECT_GE(diag.realized_qv, 0.0);
  EXPECT_GT(diag.minus_quarter_kappa_dG, 0.0);
  EXPECT_LT(diag.max_branch_jump, pi / 2);
  const LoewnerChain frozen(GasPath::constant(state({-1.0, 1.0}), 0.05, 200));
  EXPECT_LT(std::abs(qv_identity_check(frozen, {0, 2}, {0.5, 1}, 0.05).realized_qv), 1e-6);
}

TEST(QuadraticVariation, MatchesGreenDecrementOnAverage) {
  ChainFamily fam;
  fam.initial = state({-1.0, 1.0});
  fam.horizon = 0.05;
  fam.n_steps = 200;
  std::vector<double> realized, predicted;
  for (std::uint64_t s = 1; s <= 400; ++s) {
    const QvCheck c = qv_identity_check(fam.chain_for(s), {0, 2}, {0.5, 1.5}, 0.05);
    realized.push_back(c.realized_qv);
    predicted.push_back(c.minus_quarter_kappa_dG);
  }
  const double r = mean_stderr(realized).mean, p = mean_stderr(predicted).mean;
  EXPECT_LT(std::abs(r - p) / std::abs(p), 0.10);
}

TEST(Drift, SingleCurveIsDriftless) {
  ChainFamily fam;
  fam.initial = state({0.0}, 3.0);
  fam.horizon = 0.1;
  fam.n_steps = 100;
  fam.seeds = 2000;
  const auto t = grid(0.1, 4);
  const DriftReport r = martingale_drift_test(fam, {0.2, 2.0}, t);
  EXPECT_FALSE(r.control);
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.main.rows.size(), t.size());
  EXPECT_EQ(r.main.survivors + r.main.dead, 2000u);
}

TEST(Drift, FreeControlIsDetected) {
  ChainFamily fam;
  fam.initial = state({-1.0, 0.0, 1.0});
  fam.horizon = 0.1;
  fam.n_steps = 200;
  fam.seeds = 1000;
  const auto t = grid(0.1, 2);
  const DriftReport r = martingale_drift_test(fam, {0, 4}, t);
  ASSERT_TRUE(r.control);
  EXPECT_TRUE(r.main_driftless);
  EXPECT_TRUE(r.control_detected);
  EXPECT_GT(r.control->rows.back().z_score, kControlThreshold);
}

TEST(Drift, QuadrantWrongExponentIsDetected) {
  ChainFamily fam;
  fam.initial = state({1.0, 2.0}, 4.0, GasDomain::HalfLine, 1.0);
  fam.horizon = 0.1;
  fam.n_steps = 200;
  fam.seeds = 1000;
  const auto t = grid(0.1, 2);
  EXPECT_TRUE(martingale_drift_test(fam, {1.5, 1.5}, t).main_driftless);
  fam.q = 1.0;
  EXPECT_GT(run_drift_arm(fam, {1.5, 1.5}, t).rows.back().z_score, kControlThreshold);
}

TEST(Drift, InsufficientSurvivors) {
  ChainFamily fam;
  fam.initial = state({0.0}, 8.0);
  fam.horizon = 0.5;
  fam.n_steps = 500;
  fam.seeds = 20;
  fam.swallow_eps = 0.2;  // a probe at 0.3i is lost as soon as the driving passes near it
  const auto t = grid(0.5, 1);
  expect_code(ErrorCode::InsufficientSurvivors, [&] { run_drift_arm(fam, {0, 0.3}, t); });
}

TEST(Functional, ThetaZeroAndModulus) {
  const LoewnerChain chain(simulate_gas(state({-1.0, 1.0}), 0.05, 100, 7));
  const TestFunction f{{0.5, 2.0}, 0.5, 10.0};
  EXPECT_NEAR(std::abs(theorem_functional(chain, f, 0.0, 0.05, 0.1) - Complex(1, 0)), 0.0, 1e-15);
  for (double theta : {0.25, 1.0}) {
    for (double t : {0.0, 0.025, 0.05}) EXPECT_LE(std::abs(theorem_functional(chain, f, theta, t, 0.1)), 1.0 + 1e-12);
  }
}

namespace {

CouplingConfig small_coupling() {
  CouplingConfig c;
  c.initial = state({0.0});
  c.f = TestFunction{{0, 3}, 0.5, 10.0};
  c.seeds = 300;
  c.n_steps = 50;
  return c;
}

}  // namespace

TEST(Coupling, SmallCampaignPasses) {
  const CouplingReport r = verify_coupling(small_coupling());
  for (const Verdict& v : r.verdicts) EXPECT_TRUE(v.pass) << v.name << " " << v.statistic;
  EXPECT_TRUE(r.pass());
  ASSERT_EQ(r.functional.size(), 3u);
  EXPECT_EQ(r.functional[0].times.size(), 6u);
  EXPECT_EQ(r.qv_table.size(), 3u);
  EXPECT_EQ(r.drift_table.size(), 2u);
}

TEST(Coupling, ResultsIndependentOfThreadCount) {
  CouplingConfig c = small_coupling();
  c.seeds = 40;
  const std::size_t before = worker_threads();
  set_worker_threads(1);
  const CouplingReport a = verify_coupling(c);
  set_worker_threads(4);
  const CouplingReport b = verify_coupling(c);
  set_worker_threads(before);
  for (std::size_t i = 0; i < a.functional.size(); ++i) {
    for (std::size_t k = 0; k < a.functional[i].re.size(); ++k) {
      EXPECT_EQ(a.functional[i].re[k].mean, b.functional[i].re[k].mean);
      EXPECT_EQ(a.functional[i].im[k].mean, b.functional[i].im[k].mean);
    }
  }
}

TEST(Coupling, RejectsBadConfigurations) {
  CouplingConfig c = small_coupling();
  c.checkpoints = 7;  // does not divide n_steps
  expect_code(ErrorCode::InvalidArgument, [&] { verify_coupling(c); });
  c = small_coupling();
  c.f.center = {0, 0.3};  // support crosses the boundary
  expect_code(ErrorCode::DomainViolation, [&] { verify_coupling(c); });
  c = small_coupling();
  c.seeds = 0;
  expect_code(ErrorCode::InvalidArgument, [&] { verify_coupling(c); });
}

TEST(SampledCoupling, SmallCampaign) {
  SampledCouplingConfig c;
  c.initial = state({0.0});
  c.f = TestFunction{{0, 3}, 0.5, 10.0};
  c.seeds = 60;
  c.n_steps = 50;
  c.box_scale = 4.0;
  const SampledCouplingReport r = sampled_coupling(c);
  EXPECT_TRUE(r.box.contains(c.f.support_box()));
  EXPECT_GT(r.energy0, r.mean_energy);
  EXPECT_EQ(r.verdicts.size(), 3u);
  EXPECT_GT(r.initial_variance, 0.0);
}
