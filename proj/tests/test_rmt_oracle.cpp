#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "lsle/error.hpp"
#include "lsle/random.hpp"
#include "lsle/rmt_oracle.hpp"
#include "lsle/stats.hpp"

using namespace lsle;

TEST(Gue, SingleEntryVariance) {
  const double t = 0.3;
  std::vector<double> sq;
  for (std::uint64_t s = 1; s <= 100000; ++s) {
    const double v = sample_gue_eigs(1, t, 4.0, s).values[0];
    sq.push_back(v * v);
  }
  EXPECT_NEAR(mean_stderr(sq).mean / (4 * t), 1.0, 0.02);
}

TEST(Gue, TraceIsGaussianWithVarianceNKappaT) {
  const int n = 3;
  const double t = 0.25;
  std::vector<double> tr, tr2;
  for (std::uint64_t s = 1; s <= 20000; ++s) {
    const auto v = sample_gue_eigs(n, t, 4.0, s).values;
    const double sum = std::accumulate(v.begin(), v.end(), 0.0);
    tr.push_back(sum);
    tr2.push_back(sum * sum);
    ASSERT_TRUE(std::is_sorted(v.begin(), v.end()));
  }
  const auto m = mean_stderr(tr);
  EXPECT_LT(std::abs(m.mean), 3 * m.stderr_);
  const auto m2 = mean_stderr(tr2);
  EXPECT_LT(std::abs(m2.mean - n * 4.0 * t), 3 * m2.stderr_);
}

TEST(Wishart, SingleEntrySecondMoment) {
  const double t = 0.25, T = 4.0 * t;
  std::vector<double> sq;
  for (std::uint64_t s = 1; s <= 100000; ++s) {
    const double v = sample_wishart_singvals(1, 0, t, 4.0, s).values[0];
    sq.push_back(v * v);
  }
  EXPECT_NEAR(mean_stderr(sq).mean / (2 * T), 1.0, 0.02);
}

TEST(Wishart, FrobeniusNormAndPositivity) {
  for (int nu : {0, 1, 2}) {
    const int n = 2;
    const double t = 0.25, T = 4.0 * t;
    std::vector<double> fro;
    for (std::uint64_t s = 1; s <= 10000; ++s) {
      const auto v = sample_wishart_singvals(n, nu, t, 4.0, s).values;
      double f = 0.0;
      for (double x : v) {
        ASSERT_GE(x, 0.0);
        f += x * x;
      }
      ASSERT_TRUE(std::is_sorted(v.begin(), v.end()));
      fro.push_back(f);
    }
    const auto m = mean_stderr(fro);
    EXPECT_LT(std::abs(m.mean - 2.0 * n * (n + nu) * T), 3 * m.stderr_) << "nu " << nu;
  }
}

TEST(Oracle, Preconditions) {
  EXPECT_THROW(sample_gue_eigs(2, 0.25, 2.0, 1), Error);
  try {
    sample_wishart_singvals(2, -1, 0.25, 4.0, 1);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeNu);
  }
  try {
    sample_wishart_singvals(2, 0, 0.25, 6.0, 1);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedBeta);
  }
  OracleConfig c;
  c.kappa = 2.0;
  EXPECT_THROW(compare_with_matrix_model(c), Error);
}

TEST(Ks, Examples) {
  EXPECT_EQ(ks_distance({1, 2, 3}, {3, 2, 1}), 0.0);
  EXPECT_EQ(ks_distance({0}, {1}), 1.0);
  // ties across samples are stepped together
  EXPECT_NEAR(ks_distance({1, 1, 2}, {1, 2, 2}), 1.0 / 3.0, 1e-15);
  try {
    ks_distance({}, {1});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptySample);
  }
}

TEST(Ks, SameLawIsSmall) {
  std::vector<double> a, b;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    a.push_back(standard_normal({1, 0, i, 0, 1}));
    b.push_back(standard_normal({2, 0, i, 0, 1}));
  }
  EXPECT_LT(ks_distance(a, b), 0.03);
  for (double& x : b) x += 0.2;
  EXPECT_GT(ks_distance(a, b), 0.05);
}

TEST(Oracle, NearCollisionStart) {
  const GasState line = near_collision_start(Ensemble::HermitianBM, 3, 0, 4.0, 1e-4);
  EXPECT_NEAR(line.positions.sum(), 0.0, 1e-18);
  EXPECT_NEAR(line.positions[1] - line.positions[0], 1e-4, 1e-18);
  const GasState half = near_collision_start(Ensemble::WishartSingular, 2, 1, 4.0, 1e-4);
  EXPECT_EQ(half.domain, GasDomain::HalfLine);
  EXPECT_DOUBLE_EQ(half.nu, 1.0);
  EXPECT_DOUBLE_EQ(half.positions[0], 1e-4);
}

TEST(Oracle, SmallDysonComparison) {
  OracleConfig c;
  c.n = 2;
  c.seeds = 2000;
  const auto r = compare_with_matrix_model(c);
  EXPECT_EQ(r.gas_values.size() + 2 * r.failed_seeds, 4000u);
  EXPECT_LT(r.ks, 0.05);
}
