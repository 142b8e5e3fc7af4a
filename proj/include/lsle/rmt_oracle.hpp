#pragma once

#include <cstdint>
#include <vector>

#include "lsle/loggas.hpp"

namespace lsle {

enum class Ensemble { HermitianBM, WishartSingular };

struct MatrixSample {
  std::vector<double> values;  // ascending
  double t_gas = 0.0;          // matrix time is kappa * t_gas
  Ensemble ensemble = Ensemble::HermitianBM;
  int nu = 0;
};

// Eigenvalues of the N x N Hermitian Brownian motion at matrix time
// kappa * t_gas, started from zero. Only kappa = 4 (beta = 2) is supported.
MatrixSample sample_gue_eigs(int n, double t_gas, double kappa, std::uint64_t seed);

// Singular values of the (N + nu) x N complex Brownian matrix at matrix time
// kappa * t_gas (each real coordinate has variance kappa * t_gas).
MatrixSample sample_wishart_singvals(int n, int nu, double t_gas, double kappa, std::uint64_t seed);

// Two-sample Kolmogorov-Smirnov statistic in [0, 1]. Throws EmptySample.
double ks_distance(std::vector<double> a, std::vector<double> b);

struct OracleConfig {
  Ensemble ensemble = Ensemble::HermitianBM;
  int n = 2;
  int nu = 0;
  double kappa = 4.0;
  double t_gas = 0.25;
  std::size_t seeds = 10000;
  std::size_t n_steps = 400;
  double start_gap = 1e-4;  // the SDE cannot start at the collision
  std::uint64_t first_seed = 1;
};

struct OracleComparison {
  std::vector<double> gas_values;     // pooled per-particle marginals
  std::vector<double> matrix_values;  // pooled eigen/singular values
  double ks = 0.0;
  std::size_t substeps = 0;
  std::size_t failed_seeds = 0;  // StepFailure paths, excluded from gas_values
};

// Near-zero start used by the comparison: gaps start_gap, centred on the line
// and starting at start_gap on the half-line.
GasState near_collision_start(Ensemble ensemble, int n, int nu, double kappa, double start_gap);

OracleComparison compare_with_matrix_model(const OracleConfig& config);

}  // namespace lsle
