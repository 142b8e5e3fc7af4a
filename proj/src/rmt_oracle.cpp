#include "lsle/rmt_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "lsle/error.hpp"
#include "lsle/parallel.hpp"

namespace lsle {

namespace {

void require_beta_two(double kappa) {
  if (kappa != 4.0) {
    throw Error(ErrorCode::UnsupportedBeta, "matrix oracles exist only for kappa = 4 (beta = 2)");
  }
}

double entry(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return standard_normal(NoiseKey{seed, stream, index, 0, 1});
}

}  // namespace

MatrixSample sample_gue_eigs(int n, double t_gas, double kappa, std::uint64_t seed) {
  require_beta_two(kappa);
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
  if (!(t_gas > 0.0)) throw Error(ErrorCode::InvalidArgument, "t_gas must be positive");
  const double T = kappa * t_gas;
  const double diag_sd = std::sqrt(T);
  const double off_sd = std::sqrt(T / 2.0);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  std::uint64_t index = 0;
  for (int i = 0; i < n; ++i) {
    m(i, i) = diag_sd * entry(seed, streams::kHermitian, index++);
    for (int j = i + 1; j < n; ++j) {
      const double re = off_sd * entry(seed, streams::kHermitian, index++);
      const double im = off_sd * entry(seed, streams::kHermitian, index++);
      m(i, j) = {re, im};
      m(j, i) = {re, -im};
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  MatrixSample out;
  out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(out.values.begin(), out.values.end());
  out.t_gas = t_gas;
  out.ensemble = Ensemble::HermitianBM;
  return out;
}

MatrixSample sample_wishart_singvals(int n, int nu, double t_gas, double kappa, std::uint64_t seed) {
  require_beta_two(kappa);
  if (nu < 0) throw Error(ErrorCode::NegativeNu, "nu must be a nonnegative integer");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
  if (!(t_gas > 0.0)) throw Error(ErrorCode::InvalidArgument, "t_gas must be positive");
  const double sd = std::sqrt(kappa * t_gas);
  const int rows = n + nu;
  Eigen::MatrixXcd k(rows, n);
  std::uint64_t index = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = sd * entry(seed, streams::kWishart, index++);
      const double im = sd * entry(seed, streams::kWishart, index++);
      k(i, j) = {re, im};
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(k);
  MatrixSample out;
  const auto& sv = svd.singularValues();
  out.values.assign(sv.data(), sv.data() + sv.size());
  std::sort(out.values.begin(), out.values.end());
  out.t_gas = t_gas;
  out.ensemble = Ensemble::WishartSingular;
  out.nu = nu;
  return out;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::EmptySample, "ks_distance needs two nonempty samples");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  // Consume ties on both sides before comparing the empirical CDFs.
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

GasState near_collision_start(Ensemble ensemble, int n, int nu, double kappa, double start_gap) {
  GasState s;
  s.kappa = kappa;
  s.positions.resize(n);
  if (ensemble == Ensemble::HermitianBM) {
    s.domain = GasDomain::RealLine;
    for (int i = 0; i < n; ++i) s.positions[i] = (i - 0.5 * (n - 1)) * start_gap;
  } else {
    s.domain = GasDomain::HalfLine;
    s.nu = nu;
    for (int i = 0; i < n; ++i) s.positions[i] = (i + 1) * start_gap;
  }
  return s;
}

OracleComparison compare_with_matrix_model(const OracleConfig& config) {
  require_beta_two(config.kappa);
  if (config.ensemble == Ensemble::WishartSingular && config.nu < 0) {
    throw Error(ErrorCode::NegativeNu, "nu must be a nonnegative integer");
  }
  if (config.seeds == 0) throw Error(ErrorCode::InvalidArgument, "seeds must be positive");
  const GasState start =
      near_collision_start(config.ensemble, config.n, config.nu, config.kappa, config.start_gap);
  const std::size_t n = static_cast<std::size_t>(config.n);
  OracleComparison out;
  out.gas_values.resize(config.seeds * n);
  out.matrix_values.resize(config.seeds * n);
  std::vector<std::size_t> substeps(config.seeds, 0);

  std::vector<char> failed(config.seeds, 0);
  parallel_for(config.seeds, [&](std::size_t s) {
    const std::uint64_t seed = config.first_seed + s;
    const MatrixSample m = config.ensemble == Ensemble::HermitianBM
                               ? sample_gue_eigs(config.n, config.t_gas, config.kappa, seed)
                               : sample_wishart_singvals(config.n, config.nu, config.t_gas, config.kappa, seed);
    for (std::size_t i = 0; i < n; ++i) out.matrix_values[s * n + i] = m.values[i];
    GasPath path;
    try {
      path = simulate_gas(start, config.t_gas, config.n_steps, seed);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::StepFailure) throw;
      failed[s] = 1;
      return;
    }
    substeps[s] = path.substep_log;
    const auto& x = path.states.back().positions;
    for (std::size_t i = 0; i < n; ++i) out.gas_values[s * n + i] = x[static_cast<Eigen::Index>(i)];
  });
  for (auto c : substeps) out.substeps += c;
  // Seeds whose gas path hit the stiffness limit are dropped from the gas
  // sample and reported; more than 1% of them invalidates the comparison.
  std::vector<double> kept;
  kept.reserve(out.gas_values.size());
  for (std::size_t s = 0; s < config.seeds; ++s) {
    if (failed[s]) {
      ++out.failed_seeds;
      continue;
    }
    kept.insert(kept.end(), out.gas_values.begin() + s * n, out.gas_values.begin() + (s + 1) * n);
  }
  if (100 * out.failed_seeds > config.seeds) {
    throw Error(ErrorCode::StepFailure,
                std::to_string(out.failed_seeds) + " of " + std::to_string(config.seeds) + " gas paths failed");
  }
  out.gas_values = std::move(kept);
  out.ks = ks_distance(out.gas_values, out.matrix_values);
  return out;
}

}  // namespace lsle
