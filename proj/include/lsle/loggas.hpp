#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "lsle/random.hpp"

namespace lsle {

enum class GasDomain { RealLine, HalfLine };

// LogGas: the (8/kappa)-Dyson / (8/kappa, nu)-Bru-Wishart drift.
// Free: no drift at all, independent sqrt(kappa) Brownian particles; used as
// the falsification control in the martingale and coupling campaigns.
enum class Interaction { LogGas, Free };

inline constexpr double kCollisionTolerance = 1e-12;
inline constexpr int kDefaultMaxDepth = 40;

struct GasState {
  Eigen::VectorXd positions;
  double time = 0.0;
  GasDomain domain = GasDomain::RealLine;
  double kappa = 4.0;
  double nu = 0.0;

  Eigen::Index size() const noexcept { return positions.size(); }

  // Weyl chamber membership with the given minimum gap (and minimum distance
  // to the origin on the half-line).
  bool in_chamber(double min_gap = 0.0) const noexcept;

  // Throws NonOrderedConfiguration / NonPositive / InvalidArgument.
  void validate() const;

  // Half-line configurations with 8(nu+1) < kappa lose the repulsion from the
  // origin; they are simulated but flagged.
  bool outside_tested_regime() const noexcept;
};

// Copy of the state with positions sorted ascending.
GasState sorted(GasState state);

// phi^S(x): 4 sum_{i<j} log(x_j - x_i) on the line; on the half-line the
// mirror-image terms log(x_j + x_i) join, plus ((8(nu+1)-kappa)/2) sum log x_i.
double log_potential(const GasState& state);

// Gradient of log_potential (Interaction::LogGas) or zero (Interaction::Free).
Eigen::VectorXd drift(const GasState& state, Interaction interaction = Interaction::LogGas);

inline constexpr double kDefaultDriftFraction = 0.5;

// A proposal is also rejected (and the step halved) when some particle's drift
// displacement exceeds drift_fraction times its distance to the nearest
// neighbour (or to the origin on the half-line). Without this the explicit
// step overshoots near collisions, e.g. from the near-zero oracle start.
// drift_fraction <= 0 disables the check.
struct StepOptions {
  int max_depth = kDefaultMaxDepth;
  Interaction interaction = Interaction::LogGas;
  double drift_fraction = kDefaultDriftFraction;
};

struct StepOutcome {
  GasState state;
  std::size_t substeps = 0;     // number of bisections performed
  std::size_t reflections = 0;  // finest-scale wall overshoots folded back
};

// One Euler-Maruyama step x + sqrt(kappa dt) g + b(x) dt. A proposal leaving
// the Weyl chamber is retried on two half steps whose Brownian increments are
// bridge refinements of the original one; the midpoint noise comes from the
// counter stream `refinement` with node ids 2k, 2k+1 below node k.
StepOutcome em_step_detailed(const GasState& state, double dt, const Eigen::VectorXd& gaussians,
                             const NoiseKey& refinement = {}, const StepOptions& options = {});

GasState em_step(const GasState& state, double dt, const Eigen::VectorXd& gaussians,
                 const NoiseKey& refinement = {}, const StepOptions& options = {});

// Macro-grid trajectory of the gas. Times are k * horizon / n_steps.
struct GasPath {
  std::vector<GasState> states;
  std::uint64_t seed = 0;
  std::size_t substep_log = 0;
  std::size_t reflection_log = 0;

  std::size_t steps() const noexcept { return states.empty() ? 0 : states.size() - 1; }
  double horizon() const noexcept { return states.empty() ? 0.0 : states.back().time; }
  double dt() const noexcept { return steps() == 0 ? 0.0 : horizon() / static_cast<double>(steps()); }
  Eigen::Index particles() const noexcept { return states.empty() ? 0 : states.front().size(); }
  GasDomain domain() const { return states.front().domain; }
  double kappa() const { return states.front().kappa; }
  double nu() const { return states.front().nu; }

  // Index of the macro interval [t_k, t_{k+1}) containing t, i.e. the state
  // that drives the Loewner flow at time t. Throws GridExceeded past horizon.
  std::size_t interval_index(double t) const;

  // Every stride-th state; requires stride to divide steps().
  GasPath subsample(std::size_t stride) const;

  void validate() const;

  // Deterministic path frozen at `state` (zero-noise driving).
  static GasPath constant(const GasState& state, double horizon, std::size_t n_steps);
};

struct SimulateOptions {
  int max_depth = kDefaultMaxDepth;
  Interaction interaction = Interaction::LogGas;
  double drift_fraction = kDefaultDriftFraction;
};

// Deterministic in (initial, horizon, n_steps, seed, options). The initial
// labels are sorted before integration, so permuted inputs give one path.
GasPath simulate_gas(const GasState& initial, double horizon, std::size_t n_steps, std::uint64_t seed,
                     const SimulateOptions& options = {});

}  // namespace lsle
