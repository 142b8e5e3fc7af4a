#include "lsle/loggas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "lsle/error.hpp"

namespace lsle {

bool GasState::in_chamber(double min_gap) const noexcept {
  const Eigen::Index n = positions.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(positions[i])) return false;
  }
  for (Eigen::Index i = 1; i < n; ++i) {
    if (!(positions[i] - positions[i - 1] > min_gap)) return false;
  }
  if (domain == GasDomain::HalfLine && n > 0 && !(positions[0] > min_gap)) return false;
  return true;
}

void GasState::validate() const {
  if (positions.size() == 0) throw Error(ErrorCode::InvalidArgument, "gas needs at least one particle");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw Error(ErrorCode::InvalidArgument, "kappa must be positive");
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw Error(ErrorCode::InvalidArgument, "nu must be nonnegative");
  if (!(time >= 0.0)) throw Error(ErrorCode::InvalidArgument, "time must be nonnegative");
  for (Eigen::Index i = 0; i < positions.size(); ++i) {
    if (!std::isfinite(positions[i])) throw Error(ErrorCode::InvalidArgument, "non-finite position");
  }
  for (Eigen::Index i = 1; i < positions.size(); ++i) {
    if (!(positions[i] > positions[i - 1])) {
      throw Error(ErrorCode::NonOrderedConfiguration,
                  "positions must be strictly increasing (index " + std::to_string(i) + ")");
    }
  }
  if (domain == GasDomain::HalfLine && !(positions[0] > 0.0)) {
    throw Error(ErrorCode::NonPositive, "half-line configuration needs x_1 > 0");
  }
}

bool GasState::outside_tested_regime() const noexcept {
  return domain == GasDomain::HalfLine && 8.0 * (nu + 1.0) < kappa;
}

GasState sorted(GasState state) {
  std::sort(state.positions.begin(), state.positions.end());
  return state;
}

namespace {

double boundary_coefficient(const GasState& s) { return (8.0 * (s.nu + 1.0) - s.kappa) / 2.0; }

}  // namespace

double log_potential(const GasState& state) {
  state.validate();
  const auto& x = state.positions;
  const Eigen::Index n = x.size();
  double phi = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      phi += std::log(x[j] - x[i]);
      if (state.domain == GasDomain::HalfLine) phi += std::log(x[j] + x[i]);
    }
  }
  phi *= 4.0;
  if (state.domain == GasDomain::HalfLine) {
    double logs = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) logs += std::log(x[i]);
    phi += boundary_coefficient(state) * logs;
  }
  return phi;
}

namespace {

// Drift without validation; the integrator only calls it on chamber states.
Eigen::VectorXd drift_unchecked(const GasState& state, Interaction interaction) {
  const auto& x = state.positions;
  const Eigen::Index n = x.size();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  if (interaction == Interaction::Free) return b;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double pair = 1.0 / (x[i] - x[j]);
      b[i] += pair;
      b[j] -= pair;
      if (state.domain == GasDomain::HalfLine) {
        const double mirror = 1.0 / (x[i] + x[j]);
        b[i] += mirror;
        b[j] += mirror;
      }
    }
  }
  b *= 4.0;
  if (state.domain == GasDomain::HalfLine) {
    const double c = boundary_coefficient(state);
    for (Eigen::Index i = 0; i < n; ++i) b[i] += c / x[i];
  }
  return b;
}

struct Stepper {
  const NoiseKey& refinement;
  const StepOptions& options;
  std::size_t substeps = 0;
  std::size_t reflections = 0;

  // Distance from particle i to its nearest neighbour (or the origin).
  static double room(const GasState& s, Eigen::Index i) {
    const auto& x = s.positions;
    double r = std::numeric_limits<double>::infinity();
    if (i > 0) r = std::min(r, x[i] - x[i - 1]);
    if (i + 1 < x.size()) r = std::min(r, x[i + 1] - x[i]);
    if (s.domain == GasDomain::HalfLine) r = std::min(r, x[i]);
    return r;
  }

  // Drift displacement small against the room, and no room collapsing by more
  // than that fraction within one step.
  bool stable(const GasState& s, const Eigen::VectorXd& b, double dt, const GasState& proposal) const {
    if (options.drift_fraction <= 0.0) return true;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      const double r = room(s, i);
      if (std::abs(b[i]) * dt > options.drift_fraction * r) return false;
      if (room(proposal, i) < (1.0 - options.drift_fraction) * r) return false;
    }
    return true;
  }

  // brownian: standard Brownian increments over dt (one per particle).
  GasState advance(const GasState& s, double dt, const Eigen::VectorXd& brownian, std::uint64_t node,
                   int depth) {
    GasState proposal = s;
    const Eigen::VectorXd b = drift_unchecked(s, options.interaction);
    proposal.positions = s.positions + std::sqrt(s.kappa) * brownian + b * dt;
    proposal.time = s.time + dt;
    if (options.interaction == Interaction::Free) {
      // Independent particles cross freely; keep the sorted (and on the
      // half-line reflected) representation, which the Loewner field cannot
      // tell apart from the labelled one.
      if (proposal.domain == GasDomain::HalfLine) proposal.positions = proposal.positions.cwiseAbs();
      std::sort(proposal.positions.begin(), proposal.positions.end());
      return proposal;
    }
    const bool valid = proposal.in_chamber(kCollisionTolerance);
    if (valid && stable(s, b, dt, proposal)) return proposal;
    if (depth >= options.max_depth) {
      // Stability is only a refinement target; validity is not.
      if (valid) return proposal;
      // Near a wall the gaps behave like low-dimensional Bessel processes (at
      // nu = 0, kappa = 4 the origin is only just polar), which come within any
      // distance of it with positive probability. An overshoot of the size of
      // the finest-scale noise is folded back across the wall; anything larger
      // means the regime is too stiff.
      GasState folded = proposal;
      if (folded.domain == GasDomain::HalfLine) folded.positions = folded.positions.cwiseAbs();
      std::sort(folded.positions.begin(), folded.positions.end());
      const double shift = (folded.positions - proposal.positions).cwiseAbs().maxCoeff();
      if (folded.in_chamber(kCollisionTolerance) && shift <= 10.0 * std::sqrt(s.kappa * dt)) {
        ++reflections;
        return folded;
      }
      std::ostringstream msg;
      msg << "no valid substep after " << depth << " halvings (dt " << dt << ", from x = "
          << s.positions.transpose() << " to " << proposal.positions.transpose() << ")";
      throw Error(ErrorCode::StepFailure, msg.str());
    }
    ++substeps;
    const double half = 0.5 * dt;
    Eigen::VectorXd first(brownian.size());
    for (Eigen::Index i = 0; i < brownian.size(); ++i) {
      NoiseKey key = refinement;
      key.particle = static_cast<std::uint64_t>(i);
      key.node = node;
      first[i] = 0.5 * brownian[i] + 0.5 * std::sqrt(dt) * standard_normal(key);
    }
    const Eigen::VectorXd second = brownian - first;
    const GasState mid = advance(s, half, first, 2 * node, depth + 1);
    return advance(mid, half, second, 2 * node + 1, depth + 1);
  }
};

}  // namespace

Eigen::VectorXd drift(const GasState& state, Interaction interaction) {
  state.validate();
  return drift_unchecked(state, interaction);
}

StepOutcome em_step_detailed(const GasState& state, double dt, const Eigen::VectorXd& gaussians,
                             const NoiseKey& refinement, const StepOptions& options) {
  state.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  if (gaussians.size() != state.size()) {
    throw Error(ErrorCode::InvalidArgument, "need one gaussian per particle");
  }
  Stepper stepper{refinement, options};
  const Eigen::VectorXd brownian = std::sqrt(dt) * gaussians;
  StepOutcome out{stepper.advance(state, dt, brownian, refinement.node == 0 ? 1 : refinement.node, 0), 0};
  out.substeps = stepper.substeps;
  out.reflections = stepper.reflections;
  out.state.time = state.time + dt;
  return out;
}

GasState em_step(const GasState& state, double dt, const Eigen::VectorXd& gaussians,
                 const NoiseKey& refinement, const StepOptions& options) {
  return em_step_detailed(state, dt, gaussians, refinement, options).state;
}

std::size_t GasPath::interval_index(double t) const {
  if (states.size() < 2) throw Error(ErrorCode::GridExceeded, "path has no steps");
  const double h = horizon();
  const double slack = 1e-12 * std::max(1.0, h);
  if (t < -slack || t > h + slack) {
    throw Error(ErrorCode::GridExceeded, "time " + std::to_string(t) + " outside [0, " + std::to_string(h) + "]");
  }
  const auto it = std::upper_bound(states.begin(), states.end(), t + slack,
                                   [](double v, const GasState& s) { return v < s.time; });
  const auto idx = static_cast<std::size_t>(std::distance(states.begin(), it));
  return std::min(idx == 0 ? 0 : idx - 1, steps() - 1);
}

GasPath GasPath::subsample(std::size_t stride) const {
  if (stride == 0 || steps() % stride != 0) {
    throw Error(ErrorCode::InvalidArgument, "stride must divide the number of steps");
  }
  GasPath out;
  out.seed = seed;
  out.substep_log = substep_log;
  out.reflection_log = reflection_log;
  for (std::size_t k = 0; k < states.size(); k += stride) out.states.push_back(states[k]);
  return out;
}

void GasPath::validate() const {
  if (states.size() < 2) throw Error(ErrorCode::InvalidArgument, "path needs at least one step");
  if (states.front().time != 0.0) throw Error(ErrorCode::InvalidArgument, "path must start at t = 0");
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto& s = states[k];
    s.validate();
    if (s.domain != states[0].domain || s.kappa != states[0].kappa || s.nu != states[0].nu ||
        s.size() != states[0].size()) {
      throw Error(ErrorCode::InvalidArgument, "path states disagree on parameters");
    }
    if (k > 0 && !(s.time > states[k - 1].time)) {
      throw Error(ErrorCode::InvalidArgument, "path times must be strictly increasing");
    }
  }
}

GasPath GasPath::constant(const GasState& state, double horizon, std::size_t n_steps) {
  state.validate();
  if (!(horizon > 0.0) || n_steps == 0) throw Error(ErrorCode::InvalidArgument, "bad grid");
  GasPath path;
  path.states.reserve(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k) {
    GasState s = state;
    s.time = horizon * static_cast<double>(k) / static_cast<double>(n_steps);
    path.states.push_back(std::move(s));
  }
  return path;
}

GasPath simulate_gas(const GasState& initial, double horizon, std::size_t n_steps, std::uint64_t seed,
                     const SimulateOptions& options) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
  if (n_steps == 0) throw Error(ErrorCode::InvalidArgument, "n_steps must be >= 1");
  GasState state = sorted(initial);
  state.time = 0.0;
  state.validate();

  GasPath path;
  path.seed = seed;
  path.states.reserve(n_steps + 1);
  path.states.push_back(state);

  const double dt = horizon / static_cast<double>(n_steps);
  const StepOptions step_options{options.max_depth, options.interaction, options.drift_fraction};
  Eigen::VectorXd gaussians(state.size());
  for (std::size_t k = 0; k < n_steps; ++k) {
    NoiseKey key{seed, streams::kGas, k, 0, 1};
    for (Eigen::Index i = 0; i < state.size(); ++i) {
      key.particle = static_cast<std::uint64_t>(i);
      gaussians[i] = standard_normal(key);
    }
    NoiseKey refinement{seed, streams::kGasBridge, k, 0, 1};
    StepOutcome out;
    try {
      out = em_step_detailed(state, dt, gaussians, refinement, step_options);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::StepFailure) throw;
      throw Error(ErrorCode::StepFailure, "macro step " + std::to_string(k) + ": " + e.what());
    }
    state = std::move(out.state);
    state.time = horizon * static_cast<double>(k + 1) / static_cast<double>(n_steps);
    path.substep_log += out.substeps;
    path.reflection_log += out.reflections;
    path.states.push_back(state);
  }
  return path;
}

}  // namespace lsle
