#pragma once

#include <complex>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lsle/loggas.hpp"

namespace lsle {

using Complex = std::complex<double>;

// H: upper half-plane driven from the real line.
// O: first quadrant {Re z > 0, Im z > 0} driven from the positive half-line.
enum class Domain { H, O };

bool in_domain(Domain domain, Complex z) noexcept;

inline constexpr double kPoleTolerance = 1e-14;
inline constexpr double kDefaultSwallowEps = 1e-3;

// Multiple Loewner chain driven by a gas path, with the driving held
// piecewise constant (left value) on each macro interval. Domain follows the
// path: RealLine drives H, HalfLine drives O. delta is the extra 4 delta / g
// term of the quadrant equation and must be zero for H.
class LoewnerChain {
 public:
  explicit LoewnerChain(GasPath driving, double delta = 0.0);

  Domain domain() const noexcept { return domain_; }
  double delta() const noexcept { return delta_; }
  double kappa() const noexcept { return driving_->kappa(); }
  double horizon() const noexcept { return driving_->horizon(); }
  const GasPath& driving() const noexcept { return *driving_; }

  // Driving positions in force at time t (left grid value).
  const Eigen::VectorXd& positions_at(double t) const;

 private:
  std::shared_ptr<const GasPath> driving_;
  Domain domain_;
  double delta_;
};

struct MapEval {
  Complex z0;
  Complex g;
  Complex gprime{1.0, 0.0};
  Complex log_gprime{0.0, 0.0};  // branch tracked through its own ODE
  double t = 0.0;
  bool alive = true;
  double swallow_time = std::numeric_limits<double>::quiet_NaN();
};

struct EvolveOptions {
  double swallow_eps = kDefaultSwallowEps;
  double rtol = 1e-12;
  double atol = 1e-14;
};

// H: sum 2/(g - x_i).  O: sum [2/(g - x_i) + 2/(g + x_i)] + 4 delta / g.
// Throws PoleHit within kPoleTolerance of a pole.
Complex vector_field(Domain domain, Complex g, std::span<const double> x, double delta);

// d/dg of vector_field, the rate of change of log g'.
Complex vector_field_derivative(Domain domain, Complex g, std::span<const double> x, double delta);

// Solves dg/dt = V(g), d(log g')/dt = V'(g) from g(0) = z0 to t_end with an
// adaptive RK4 (step doubling). Once g comes within swallow_eps of a pole
// the probe is marked dead and frozen.
MapEval evolve(const LoewnerChain& chain, Complex z0, double t_end, const EvolveOptions& options = {});

// Same integration, sampled at ascending times in one pass.
std::vector<MapEval> evolve_trace(const LoewnerChain& chain, Complex z0, std::span<const double> times,
                                  const EvolveOptions& options = {});

// Capacity coefficient c1 in g_t(z) = z + c1 / z + ..., read off at
// |z| = probe_radius in three directions of the upper half-plane.
double hcap_coefficient(const LoewnerChain& chain, double t, double probe_radius,
                        const EvolveOptions& options = {});

// First macro-grid time at which some probe is dead; the horizon otherwise.
double stopping_time(const LoewnerChain& chain, std::span<const Complex> probes,
                     double swallow_eps = kDefaultSwallowEps);

// Distance from g to the nearest pole of the vector field.
double pole_distance(Domain domain, Complex g, std::span<const double> x, double delta) noexcept;

}  // namespace lsle
