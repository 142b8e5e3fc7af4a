#include "lsle/loewner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "lsle/error.hpp"

namespace lsle {

bool in_domain(Domain domain, Complex z) noexcept {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  if (domain == Domain::H) return z.imag() > 0.0;
  return z.imag() > 0.0 && z.real() > 0.0;
}

LoewnerChain::LoewnerChain(GasPath driving, double delta)
    : driving_(std::make_shared<const GasPath>(std::move(driving))), delta_(delta) {
  driving_->validate();
  domain_ = driving_->domain() == GasDomain::RealLine ? Domain::H : Domain::O;
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw Error(ErrorCode::InvalidArgument, "delta must be >= 0");
  if (domain_ == Domain::H && delta != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "delta applies to quadrant chains only");
  }
}

const Eigen::VectorXd& LoewnerChain::positions_at(double t) const {
  const std::size_t k = driving_->interval_index(t);
  // At the horizon itself the last recorded state is the relevant one.
  if (t >= driving_->horizon()) return driving_->states.back().positions;
  return driving_->states[k].positions;
}

double pole_distance(Domain domain, Complex g, std::span<const double> x, double delta) noexcept {
  (void)delta;
  double d = std::numeric_limits<double>::infinity();
  for (double xi : x) {
    d = std::min(d, std::abs(g - xi));
    if (domain == Domain::O) d = std::min(d, std::abs(g + xi));
  }
  if (domain == Domain::O) d = std::min(d, std::abs(g));
  return d;
}

namespace {

struct Field {
  Domain domain;
  std::span<const double> x;
  double delta;

  // Value and g-derivative of the vector field in one sweep.
  void eval(Complex g, Complex& v, Complex& dv) const noexcept {
    v = 0.0;
    dv = 0.0;
    for (double xi : x) {
      const Complex a = 1.0 / (g - xi);
      v += 2.0 * a;
      dv -= 2.0 * a * a;
      if (domain == Domain::O) {
        const Complex b = 1.0 / (g + xi);
        v += 2.0 * b;
        dv -= 2.0 * b * b;
      }
    }
    if (domain == Domain::O && delta != 0.0) {
      const Complex c = 1.0 / g;
      v += 4.0 * delta * c;
      dv -= 4.0 * delta * c * c;
    }
  }
};

void check_poles(Domain domain, Complex g, std::span<const double> x) {
  if (pole_distance(domain, g, x, 0.0) < kPoleTolerance) {
    throw Error(ErrorCode::PoleHit, "g coincides with a pole of the Loewner vector field");
  }
}

struct Integrator {
  const EvolveOptions& opts;
  Domain domain;
  double delta;
  Complex g;
  Complex log_gp{0.0, 0.0};
  double t = 0.0;
  double h = 0.0;
  bool alive = true;
  double swallow_time = std::numeric_limits<double>::quiet_NaN();

  static bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

  void rk4(const Field& f, Complex g0, Complex l0, double step, Complex& g1, Complex& l1) const {
    Complex v1, d1, v2, d2, v3, d3, v4, d4;
    f.eval(g0, v1, d1);
    f.eval(g0 + 0.5 * step * v1, v2, d2);
    f.eval(g0 + 0.5 * step * v2, v3, d3);
    f.eval(g0 + step * v3, v4, d4);
    g1 = g0 + step / 6.0 * (v1 + 2.0 * v2 + 2.0 * v3 + v4);
    l1 = l0 + step / 6.0 * (d1 + 2.0 * d2 + 2.0 * d3 + d4);
  }

  // Integrates with the driving frozen at x up to t_target.
  void advance_to(double t_target, std::span<const double> x) {
    const Field f{domain, x, delta};
    while (alive && t < t_target) {
      const double remaining = t_target - t;
      if (remaining <= 1e-15 * std::max(1.0, t_target)) {
        t = t_target;
        break;
      }
      if (h <= 0.0 || h > remaining) h = remaining;
      Complex g_full, l_full, g_half, l_half, g_two, l_two;
      rk4(f, g, log_gp, h, g_full, l_full);
      rk4(f, g, log_gp, 0.5 * h, g_half, l_half);
      rk4(f, g_half, l_half, 0.5 * h, g_two, l_two);
      double err = std::numeric_limits<double>::infinity();
      if (finite(g_full) && finite(g_two) && finite(l_full) && finite(l_two) && in_domain(domain, g_two)) {
        const double eg = std::abs(g_two - g_full) / (opts.atol + opts.rtol * std::abs(g_two));
        const double el =
            std::abs(l_two - l_full) / (opts.atol + opts.rtol * std::max(1.0, std::abs(l_two)));
        err = std::max(eg, el) / 15.0;
      }
      if (err <= 1.0) {
        g = g_two + (g_two - g_full) / 15.0;
        log_gp = l_two + (l_two - l_full) / 15.0;
        t = (h == remaining) ? t_target : t + h;
        const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 4.0;
        h *= std::clamp(grow, 0.2, 4.0);
        if (pole_distance(domain, g, x, delta) < opts.swallow_eps || !in_domain(domain, g)) {
          alive = false;
          swallow_time = t;
        }
      } else {
        const double shrink = std::isfinite(err) ? 0.9 * std::pow(err, -0.2) : 0.1;
        h *= std::clamp(shrink, 0.1, 0.5);
        if (h < 1e-15 * std::max(1.0, t)) {
          // Step size collapsed next to a pole: treat as swallowed.
          alive = false;
          swallow_time = t;
        }
      }
    }
  }
};

MapEval snapshot(const Integrator& it, Complex z0, double t) {
  MapEval m;
  m.z0 = z0;
  m.g = it.g;
  m.log_gprime = it.log_gp;
  m.gprime = std::exp(it.log_gp);
  m.t = t;
  m.alive = it.alive;
  m.swallow_time = it.swallow_time;
  return m;
}

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

Complex vector_field(Domain domain, Complex g, std::span<const double> x, double delta) {
  check_poles(domain, g, x);
  Complex v, dv;
  Field{domain, x, delta}.eval(g, v, dv);
  return v;
}

Complex vector_field_derivative(Domain domain, Complex g, std::span<const double> x, double delta) {
  check_poles(domain, g, x);
  Complex v, dv;
  Field{domain, x, delta}.eval(g, v, dv);
  return dv;
}

std::vector<MapEval> evolve_trace(const LoewnerChain& chain, Complex z0, std::span<const double> times,
                                  const EvolveOptions& options) {
  if (!in_domain(chain.domain(), z0)) {
    throw Error(ErrorCode::DomainViolation, "initial point outside the open domain");
  }
  const GasPath& path = chain.driving();
  const double horizon = path.horizon();
  const double slack = 1e-12 * std::max(1.0, horizon);
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || times[i] > horizon + slack) {
      throw Error(ErrorCode::GridExceeded, "time " + std::to_string(times[i]) + " beyond the driving horizon");
    }
    if (i > 0 && times[i] < times[i - 1]) throw Error(ErrorCode::InvalidArgument, "times must be ascending");
  }

  Integrator it{options, chain.domain(), chain.delta(), z0};
  if (pole_distance(chain.domain(), z0, as_span(path.states.front().positions), chain.delta()) <
      options.swallow_eps) {
    it.alive = false;
    it.swallow_time = 0.0;
  }
  it.h = path.dt();
  std::vector<MapEval> out;
  out.reserve(times.size());
  std::size_t k = 0;
  for (double target : times) {
    target = std::min(target, horizon);
    while (it.alive && it.t < target) {
      while (k + 2 < path.states.size() && path.states[k + 1].time <= it.t) ++k;
      const double stop = std::min(target, path.states[k + 1].time);
      it.advance_to(stop, as_span(path.states[k].positions));
    }
    out.push_back(snapshot(it, z0, target));
  }
  return out;
}

MapEval evolve(const LoewnerChain& chain, Complex z0, double t_end, const EvolveOptions& options) {
  const std::array<double, 1> times{t_end};
  return evolve_trace(chain, z0, times, options).front();
}

double hcap_coefficient(const LoewnerChain& chain, double t, double probe_radius, const EvolveOptions& options) {
  const GasPath& path = chain.driving();
  const std::size_t last = std::min(path.interval_index(t) + 1, path.states.size() - 1);
  double sup = 0.0;
  for (std::size_t k = 0; k <= last; ++k) sup = std::max(sup, path.states[k].positions.cwiseAbs().maxCoeff());
  if (!(probe_radius >= 100.0 * sup) || !(probe_radius > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "probe_radius must be at least 100x the driving range");
  }
  if (t == 0.0) return 0.0;
  constexpr std::array<double, 3> angles{0.25, 0.5, 0.75};
  double c1 = 0.0;
  for (double a : angles) {
    const Complex z = std::polar(probe_radius, a * M_PI);
    const MapEval m = evolve(chain, z, t, options);
    if (!m.alive) throw Error(ErrorCode::SwallowedProbe, "capacity probe swallowed");
    c1 += (z * (m.g - z)).real();
  }
  return c1 / static_cast<double>(angles.size());
}

double stopping_time(const LoewnerChain& chain, std::span<const Complex> probes, double swallow_eps) {
  const GasPath& path = chain.driving();
  const double horizon = path.horizon();
  EvolveOptions options;
  options.swallow_eps = swallow_eps;
  double tau = horizon;
  for (Complex z : probes) {
    const MapEval m = evolve(chain, z, horizon, options);
    if (m.alive) continue;
    // Round the death time up to the macro grid.
    const auto it = std::lower_bound(path.states.begin(), path.states.end(), m.swallow_time,
                                     [](const GasState& s, double v) { return s.time < v; });
    const double grid_time = it == path.states.end() ? horizon : it->time;
    tau = std::min(tau, grid_time);
  }
  return tau;
}

}  // namespace lsle
