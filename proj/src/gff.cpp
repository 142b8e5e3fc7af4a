#include "lsle/gff.hpp"

#include <cmath>
#include <string>

#include "lsle/error.hpp"

namespace lsle {

namespace {

void require_pair(Domain domain, Complex z, Complex w) {
  if (!in_domain(domain, z) || !in_domain(domain, w)) {
    throw Error(ErrorCode::DomainViolation, "Green's function arguments must lie in the open domain");
  }
  if (z == w) throw Error(ErrorCode::CoincidentPoints, "Green's function is singular at z = w");
}

void require_alive(const MapEval& m) {
  if (!m.alive) throw Error(ErrorCode::SwallowedProbe, "probe swallowed before the requested time");
}

}  // namespace

double green(Domain domain, Complex z, Complex w) {
  require_pair(domain, z, w);
  // |z - conj w|^2 = |z - w|^2 + 4 Im z Im w, and for the mirror pair
  // |z + conj w|^2 = |z + w|^2 - 4 Im z Im w.
  const double yy = 4.0 * z.imag() * w.imag();
  const double direct = 0.5 * std::log1p(yy / std::norm(z - w));
  if (domain == Domain::H) return direct;
  return direct + 0.5 * std::log1p(-yy / std::norm(z + w));
}

double green_regular_part(Domain domain, const MapEval& at_z) {
  require_alive(at_z);
  const Complex g = at_z.g;
  const double log_abs_gp = at_z.log_gprime.real();
  if (domain == Domain::H) return std::log(2.0 * g.imag()) - log_abs_gp;
  return std::log(2.0 * g.imag()) + std::log(2.0 * g.real()) - std::log(2.0 * std::abs(g)) - log_abs_gp;
}

double green_between(Domain domain, const MapEval& a, const MapEval& b) {
  require_alive(a);
  require_alive(b);
  if (a.z0 == b.z0) throw Error(ErrorCode::CoincidentPoints, "Green's function is singular at z = w");
  return green(domain, a.g, b.g);
}

double green_rate(Domain domain, Complex gz, Complex gw, std::span<const double> x) {
  double rate = 0.0;
  for (double xi : x) {
    Complex a = 2.0 / (gz - xi);
    Complex b = 2.0 / (gw - xi);
    if (domain == Domain::O) {
      a -= 2.0 / (gz + xi);
      b -= 2.0 / (gw + xi);
    }
    rate -= a.imag() * b.imag();
  }
  return rate;
}

double green_evolved(const LoewnerChain& chain, double t, Complex z, Complex w) {
  require_pair(chain.domain(), z, w);
  return green_between(chain.domain(), evolve(chain, z, t), evolve(chain, w, t));
}

double green_increment(const LoewnerChain& chain, double t, Complex z, Complex w) {
  if (z != w) return green_evolved(chain, t, z, w) - green(chain.domain(), z, w);
  if (!in_domain(chain.domain(), z)) throw Error(ErrorCode::DomainViolation, "probe outside the domain");
  MapEval start;
  start.z0 = z;
  start.g = z;
  return green_regular_part(chain.domain(), evolve(chain, z, t)) - green_regular_part(chain.domain(), start);
}

double green_decrement(const LoewnerChain& chain, double t, Complex z, Complex w) {
  const MapEval a = evolve(chain, z, t);
  const MapEval b = evolve(chain, w, t);
  require_alive(a);
  require_alive(b);
  const Eigen::VectorXd& x = chain.positions_at(t);
  const std::span<const double> xs{x.data(), static_cast<std::size_t>(x.size())};
  if (pole_distance(chain.domain(), a.g, xs, chain.delta()) < kPoleTolerance ||
      pole_distance(chain.domain(), b.g, xs, chain.delta()) < kPoleTolerance) {
    throw Error(ErrorCode::PoleHit, "evolved probe sits on a driving point");
  }
  return green_rate(chain.domain(), a.g, b.g, xs);
}

QuadratureNodes quadrature_nodes(const TestFunction& f, double mesh) {
  if (!(mesh > 0.0)) throw Error(ErrorCode::InvalidArgument, "mesh must be positive");
  if (!(f.radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "test function radius must be positive");
  const Rect box = f.support_box();
  const auto n = static_cast<long>(std::ceil(2.0 * f.radius / mesh));
  const double h = 2.0 * f.radius / static_cast<double>(n);
  QuadratureNodes q;
  q.hx = q.hy = h;
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      const Complex z{box.x0 + (static_cast<double>(i) + 0.5) * h, box.y0 + (static_cast<double>(j) + 0.5) * h};
      const double v = f.value(z);
      if (v == 0.0) continue;
      q.points.push_back(z);
      q.weighted_values.push_back(v * h * h);
    }
  }
  return q;
}

double cell_log_kernel_mean(double hx, double hy) {
  const double a = 0.5 * hx;
  const double b = 0.5 * hy;
  const double mean_log =
      0.5 * (std::log(a * a + b * b) - 3.0 + (b / a) * std::atan(a / b) + (a / b) * std::atan(b / a));
  return -mean_log;
}

double energy_from_maps(Domain domain, const QuadratureNodes& nodes, std::span<const MapEval> maps) {
  const std::size_t n = nodes.points.size();
  if (maps.size() != n) throw Error(ErrorCode::InvalidArgument, "one map per quadrature node required");
  for (const auto& m : maps) require_alive(m);
  const double diag_kernel = cell_log_kernel_mean(nodes.hx, nodes.hy);
  double off = 0.0;
  double diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = nodes.weighted_values[i];
    const Complex gi = maps[i].g;
    double row = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      row += nodes.weighted_values[j] * green(domain, gi, maps[j].g);
    }
    off += wi * row;
    diag += wi * wi * (green_regular_part(domain, maps[i]) + diag_kernel);
  }
  return 2.0 * off + diag;
}

double dirichlet_energy(const TestFunction& f, const LoewnerChain& chain, double t, double mesh) {
  if (!f.support_inside(chain.domain())) {
    throw Error(ErrorCode::DomainViolation, "test function support must lie inside the domain");
  }
  const QuadratureNodes nodes = quadrature_nodes(f, mesh);
  std::vector<MapEval> maps;
  maps.reserve(nodes.points.size());
  for (Complex z : nodes.points) maps.push_back(evolve(chain, z, t));
  return energy_from_maps(chain.domain(), nodes, maps);
}

Rect truncation_box(Domain domain, std::span<const TestFunction> supports, double scale) {
  if (supports.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one support");
  Rect u = supports.front().support_box();
  for (const auto& f : supports) {
    const Rect b = f.support_box();
    u = {std::min(u.x0, b.x0), std::max(u.x1, b.x1), std::min(u.y0, b.y0), std::max(u.y1, b.y1)};
  }
  const double diameter = std::hypot(u.width(), u.height());
  double L = scale * diameter;
  if (domain == Domain::H) {
    L = std::max({L, std::abs(u.x0) + diameter, std::abs(u.x1) + diameter, 0.5 * u.y1 + diameter});
    L = std::ceil(L);
    return {-L, L, 0.0, 2.0 * L};
  }
  L = std::max({L, 0.5 * u.x1 + diameter, 0.5 * u.y1 + diameter});
  L = std::ceil(L);
  return {0.0, 2.0 * L, 0.0, 2.0 * L};
}

}  // namespace lsle
