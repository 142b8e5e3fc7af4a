#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lsle/loewner.hpp"

namespace lsle {

struct Rect {
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;

  double width() const noexcept { return x1 - x0; }
  double height() const noexcept { return y1 - y0; }
  bool empty() const noexcept { return !(x1 > x0 && y1 > y0); }
  bool contains(const Rect& r) const noexcept { return r.x0 >= x0 && r.x1 <= x1 && r.y0 >= y0 && r.y1 <= y1; }
  bool contains(Complex z) const noexcept {
    return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1;
  }
  Rect intersect(const Rect& r) const noexcept {
    return {std::max(x0, r.x0), std::min(x1, r.x1), std::max(y0, r.y0), std::min(y1, r.y1)};
  }
};

// amplitude * exp(-1 / (1 - r^2)), r = |z - center| / radius, zero for r >= 1.
struct TestFunction {
  Complex center;
  double radius = 1.0;
  double amplitude = 1.0;

  double value(Complex z) const noexcept {
    const double r2 = std::norm(z - center) / (radius * radius);
    if (r2 >= 1.0) return 0.0;
    return amplitude * std::exp(-1.0 / (1.0 - r2));
  }

  // df/dx + i df/dy.
  Complex gradient(Complex z) const noexcept {
    const double r2 = std::norm(z - center) / (radius * radius);
    if (r2 >= 1.0) return 0.0;
    const double one_minus = 1.0 - r2;
    const double f = amplitude * std::exp(-1.0 / one_minus);
    return -2.0 * f / (one_minus * one_minus * radius * radius) * (z - center);
  }

  Rect support_box() const noexcept {
    return {center.real() - radius, center.real() + radius, center.imag() - radius, center.imag() + radius};
  }

  // Closed support disk inside the open domain.
  bool support_inside(Domain domain) const noexcept {
    if (!(radius > 0.0)) return false;
    if (center.imag() - radius <= 0.0) return false;
    return domain == Domain::H || center.real() - radius > 0.0;
  }
};

template <class F>
concept GradientField = requires(const F& f, Complex z) {
  { f.value(z) } -> std::convertible_to<double>;
  { f.gradient(z) } -> std::convertible_to<Complex>;
  { f.support_box() } -> std::convertible_to<Rect>;
};

// f(z^2) on the quadrant for f on the half-plane.
template <GradientField F>
struct SquarePullback {
  F f;

  double value(Complex z) const { return f.value(z * z); }
  Complex gradient(Complex z) const { return std::conj(2.0 * z) * f.gradient(z * z); }
  Rect support_box() const {
    // Bounding box of the preimage of the support box under z -> z^2.
    const Rect b = f.support_box();
    Rect out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
             std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    constexpr int kSamples = 256;
    auto visit = [&](Complex w) {
      const Complex s = std::sqrt(w);
      out.x0 = std::min(out.x0, s.real());
      out.x1 = std::max(out.x1, s.real());
      out.y0 = std::min(out.y0, s.imag());
      out.y1 = std::max(out.y1, s.imag());
    };
    for (int i = 0; i <= kSamples; ++i) {
      const double u = static_cast<double>(i) / kSamples;
      visit({b.x0 + u * b.width(), b.y0});
      visit({b.x0 + u * b.width(), b.y1});
      visit({b.x0, b.y0 + u * b.height()});
      visit({b.x1, b.y0 + u * b.height()});
    }
    const double pad = 1e-3 * std::max(out.x1 - out.x0, out.y1 - out.y0);
    return {out.x0 - pad, out.x1 + pad, out.y0 - pad, out.y1 + pad};
  }
};

// Zero-boundary Green's functions normalised as E[H(z)H(w)] = G(z, w):
//   H: log|z - conj w| - log|z - w|
//   O: log|(z - conj w)(z + conj w)| - log|(z - w)(z + w)|
double green(Domain domain, Complex z, Complex w);

// Regular part lim_{w -> z} [G_t(z, w) + log|z - w|] of the evolved Green's
// function, from the evaluated map at z.
double green_regular_part(Domain domain, const MapEval& at_z);

// G_t(z, w) = G_D(g_t z, g_t w) for two already evolved probes.
double green_between(Domain domain, const MapEval& a, const MapEval& b);

// Time derivative of G_t(z, w) given the evaluated maps and driving positions.
double green_rate(Domain domain, Complex gz, Complex gw, std::span<const double> x);

double green_evolved(const LoewnerChain& chain, double t, Complex z, Complex w);

// G_t(z, w) - G_0(z, w); for z == w this is the finite change of the regular part.
double green_increment(const LoewnerChain& chain, double t, Complex z, Complex w);

double green_decrement(const LoewnerChain& chain, double t, Complex z, Complex w);

// Midpoint grid over the support box of f, keeping nodes where f != 0.
struct QuadratureNodes {
  std::vector<Complex> points;
  std::vector<double> weighted_values;  // f(z_n) * cell area
  double hx = 0.0, hy = 0.0;
};

QuadratureNodes quadrature_nodes(const TestFunction& f, double mesh);

// Mean of -log|u| over a centred hx x hy cell.
double cell_log_kernel_mean(double hx, double hy);

// (1/2pi) int grad f . grad g by the midpoint rule on the common support box.
template <GradientField F, GradientField G>
double dirichlet_inner(const F& f, const G& g, double mesh) {
  const Rect box = f.support_box().intersect(g.support_box());
  if (box.empty()) return 0.0;
  const auto nx = static_cast<long>(std::ceil(box.width() / mesh));
  const auto ny = static_cast<long>(std::ceil(box.height() / mesh));
  const double hx = box.width() / static_cast<double>(nx);
  const double hy = box.height() / static_cast<double>(ny);
  double sum = 0.0;
  for (long i = 0; i < nx; ++i) {
    double row = 0.0;
    for (long j = 0; j < ny; ++j) {
      const Complex z{box.x0 + (static_cast<double>(i) + 0.5) * hx, box.y0 + (static_cast<double>(j) + 0.5) * hy};
      const Complex a = f.gradient(z);
      const Complex b = g.gradient(z);
      row += a.real() * b.real() + a.imag() * b.imag();
    }
    sum += row;
  }
  return sum * hx * hy / (2.0 * std::numbers::pi);
}

// E_t(f) = int int f(z) G_t(z, w) f(w) from already evolved quadrature nodes.
double energy_from_maps(Domain domain, const QuadratureNodes& nodes, std::span<const MapEval> maps);

// Dirichlet energy of f in the evolved domain at time t. The diagonal cells
// use the exact cell mean of the logarithmic singularity plus the regular part.
double dirichlet_energy(const TestFunction& f, const LoewnerChain& chain, double t, double mesh);

// Discrete zero-boundary GFF on a box lattice (interior nodes only).
struct FieldSample {
  Rect box;
  double mesh = 0.0;
  int nx = 0, ny = 0;      // interior node counts
  Eigen::MatrixXd values;  // nx x ny
  std::uint64_t seed = 0;

  Complex node(int ix, int iy) const noexcept {
    return {box.x0 + static_cast<double>(ix) * mesh, box.y0 + static_cast<double>(iy) * mesh};
  }
  // Value at lattice index (0..nx+1, 0..ny+1); boundary nodes are zero.
  double at(int ix, int iy) const noexcept {
    if (ix <= 0 || iy <= 0 || ix > nx || iy > ny) return 0.0;
    return values(ix - 1, iy - 1);
  }
  // Bilinear interpolation; throws SupportOutsideBox outside the box.
  double interpolate(Complex z) const;
};

// Interior node counts for a box/mesh pair; throws if mesh does not divide the sides.
std::pair<int, int> lattice_shape(const Rect& box, double mesh);

// Samples the lattice field with covariance 2 pi A^{-1} (A the 5-point
// Dirichlet stencil), so that pairings converge to the continuum box field.
// intended_support_diameter > 0 enforces at least 16 nodes across a support.
FieldSample sample_field(const Rect& box, double mesh, std::uint64_t seed, double intended_support_diameter = 0.0);

// mesh^2 * sum over interior nodes of field * f.
double pair_field(const FieldSample& field, const TestFunction& f);

// (H o g_t, f): the field read at evolved quadrature nodes.
double pair_field_pushforward(const FieldSample& field, const QuadratureNodes& nodes, std::span<const MapEval> maps);

// Linear functional on the lattice interior: pairing = sum weight * field value.
struct LatticeFunctional {
  struct Entry {
    int ix, iy;
    double weight;
  };
  std::vector<Entry> entries;
};

// h^2 f at each interior node: apply(field, lattice_functional(...)) == pair_field(field, f).
LatticeFunctional lattice_functional(const Rect& box, double mesh, const TestFunction& f);

// Bilinear spreading of the evolved nodes: apply(...) == pair_field_pushforward(...).
LatticeFunctional pushforward_functional(const Rect& box, double mesh, const QuadratureNodes& nodes,
                                         std::span<const MapEval> maps);

double apply(const FieldSample& field, const LatticeFunctional& functional);

// The pairings of sample_field(box, mesh, seed) with each functional, computed
// in the sine eigenbasis without materialising the field.
std::vector<double> sample_pairings(const Rect& box, double mesh, std::uint64_t seed,
                                    std::span<const LatticeFunctional> functionals);

// Exact covariance of two lattice pairings, 2 pi mesh^4 f^T A^{-1} g, by a
// sparse Cholesky solve of the Dirichlet stencil.
double box_pairing_covariance(const Rect& box, double mesh, const TestFunction& f, const TestFunction& g);

// Truncation box for sampling a field meant to stand in for H or O: side
// parameter L = 8 x the diameter of the union of supports (enlarged if needed
// to contain them), [-L, L] x [0, 2L] for H and [0, 2L]^2 for O.
Rect truncation_box(Domain domain, std::span<const TestFunction> supports, double scale = 8.0);

}  // namespace lsle
