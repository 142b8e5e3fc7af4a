#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <unsupported/Eigen/FFT>

#include "lsle/error.hpp"
#include "lsle/gff.hpp"
#include "lsle/random.hpp"

namespace lsle {

namespace {

// In-place DST-I, y_p = sum_{j=1..n} v_j sin(pi j p / (n+1)), on every column,
// through a length 2(n+1) FFT of the odd extension.
void dst1_columns(Eigen::MatrixXd& m, Eigen::FFT<double>& fft) {
  const Eigen::Index n = m.rows();
  const Eigen::Index len = 2 * (n + 1);
  std::vector<Complex> in(static_cast<std::size_t>(len));
  std::vector<Complex> out(static_cast<std::size_t>(len));
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    in[0] = 0.0;
    in[static_cast<std::size_t>(n + 1)] = 0.0;
    for (Eigen::Index j = 1; j <= n; ++j) {
      const double v = m(j - 1, c);
      in[static_cast<std::size_t>(j)] = v;
      in[static_cast<std::size_t>(len - j)] = -v;
    }
    fft.fwd(out, in);
    for (Eigen::Index p = 1; p <= n; ++p) m(p - 1, c) = -0.5 * out[static_cast<std::size_t>(p)].imag();
  }
}

}  // namespace

std::pair<int, int> lattice_shape(const Rect& box, double mesh) {
  if (box.empty()) throw Error(ErrorCode::InvalidArgument, "box must have positive area");
  if (!(mesh > 0.0)) throw Error(ErrorCode::InvalidArgument, "mesh must be positive");
  auto cells = [&](double side) {
    const double ratio = side / mesh;
    const double n = std::round(ratio);
    if (std::abs(ratio - n) > 1e-9 * std::max(1.0, n) || n < 2) {
      throw Error(ErrorCode::InvalidArgument, "mesh must divide the box sides");
    }
    return static_cast<int>(n);
  };
  return {cells(box.width()) - 1, cells(box.height()) - 1};
}

double FieldSample::interpolate(Complex z) const {
  if (!box.contains(z)) throw Error(ErrorCode::SupportOutsideBox, "point outside the sampling box");
  const double u = (z.real() - box.x0) / mesh;
  const double v = (z.imag() - box.y0) / mesh;
  const int i = std::min(static_cast<int>(std::floor(u)), nx);
  const int j = std::min(static_cast<int>(std::floor(v)), ny);
  const double a = u - i;
  const double b = v - j;
  return (1 - a) * (1 - b) * at(i, j) + a * (1 - b) * at(i + 1, j) + (1 - a) * b * at(i, j + 1) +
         a * b * at(i + 1, j + 1);
}

FieldSample sample_field(const Rect& box, double mesh, std::uint64_t seed, double intended_support_diameter) {
  const auto [nx, ny] = lattice_shape(box, mesh);
  if (intended_support_diameter > 0.0 && intended_support_diameter / mesh < 16.0) {
    throw Error(ErrorCode::MeshTooCoarse,
                "need 16 nodes per support diameter, have " + std::to_string(intended_support_diameter / mesh));
  }
  FieldSample field;
  field.box = box;
  field.mesh = mesh;
  field.nx = nx;
  field.ny = ny;
  field.seed = seed;

  const double px = std::numbers::pi / (nx + 1);
  const double py = std::numbers::pi / (ny + 1);
  const double norm = std::sqrt(2.0 / (nx + 1)) * std::sqrt(2.0 / (ny + 1));
  Eigen::MatrixXd coeff(nx, ny);
  for (int j = 1; j <= nx; ++j) {
    for (int k = 1; k <= ny; ++k) {
      const double lambda = 4.0 - 2.0 * std::cos(px * j) - 2.0 * std::cos(py * k);
      const double xi = standard_normal(NoiseKey{seed, streams::kField, static_cast<std::uint64_t>(j),
                                                 static_cast<std::uint64_t>(k), 1});
      coeff(j - 1, k - 1) = norm * std::sqrt(2.0 * std::numbers::pi / lambda) * xi;
    }
  }
  Eigen::FFT<double> fft;
  dst1_columns(coeff, fft);
  Eigen::MatrixXd t = coeff.transpose();
  dst1_columns(t, fft);
  field.values = t.transpose();
  return field;
}

double pair_field(const FieldSample& field, const TestFunction& f) {
  if (!field.box.contains(f.support_box())) {
    throw Error(ErrorCode::SupportOutsideBox, "test function support leaves the sampling box");
  }
  const Rect s = f.support_box();
  const int i0 = std::max(1, static_cast<int>(std::floor((s.x0 - field.box.x0) / field.mesh)));
  const int i1 = std::min(field.nx, static_cast<int>(std::ceil((s.x1 - field.box.x0) / field.mesh)));
  const int j0 = std::max(1, static_cast<int>(std::floor((s.y0 - field.box.y0) / field.mesh)));
  const int j1 = std::min(field.ny, static_cast<int>(std::ceil((s.y1 - field.box.y0) / field.mesh)));
  double sum = 0.0;
  for (int i = i0; i <= i1; ++i) {
    for (int j = j0; j <= j1; ++j) sum += field.values(i - 1, j - 1) * f.value(field.node(i, j));
  }
  return sum * field.mesh * field.mesh;
}

double pair_field_pushforward(const FieldSample& field, const QuadratureNodes& nodes, std::span<const MapEval> maps) {
  if (maps.size() != nodes.points.size()) throw Error(ErrorCode::InvalidArgument, "one map per node required");
  double sum = 0.0;
  for (std::size_t n = 0; n < maps.size(); ++n) {
    if (!maps[n].alive) throw Error(ErrorCode::SwallowedProbe, "quadrature node swallowed");
    sum += nodes.weighted_values[n] * field.interpolate(maps[n].g);
  }
  return sum;
}

double box_pairing_covariance(const Rect& box, double mesh, const TestFunction& f, const TestFunction& g) {
  const auto [nx, ny] = lattice_shape(box, mesh);
  const auto index = [nx = nx](int i, int j) { return (i - 1) + nx * (j - 1); };
  const int n = nx * ny;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(5 * n));
  Eigen::VectorXd fv(n), gv(n);
  for (int j = 1; j <= ny; ++j) {
    for (int i = 1; i <= nx; ++i) {
      const int p = index(i, j);
      triplets.emplace_back(p, p, 4.0);
      if (i > 1) triplets.emplace_back(p, index(i - 1, j), -1.0);
      if (i < nx) triplets.emplace_back(p, index(i + 1, j), -1.0);
      if (j > 1) triplets.emplace_back(p, index(i, j - 1), -1.0);
      if (j < ny) triplets.emplace_back(p, index(i, j + 1), -1.0);
      const Complex z{box.x0 + i * mesh, box.y0 + j * mesh};
      fv[p] = f.value(z);
      gv[p] = g.value(z);
    }
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::InvalidArgument, "stencil factorisation failed");
  const Eigen::VectorXd u = solver.solve(fv);
  const double h2 = mesh * mesh;
  return 2.0 * std::numbers::pi * h2 * h2 * gv.dot(u);
}

}  // namespace lsle

namespace lsle {

namespace {

void require_inside(const Rect& box, Complex z) {
  if (!box.contains(z)) throw Error(ErrorCode::SupportOutsideBox, "point outside the sampling box");
}

}  // namespace

LatticeFunctional lattice_functional(const Rect& box, double mesh, const TestFunction& f) {
  const auto [nx, ny] = lattice_shape(box, mesh);
  if (!box.contains(f.support_box())) {
    throw Error(ErrorCode::SupportOutsideBox, "test function support leaves the sampling box");
  }
  LatticeFunctional out;
  for (int i = 1; i <= nx; ++i) {
    for (int j = 1; j <= ny; ++j) {
      const double v = f.value({box.x0 + i * mesh, box.y0 + j * mesh});
      if (v != 0.0) out.entries.push_back({i, j, v * mesh * mesh});
    }
  }
  return out;
}

LatticeFunctional pushforward_functional(const Rect& box, double mesh, const QuadratureNodes& nodes,
                                         std::span<const MapEval> maps) {
  const auto [nx, ny] = lattice_shape(box, mesh);
  if (maps.size() != nodes.points.size()) throw Error(ErrorCode::InvalidArgument, "one map per node required");
  LatticeFunctional out;
  out.entries.reserve(4 * maps.size());
  for (std::size_t n = 0; n < maps.size(); ++n) {
    if (!maps[n].alive) throw Error(ErrorCode::SwallowedProbe, "quadrature node swallowed");
    const Complex z = maps[n].g;
    require_inside(box, z);
    const double u = (z.real() - box.x0) / mesh;
    const double v = (z.imag() - box.y0) / mesh;
    const int i = std::min(static_cast<int>(std::floor(u)), nx);
    const int j = std::min(static_cast<int>(std::floor(v)), ny);
    const double a = u - i;
    const double b = v - j;
    const double w = nodes.weighted_values[n];
    auto push = [&](int ix, int iy, double c) {
      if (ix >= 1 && iy >= 1 && ix <= nx && iy <= ny && c != 0.0) out.entries.push_back({ix, iy, w * c});
    };
    push(i, j, (1 - a) * (1 - b));
    push(i + 1, j, a * (1 - b));
    push(i, j + 1, (1 - a) * b);
    push(i + 1, j + 1, a * b);
  }
  return out;
}

double apply(const FieldSample& field, const LatticeFunctional& functional) {
  double sum = 0.0;
  for (const auto& e : functional.entries) sum += e.weight * field.at(e.ix, e.iy);
  return sum;
}

std::vector<double> sample_pairings(const Rect& box, double mesh, std::uint64_t seed,
                                    std::span<const LatticeFunctional> functionals) {
  const auto [nx, ny] = lattice_shape(box, mesh);
  const double px = std::numbers::pi / (nx + 1);
  const double py = std::numbers::pi / (ny + 1);
  const double norm = std::sqrt(2.0 / (nx + 1)) * std::sqrt(2.0 / (ny + 1));
  Eigen::MatrixXd coeff(nx, ny);
  for (int j = 1; j <= nx; ++j) {
    for (int k = 1; k <= ny; ++k) {
      const double lambda = 4.0 - 2.0 * std::cos(px * j) - 2.0 * std::cos(py * k);
      const double xi = standard_normal(NoiseKey{seed, streams::kField, static_cast<std::uint64_t>(j),
                                                 static_cast<std::uint64_t>(k), 1});
      coeff(j - 1, k - 1) = norm * std::sqrt(2.0 * std::numbers::pi / lambda) * xi;
    }
  }

  std::vector<double> out;
  out.reserve(functionals.size());
  for (const auto& functional : functionals) {
    if (functional.entries.empty()) {
      out.push_back(0.0);
      continue;
    }
    int i0 = nx, i1 = 1, j0 = ny, j1 = 1;
    for (const auto& e : functional.entries) {
      i0 = std::min(i0, e.ix);
      i1 = std::max(i1, e.ix);
      j0 = std::min(j0, e.iy);
      j1 = std::max(j1, e.iy);
    }
    const int P = i1 - i0 + 1;
    const int Q = j1 - j0 + 1;
    Eigen::MatrixXd window = Eigen::MatrixXd::Zero(P, Q);
    for (const auto& e : functional.entries) window(e.ix - i0, e.iy - j0) += e.weight;
    Eigen::MatrixXd sx(nx, P), sy(ny, Q);
    for (int j = 1; j <= nx; ++j)
      for (int p = 0; p < P; ++p) sx(j - 1, p) = std::sin(px * j * (i0 + p));
    for (int k = 1; k <= ny; ++k)
      for (int q = 0; q < Q; ++q) sy(k - 1, q) = std::sin(py * k * (j0 + q));
    const Eigen::MatrixXd projected = (sx * window) * sy.transpose();
    out.push_back(coeff.cwiseProduct(projected).sum());
  }
  return out;
}

}  // namespace lsle
