// Acceptance campaign: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lsle/coupling.hpp"
#include "lsle/error.hpp"
#include "lsle/gff.hpp"
#include "lsle/loewner.hpp"
#include "lsle/loggas.hpp"
#include "lsle/rmt_oracle.hpp"
#include "lsle/stats.hpp"

using namespace lsle;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

GasState state(std::vector<double> x, double kappa = 4.0, GasDomain domain = GasDomain::RealLine, double nu = 0.0) {
  GasState s;
  s.positions = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  s.kappa = kappa;
  s.domain = domain;
  s.nu = nu;
  return s;
}

Complex upper_sqrt(Complex w) {
  const Complex r = std::sqrt(w);
  return r.imag() < 0.0 ? -r : r;
}

// Least-squares slope of log err against log step.
double order_of_convergence(const std::vector<double>& steps, const std::vector<double>& err) {
  const double n = static_cast<double>(steps.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const double lx = std::log(steps[i]), ly = std::log(err[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// 1. Analytic drift against a central-difference gradient of the potential.
void drift_from_potential(Outcome& o) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(u(rng) * 6);
    GasState s;
    s.domain = trial % 2 ? GasDomain::HalfLine : GasDomain::RealLine;
    s.kappa = 0.5 + 7.5 * u(rng);
    s.nu = 3.0 * u(rng);
    s.positions.resize(n);
    double x = s.domain == GasDomain::HalfLine ? 0.0 : -3.0;
    for (int i = 0; i < n; ++i) s.positions[i] = x += 0.2 + u(rng);
    const Eigen::VectorXd b = drift(s);
    for (int i = 0; i < n; ++i) {
      const double h = 1e-6 * std::max(1.0, std::abs(s.positions[i]));
      GasState p = s, m = s;
      p.positions[i] += h;
      m.positions[i] -= h;
      const double fd = (log_potential(p) - log_potential(m)) / (2 * h);
      worst = std::max(worst, std::abs(b[i] - fd) / std::max(std::abs(b[i]), 1e-3));
    }
  }
  o.detail << "max relative error " << worst;
  o.require(worst <= 1e-5, "relative error <= 1e-5");
}

// 2. Gas marginals against matrix-model samples.
void matrix_oracle(Outcome& o) {
  struct Case {
    const char* name;
    Ensemble ensemble;
    int n, nu;
  };
  for (const Case& c : {Case{"dyson N=2", Ensemble::HermitianBM, 2, 0}, Case{"dyson N=3", Ensemble::HermitianBM, 3, 0},
                        Case{"wishart nu=0", Ensemble::WishartSingular, 2, 0},
                        Case{"wishart nu=1", Ensemble::WishartSingular, 2, 1}}) {
    OracleConfig cfg;
    cfg.ensemble = c.ensemble;
    cfg.n = c.n;
    cfg.nu = c.nu;
    cfg.t_gas = 0.25;
    cfg.seeds = 10000;
    const OracleComparison r = compare_with_matrix_model(cfg);
    o.detail << c.name << ": KS " << r.ks << " (" << r.failed_seeds << " failed seeds); ";
    o.require(r.ks < 0.05, std::string(c.name) + " KS < 0.05");
  }
}

// 3. Zero-noise closed form and capacity growth.
void loewner_closed_form(Outcome& o) {
  const LoewnerChain chain(GasPath::constant(state({0.0}), 0.2, 200));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(-2.0, 2.0), im(0.05, 2.0), tt(0.0, 0.2);
  double worst_g = 0.0, worst_d = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Complex z{re(rng), im(rng)};
    const double t = tt(rng);
    const MapEval m = evolve(chain, z, t);
    const Complex g = upper_sqrt(z * z + 4.0 * t);
    const Complex gp = z / g;
    worst_g = std::max(worst_g, std::abs(m.g - g) / std::abs(g));
    worst_d = std::max(worst_d, std::abs(m.gprime - gp) / std::abs(gp));
    o.require(m.alive, "probe alive");
  }
  o.detail << "g rel " << worst_g << ", g' rel " << worst_d;
  o.require(worst_g <= 1e-6 && worst_d <= 1e-6, "closed form to 1e-6");
  const double c1 = hcap_coefficient(chain, 0.2, 1e3);
  const LoewnerChain dyson(simulate_gas(state({-1, 0, 1}), 0.2, 200, 11));
  const double c3 = hcap_coefficient(dyson, 0.2, 1e3);
  const double e1 = std::abs(c1 / 0.4 - 1.0), e3 = std::abs(c3 / 1.2 - 1.0);
  o.detail << "; hcap N=1 rel " << e1 << ", N=3 rel " << e3;
  o.require(e1 <= 1e-3 && e3 <= 1e-3, "hcap 2Nt to 1e-3");
}

// 4. Green's function identities and the decrement rate.
void green_identities(Outcome& o) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  double conformal = 0.0, asym = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Complex z{u(rng), u(rng)}, w{u(rng), u(rng)};
    conformal = std::max(conformal, std::abs(green(Domain::O, z, w) - green(Domain::H, z * z, w * w)));
    for (Domain d : {Domain::H, Domain::O}) asym = std::max(asym, std::abs(green(d, z, w) - green(d, w, z)));
  }
  o.detail << "|G_O - G_H(z^2)| " << conformal << ", asymmetry " << asym;
  o.require(conformal <= 1e-12, "conformal identity to 1e-12");
  o.require(asym == 0.0, "symmetry");

  double boundary = 0.0;
  for (Domain d : {Domain::H, Domain::O}) {
    for (double eps : {1e-6, 1e-9}) {
      boundary = std::max(boundary, green(d, {0.7, eps}, {0.4, 1.1}) / eps);
      boundary = std::max(boundary, green(d, {eps, 0.7}, {0.4, 1.1}) / eps * (d == Domain::O));
    }
  }
  o.detail << ", G/eps at boundary " << boundary;
  o.require(boundary < 10.0, "G vanishes linearly at the boundary");

  struct Case {
    LoewnerChain chain;
    Complex z, w;
  };
  const std::vector<Case> cases{
      {LoewnerChain(GasPath::constant(state({-0.5, 0.5}), 0.2, 1)), {0.1, 1.2}, {-0.4, 0.8}},
      {LoewnerChain(GasPath::constant(state({1.0}, 4.0, GasDomain::HalfLine, 1.0), 0.2, 1), 1.0), {1.5, 0.6},
       {0.5, 1.4}}};
  for (const Case& c : cases) {
    const double t = 0.05, rate = green_decrement(c.chain, t, c.z, c.w);
    std::vector<double> steps{1e-2, 1e-3, 1e-4, 1e-5}, err;
    for (double dt : steps) {
      const double fd = (green_evolved(c.chain, t + dt, c.z, c.w) - green_evolved(c.chain, t, c.z, c.w)) / dt;
      err.push_back(std::abs(fd - rate));
    }
    const double order = order_of_convergence(steps, err);
    o.detail << ", decrement FD order " << order;
    o.require(order >= 0.9, "decrement FD order >= 0.9");
  }
}

// 5. Dirichlet inner product under the z^2 pullback.
void dirichlet_conformal(Outcome& o) {
  const TestFunction f{{0.3, 3.0}, 0.6, 1.0}, g{{-0.1, 2.8}, 0.5, 2.0};
  const SquarePullback<TestFunction> pf{f}, pg{g};
  auto richardson = [](auto&& q, double h) { return (4.0 * q(h / 4.0) - q(h)) / 3.0; };
  const double on_h = richardson([&](double m) { return dirichlet_inner(f, g, m); }, 0.02);
  const double on_o = richardson([&](double m) { return dirichlet_inner(pf, pg, m); }, 0.005);
  const double rel = std::abs(on_h - on_o) / std::abs(on_h);
  o.detail << "relative mismatch " << rel;
  o.require(rel <= 1e-4, "relative mismatch <= 1e-4");
}

// 6. Martingale drift dichotomy.
void martingale_dichotomy(Outcome& o) {
  const std::vector<double> grid{0.05, 0.1};
  for (double kappa : {2.0, 4.0, 6.0}) {
    ChainFamily fam;
    fam.initial = state({-1, 0, 1}, kappa);
    fam.horizon = 0.1;
    fam.n_steps = 500;
    fam.seeds = 10000;
    const DriftReport r = martingale_drift_test(fam, {0, 4}, grid);
    double main_z = 0.0;
    for (const auto& row : r.main.rows) main_z = std::max(main_z, row.z_score);
    o.detail << "H kappa=" << kappa << ": drift " << main_z << " SE, free control " << r.control->rows.back().z_score
             << " SE; ";
    o.require(r.main_driftless, "H drift within 3 SE");
    o.require(r.control_detected, "H free control > 5 SE");
  }
  ChainFamily fam;
  fam.initial = state({1, 2}, 4.0, GasDomain::HalfLine, 1.0);
  fam.horizon = 0.1;
  fam.n_steps = 500;
  fam.seeds = 10000;
  const Complex z{1.5, 1.5};
  const DriftReport r = martingale_drift_test(fam, z, grid);
  double main_z = 0.0;
  for (const auto& row : r.main.rows) main_z = std::max(main_z, row.z_score);
  fam.q = 1.0;
  const double wrong_q = run_drift_arm(fam, z, grid).rows.back().z_score;
  o.detail << "O: drift " << main_z << " SE, q=1 control " << wrong_q << " SE, free control "
           << r.control->rows.back().z_score << " SE";
  o.require(r.main_driftless, "O drift within 3 SE");
  o.require(wrong_q > kControlThreshold, "O q=1 control > 5 SE");
}

// 7. Realised covariation against the Green decrement.
void qv_identity(Outcome& o) {
  const std::vector<std::vector<double>> configs{{0.0}, {-1.0, 1.0}, {-1.0, 0.0, 1.0}};
  const std::vector<std::pair<Complex, Complex>> pairs{{{0, 2}, {0, 2}}, {{0, 2}, {0.5, 1.5}}};
  for (const auto& x : configs) {
    ChainFamily fam;
    fam.initial = state(x);
    fam.horizon = 0.05;
    fam.n_steps = 500;
    for (const auto& [z, w] : pairs) {
      std::vector<double> realized, predicted;
      for (std::uint64_t s = 1; s <= 1000; ++s) {
        try {
          const QvCheck c = qv_identity_check(fam.chain_for(s), z, w, fam.horizon);
          realized.push_back(c.realized_qv);
          predicted.push_back(c.minus_quarter_kappa_dG);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::SwallowedProbe && e.code() != ErrorCode::StepFailure) throw;
        }
      }
      const double r = mean_stderr(realized).mean, p = mean_stderr(predicted).mean;
      const double rel = std::abs(r - p) / std::abs(p);
      o.detail << "N=" << x.size() << (z == w ? " diag" : " off") << " rel " << rel << "; ";
      o.require(rel <= kQvTolerance && realized.size() >= 990, "QV within 10%");
    }
  }
}

// 8. Constancy of the coupling functional.
void functional_constancy(Outcome& o) {
  struct Preset {
    const char* name;
    GasState initial;
    TestFunction f;
    bool control;
  };
  const std::vector<Preset> presets{
      {"H N=1", state({0.0}), {{0, 3}, 0.5, 10.0}, false},
      {"H N=2", state({-1.0, 1.0}), {{1, 2}, 0.5, 10.0}, true},
      {"O N=1", state({1.0}, 4.0, GasDomain::HalfLine, 1.0), {{1.5, 1.5}, 0.5, 10.0}, false}};
  for (const Preset& p : presets) {
    CouplingConfig c;
    c.initial = p.initial;
    c.f = p.f;
    c.control_arm = p.control;
    const CouplingReport r = verify_coupling(c);
    o.detail << p.name << ":";
    for (const Verdict& v : r.verdicts) {
      o.detail << " " << v.name << "=" << v.statistic;
      o.require(v.pass, std::string(p.name) + " " + v.name);
    }
    o.detail << "; ";
  }
}

// 9. Field sampler variance and the end-to-end sampled coupling.
void field_sampler(Outcome& o) {
  const TestFunction f{{0, 2}, 0.5, 10.0};
  const Rect box = truncation_box(Domain::H, std::span<const TestFunction>(&f, 1));
  const double mesh = 1.0 / 16;
  const std::vector<LatticeFunctional> fs{lattice_functional(box, mesh, f)};
  std::vector<double> pairings(10000);
  for (std::size_t s = 0; s < pairings.size(); ++s) pairings[s] = sample_pairings(box, mesh, s + 1, fs)[0];
  const double green_quadrature = dirichlet_energy(f, LoewnerChain(GasPath::constant(state({0.0}), 0.1, 1)), 0.0, 0.025);
  const double rel = std::abs(sample_variance(pairings) / green_quadrature - 1.0);
  o.detail << "Var vs Green quadrature rel " << rel;
  o.require(rel <= 0.05, "variance within 5%");

  SampledCouplingConfig c;
  c.initial = state({0.0});
  c.f = TestFunction{{0, 3}, 0.5, 10.0};
  const SampledCouplingReport r = sampled_coupling(c);
  for (const Verdict& v : r.verdicts) {
    o.detail << "; " << v.name << " " << v.statistic;
    o.require(v.pass, v.name);
  }
}

// 10. Harmonic part at the boundary is a staircase.
void boundary_staircase(Outcome& o) {
  const std::vector<double> x{-1.0, 1.0};
  const double kappa = 4.0;
  const LoewnerChain chain(GasPath::constant(state(x, kappa), 0.1, 10));
  const double eps = 1e-7;
  double worst = 0.0;
  for (double re : {-50.0, -1.5, -1.01, -0.99, 0.0, 0.99, 1.01, 1.5, 50.0}) {
    const int right = static_cast<int>(std::count_if(x.begin(), x.end(), [&](double xi) { return xi > re; }));
    const double expected = -(2 * pi / std::sqrt(kappa)) * right;
    worst = std::max(worst, std::abs(harmonic_part(chain, {re, eps}, 0.0) - expected));
  }
  o.detail << "max deviation " << worst;
  o.require(worst <= 1e-3, "staircase to 1e-3");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double runtime_cap;  // seconds
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria{
      {"drift-from-potential", 1.0, drift_from_potential},
      {"random-matrix oracle", 300.0, matrix_oracle},
      {"Loewner closed form", 10.0, loewner_closed_form},
      {"Green identities", 30.0, green_identities},
      {"Dirichlet conformal invariance", 30.0, dirichlet_conformal},
      {"martingale dichotomy", 900.0, martingale_dichotomy},
      {"QV identity", 600.0, qv_identity},
      {"functional constancy", 1800.0, functional_constancy},
      {"field sampler", 600.0, field_sampler},
      {"boundary staircase", 1.0, boundary_staircase},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(seconds <= criteria[i].runtime_cap, "runtime cap");
    all = all && o.pass;
    std::printf("%s %2zu %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.str().c_str(),
                seconds);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
