#include "lsle/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lsle/error.hpp"
#include "lsle/parallel.hpp"

namespace lsle {

namespace {

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

double resolve_q(double kappa, std::optional<double> q) { return q.value_or(default_q(kappa)); }

// |diff| / se with the conventions 0/0 = 0 and x/0 = inf.
double standardized(double diff, double se) {
  const double a = std::abs(diff);
  if (a <= 1e-12) return 0.0;
  if (se <= 0.0) return std::numeric_limits<double>::infinity();
  return a / se;
}

MapEval initial_map(Complex z) {
  MapEval m;
  m.z0 = z;
  m.g = z;
  return m;
}

}  // namespace

Complex complex_potential(Domain domain, Complex z, std::span<const double> x, double q) {
  if (!in_domain(domain, z)) throw Error(ErrorCode::DomainViolation, "potential evaluated outside the domain");
  Complex phi = 0.0;
  for (double xi : x) {
    if (domain == Domain::O && xi < 0.0) {
      throw Error(ErrorCode::DomainViolation, "quadrant potential needs nonnegative boundary points");
    }
    phi += std::log(z - xi);
    if (domain == Domain::O) phi += std::log(z + xi);
  }
  if (domain == Domain::O) phi += q * std::log(z);
  return phi;
}

Complex martingale_value(Domain domain, double kappa, double q, const MapEval& map, std::span<const double> x) {
  if (!map.alive) throw Error(ErrorCode::SwallowedProbe, "probe swallowed before the requested time");
  return -complex_potential(domain, map.g, x, q) - (1.0 - kappa / 4.0) * map.log_gprime;
}

Complex martingale_observable(const LoewnerChain& chain, Complex z, double t, std::optional<double> q) {
  const MapEval m = evolve(chain, z, t);
  return martingale_value(chain.domain(), chain.kappa(), resolve_q(chain.kappa(), q), m,
                          as_span(chain.positions_at(t)));
}

double harmonic_part(const LoewnerChain& chain, Complex z, double t, std::optional<double> q) {
  return 2.0 / std::sqrt(chain.kappa()) * martingale_observable(chain, z, t, q).imag();
}

QvCheck qv_identity_check(const LoewnerChain& chain, Complex z, Complex w, double t_end, std::optional<double> q) {
  const GasPath& path = chain.driving();
  if (t_end > path.horizon() * (1 + 1e-12)) throw Error(ErrorCode::GridExceeded, "t_end beyond the horizon");
  std::vector<double> times;
  for (const auto& s : path.states) {
    if (s.time <= t_end) times.push_back(s.time);
  }
  if (times.back() < t_end) times.push_back(t_end);
  const double qq = resolve_q(chain.kappa(), q);
  const auto tz = evolve_trace(chain, z, times);
  const auto tw = z == w ? tz : evolve_trace(chain, w, times);
  QvCheck out;
  double prev_z = 0.0, prev_w = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto& x = chain.positions_at(times[k]);
    const double mz = martingale_value(chain.domain(), chain.kappa(), qq, tz[k], as_span(x)).imag();
    const double mw = z == w ? mz : martingale_value(chain.domain(), chain.kappa(), qq, tw[k], as_span(x)).imag();
    if (k > 0) {
      out.realized_qv += (mz - prev_z) * (mw - prev_w);
      out.max_branch_jump = std::max({out.max_branch_jump, std::abs(mz - prev_z), std::abs(mw - prev_w)});
    }
    prev_z = mz;
    prev_w = mw;
  }
  double dg;
  if (z == w) {
    dg = green_regular_part(chain.domain(), tz.back()) - green_regular_part(chain.domain(), initial_map(z));
  } else {
    dg = green_between(chain.domain(), tz.back(), tw.back()) - green(chain.domain(), z, w);
  }
  out.minus_quarter_kappa_dG = -chain.kappa() / 4.0 * dg;
  return out;
}

LoewnerChain ChainFamily::chain_for(std::uint64_t seed) const {
  SimulateOptions options;
  options.interaction = interaction;
  GasPath path = simulate_gas(initial, horizon, n_steps, seed, options);
  const double d = initial.domain == GasDomain::HalfLine ? delta.value_or(initial.nu) : 0.0;
  return LoewnerChain(std::move(path), d);
}

DriftArm run_drift_arm(const ChainFamily& family, Complex z, std::span<const double> t_grid) {
  if (family.seeds == 0) throw Error(ErrorCode::InvalidArgument, "seeds must be positive");
  std::vector<double> times{0.0};
  times.insert(times.end(), t_grid.begin(), t_grid.end());
  const std::size_t T = t_grid.size();
  const double q = resolve_q(family.initial.kappa, family.q);
  const Domain domain = family.initial.domain == GasDomain::RealLine ? Domain::H : Domain::O;
  EvolveOptions evolve_options;
  evolve_options.swallow_eps = family.swallow_eps;

  std::vector<char> alive(family.seeds, 0);
  std::vector<double> re(family.seeds * T), im(family.seeds * T);
  parallel_for(family.seeds, [&](std::size_t s) {
    std::optional<LoewnerChain> chain;
    try {
      chain.emplace(family.chain_for(family.first_seed + s));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::StepFailure) return;
      throw;
    }
    const auto trace = evolve_trace(*chain, z, times, evolve_options);
    if (!trace.back().alive) return;
    const Complex m0 = martingale_value(domain, family.initial.kappa, q, trace[0], as_span(chain->positions_at(0.0)));
    for (std::size_t k = 0; k < T; ++k) {
      const Complex m =
          martingale_value(domain, family.initial.kappa, q, trace[k + 1], as_span(chain->positions_at(times[k + 1])));
      re[s * T + k] = (m - m0).real();
      im[s * T + k] = (m - m0).imag();
    }
    alive[s] = 1;
  });

  DriftArm arm;
  for (char a : alive) (a ? arm.survivors : arm.dead)++;
  if (2 * arm.dead > family.seeds) {
    throw Error(ErrorCode::InsufficientSurvivors,
                std::to_string(arm.dead) + " of " + std::to_string(family.seeds) + " seeds lost");
  }
  for (std::size_t k = 0; k < T; ++k) {
    std::vector<double> r, i;
    r.reserve(arm.survivors);
    i.reserve(arm.survivors);
    for (std::size_t s = 0; s < family.seeds; ++s) {
      if (!alive[s]) continue;
      r.push_back(re[s * T + k]);
      i.push_back(im[s * T + k]);
    }
    DriftRow row;
    row.t = t_grid[k];
    row.re = mean_stderr(r);
    row.im = mean_stderr(i);
    row.z_score = std::max(standardized(row.re.mean, row.re.stderr_), standardized(row.im.mean, row.im.stderr_));
    arm.rows.push_back(row);
  }
  return arm;
}

DriftReport martingale_drift_test(const ChainFamily& family, Complex z, std::span<const double> t_grid) {
  DriftReport report;
  report.z = z;
  report.main = run_drift_arm(family, z, t_grid);
  report.main_driftless = std::all_of(report.main.rows.begin(), report.main.rows.end(),
                                      [](const DriftRow& r) { return r.z_score <= kDriftTolerance; });
  if (family.initial.size() >= 2) {
    ChainFamily control = family;
    control.interaction = Interaction::Free;
    report.control = run_drift_arm(control, z, t_grid);
    report.control_detected = !report.control->rows.empty() && report.control->rows.back().z_score > kControlThreshold;
  }
  return report;
}

FunctionalTerms functional_terms(const LoewnerChain& chain, const QuadratureNodes& nodes, std::span<const MapEval> maps,
                                 double t, double q) {
  const auto& x = chain.positions_at(t);
  double pairing = 0.0;
  for (std::size_t n = 0; n < maps.size(); ++n) {
    pairing += nodes.weighted_values[n] *
               martingale_value(chain.domain(), chain.kappa(), q, maps[n], as_span(x)).imag();
  }
  FunctionalTerms out;
  out.pairing = 2.0 / std::sqrt(chain.kappa()) * pairing;
  out.energy = energy_from_maps(chain.domain(), nodes, maps);
  return out;
}

Complex theorem_functional(const LoewnerChain& chain, const TestFunction& f, double theta, double t, double mesh) {
  if (!f.support_inside(chain.domain())) {
    throw Error(ErrorCode::DomainViolation, "test function support must lie inside the domain");
  }
  const QuadratureNodes nodes = quadrature_nodes(f, mesh);
  std::vector<MapEval> maps;
  maps.reserve(nodes.points.size());
  for (Complex z : nodes.points) maps.push_back(evolve(chain, z, t));
  const FunctionalTerms terms = functional_terms(chain, nodes, maps, t, default_q(chain.kappa()));
  return std::exp(Complex(-0.5 * theta * theta * terms.energy, theta * terms.pairing));
}

bool CouplingReport::pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

namespace {

struct SeedOutcome {
  bool ok = false;
  std::size_t stop_index = 0;         // last checkpoint with every node alive
  std::vector<double> pairing, energy;  // per checkpoint
  bool probes_alive = false;
  std::vector<Complex> drift;         // per probe per checkpoint (excluding t = 0)
  std::vector<double> realized, predicted;  // per probe pair
};

struct ArmResult {
  std::vector<SeedOutcome> seeds;
  std::size_t stopped = 0;
  std::size_t dead = 0;
};

void validate(const CouplingConfig& c) {
  c.initial.validate();
  const Domain domain = c.initial.domain == GasDomain::RealLine ? Domain::H : Domain::O;
  if (!c.f.support_inside(domain)) {
    throw Error(ErrorCode::DomainViolation, "test function support must lie inside the domain");
  }
  if (c.thetas.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one theta");
  if (!(c.horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
  if (c.checkpoints == 0 || c.n_steps == 0 || c.n_steps % c.checkpoints != 0) {
    throw Error(ErrorCode::InvalidArgument, "checkpoints must divide n_steps");
  }
  if (c.seeds < 2) throw Error(ErrorCode::InvalidArgument, "need at least two seeds");
  if (!(c.mesh > 0.0) || !(c.swallow_eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "mesh and swallow_eps must be positive");
}

ArmResult run_arm(const CouplingConfig& c, Interaction interaction, const QuadratureNodes& nodes,
                  std::span<const Complex> probes, std::span<const std::pair<int, int>> pairs) {
  const Domain domain = c.initial.domain == GasDomain::RealLine ? Domain::H : Domain::O;
  const double kappa = c.initial.kappa;
  const double q = default_q(kappa);
  const double dt = c.horizon / static_cast<double>(c.n_steps);
  std::vector<double> checkpoint_times, grid_times;
  for (std::size_t k = 0; k <= c.checkpoints; ++k) {
    checkpoint_times.push_back(c.horizon * static_cast<double>(k) / static_cast<double>(c.checkpoints));
  }
  for (std::size_t k = 0; k <= c.n_steps; ++k) grid_times.push_back(dt * static_cast<double>(k));
  const std::size_t stride = c.n_steps / c.checkpoints;

  ChainFamily family;
  family.initial = c.initial;
  family.horizon = c.horizon;
  family.n_steps = c.n_steps;
  family.interaction = interaction;
  EvolveOptions evolve_options;
  evolve_options.swallow_eps = c.swallow_eps;

  ArmResult arm;
  arm.seeds.resize(c.seeds);
  parallel_for(c.seeds, [&](std::size_t s) {
    SeedOutcome& out = arm.seeds[s];
    std::optional<LoewnerChain> chain;
    try {
      chain.emplace(family.chain_for(c.first_seed + s));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::StepFailure) return;
      throw;
    }
    const std::size_t C = checkpoint_times.size();
    std::vector<std::vector<MapEval>> by_time(C);
    for (auto& v : by_time) v.reserve(nodes.points.size());
    for (Complex z : nodes.points) {
      const auto trace = evolve_trace(*chain, z, checkpoint_times, evolve_options);
      for (std::size_t k = 0; k < C; ++k) by_time[k].push_back(trace[k]);
    }
    out.stop_index = 0;
    while (out.stop_index + 1 < C &&
           std::all_of(by_time[out.stop_index + 1].begin(), by_time[out.stop_index + 1].end(),
                       [](const MapEval& m) { return m.alive; })) {
      ++out.stop_index;
    }
    out.pairing.resize(C);
    out.energy.resize(C);
    for (std::size_t k = 0; k <= out.stop_index; ++k) {
      const FunctionalTerms terms = functional_terms(*chain, nodes, by_time[k], checkpoint_times[k], q);
      out.pairing[k] = terms.pairing;
      out.energy[k] = terms.energy;
    }
    for (std::size_t k = out.stop_index + 1; k < C; ++k) {
      out.pairing[k] = out.pairing[out.stop_index];
      out.energy[k] = out.energy[out.stop_index];
    }

    // Probe tables on the full macro grid.
    std::vector<std::vector<MapEval>> probe_traces;
    out.probes_alive = true;
    for (Complex p : probes) {
      probe_traces.push_back(evolve_trace(*chain, p, grid_times, evolve_options));
      out.probes_alive = out.probes_alive && probe_traces.back().back().alive;
    }
    if (out.probes_alive) {
      std::vector<std::vector<Complex>> m(probes.size(), std::vector<Complex>(grid_times.size()));
      for (std::size_t p = 0; p < probes.size(); ++p) {
        for (std::size_t k = 0; k < grid_times.size(); ++k) {
          m[p][k] = martingale_value(domain, kappa, q, probe_traces[p][k],
                                     as_span(chain->positions_at(grid_times[k])));
        }
        for (std::size_t k = 1; k < C; ++k) out.drift.push_back(m[p][k * stride] - m[p][0]);
      }
      for (const auto& [a, b] : pairs) {
        double qv = 0.0;
        for (std::size_t k = 1; k < grid_times.size(); ++k) {
          qv += (m[a][k] - m[a][k - 1]).imag() * (m[b][k] - m[b][k - 1]).imag();
        }
        out.realized.push_back(qv);
        double dg;
        if (a == b) {
          dg = green_regular_part(domain, probe_traces[a].back()) - green_regular_part(domain, initial_map(probes[a]));
        } else {
          dg = green_between(domain, probe_traces[a].back(), probe_traces[b].back()) - green(domain, probes[a], probes[b]);
        }
        out.predicted.push_back(-kappa / 4.0 * dg);
      }
    }
    out.ok = true;
  });
  for (const auto& o : arm.seeds) {
    if (!o.ok) {
      ++arm.dead;
      continue;
    }
    if (o.stop_index + 1 < c.checkpoints + 1) ++arm.stopped;
    if (!o.probes_alive) ++arm.dead;
  }
  return arm;
}

std::vector<FunctionalSeries> functional_series(const CouplingConfig& c, const ArmResult& arm, double& max_dev) {
  std::vector<FunctionalSeries> out;
  max_dev = 0.0;
  const SeedOutcome* reference = nullptr;
  for (const auto& o : arm.seeds) {
    if (o.ok) {
      reference = &o;
      break;
    }
  }
  if (reference == nullptr) throw Error(ErrorCode::InsufficientSurvivors, "no seed completed");
  const std::size_t C = c.checkpoints + 1;
  for (double theta : c.thetas) {
    FunctionalSeries series;
    series.theta = theta;
    series.initial =
        std::exp(Complex(-0.5 * theta * theta * reference->energy[0], theta * reference->pairing[0]));
    for (std::size_t k = 0; k < C; ++k) {
      std::vector<double> re, im;
      for (const auto& o : arm.seeds) {
        if (!o.ok) continue;
        const Complex v = std::exp(Complex(-0.5 * theta * theta * o.energy[k], theta * o.pairing[k]));
        re.push_back(v.real());
        im.push_back(v.imag());
      }
      series.times.push_back(c.horizon * static_cast<double>(k) / static_cast<double>(c.checkpoints));
      series.re.push_back(mean_stderr(re));
      series.im.push_back(mean_stderr(im));
      const double dev = std::max(standardized(series.re.back().mean - series.initial.real(), series.re.back().stderr_),
                                  standardized(series.im.back().mean - series.initial.imag(), series.im.back().stderr_));
      series.max_deviation = std::max(series.max_deviation, dev);
    }
    max_dev = std::max(max_dev, series.max_deviation);
    out.push_back(std::move(series));
  }
  return out;
}

std::string complex_label(Complex z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%.6g,%.6g)", z.real(), z.imag());
  return buf;
}

}  // namespace

CouplingReport verify_coupling(const CouplingConfig& config) {
  validate(config);
  const Domain domain = config.initial.domain == GasDomain::RealLine ? Domain::H : Domain::O;
  const QuadratureNodes nodes = quadrature_nodes(config.f, config.mesh);
  const GasState start = sorted(config.initial);
  for (Complex z : nodes.points) {
    if (pole_distance(domain, z, as_span(start.positions), 0.0) <= config.swallow_eps) {
      throw Error(ErrorCode::InvalidArgument, "supp f touches a starting point");
    }
  }
  const std::vector<Complex> probes{config.f.center, config.f.center + 0.5 * config.f.radius};
  const std::vector<std::pair<int, int>> pairs{{0, 0}, {0, 1}, {1, 1}};

  CouplingReport report;
  report.config = config;
  const ArmResult main = run_arm(config, config.interaction, nodes, probes, pairs);
  report.stopped_seed_count = main.stopped;
  report.dead_seed_count = main.dead;

  double max_dev = 0.0;
  report.functional = functional_series(config, main, max_dev);
  std::size_t used = 0;
  for (const auto& o : main.seeds) used += o.ok ? 1 : 0;
  report.verdicts.push_back({"functional_constancy", max_dev <= kFunctionalTolerance, kFunctionalTolerance, used, max_dev});

  // Drift and covariation tables over seeds whose probes survived.
  std::vector<const SeedOutcome*> kept;
  for (const auto& o : main.seeds) {
    if (o.ok && o.probes_alive) kept.push_back(&o);
  }
  if (2 * (config.seeds - kept.size()) > config.seeds) {
    throw Error(ErrorCode::InsufficientSurvivors, "more than half of the seeds lost their probes");
  }
  const std::size_t per_probe = config.checkpoints;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    DriftEntry entry;
    entry.z = probes[p];
    entry.arm.survivors = kept.size();
    entry.arm.dead = config.seeds - kept.size();
    double worst = 0.0;
    for (std::size_t k = 0; k < per_probe; ++k) {
      std::vector<double> re, im;
      for (const auto* o : kept) {
        re.push_back(o->drift[p * per_probe + k].real());
        im.push_back(o->drift[p * per_probe + k].imag());
      }
      DriftRow row;
      row.t = config.horizon * static_cast<double>(k + 1) / static_cast<double>(config.checkpoints);
      row.re = mean_stderr(re);
      row.im = mean_stderr(im);
      row.z_score = std::max(standardized(row.re.mean, row.re.stderr_), standardized(row.im.mean, row.im.stderr_));
      worst = std::max(worst, row.z_score);
      entry.arm.rows.push_back(row);
    }
    report.verdicts.push_back({"martingale_drift" + complex_label(probes[p]), worst <= kDriftTolerance,
                               kDriftTolerance, kept.size(), worst});
    report.drift_table.push_back(std::move(entry));
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    std::vector<double> realized, predicted;
    for (const auto* o : kept) {
      realized.push_back(o->realized[i]);
      predicted.push_back(o->predicted[i]);
    }
    QvRow row;
    row.z = probes[pairs[i].first];
    row.w = probes[pairs[i].second];
    row.realized = mean_stderr(realized);
    row.predicted = mean_stderr(predicted);
    row.relative_error = std::abs(row.realized.mean - row.predicted.mean) / std::abs(row.predicted.mean);
    report.verdicts.push_back({"qv_identity" + complex_label(row.z) + complex_label(row.w),
                               row.relative_error <= kQvTolerance, kQvTolerance, kept.size(), row.relative_error});
    report.qv_table.push_back(row);
  }

  if (config.control_arm) {
    const ArmResult control = run_arm(config, Interaction::Free, nodes, {}, {});
    double control_dev = 0.0;
    report.control_functional = functional_series(config, control, control_dev);
    std::size_t control_used = 0;
    for (const auto& o : control.seeds) control_used += o.ok ? 1 : 0;
    report.verdicts.push_back({"control_violation_detected", control_dev > kFunctionalTolerance,
                               kFunctionalTolerance, control_used, control_dev, false});
  }
  return report;
}

bool SampledCouplingReport::pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

SampledCouplingReport sampled_coupling(const SampledCouplingConfig& config) {
  config.initial.validate();
  const Domain domain = config.initial.domain == GasDomain::RealLine ? Domain::H : Domain::O;
  if (!config.f.support_inside(domain)) {
    throw Error(ErrorCode::DomainViolation, "test function support must lie inside the domain");
  }
  if (2.0 * config.f.radius / config.field_mesh < 16.0) {
    throw Error(ErrorCode::MeshTooCoarse, "need 16 lattice nodes per support diameter");
  }
  const std::array<TestFunction, 1> supports{config.f};
  SampledCouplingReport report;
  report.box = truncation_box(domain, supports, config.box_scale);
  const QuadratureNodes nodes = quadrature_nodes(config.f, config.quad_mesh);
  std::vector<MapEval> start;
  for (Complex z : nodes.points) start.push_back(initial_map(z));
  const LatticeFunctional f0 = pushforward_functional(report.box, config.field_mesh, nodes, start);

  ChainFamily family;
  family.initial = config.initial;
  family.horizon = config.horizon;
  family.n_steps = config.n_steps;
  const double q = default_q(config.initial.kappa);

  std::vector<double> s0(config.seeds), sT(config.seeds), pT(config.seeds), eT(config.seeds);
  std::vector<char> ok(config.seeds, 0);
  double y0 = 0.0, e0 = 0.0;
  {
    const LoewnerChain chain = family.chain_for(config.first_seed);
    const FunctionalTerms terms = functional_terms(chain, nodes, start, 0.0, q);
    y0 = terms.pairing;
    e0 = terms.energy;
  }
  parallel_for(config.seeds, [&](std::size_t s) {
    const std::uint64_t seed = config.first_seed + s;
    const LoewnerChain chain = family.chain_for(seed);
    std::vector<MapEval> maps;
    maps.reserve(nodes.points.size());
    for (Complex z : nodes.points) maps.push_back(evolve(chain, z, config.horizon));
    if (!std::all_of(maps.begin(), maps.end(), [](const MapEval& m) { return m.alive; })) return;
    const FunctionalTerms terms = functional_terms(chain, nodes, maps, config.horizon, q);
    const std::array<LatticeFunctional, 2> functionals{
        f0, pushforward_functional(report.box, config.field_mesh, nodes, maps)};
    const auto pairings = sample_pairings(report.box, config.field_mesh, seed, functionals);
    s0[s] = pairings[0] + y0;
    sT[s] = pairings[1] + terms.pairing;
    pT[s] = pairings[1];
    eT[s] = terms.energy;
    ok[s] = 1;
  });
  auto keep = [&](const std::vector<double>& v) {
    std::vector<double> out;
    for (std::size_t s = 0; s < v.size(); ++s) {
      if (ok[s]) out.push_back(v[s]);
    }
    return out;
  };
  const auto k0 = keep(s0), kT = keep(sT), kp = keep(pT), ke = keep(eT);
  if (2 * k0.size() < config.seeds) throw Error(ErrorCode::InsufficientSurvivors, "too many swallowed supports");
  report.initial = mean_stderr(k0);
  report.final_ = mean_stderr(kT);
  report.initial_variance = sample_variance(k0);
  report.final_variance = sample_variance(kT);
  report.pushforward_variance = sample_variance(kp);
  report.mean_energy = mean_stderr(ke).mean;
  report.energy0 = e0;

  const double var_err = std::abs(report.final_variance / report.initial_variance - 1.0);
  const double mean_err = std::abs(report.final_.mean - report.initial.mean) / std::sqrt(report.initial_variance);
  const double push_err = std::abs(report.pushforward_variance / report.mean_energy - 1.0);
  report.verdicts.push_back({"sampled_variance", var_err <= kSmokeTolerance, kSmokeTolerance, k0.size(), var_err});
  report.verdicts.push_back({"sampled_mean", mean_err <= kSmokeTolerance, kSmokeTolerance, k0.size(), mean_err});
  report.verdicts.push_back(
      {"pushforward_variance", push_err <= kPushforwardTolerance, kPushforwardTolerance, k0.size(), push_err});
  return report;
}

}  // namespace lsle
