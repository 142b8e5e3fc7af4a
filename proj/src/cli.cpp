#include "lsle/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "lsle/coupling.hpp"
#include "lsle/error.hpp"
#include "lsle/gff.hpp"
#include "lsle/loewner.hpp"
#include "lsle/loggas.hpp"
#include "lsle/parallel.hpp"
#include "lsle/rmt_oracle.hpp"

namespace lsle::cli {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// Reads typed values out of a params object, remembering which keys were
// consumed so that anything left over can be rejected by name.
class Params {
 public:
  explicit Params(const Json& j) : j_(j) {
    if (!j_.is_object()) throw UsageError("params", "must be a JSON object");
  }

  double number(const std::string& key, double fallback) {
    const Json* v = take(key);
    if (v == nullptr) return echo(key, fallback);
    if (!v->is_number()) throw UsageError(key, "must be a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) throw UsageError(key, "must be finite");
    return echo(key, d);
  }

  double positive(const std::string& key, double fallback) {
    const double d = number(key, fallback);
    if (!(d > 0.0)) throw UsageError(key, "must be positive, got " + format_double(d));
    return d;
  }

  double nonnegative(const std::string& key, double fallback) {
    const double d = number(key, fallback);
    if (!(d >= 0.0)) throw UsageError(key, "must be nonnegative, got " + format_double(d));
    return d;
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback, std::int64_t min) {
    const Json* v = take(key);
    std::int64_t n = fallback;
    if (v != nullptr) {
      if (!v->is_number_integer()) throw UsageError(key, "must be an integer");
      n = v->get<std::int64_t>();
    }
    if (n < min) throw UsageError(key, "must be at least " + std::to_string(min));
    resolved_[key] = n;
    return n;
  }

  bool boolean(const std::string& key, bool fallback) {
    const Json* v = take(key);
    bool b = fallback;
    if (v != nullptr) {
      if (!v->is_boolean()) throw UsageError(key, "must be true or false");
      b = v->get<bool>();
    }
    resolved_[key] = b;
    return b;
  }

  std::string choice(const std::string& key, const std::string& fallback, const std::vector<std::string>& options) {
    const Json* v = take(key);
    std::string s = fallback;
    if (v != nullptr) {
      if (!v->is_string()) throw UsageError(key, "must be a string");
      s = v->get<std::string>();
    }
    if (std::find(options.begin(), options.end(), s) == options.end()) {
      std::string list;
      for (const auto& o : options) list += (list.empty() ? "" : ", ") + o;
      throw UsageError(key, "must be one of " + list + ", got '" + s + "'");
    }
    resolved_[key] = s;
    return s;
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
    const Json* v = take(key);
    if (v != nullptr) {
      if (!v->is_array()) throw UsageError(key, "must be an array of numbers");
      fallback.clear();
      for (const auto& e : *v) {
        if (!e.is_number() || !std::isfinite(e.get<double>())) throw UsageError(key, "must be an array of numbers");
        fallback.push_back(e.get<double>());
      }
    }
    resolved_[key] = fallback;
    return fallback;
  }

  Complex point(const std::string& key, Complex fallback) {
    const auto v = numbers(key, {fallback.real(), fallback.imag()});
    if (v.size() != 2) throw UsageError(key, "must be [re, im]");
    return {v[0], v[1]};
  }

  Params nested(const std::string& key) {
    const Json* v = take(key);
    static const Json empty = Json::object();
    Params p(v == nullptr ? empty : *v);
    p.parent_key_ = key;
    return p;
  }

  void adopt(const std::string& key, Params& child) { resolved_[key] = child.resolved_; }

  // Rejects keys that no reader asked for.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) {
        throw UsageError(parent_key_.empty() ? it.key() : parent_key_ + "." + it.key(), "unknown parameter");
      }
    }
  }

  const Json& resolved() const { return resolved_; }

 private:
  const Json* take(const std::string& key) {
    used_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }
  double echo(const std::string& key, double v) {
    resolved_[key] = v;
    return v;
  }

  const Json& j_;
  std::set<std::string> used_;
  Json resolved_ = Json::object();
  std::string parent_key_;
};

struct GasParams {
  GasState initial;
  Interaction interaction = Interaction::LogGas;
  double horizon = 0.1;
  std::size_t n_steps = 100;
};

GasParams read_gas(Params& p, double horizon, std::int64_t n_steps) {
  GasParams g;
  const std::string domain = p.choice("domain", "line", {"line", "half-line"});
  g.initial.domain = domain == "line" ? GasDomain::RealLine : GasDomain::HalfLine;
  const std::vector<double> x =
      p.numbers("positions", {g.initial.domain == GasDomain::RealLine ? 0.0 : 1.0});
  if (x.empty()) throw UsageError("positions", "need at least one particle");
  g.initial.positions = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  g.initial.kappa = p.positive("kappa", 4.0);
  g.initial.nu = p.nonnegative("nu", 0.0);
  g.interaction = p.choice("interaction", "log-gas", {"log-gas", "free"}) == "free" ? Interaction::Free
                                                                                  : Interaction::LogGas;
  g.horizon = p.positive("horizon", horizon);
  g.n_steps = static_cast<std::size_t>(p.integer("n_steps", n_steps, 1));
  try {
    g.initial = sorted(g.initial);
    g.initial.validate();
    if (!g.initial.in_chamber(kCollisionTolerance)) {
      throw UsageError("positions", "particles closer than the collision tolerance");
    }
  } catch (const Error& e) {
    throw UsageError("positions", e.what());
  }
  return g;
}

Domain domain_of(const GasParams& g) { return g.initial.domain == GasDomain::RealLine ? Domain::H : Domain::O; }

TestFunction read_test_function(Params& p, Domain domain) {
  Params f = p.nested("f");
  TestFunction out;
  out.center = f.point("center", domain == Domain::H ? Complex(0, 3) : Complex(1.5, 1.5));
  out.radius = f.positive("radius", 0.5);
  out.amplitude = f.number("amplitude", 10.0);
  f.finish();
  p.adopt("f", f);
  if (!out.support_inside(domain)) throw UsageError("f", "support must lie inside the open domain");
  return out;
}

Complex read_probe(Params& p, const std::string& key, Domain domain, Complex fallback) {
  const Complex z = p.point(key, fallback);
  if (!in_domain(domain, z)) throw UsageError(key, "must lie in the open domain");
  return z;
}

Json point_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json verdict_json(const Verdict& v) {
  Json j;
  j["name"] = v.name;
  j["pass"] = v.pass;
  j["statistic"] = v.statistic;
  j["tolerance"] = v.tolerance;
  j["bound"] = v.upper_bound ? "upper" : "lower";
  j["samples"] = v.samples;
  return j;
}

Json mean_json(const MeanStderr& m) { return {{"mean", m.mean}, {"stderr", m.stderr_}, {"count", m.count}}; }

// One campaign's output, before it is written.
struct Artifacts {
  std::string csv;
  Json report = Json::object();
  std::vector<Verdict> verdicts;
};

struct Campaign {
  Json resolved;
  std::function<Artifacts()> execute;
};

using Builder = Campaign (*)(Params&, std::uint64_t);

Campaign gas_campaign(Params& p, std::uint64_t seed) {
  const GasParams g = read_gas(p, 0.1, 100);
  return {p.resolved(), [g, seed] {
            SimulateOptions options;
            options.interaction = g.interaction;
            const GasPath path = simulate_gas(g.initial, g.horizon, g.n_steps, seed, options);
            Artifacts a;
            std::ostringstream csv;
            csv << "t";
            for (Eigen::Index i = 0; i < path.particles(); ++i) csv << ",x" << i + 1;
            csv << "\n";
            for (const auto& s : path.states) {
              csv << format_double(s.time);
              for (Eigen::Index i = 0; i < s.size(); ++i) csv << "," << format_double(s.positions[i]);
              csv << "\n";
            }
            a.csv = csv.str();
            a.report["domain"] = g.initial.domain == GasDomain::RealLine ? "line" : "half-line";
            a.report["kappa"] = g.initial.kappa;
            a.report["nu"] = g.initial.nu;
            a.report["seed"] = seed;
            a.report["n_steps"] = g.n_steps;
            a.report["horizon"] = g.horizon;
            a.report["substeps"] = path.substep_log;
            a.report["reflections"] = path.reflection_log;
            a.report["outside_tested_regime"] = g.initial.outside_tested_regime();
            return a;
          }};
}

Campaign oracle_campaign(Params& p, std::uint64_t seed) {
  OracleConfig c;
  c.ensemble = p.choice("ensemble", "hermitian", {"hermitian", "wishart"}) == "hermitian" ? Ensemble::HermitianBM
                                                                                         : Ensemble::WishartSingular;
  c.n = static_cast<int>(p.integer("n", 2, 1));
  c.nu = static_cast<int>(p.integer("nu", 0, 0));
  c.kappa = p.positive("kappa", 4.0);
  c.t_gas = p.positive("t_gas", 0.25);
  c.seeds = static_cast<std::size_t>(p.integer("seeds", 10000, 1));
  c.n_steps = static_cast<std::size_t>(p.integer("n_steps", 400, 1));
  c.start_gap = p.positive("start_gap", 1e-4);
  c.first_seed = seed;
  return {p.resolved(), [c, seed] {
            constexpr double kTolerance = 0.05;
            const OracleComparison r = compare_with_matrix_model(c);
            Artifacts a;
            std::vector<double> values = r.matrix_values;
            std::sort(values.begin(), values.end());
            std::ostringstream csv;
            csv << "value\n";
            for (double v : values) csv << format_double(v) << "\n";
            a.csv = csv.str();
            a.report["ensemble"] = c.ensemble == Ensemble::HermitianBM ? "hermitian" : "wishart";
            a.report["N"] = c.n;
            a.report["nu"] = c.nu;
            a.report["t_gas"] = c.t_gas;
            a.report["kappa"] = c.kappa;
            a.report["seed"] = seed;
            a.report["ks"] = r.ks;
            a.report["failed_seeds"] = r.failed_seeds;
            a.report["substeps"] = r.substeps;
            a.verdicts.push_back({"ks_distance", r.ks < kTolerance, kTolerance, c.seeds, r.ks});
            return a;
          }};
}

Campaign trace_campaign(Params& p, std::uint64_t seed) {
  const GasParams g = read_gas(p, 0.1, 100);
  const Domain domain = domain_of(g);
  const double delta = domain == Domain::O ? p.nonnegative("delta", g.initial.nu) : p.nonnegative("delta", 0.0);
  if (domain == Domain::H && delta != 0.0) throw UsageError("delta", "only the quadrant chain takes delta");
  const Complex z = read_probe(p, "z", domain, domain == Domain::H ? Complex(0, 1) : Complex(1, 1));
  EvolveOptions opts;
  opts.swallow_eps = p.positive("swallow_eps", kDefaultSwallowEps);
  return {p.resolved(), [g, delta, z, opts, seed, domain] {
            SimulateOptions options;
            options.interaction = g.interaction;
            const LoewnerChain chain(simulate_gas(g.initial, g.horizon, g.n_steps, seed, options), delta);
            std::vector<double> times;
            for (const auto& s : chain.driving().states) times.push_back(s.time);
            const auto trace = evolve_trace(chain, z, times, opts);
            Artifacts a;
            std::ostringstream csv;
            csv << "t,re_g,im_g,re_gp,im_gp,alive\n";
            for (const auto& m : trace) {
              csv << format_double(m.t) << "," << format_double(m.g.real()) << "," << format_double(m.g.imag()) << ","
                  << format_double(m.gprime.real()) << "," << format_double(m.gprime.imag()) << ","
                  << (m.alive ? 1 : 0) << "\n";
            }
            a.csv = csv.str();
            a.report["domain"] = domain == Domain::H ? "H" : "O";
            a.report["z"] = point_json(z);
            a.report["seed"] = seed;
            a.report["alive"] = trace.back().alive;
            if (!trace.back().alive) a.report["swallow_time"] = trace.back().swallow_time;
            return a;
          }};
}

Campaign field_campaign(Params& p, std::uint64_t seed) {
  const auto b = p.numbers("box", {-2.0, 2.0, 0.0, 4.0});
  if (b.size() != 4) throw UsageError("box", "must be [x0, x1, y0, y1]");
  const Rect box{b[0], b[1], b[2], b[3]};
  if (box.empty()) throw UsageError("box", "must have positive width and height");
  const double mesh = p.positive("mesh", 1.0 / 16.0);
  const double diameter = p.nonnegative("support_diameter", 0.0);
  try {
    lattice_shape(box, mesh);
  } catch (const Error& e) {
    throw UsageError("mesh", e.what());
  }
  return {p.resolved(), [box, mesh, diameter, seed] {
            const FieldSample field = sample_field(box, mesh, seed, diameter);
            Artifacts a;
            std::ostringstream csv;
            csv << "ix,iy,value\n";
            for (int ix = 1; ix <= field.nx; ++ix) {
              for (int iy = 1; iy <= field.ny; ++iy) {
                csv << ix << "," << iy << "," << format_double(field.at(ix, iy)) << "\n";
              }
            }
            a.csv = csv.str();
            a.report["box"] = Json::array({box.x0, box.x1, box.y0, box.y1});
            a.report["mesh"] = mesh;
            a.report["seed"] = seed;
            return a;
          }};
}

Json series_json(const std::vector<FunctionalSeries>& all) {
  Json out = Json::array();
  for (const auto& s : all) {
    Json j;
    j["theta"] = s.theta;
    j["initial"] = point_json(s.initial);
    j["max_deviation"] = s.max_deviation;
    Json rows = Json::array();
    for (std::size_t k = 0; k < s.times.size(); ++k) {
      rows.push_back({{"t", s.times[k]},
                      {"mean_re", s.re[k].mean},
                      {"stderr_re", s.re[k].stderr_},
                      {"mean_im", s.im[k].mean},
                      {"stderr_im", s.im[k].stderr_}});
    }
    j["series"] = rows;
    out.push_back(j);
  }
  return out;
}

Campaign coupling_campaign(Params& p, std::uint64_t seed) {
  const GasParams g = read_gas(p, 0.05, 100);
  CouplingConfig c;
  c.initial = g.initial;
  c.interaction = g.interaction;
  c.horizon = g.horizon;
  c.n_steps = g.n_steps;
  c.f = read_test_function(p, domain_of(g));
  c.thetas = p.numbers("thetas", c.thetas);
  if (c.thetas.empty()) throw UsageError("thetas", "need at least one theta");
  c.checkpoints = static_cast<std::size_t>(p.integer("checkpoints", 5, 1));
  if (c.n_steps % c.checkpoints != 0) throw UsageError("checkpoints", "must divide n_steps");
  c.seeds = static_cast<std::size_t>(p.integer("seeds", 10000, 2));
  c.mesh = p.positive("mesh", 0.1);
  c.swallow_eps = p.positive("swallow_eps", kDefaultSwallowEps);
  c.control_arm = p.boolean("control_arm", false);
  c.first_seed = seed;
  return {p.resolved(), [c, seed] {
            const CouplingReport r = verify_coupling(c);
            Artifacts a;
            std::ostringstream csv;
            csv << "arm,theta,t,mean_re,stderr_re,mean_im,stderr_im\n";
            auto rows = [&](const char* arm, const std::vector<FunctionalSeries>& all) {
              for (const auto& s : all) {
                for (std::size_t k = 0; k < s.times.size(); ++k) {
                  csv << arm << "," << format_double(s.theta) << "," << format_double(s.times[k]) << ","
                      << format_double(s.re[k].mean) << "," << format_double(s.re[k].stderr_) << ","
                      << format_double(s.im[k].mean) << "," << format_double(s.im[k].stderr_) << "\n";
                }
              }
            };
            rows("main", r.functional);
            rows("control", r.control_functional);
            a.csv = csv.str();
            a.report["seed"] = seed;
            a.report["functional"] = series_json(r.functional);
            if (c.control_arm) a.report["control_functional"] = series_json(r.control_functional);
            Json qv = Json::array();
            for (const auto& q : r.qv_table) {
              qv.push_back({{"z", point_json(q.z)},
                            {"w", point_json(q.w)},
                            {"realized", mean_json(q.realized)},
                            {"predicted", mean_json(q.predicted)},
                            {"relative_error", q.relative_error}});
            }
            a.report["qv_table"] = qv;
            Json drift = Json::array();
            for (const auto& d : r.drift_table) {
              Json rows_json = Json::array();
              for (const auto& row : d.arm.rows) {
                rows_json.push_back({{"t", row.t},
                                     {"mean_re", row.re.mean},
                                     {"stderr_re", row.re.stderr_},
                                     {"mean_im", row.im.mean},
                                     {"stderr_im", row.im.stderr_},
                                     {"z_score", row.z_score}});
              }
              drift.push_back({{"z", point_json(d.z)},
                               {"survivors", d.arm.survivors},
                               {"dead", d.arm.dead},
                               {"rows", rows_json}});
            }
            a.report["drift_table"] = drift;
            a.report["stopped_seed_count"] = r.stopped_seed_count;
            a.report["dead_seed_count"] = r.dead_seed_count;
            a.verdicts = r.verdicts;
            return a;
          }};
}

Campaign qv_campaign(Params& p, std::uint64_t seed) {
  const GasParams g = read_gas(p, 0.05, 100);
  const Domain domain = domain_of(g);
  const Complex fallback = domain == Domain::H ? Complex(0, 2) : Complex(1.5, 1.5);
  const Complex z = read_probe(p, "z", domain, fallback);
  const Complex w = read_probe(p, "w", domain, z);
  const std::size_t seeds = static_cast<std::size_t>(p.integer("seeds", 1000, 1));
  const double swallow_eps = p.positive("swallow_eps", kDefaultSwallowEps);
  return {p.resolved(), [g, z, w, seeds, seed, swallow_eps] {
            ChainFamily family;
            family.initial = g.initial;
            family.horizon = g.horizon;
            family.n_steps = g.n_steps;
            family.interaction = g.interaction;
            family.swallow_eps = swallow_eps;
            std::vector<double> realized(seeds), predicted(seeds);
            std::vector<char> ok(seeds, 0);
            parallel_for(seeds, [&](std::size_t s) {
              try {
                const LoewnerChain chain = family.chain_for(seed + s);
                EvolveOptions opts;
                opts.swallow_eps = swallow_eps;
                if (!evolve(chain, z, g.horizon, opts).alive || !evolve(chain, w, g.horizon, opts).alive) return;
                const QvCheck q = qv_identity_check(chain, z, w, g.horizon);
                realized[s] = q.realized_qv;
                predicted[s] = q.minus_quarter_kappa_dG;
                ok[s] = 1;
              } catch (const Error& e) {
                if (e.code() != ErrorCode::StepFailure && e.code() != ErrorCode::SwallowedProbe) throw;
              }
            });
            Artifacts a;
            std::ostringstream csv;
            csv << "seed,realized_qv,minus_quarter_kappa_dG\n";
            std::vector<double> r, q;
            for (std::size_t s = 0; s < seeds; ++s) {
              if (!ok[s]) continue;
              r.push_back(realized[s]);
              q.push_back(predicted[s]);
              csv << seed + s << "," << format_double(realized[s]) << "," << format_double(predicted[s]) << "\n";
            }
            if (2 * r.size() < seeds) throw Error(ErrorCode::InsufficientSurvivors, "more than half of the seeds lost");
            a.csv = csv.str();
            const MeanStderr mr = mean_stderr(r), mq = mean_stderr(q);
            const double rel = std::abs(mr.mean - mq.mean) / std::abs(mq.mean);
            a.report["seed"] = seed;
            a.report["z"] = point_json(z);
            a.report["w"] = point_json(w);
            a.report["realized"] = mean_json(mr);
            a.report["predicted"] = mean_json(mq);
            a.report["relative_error"] = rel;
            a.report["dead_seed_count"] = seeds - r.size();
            a.verdicts.push_back({"qv_identity", rel <= kQvTolerance, kQvTolerance, r.size(), rel});
            return a;
          }};
}

const std::map<std::string, Builder>& builders() {
  static const std::map<std::string, Builder> m{
      {"gas", gas_campaign},           {"oracle-compare", oracle_campaign},     {"loewner-trace", trace_campaign},
      {"field-sample", field_campaign}, {"verify-coupling", coupling_campaign}, {"qv-check", qv_campaign}};
  return m;
}

Campaign build(const RunConfig& config) {
  const auto it = builders().find(config.command);
  if (it == builders().end()) throw UsageError("command", "unknown command '" + config.command + "'");
  Params p(config.params);
  Campaign c = it->second(p, config.seed);
  p.finish();
  return c;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("out_dir", "cannot write " + path.string());
  f << text;
  if (!f) throw UsageError("out_dir", "failed writing " + path.string());
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"gas",          "oracle-compare",  "loewner-trace",
                                          "field-sample", "verify-coupling", "qv-check"};
  return c;
}

RunConfig parse_run_config(const Json& document) {
  if (!document.is_object()) throw UsageError("", "config must be a JSON object");
  RunConfig c;
  for (auto it = document.begin(); it != document.end(); ++it) {
    const std::string& key = it.key();
    const Json& v = it.value();
    if (key == "command") {
      if (!v.is_string()) throw UsageError("command", "must be a string");
      c.command = v.get<std::string>();
    } else if (key == "seed") {
      if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw UsageError("seed", "must be a nonnegative integer");
      }
      c.seed = v.get<std::uint64_t>();
    } else if (key == "params") {
      c.params = v;
    } else if (key == "out_dir") {
      if (!v.is_string()) throw UsageError("out_dir", "must be a string");
      c.out_dir = v.get<std::string>();
    } else {
      throw UsageError(key, "unknown key");
    }
  }
  if (c.command.empty()) throw UsageError("command", "missing");
  build(c);  // validates params
  return c;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"coupling-h1",   "coupling-h2",   "coupling-o1",
                                              "qv-h2",         "oracle-dyson2", "oracle-dyson3",
                                              "oracle-wishart0", "oracle-wishart1", "field-box"};
  return names;
}

RunConfig preset(const std::string& name) {
  Json d;
  if (name == "coupling-h1") {
    d = {{"command", "verify-coupling"},
         {"seed", 1},
         {"params", {{"positions", {0.0}}, {"f", {{"center", {0.0, 3.0}}, {"radius", 0.5}, {"amplitude", 10.0}}}}}};
  } else if (name == "coupling-h2") {
    d = {{"command", "verify-coupling"},
         {"seed", 1},
         {"params",
          {{"positions", {-1.0, 1.0}},
           {"f", {{"center", {1.0, 2.0}}, {"radius", 0.5}, {"amplitude", 10.0}}},
           {"control_arm", true}}}};
  } else if (name == "coupling-o1") {
    d = {{"command", "verify-coupling"},
         {"seed", 1},
         {"params",
          {{"domain", "half-line"},
           {"positions", {1.0}},
           {"nu", 1.0},
           {"f", {{"center", {1.5, 1.5}}, {"radius", 0.5}, {"amplitude", 10.0}}}}}};
  } else if (name == "qv-h2") {
    d = {{"command", "qv-check"},
         {"seed", 1},
         {"params", {{"positions", {-1.0, 1.0}}, {"z", {0.0, 2.0}}, {"w", {0.0, 2.0}}, {"seeds", 1000}}}};
  } else if (name == "oracle-dyson2" || name == "oracle-dyson3") {
    d = {{"command", "oracle-compare"},
         {"seed", 1},
         {"params", {{"ensemble", "hermitian"}, {"n", name == "oracle-dyson2" ? 2 : 3}}}};
  } else if (name == "oracle-wishart0" || name == "oracle-wishart1") {
    d = {{"command", "oracle-compare"},
         {"seed", 1},
         {"params", {{"ensemble", "wishart"}, {"n", 2}, {"nu", name == "oracle-wishart0" ? 0 : 1}}}};
  } else if (name == "field-box") {
    d = {{"command", "field-sample"},
         {"seed", 1},
         {"params", {{"box", {-2.0, 2.0, 0.0, 4.0}}, {"mesh", 0.0625}, {"support_diameter", 1.0}}}};
  } else {
    throw UsageError("preset", "unknown preset '" + name + "'");
  }
  return parse_run_config(d);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const Campaign campaign = build(config);
    const auto start = std::chrono::steady_clock::now();
    Artifacts a = campaign.execute();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    bool pass = true;
    Json verdicts = Json::array();
    for (const auto& v : a.verdicts) {
      pass = pass && v.pass;
      verdicts.push_back(verdict_json(v));
    }
    Json report;
    report["command"] = config.command;
    report["seed"] = config.seed;
    report["params"] = campaign.resolved;
    report["pass"] = pass;
    report["verdicts"] = verdicts;
    for (auto it = a.report.begin(); it != a.report.end(); ++it) {
      if (!report.contains(it.key())) report[it.key()] = it.value();
    }

    fs::create_directories(config.out_dir);
    const std::string stem = config.command + "-" + std::to_string(config.seed);
    write_file(config.out_dir / (stem + ".csv"), a.csv);
    write_file(config.out_dir / (stem + ".json"), report.dump(2) + "\n");
    write_file(config.out_dir / (stem + ".timing.json"), Json{{"runtime_seconds", seconds}}.dump() + "\n");

    for (const auto& v : a.verdicts) {
      out << (v.pass ? "PASS " : "FAIL ") << v.name << " statistic=" << format_double(v.statistic)
          << (v.upper_bound ? " <= " : " > ") << format_double(v.tolerance) << " n=" << v.samples << "\n";
    }
    out << stem << ": " << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? kExitPass : kExitVerdictFailure;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

Json summarize(const std::vector<fs::path>& reports) {
  Json out;
  out["campaigns"] = reports.size();
  std::size_t pass = 0, fail = 0;
  double runtime = 0.0;
  Json worst = nullptr;
  double worst_ratio = -1.0;
  std::vector<std::string> bad;
  for (const auto& path : reports) {
    std::ifstream f(path);
    Json j;
    try {
      if (!f) throw std::runtime_error("cannot open");
      j = Json::parse(f);
      if (!j.contains("verdicts") || !j["verdicts"].is_array()) throw std::runtime_error("no verdicts array");
    } catch (const std::exception&) {
      bad.push_back(path.string());
      continue;
    }
    for (const auto& v : j["verdicts"]) {
      (v.value("pass", false) ? pass : fail)++;
      const double tol = v.value("tolerance", 0.0);
      if (v.value("bound", "upper") == "upper" && tol > 0.0) {
        const double ratio = v.value("statistic", 0.0) / tol;
        if (ratio > worst_ratio) {
          worst_ratio = ratio;
          worst = {{"report", path.filename().string()},
                   {"verdict", v.value("name", "")},
                   {"statistic", v.value("statistic", 0.0)},
                   {"tolerance", tol},
                   {"ratio", ratio}};
        }
      }
    }
    fs::path timing = path;
    timing.replace_extension(".timing.json");
    std::ifstream t(timing);
    if (t) {
      try {
        runtime += Json::parse(t).value("runtime_seconds", 0.0);
      } catch (const std::exception&) {
      }
    }
  }
  if (!bad.empty()) {
    std::string list;
    for (const auto& b : bad) list += (list.empty() ? "" : ", ") + b;
    throw UsageError("reports", "unreadable report(s): " + list);
  }
  out["pass"] = pass;
  out["fail"] = fail;
  if (!reports.empty()) {
    out["worst"] = worst;
    out["runtime_seconds"] = runtime;
  }
  return out;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Log-gas driven multiple SLE: simulation and verification campaigns"};
  std::string config_path, preset_name, out_dir;
  std::size_t threads = 0;
  bool list = false;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--preset", preset_name, "named campaign preset");
  app.add_option("--threads", threads, "worker threads (default: available parallelism)");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--list-presets", list, "print preset names and exit");
  auto* sum = app.add_subcommand("summarize", "aggregate report JSON files");
  std::vector<std::string> report_paths;
  sum->add_option("reports", report_paths, "report files");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitPass : kExitUsage;
  }
  if (threads > 0) set_worker_threads(threads);

  try {
    if (list) {
      for (const auto& p : preset_names()) out << p << "\n";
      return kExitPass;
    }
    if (sum->parsed()) {
      std::vector<fs::path> paths(report_paths.begin(), report_paths.end());
      out << summarize(paths).dump(2) << "\n";
      return kExitPass;
    }
    if (config_path.empty() == preset_name.empty()) {
      throw UsageError("", "give exactly one of --config or --preset");
    }
    RunConfig config;
    if (!preset_name.empty()) {
      config = preset(preset_name);
    } else {
      std::ifstream f(config_path);
      if (!f) throw UsageError("config", "cannot open " + config_path);
      Json doc;
      try {
        doc = Json::parse(f);
      } catch (const Json::parse_error& e) {
        throw UsageError("config", std::string("invalid JSON: ") + e.what());
      }
      config = parse_run_config(doc);
    }
    if (const char* env = std::getenv("LOGGAS_SLE_SEED")) {
      char* end = nullptr;
      const unsigned long long s = std::strtoull(env, &end, 10);
      if (end == env || *end != '\0') throw UsageError("LOGGAS_SLE_SEED", "must be a nonnegative integer");
      config.seed = s;
    }
    if (!out_dir.empty()) config.out_dir = out_dir;
    return run(config, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace lsle::cli
