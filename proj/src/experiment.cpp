#include "randcurve/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "randcurve/flow.hpp"
#include "randcurve/silt.hpp"

namespace randcurve {

namespace {

const char* kExperiments[] = {"hit",  "type-rate", "silt",        "cond-silt",
                              "transform", "flow",      "wasserstein", "intermittency"};

bool known_experiment(const std::string& name) {
  for (const char* e : kExperiments)
    if (name == e) return true;
  return false;
}

Vec json_vec(const nlohmann::json& j) {
  Vec v;
  for (const auto& x : j) v.push_back(x.get<double>());
  return v;
}

std::vector<Vec> json_vecs(const nlohmann::json& j) {
  std::vector<Vec> out;
  for (const auto& row : j) out.push_back(json_vec(row));
  return out;
}

struct ParamReader {
  const nlohmann::json& params;
  std::vector<std::string>& issues;

  bool has(const char* key) const { return params.contains(key); }

  template <typename T>
  T get(const char* key, const T& fallback) const {
    if (!params.contains(key)) return fallback;
    return params.at(key).get<T>();
  }

  const nlohmann::json* require(const char* key) const {
    if (!params.contains(key)) {
      issues.push_back(std::string("missing required param \"") + key + "\"");
      return nullptr;
    }
    return &params.at(key);
  }

  double require_positive(const char* key) const {
    const nlohmann::json* j = require(key);
    if (!j) return 0.0;
    const double v = j->get<double>();
    if (!(v > 0.0)) issues.push_back(std::string("param \"") + key + "\" must be positive");
    return v;
  }
};

void validate_hit(ParamReader& r) {
  const auto* dim = r.require("dim");
  if (dim && dim->get<int>() < 3)
    r.issues.push_back("hit requires dimension d >= 3 (transient regime)");
  r.require_positive("radius");
  const auto* start = r.require("start");
  const auto* targets = r.require("targets");
  if (dim && start && static_cast<int>(start->size()) != dim->get<int>())
    r.issues.push_back("start dimension does not match dim");
  if (targets) {
    if (targets->empty()) r.issues.push_back("targets must be nonempty");
    for (const auto& z : *targets)
      if (dim && static_cast<int>(z.size()) != dim->get<int>())
        r.issues.push_back("target dimension does not match dim");
  }
}

void validate_type_rate(ParamReader& r) {
  const auto* dim = r.require("dim");
  r.require_positive("radius");
  const auto* centers = r.require("centers");
  const auto* alpha = r.require("alpha");
  const auto* n_list = r.require("n_list");
  if (centers && dim)
    for (const auto& z : *centers)
      if (static_cast<int>(z.size()) != dim->get<int>())
        r.issues.push_back("center dimension does not match dim");
  if (alpha && centers)
    for (const auto& a : *alpha) {
      const std::size_t idx = a.get<std::size_t>();
      if (idx < 1 || idx > centers->size()) r.issues.push_back("alpha index out of range");
    }
  if (n_list && alpha)
    for (const auto& n : *n_list)
      if (n.get<std::size_t>() < alpha->size())
        r.issues.push_back("n_list entries must reach the alpha pattern length");
}

void validate_silt(ParamReader& r) {
  const auto* dim = r.require("dim");
  if (dim && (dim->get<int>() < 1 || dim->get<int>() > 3))
    r.issues.push_back("silt requires 1 <= dim <= 3 (density regime)");
  r.require_positive("bandwidth");
  const auto* off = r.require("offset");
  if (dim && off && static_cast<int>(off->size()) != dim->get<int>())
    r.issues.push_back("offset dimension does not match dim");
}

PinSet pins_from_json(const nlohmann::json& j) {
  PinSet pins;
  for (const auto& p : j) {
    pins.times.push_back(p.at("time").get<double>());
    pins.values.push_back(json_vec(p.at("value")));
  }
  return pins;
}

void validate_cond_silt(ParamReader& r) {
  const auto* u = r.require("u");
  if (u && u->get<double>() == 0.0) r.issues.push_back("param \"u\" must be nonzero");
  r.require_positive("bandwidth");
  const auto* pins = r.require("pins");
  if (pins) {
    try {
      validate_pins(pins_from_json(*pins), 2);
    } catch (const std::exception& e) {
      r.issues.push_back(std::string("pins: ") + e.what());
    }
  }
}

void validate_transform(ParamReader& r) {
  const auto* k = r.require("k");
  if (k && k->get<int>() < 2) r.issues.push_back("transform requires k >= 2");
  r.require_positive("bandwidth");
  const auto* jac = r.require("jacobian");
  const auto* x = r.require("x");
  if (jac) {
    const std::size_t d = jac->size();
    for (const auto& row : *jac)
      if (row.size() != d) r.issues.push_back("jacobian must be square");
    if (x && x->size() != d) r.issues.push_back("x dimension does not match jacobian");
  }
}

void validate_flow(ParamReader& r) {
  if (r.has("start")) {
    const auto* start = r.require("start");
    if (start && start->size() != 2) r.issues.push_back("start must be a 2-vector");
    if (start && start->size() == 2 &&
        ((*start)[0].get<double>() == 0.0 || (*start)[1].get<double>() == 0.0))
      r.issues.push_back("start must not lie on an axis (repelling boundary)");
  } else {
    const std::string curve = r.get<std::string>("curve", "brownian");
    if (curve != "brownian" && curve != "weave")
      r.issues.push_back("curve must be \"brownian\" or \"weave\"");
  }
  const auto* times = r.require("times");
  if (times && times->empty()) r.issues.push_back("times must be nonempty");
  const double dt = r.get<double>("dt", 1e-3);
  if (!(dt > 0.0)) r.issues.push_back("param \"dt\" must be positive");
  const std::string coupling = r.get<std::string>("coupling", "global");
  if (coupling != "global" && coupling != "per-domain")
    r.issues.push_back("coupling must be \"global\" or \"per-domain\"");
  if (r.has("type_radius") || r.has("type_alpha")) {
    const double eps = r.get<double>("type_radius", 0.0);
    if (!(eps > 0.0)) r.issues.push_back("param \"type_radius\" must be positive");
    // quadrant attractors sit at distance 1 from the axes
    if (eps >= 1.0)
      r.issues.push_back("type balls overlap their domain boundaries (need radius < 1)");
    TypeSpec spec;
    const FieldSpec f = example_field_spec();
    for (const Vec2& z : f.attractors) spec.centers.push_back(to_vec(z));
    spec.radius = (eps > 0.0) ? eps : 0.1;
    if (r.has("type_alpha"))
      for (const auto& a : r.params.at("type_alpha")) spec.sequence.push_back(a.get<std::size_t>());
    else
      spec.sequence = {1};
    try {
      validate_type_spec(spec);
    } catch (const std::exception& e) {
      r.issues.push_back(std::string("type spec: ") + e.what());
    }
  }
}

EmpiricalMeasure measure_from_json(const nlohmann::json& j) {
  EmpiricalMeasure m;
  m.atoms = json_vecs(j.at("atoms"));
  if (j.contains("weights"))
    for (const auto& w : j.at("weights")) m.weights.push_back(w.get<double>());
  else
    m.weights.assign(m.atoms.size(), 1.0 / static_cast<double>(m.atoms.size()));
  return m;
}

void validate_wasserstein(ParamReader& r) {
  for (const char* key : {"mu", "nu"}) {
    const auto* j = r.require(key);
    if (!j) continue;
    try {
      validate_measure(measure_from_json(*j));
    } catch (const std::exception& e) {
      r.issues.push_back(std::string(key) + ": " + e.what());
    }
  }
}

void validate_intermittency(ParamReader& r) {
  r.require_positive("bandwidth");
  const auto* xs = r.require("x_list");
  if (xs) {
    if (xs->empty()) r.issues.push_back("x_list must be nonempty");
    double prev = 1e300;
    for (const auto& x : *xs) {
      const double v = x.get<double>();
      if (!(v > 0.0)) r.issues.push_back("x_list entries must be positive");
      if (!(v < prev)) r.issues.push_back("x_list must be strictly decreasing");
      prev = v;
    }
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.experiment = j.value("experiment", "");
  c.params = j.value("params", nlohmann::json::object());
  c.seed = j.value("seed", 0ull);
  c.replicas = j.value("replicas", 1ull);
  c.output = j.value("output", "report");
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return from_json(j);
}

std::vector<std::string> validate(const ExperimentConfig& config) {
  std::vector<std::string> issues;
  if (!known_experiment(config.experiment)) {
    issues.push_back("unknown experiment \"" + config.experiment + "\"");
    return issues;
  }
  if (config.replicas < 1) issues.push_back("replicas must be >= 1");
  ParamReader r{config.params, issues};
  if (config.experiment == "hit") validate_hit(r);
  else if (config.experiment == "type-rate") validate_type_rate(r);
  else if (config.experiment == "silt") validate_silt(r);
  else if (config.experiment == "cond-silt") validate_cond_silt(r);
  else if (config.experiment == "transform") validate_transform(r);
  else if (config.experiment == "flow") validate_flow(r);
  else if (config.experiment == "wasserstein") validate_wasserstein(r);
  else if (config.experiment == "intermittency") validate_intermittency(r);
  return issues;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Report::csv(const ExperimentConfig& config) const {
  std::ostringstream out;
  out << "experiment,seed,replicas";
  for (const std::string& c : columns) out << ',' << c;
  out << '\n';
  for (const auto& row : rows) {
    out << config.experiment << ',' << config.seed << ',' << config.replicas;
    for (const std::string& cell : row) out << ',' << cell;
    out << '\n';
  }
  return out.str();
}

void Report::write(const ExperimentConfig& config) const {
  {
    std::ofstream out(config.output + ".csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + config.output + ".csv");
    out << csv(config);
  }
  {
    std::ofstream out(config.output + ".meta.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + config.output + ".meta.json");
    out << metadata.dump(2) << '\n';
  }
}

namespace {

using Row = std::vector<std::string>;

Report run_hit(const ExperimentConfig& config) {
  const auto& p = config.params;
  HitChainQuery q;
  q.dim = p.at("dim").get<std::size_t>();
  q.start = json_vec(p.at("start"));
  q.radius = p.at("radius").get<double>();
  const std::vector<Vec> targets = json_vecs(p.at("targets"));
  const TimeGrid grid = TimeGrid::uniform(p.value("grid_steps", 1000));

  Report rep;
  rep.columns = {"n", "estimate", "std_error", "scale"};
  for (std::size_t n = 1; n <= targets.size(); ++n) {
    q.targets.assign(targets.begin(), targets.begin() + n);
    const Estimate e = mc_hit_chain(q, config.replicas, grid, RngStream(config.seed, 0));
    rep.rows.push_back(Row{std::to_string(n), format_double(e.value), format_double(e.std_error),
                           format_double(chain_asymptotic_scale(q))});
  }
  return rep;
}

Report run_type_rate(const ExperimentConfig& config) {
  const auto& p = config.params;
  const std::vector<Vec> centers = json_vecs(p.at("centers"));
  std::vector<std::size_t> alpha;
  for (const auto& a : p.at("alpha")) alpha.push_back(a.get<std::size_t>());
  std::vector<std::size_t> n_list;
  for (const auto& n : p.at("n_list")) n_list.push_back(n.get<std::size_t>());
  const auto rates = type_rate_sequence(centers, alpha, p.at("radius").get<double>(), n_list,
                                        p.at("dim").get<std::size_t>());
  Report rep;
  rep.columns = {"n", "rate"};
  for (const auto& [n, rate] : rates)
    rep.rows.push_back(Row{std::to_string(n), format_double(rate)});
  return rep;
}

Report run_silt(const ExperimentConfig& config) {
  const auto& p = config.params;
  const std::size_t dim = p.at("dim").get<std::size_t>();
  const double bw = p.at("bandwidth").get<double>();
  const Vec offset = json_vec(p.at("offset"));
  const TimeGrid grid = TimeGrid::uniform(p.value("grid_steps", 256));
  RngStream stream(config.seed, 0);
  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t r = 0; r < config.replicas; ++r) {
    const BrownianPath path = sample_path(dim, grid, stream.substream(r));
    const double v = silt_estimate(path, bw, offset).value;
    sum += v;
    sumsq += v * v;
  }
  const double n = static_cast<double>(config.replicas);
  const double mean = sum / n;
  const double se =
      (config.replicas > 1) ? std::sqrt(std::max(0.0, (sumsq - sum * sum / n) / (n - 1.0)) / n) : 0.0;
  Report rep;
  rep.columns = {"mean", "std_error"};
  rep.rows.push_back(Row{format_double(mean), format_double(se)});
  return rep;
}

Report run_cond_silt(const ExperimentConfig& config) {
  const auto& p = config.params;
  PinnedSiltQuery q;
  q.u = p.at("u").get<double>();
  q.pins = pins_from_json(p.at("pins"));
  const double resolution = p.value("resolution", 1e-8);
  const CondSiltQuadrature quad = cond_silt_quadrature(q, resolution);
  const PinnedSiltDerived der = pinned_derived(q);
  const double asym = cond_silt_asymptotic(std::fabs(q.u), der.v_star, der.s_star);
  Estimate mc;
  if (p.value("mc", true))
    mc = cond_silt_mc(q, p.at("bandwidth").get<double>(), config.replicas,
                      RngStream(config.seed, 0), p.value("grid_steps", 256));
  Report rep;
  rep.columns = {"quadrature", "log_quadrature", "asymptotic", "ratio",
                 "mc_value",   "mc_std_error",   "v_star",     "s_star"};
  rep.rows.push_back(Row{format_double(quad.value), format_double(quad.log_value),
                         format_double(asym), format_double(quad.value / asym),
                         format_double(mc.value), format_double(mc.std_error),
                         format_double(der.v_star), format_double(der.s_star)});
  return rep;
}

Report run_transform(const ExperimentConfig& config) {
  const auto& p = config.params;
  const std::vector<Vec> jac = json_vecs(p.at("jacobian"));
  const int k = p.at("k").get<int>();
  const Vec x = json_vec(p.at("x"));
  const double bw = p.at("bandwidth").get<double>();
  const std::size_t dim = x.size();
  const TimeGrid grid = TimeGrid::uniform(p.value("grid_steps", 256));
  RngStream stream(config.seed, 0);

  // paired estimates on common paths: direct silt on phi(w) = D w, and the
  // pushforward prediction from silt on w
  double sum_a = 0.0, sumsq_a = 0.0, sum_b = 0.0, sumsq_b = 0.0;
  for (std::uint64_t r = 0; r < config.replicas; ++r) {
    const BrownianPath path = sample_path(dim, grid, stream.substream(r));
    BrownianPath mapped = path;
    for (Vec& pt : mapped.points) {
      Vec y(dim, 0.0);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) y[i] += jac[i][j] * pt[j];
      pt = y;
    }
    const double a = silt_estimate(mapped, bw, x).value;
    const auto l2 = [&](const Vec& at) { return silt_estimate(path, bw, at); };
    const double b = transformed_silt_prediction(l2, jac, k, x).value;
    sum_a += a;
    sumsq_a += a * a;
    sum_b += b;
    sumsq_b += b * b;
  }
  const double n = static_cast<double>(config.replicas);
  const auto se = [&](double s, double s2) {
    return (config.replicas > 1) ? std::sqrt(std::max(0.0, (s2 - s * s / n) / (n - 1.0)) / n) : 0.0;
  };
  Report rep;
  rep.columns = {"direct", "direct_std_error", "predicted", "predicted_std_error"};
  rep.rows.push_back(Row{format_double(sum_a / n), format_double(se(sum_a, sumsq_a)),
                         format_double(sum_b / n), format_double(se(sum_b, sumsq_b))});
  return rep;
}

Report run_flow(const ExperimentConfig& config) {
  const auto& p = config.params;
  const bool oracle = p.value("oracle_weight", p.contains("start"));
  const FieldSpec field = example_field_spec(oracle);
  const DomainPartition partition = quadrant_partition();
  const MassCoupling coupling =
      (p.value("coupling", std::string("global")) == "per-domain") ? MassCoupling::PerDomain
                                                                   : MassCoupling::Global;
  std::vector<double> times;
  for (const auto& t : p.at("times")) times.push_back(t.get<double>());
  const double dt = p.value("dt", 1e-3);
  double T = 0.0;
  for (double t : times) T = std::max(T, t);

  Report rep;
  if (p.contains("start")) {
    // single-particle oracle run against the closed form
    const Vec s = json_vec(p.at("start"));
    ParticleSystem sys;
    sys.positions = {Vec2{s[0], s[1]}};
    sys.params = {1.0};
    const auto traj = evolve(sys, field, partition, T, dt, times, coupling);
    rep.columns = {"t", "x", "y", "exact_x", "exact_y"};
    for (const auto& snap : traj) {
      const Vec2 exact = cauchy_closed_form(Vec2{s[0], s[1]}, snap.time);
      rep.rows.push_back(Row{format_double(snap.time), format_double(snap.positions[0].x),
                             format_double(snap.positions[0].y), format_double(exact.x),
                             format_double(exact.y)});
    }
    return rep;
  }

  const std::string curve_kind = p.value("curve", std::string("brownian"));
  const std::size_t particles = p.value("particles", 200);
  const std::vector<Vec2> curve = (curve_kind == "weave")
                                      ? weave_curve()
                                      : brownian_curve(particles, RngStream(config.seed, 0));
  const ParticleSystem sys = particles_from_curve(curve);
  const auto traj = evolve(sys, field, partition, T, dt, times, coupling);
  const EmpiricalMeasure nu = limit_measure(measure_of(sys), partition, field.attractors);
  const auto rhos = rho_to_limit(traj, nu);

  const bool with_escape = p.contains("escape_delta");
  TypeSpec spec;
  if (with_escape) {
    for (const Vec2& z : field.attractors) spec.centers.push_back(to_vec(z));
    spec.radius = p.value("type_radius", 0.3);
    for (const auto& a : p.at("type_alpha")) spec.sequence.push_back(a.get<std::size_t>());
  }
  rep.columns = {"t", "rho"};
  if (with_escape) rep.columns.push_back("escape_mass");
  for (std::size_t i = 0; i < traj.size(); ++i) {
    Row row{format_double(rhos[i].first), format_double(rhos[i].second)};
    if (with_escape)
      row.push_back(format_double(
          visitation_escape_mass(traj[i], spec, p.at("escape_delta").get<double>(), 2)));
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

Report run_wasserstein(const ExperimentConfig& config) {
  const auto& p = config.params;
  const EmpiricalMeasure mu = measure_from_json(p.at("mu"));
  const EmpiricalMeasure nu = measure_from_json(p.at("nu"));
  const auto [value, plan] = rho(mu, nu);
  Report rep;
  rep.columns = {"value", "plan_arcs"};
  rep.rows.push_back(Row{format_double(value), std::to_string(plan.flows.size())});
  return rep;
}

Report run_intermittency(const ExperimentConfig& config) {
  const auto& p = config.params;
  std::vector<double> xs;
  for (const auto& x : p.at("x_list")) xs.push_back(x.get<double>());
  const auto series =
      intermittency_probe(xs, p.at("bandwidth").get<double>(), config.replicas,
                          RngStream(config.seed, 0), p.value("grid_steps", 256));
  Report rep;
  rep.columns = {"x", "mean", "std_error"};
  for (const auto& [x, e] : series)
    rep.rows.push_back(Row{format_double(x), format_double(e.value), format_double(e.std_error)});
  return rep;
}

}  // namespace

Report run(const ExperimentConfig& config) {
  const std::vector<std::string> issues = validate(config);
  if (!issues.empty()) {
    std::ostringstream msg;
    msg << "invalid config:";
    for (const std::string& s : issues) msg << "\n  - " << s;
    throw std::invalid_argument(msg.str());
  }
  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  if (config.experiment == "hit") rep = run_hit(config);
  else if (config.experiment == "type-rate") rep = run_type_rate(config);
  else if (config.experiment == "silt") rep = run_silt(config);
  else if (config.experiment == "cond-silt") rep = run_cond_silt(config);
  else if (config.experiment == "transform") rep = run_transform(config);
  else if (config.experiment == "flow") rep = run_flow(config);
  else if (config.experiment == "wasserstein") rep = run_wasserstein(config);
  else if (config.experiment == "intermittency") rep = run_intermittency(config);
  const auto t1 = std::chrono::steady_clock::now();

  rep.metadata = nlohmann::json{
      {"config", nlohmann::json{{"experiment", config.experiment},
                                {"params", config.params},
                                {"seed", config.seed},
                                {"replicas", config.replicas},
                                {"output", config.output}}},
      {"version", "0.1.0"},
      {"wall_time_s", std::chrono::duration<double>(t1 - t0).count()},
      {"rows", rep.rows.size()}};
  return rep;
}

}  // namespace randcurve
