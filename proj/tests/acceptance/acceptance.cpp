// Acceptance runner: one checkable criterion per case, each printing a single
// PASS/FAIL line (details inline). Exit status is the number of failures.
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "randcurve/experiment.hpp"
#include "randcurve/flow.hpp"
#include "randcurve/silt.hpp"
#include "randcurve/special.hpp"

using namespace randcurve;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Check {
  int id;
  const char* title;
  std::function<Outcome()> fn;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------- criterion 1
Outcome independence_of_split() {
  Outcome out;
  PinSet probe;
  probe.times = {0.3, 0.7};
  probe.values = {Vec{0.2}, Vec{-0.4}};

  double max_cross = 0.0;
  for (double t : {0.05, 0.15, 0.25, 0.3})
    for (double s : {0.35, 0.5, 0.65, 0.7})
      max_cross = std::max(max_cross, std::fabs(residual_covariance(t, s, probe)));
  if (max_cross > 1e-12) {
    out.pass = false;
    out.detail += " cross-covariance " + fmt(max_cross) + ";";
  }

  // pins drawn from the Brownian marginal; covariance of poly and residual
  const std::size_t reps = 100000;
  const std::size_t pairs = 20;
  const std::size_t ppu = 64;  // grid resolution per unit time
  // the grid is fixed by the pin times: pick random grid indices inside [0, s_n]
  std::size_t last_idx = 0;
  {
    PinSet shape;
    shape.times = {0.3, 0.7};
    shape.values = {Vec{0.0}, Vec{0.0}};
    const Decomposition d0 = decompose(1, shape, RngStream(2024, 98), ppu);
    while (d0.grid.times[last_idx] < 0.7) ++last_idx;
  }
  RngStream pick(2024, 99);
  std::vector<std::size_t> ti(pairs), si(pairs);
  for (std::size_t k = 0; k < pairs; ++k) {
    ti[k] = static_cast<std::size_t>(pick.uniform01() * last_idx);
    si[k] = static_cast<std::size_t>(pick.uniform01() * last_idx);
  }
  std::vector<double> sx(pairs, 0), sy(pairs, 0), sxy(pairs, 0), sxx(pairs, 0), syy(pairs, 0);
  RngStream stream(2024, 0);
  for (std::size_t r = 0; r < reps; ++r) {
    RngStream rs = stream.substream(r);
    PinSet pins;
    pins.times = {0.3, 0.7};
    const double v1 = std::sqrt(0.3) * rs.normal();
    const double v2 = v1 + std::sqrt(0.4) * rs.normal();
    pins.values = {Vec{v1}, Vec{v2}};
    const Decomposition d = decompose(1, pins, rs, ppu);
    for (std::size_t k = 0; k < pairs; ++k) {
      const double pv = d.poly[ti[k]][0];
      const double rv = d.residual[si[k]][0];
      sx[k] += pv;
      sy[k] += rv;
      sxy[k] += pv * rv;
      sxx[k] += pv * pv;
      syy[k] += rv * rv;
    }
  }
  int bad = 0;
  double worst_z = 0.0;
  for (std::size_t k = 0; k < pairs; ++k) {
    const double n = reps;
    const double cov = (sxy[k] - sx[k] * sy[k] / n) / (n - 1.0);
    const double vx = (sxx[k] - sx[k] * sx[k] / n) / (n - 1.0);
    const double vy = (syy[k] - sy[k] * sy[k] / n) / (n - 1.0);
    const double se = std::sqrt((vx * vy + cov * cov) / n);
    const double z = (se > 0.0) ? std::fabs(cov) / se : 0.0;
    worst_z = std::max(worst_z, z);
    if (z > 3.0) ++bad;
  }
  if (bad > 0) out.pass = false;
  out.detail += " worst |cov|/se = " + fmt(worst_z) + " over 20 pairs, 1e5 replicas";
  return out;
}

// ---------------------------------------------------------------- criterion 2
Outcome hit_scale_stability() {
  Outcome out;
  const TimeGrid grid = TimeGrid::uniform(1000);
  const std::uint64_t reps = 100000;
  double normalized[2][2];
  Estimate kept;
  for (int di = 0; di < 2; ++di) {
    const double d0 = (di == 0) ? 1.0 : 2.0;
    for (int ei = 0; ei < 2; ++ei) {
      const double eps = (ei == 0) ? 0.1 : 0.2;
      HitChainQuery q;
      q.dim = 3;
      q.start = Vec{d0, 0.0, 0.0};
      q.targets = {Vec{0.0, 0.0, 0.0}};
      q.radius = eps;
      const Estimate e = mc_hit_chain(q, reps, grid, RngStream(2025, 0));
      normalized[di][ei] = e.value * d0 / eps;
      if (di == 0 && ei == 1) kept = e;
    }
    const double mean = 0.5 * (normalized[di][0] + normalized[di][1]);
    for (int ei = 0; ei < 2; ++ei)
      if (std::fabs(normalized[di][ei] - mean) > 0.30 * mean) out.pass = false;
  }
  out.detail = " normalized (dist 1): " + fmt(normalized[0][0]) + ", " + fmt(normalized[0][1]) +
               "; (dist 2): " + fmt(normalized[1][0]) + ", " + fmt(normalized[1][1]) + ";";

  HitChainQuery chain;
  chain.dim = 3;
  chain.start = Vec{1.0, 0.0, 0.0};
  chain.targets = {Vec{0.0, 0.0, 0.0}};
  chain.radius = 0.2;
  const Estimate one = mc_hit_chain(chain, reps, grid, RngStream(2025, 0));
  chain.targets.push_back(Vec{0.0, 1.0, 0.0});
  const Estimate two = mc_hit_chain(chain, reps, grid, RngStream(2025, 0));
  const double slack = 2.0 * std::hypot(one.std_error, two.std_error);
  if (!(two.value <= one.value + slack)) out.pass = false;
  out.detail += " chain n=1: " + fmt(one.value) + " >= n=2: " + fmt(two.value) + " - 2se";
  return out;
}

// ---------------------------------------------------------------- criterion 3
Outcome type_rate_limit() {
  Outcome out;
  const auto unit = type_rate_sequence({Vec{0.0}, Vec{1.0}}, {1, 2}, 0.1, {200}, 1);
  const double r1 = unit[0].second;
  if (!(std::fabs(r1 - (-0.5)) <= 0.05 * 0.5)) out.pass = false;
  const double c = 2.0;
  const auto scaled = type_rate_sequence({Vec{0.0}, Vec{c}}, {1, 2}, 0.1, {200}, 1);
  const double r2 = scaled[0].second;
  if (!(std::fabs(r2 - (-c * c / 2.0)) <= 0.05 * c * c / 2.0)) out.pass = false;
  out.detail = " rate(200) = " + fmt(r1) + " (target -0.5), scaled " + fmt(r2) + " (target -2)";
  return out;
}

// ---------------------------------------------------------------- criterion 4
Outcome conditional_asymptotic_ratio() {
  Outcome out;
  std::vector<double> ratios;
  for (double vs : {10.0, 20.0, 30.0}) {
    PinnedSiltQuery q;
    q.u = 1.0;
    q.pins.times = {1.0};
    q.pins.values = {Vec{vs / M_SQRT2, -vs / M_SQRT2}};
    const CondSiltQuadrature quad = cond_silt_quadrature(q, 1e-9);
    const double asym = cond_silt_asymptotic(1.0, vs, 1.0);
    ratios.push_back(std::exp(quad.log_value - std::log(asym)));
  }
  const bool band = ratios[2] >= 0.8 && ratios[2] <= 1.25;
  bool trend = true;
  for (std::size_t i = 0; i + 1 < ratios.size(); ++i)
    trend = trend && (std::fabs(ratios[i + 1] - 1.0) < std::fabs(ratios[i] - 1.0));
  out.pass = band && trend;
  out.detail = " ratios at v*=10,20,30: " + fmt(ratios[0]) + ", " + fmt(ratios[1]) + ", " +
               fmt(ratios[2]) + "; band[0.8,1.25] at 30: " + (band ? "yes" : "no") +
               ", monotone toward 1: " + (trend ? "yes" : "no");
  return out;
}

// ---------------------------------------------------------------- criterion 5
Outcome conditional_mc_consistency() {
  Outcome out;
  PinnedSiltQuery q;
  q.u = 0.5;
  q.pins.times = {1.0};
  q.pins.values = {Vec{3.0 / M_SQRT2, -3.0 / M_SQRT2}};
  const CondSiltQuadrature quad = cond_silt_quadrature(q, 1e-9);
  const Estimate mc = cond_silt_mc(q, 0.02, 10000, RngStream(2026, 0), 256);
  const double gap = std::fabs(mc.value - quad.value);
  out.pass = gap <= 3.0 * mc.std_error;
  out.detail = " quadrature " + fmt(quad.value) + ", mc " + fmt(mc.value) + " +- " +
               fmt(mc.std_error) + ", |gap|/se = " + fmt(gap / mc.std_error);
  return out;
}

// ---------------------------------------------------------------- criterion 6
Outcome transform_consistency() {
  Outcome out;
  const double eps = 0.05, x = 0.4;
  const TimeGrid grid = TimeGrid::uniform(256);
  RngStream stream(2027, 0);
  const std::size_t reps = 10000;
  double sa = 0, sa2 = 0, sb = 0, sb2 = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    const BrownianPath w = sample_path(1, grid, stream.substream(r));
    BrownianPath two = w;
    for (Vec& pt : two.points) pt[0] *= 2.0;
    const double a = silt_estimate(two, eps, Vec{x}).value;
    const auto l2 = [&](const Vec& at) { return silt_estimate(w, eps, at); };
    const double b = transformed_silt_prediction(l2, {Vec{2.0}}, 2, Vec{x}).value;
    sa += a;
    sa2 += a * a;
    sb += b;
    sb2 += b * b;
  }
  const double n = reps;
  const double sea = std::sqrt(((sa2 - sa * sa / n) / (n - 1.0)) / n);
  const double seb = std::sqrt(((sb2 - sb * sb / n) / (n - 1.0)) / n);
  const double gap = std::fabs(sa / n - sb / n);
  const double comb = std::hypot(sea, seb);
  out.pass = gap <= 3.0 * comb;
  out.detail = " direct " + fmt(sa / n) + ", predicted " + fmt(sb / n) + ", |gap|/se = " +
               fmt(gap / comb);
  return out;
}

// ---------------------------------------------------------------- criterion 7
Outcome transport_exactness() {
  Outcome out;
  RngStream stream(2028, 0);
  const auto random_equal = [&](std::size_t n, RngStream& s) {
    std::vector<Vec> atoms;
    for (std::size_t i = 0; i < n; ++i) atoms.push_back(Vec{2.0 * s.normal(), 2.0 * s.normal()});
    return EmpiricalMeasure::equal_weight(std::move(atoms));
  };
  double worst_enum = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    RngStream rs = stream.substream(trial);
    const std::size_t n = 2 + static_cast<std::size_t>(rs.uniform01() * 5.0);
    const EmpiricalMeasure mu = random_equal(n, rs);
    const EmpiricalMeasure nu = random_equal(n, rs);
    // permutation enumeration
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    double best = 1e300;
    do {
      double c = 0.0;
      for (std::size_t i = 0; i < n; ++i) c += bounded_cost(mu.atoms[i], nu.atoms[perm[i]]);
      best = std::min(best, c / static_cast<double>(n));
    } while (std::next_permutation(perm.begin(), perm.end()));
    worst_enum = std::max(worst_enum, std::fabs(rho_value(mu, nu) - best));
  }
  if (worst_enum > 1e-12) out.pass = false;

  double worst_sym = 0.0, worst_tri = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    RngStream rs = stream.substream(1000 + trial);
    const EmpiricalMeasure a = random_equal(3 + trial % 6, rs);
    const EmpiricalMeasure b = random_equal(2 + trial % 7, rs);
    const EmpiricalMeasure c = random_equal(4 + trial % 5, rs);
    const double ab = rho_value(a, b);
    worst_sym = std::max(worst_sym, std::fabs(ab - rho_value(b, a)));
    worst_tri = std::max(worst_tri, rho_value(a, c) - (ab + rho_value(b, c)));
  }
  if (worst_sym > 1e-12 || worst_tri > 1e-12) out.pass = false;
  out.detail = " |flow-enum| <= " + fmt(worst_enum) + ", asymmetry <= " + fmt(worst_sym) +
               ", triangle slack <= " + fmt(worst_tri);
  return out;
}

// ---------------------------------------------------------------- criterion 8
Outcome flow_convergence() {
  Outcome out;
  const FieldSpec oracle = example_field_spec(true);
  const DomainPartition part = quadrant_partition();

  const std::vector<Vec2> curve = brownian_curve(200, RngStream(2029, 0));
  const ParticleSystem sys = particles_from_curve(curve);
  const std::vector<double> times = {1.0, 2.0, 5.0, 10.0, 25.0};
  const auto traj = evolve(sys, oracle, part, 25.0, 1e-3, times, MassCoupling::Global);
  const EmpiricalMeasure nu = limit_measure(measure_of(sys), part, oracle.attractors);
  const auto rhos = rho_to_limit(traj, nu);
  out.detail = " rho:";
  bool mono = true;
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    out.detail += " " + fmt(rhos[i].second);
    if (i > 0 && rhos[i].second > rhos[i - 1].second + 1e-15) mono = false;
  }
  const bool tail_small = rhos.back().second <= 1e-3;
  if (!mono || !tail_small) out.pass = false;

  RngStream starts(2029, 7);
  double max_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Vec2 u{3.0 * starts.normal(), 3.0 * starts.normal()};
    if (std::fabs(u.x) < 1e-3) u.x = 0.2;
    if (std::fabs(u.y) < 1e-3) u.y = -0.3;
    ParticleSystem one;
    one.positions = {u};
    one.params = {1.0};
    const std::vector<double> ot = {1.0, 2.5, 5.0, 7.5, 10.0};
    const auto tr = evolve(one, oracle, part, 10.0, 1e-3, ot, MassCoupling::Global);
    for (const auto& snap : tr) {
      const Vec2 exact = cauchy_closed_form(u, snap.time);
      max_err = std::max({max_err, std::fabs(snap.positions[0].x - exact.x),
                          std::fabs(snap.positions[0].y - exact.y)});
    }
  }
  if (max_err > 1e-6) out.pass = false;
  out.detail += "; integrator max err " + fmt(max_err);
  return out;
}

// ---------------------------------------------------------------- criterion 9
Outcome type_probability_limit() {
  Outcome out;
  TypeSpec spec;
  const FieldSpec field = example_field_spec();
  for (const Vec2& z : field.attractors) spec.centers.push_back(to_vec(z));
  spec.radius = 0.8;
  spec.sequence = {1, 2};

  FlowConfig config;
  config.field = field;
  config.partition = quadrant_partition();
  config.coupling = MassCoupling::Global;
  config.particles = 200;
  config.dt = 2e-3;

  const std::vector<double> times = {0.0, 2.5, 5.0, 7.5, 10.0};
  const auto series = type_prob_over_time(spec, config, times, 1000, RngStream(2030, 0));
  double run_max = 0.0, run_max_se = 0.0;
  out.detail = " R:";
  for (const auto& [t, e] : series) {
    out.detail += " " + fmt(e.value);
    if (e.value > run_max) {
      run_max = e.value;
      run_max_se = e.std_error;
    }
  }
  const Estimate& last = series.back().second;
  const double slack = 2.0 * std::hypot(run_max_se, last.std_error);
  if (!(last.value >= run_max - slack)) out.pass = false;
  if (!(last.value > 0.0 && last.value < 1.0)) out.pass = false;
  return out;
}

// --------------------------------------------------------------- criterion 10
Outcome escape_mass_decay() {
  Outcome out;
  TypeSpec spec;
  const FieldSpec field = example_field_spec();
  for (const Vec2& z : field.attractors) spec.centers.push_back(to_vec(z));
  spec.radius = 0.3;
  spec.sequence = {1, 1, 2, 2, 1};

  const ParticleSystem sys = particles_from_curve(weave_curve());
  {
    std::vector<Vec> pts;
    for (const Vec2& p : sys.positions) pts.push_back(to_vec(p));
    if (!match_type_points(pts, sys.params, spec).matched) {
      out.pass = false;
      out.detail += " initial curve does not carry the type;";
    }
  }
  const std::vector<double> times = {0.0, 5.0, 15.0};
  const auto traj =
      evolve(sys, field, quadrant_partition(), 15.0, 1e-3, times, MassCoupling::Global);
  std::vector<double> esc;
  for (const auto& snap : traj) esc.push_back(visitation_escape_mass(snap, spec, 0.2, 2));
  out.detail += " escape mass: " + fmt(esc[0]) + ", " + fmt(esc[1]) + ", " + fmt(esc[2]);
  if (!(esc[0] > esc[1] && esc[1] > esc[2])) out.pass = false;
  if (!(esc[2] <= 0.01)) out.pass = false;
  return out;
}

// --------------------------------------------------------------- criterion 11
Outcome intermittency_growth() {
  Outcome out;
  const auto series =
      intermittency_probe({0.5, 0.25, 0.1}, 0.05, 10000, RngStream(2031, 0), 256);
  out.detail = " means:";
  for (const auto& [x, e] : series) out.detail += " " + fmt(e.value);
  for (std::size_t i = 0; i + 1 < series.size(); ++i) {
    const double gap = series[i + 1].second.value - series[i].second.value;
    const double comb = std::hypot(series[i].second.std_error, series[i + 1].second.std_error);
    if (!(gap > 2.0 * comb)) out.pass = false;
  }
  return out;
}

// --------------------------------------------------------------- criterion 12
Outcome reproducibility() {
  Outcome out;
  const std::vector<nlohmann::json> configs = {
      {{"experiment", "wasserstein"},
       {"seed", 11},
       {"params",
        nlohmann::json{{"mu", nlohmann::json{{"atoms", {{0.0, 0.0}, {1.0, 0.0}}}}},
                       {"nu", nlohmann::json{{"atoms", {{0.0, 0.0}}}}}}}},
      {{"experiment", "hit"},
       {"seed", 12},
       {"replicas", 500},
       {"params", nlohmann::json{{"dim", 3},
                                 {"start", {0.0, 0.0, 0.0}},
                                 {"targets", {{1.0, 0.0, 0.0}}},
                                 {"radius", 0.2},
                                 {"grid_steps", 200}}}},
      {{"experiment", "type-rate"},
       {"seed", 13},
       {"params", nlohmann::json{{"dim", 1},
                                 {"centers", {{0.0}, {1.0}}},
                                 {"alpha", {1, 2}},
                                 {"radius", 0.1},
                                 {"n_list", {50, 100}}}}},
      {{"experiment", "silt"},
       {"seed", 14},
       {"replicas", 50},
       {"params",
        nlohmann::json{{"dim", 1}, {"bandwidth", 0.05}, {"offset", {0.3}}, {"grid_steps", 128}}}},
      {{"experiment", "cond-silt"},
       {"seed", 15},
       {"replicas", 100},
       {"params",
        nlohmann::json{
            {"u", 0.5},
            {"pins", nlohmann::json::array(
                         {nlohmann::json{{"time", 1.0}, {"value", {2.0, -2.0}}}})},
            {"bandwidth", 0.05},
            {"grid_steps", 128}}}},
      {{"experiment", "transform"},
       {"seed", 16},
       {"replicas", 50},
       {"params", nlohmann::json{{"jacobian", {{2.0}}},
                                 {"k", 2},
                                 {"x", {0.4}},
                                 {"bandwidth", 0.05},
                                 {"grid_steps", 128}}}},
      {{"experiment", "flow"},
       {"seed", 17},
       {"params",
        nlohmann::json{{"curve", "weave"}, {"times", {0.0, 1.0}}, {"dt", 1e-2}}}},
      {{"experiment", "intermittency"},
       {"seed", 18},
       {"replicas", 50},
       {"params",
        nlohmann::json{{"x_list", {0.5, 0.25}}, {"bandwidth", 0.05}, {"grid_steps", 64}}}},
  };
  for (const auto& j : configs) {
    const ExperimentConfig config = ExperimentConfig::from_json(j);
    const std::string a = run(config).csv(config);
    const std::string b = run(config).csv(config);
    if (a != b) {
      out.pass = false;
      out.detail += " mismatch in " + config.experiment + ";";
    }
  }
  if (out.pass) out.detail = " byte-identical CSV across reruns of all eight experiments";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);

  const std::vector<Check> checks = {
      {1, "pinned split independence (exact zeros and sampled covariance)", independence_of_split},
      {2, "hit-chain scale stability across radius and distance", hit_scale_stability},
      {3, "type-probability rate approaches -|dZ|^2/2", type_rate_limit},
      {4, "conditional SILT quadrature against the closed-form tail", conditional_asymptotic_ratio},
      {5, "conditional SILT Monte Carlo against quadrature", conditional_mc_consistency},
      {6, "pushforward prediction against direct SILT on the mapped path", transform_consistency},
      {7, "transport distance exactness, symmetry and triangle inequality", transport_exactness},
      {8, "flow convergence to the attractor measure and integrator accuracy", flow_convergence},
      {9, "type probability approaches its supremum", type_probability_limit},
      {10, "pair-difference mass concentrates on the type differences", escape_mass_decay},
      {11, "SILT mean grows as the offset shrinks", intermittency_growth},
      {12, "byte-identical reruns", reproducibility},
  };

  int failures = 0;
  for (const Check& c : checks) {
    if (only != 0 && c.id != only) continue;
    Outcome res;
    try {
      res = c.fn();
    } catch (const std::exception& e) {
      res.pass = false;
      res.detail = std::string(" exception: ") + e.what();
    }
    std::printf("%s criterion %d: %s --%s\n", res.pass ? "PASS" : "FAIL", c.id, c.title,
                res.detail.c_str());
    std::fflush(stdout);
    if (!res.pass) ++failures;
  }
  return failures;
}
