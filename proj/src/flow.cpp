#include "randcurve/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace randcurve {

namespace {

// one-dimensional branch of the example field
double field_1d(double t) {
  if (t > 0.5) return 1.0 - t;
  if (t < -0.5) return -1.0 - t;
  return t;
}

}  // namespace

Vec2 field_V_example(const Vec2& p) { return Vec2{field_1d(p.x), field_1d(p.y)}; }

double weight_h_default(const Vec2& p) {
  const double x2 = p.x * p.x, y2 = p.y * p.y;
  return (x2 * y2) / ((1.0 + x2) * (1.0 + y2));
}

DomainPartition quadrant_partition() {
  DomainPartition part;
  part.count = 4;
  part.classifier = [](const Vec2& p) {
    if (p.x >= 0.0) return (p.y >= 0.0) ? 0 : 1;
    return (p.y >= 0.0) ? 2 : 3;
  };
  part.boundary_distance = [](const Vec2& p) { return std::min(std::fabs(p.x), std::fabs(p.y)); };
  return part;
}

FieldSpec example_field_spec(bool oracle_weight) {
  FieldSpec f;
  f.V = field_V_example;
  if (oracle_weight)
    f.h = [](const Vec2&) { return 1.0; };
  else
    f.h = weight_h_default;
  f.attractors = {Vec2{1, 1}, Vec2{1, -1}, Vec2{-1, 1}, Vec2{-1, -1}};
  return f;
}

ParticleSystem particles_from_curve(const std::vector<Vec2>& curve) {
  if (curve.empty()) throw std::invalid_argument("particles_from_curve: empty curve");
  ParticleSystem s;
  s.positions = curve;
  s.params.resize(curve.size());
  const double m = static_cast<double>(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) s.params[i] = static_cast<double>(i + 1) / m;
  return s;
}

Vec2 drift(const Vec2& p, const std::vector<double>& domain_masses, const FieldSpec& field,
           const DomainPartition& partition) {
  const int k = partition.classifier(p);
  const Vec2 v = field.V(p);
  const double m = domain_masses.at(static_cast<std::size_t>(k));
  return Vec2{v.x * m, v.y * m};
}

std::vector<double> domain_masses(const ParticleSystem& system, const FieldSpec& field,
                                  const DomainPartition& partition) {
  std::vector<double> m(static_cast<std::size_t>(partition.count), 0.0);
  const double w = 1.0 / static_cast<double>(system.positions.size());
  for (const Vec2& p : system.positions)
    m[static_cast<std::size_t>(partition.classifier(p))] += w * field.h(p);
  return m;
}

namespace {

// RK4 on the frozen-mass field; the example field is only piecewise smooth,
// so steps whose coordinates straddle a +-1/2 breakpoint are subdivided
Vec2 rk4_step(const Vec2& p, double dt, double mass, const FieldSpec& field) {
  const auto f = [&](const Vec2& q) {
    const Vec2 v = field.V(q);
    return Vec2{v.x * mass, v.y * mass};
  };
  const Vec2 k1 = f(p);
  const Vec2 k2 = f(Vec2{p.x + 0.5 * dt * k1.x, p.y + 0.5 * dt * k1.y});
  const Vec2 k3 = f(Vec2{p.x + 0.5 * dt * k2.x, p.y + 0.5 * dt * k2.y});
  const Vec2 k4 = f(Vec2{p.x + dt * k3.x, p.y + dt * k3.y});
  return Vec2{p.x + dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
              p.y + dt / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y)};
}

bool straddles_breakpoint(double a, double b) {
  for (double br : {-0.5, 0.5})
    if ((a - br) * (b - br) < 0.0) return true;
  return false;
}

Vec2 advance_particle(const Vec2& p, double dt, double mass, const FieldSpec& field) {
  const Vec2 q = rk4_step(p, dt, mass, field);
  if (straddles_breakpoint(p.x, q.x) || straddles_breakpoint(p.y, q.y)) {
    Vec2 r = p;
    const int sub = 32;
    for (int s = 0; s < sub; ++s) r = rk4_step(r, dt / sub, mass, field);
    return r;
  }
  return q;
}

}  // namespace

std::vector<ParticleSystem> evolve(const ParticleSystem& system, const FieldSpec& field,
                                   const DomainPartition& partition, double T, double dt,
                                   const std::vector<double>& snapshot_times,
                                   MassCoupling coupling) {
  if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
  if (T < 0.0) throw std::invalid_argument("evolve: horizon must be nonnegative");
  std::vector<double> snaps = snapshot_times;
  std::sort(snaps.begin(), snaps.end());

  ParticleSystem state = system;
  std::vector<int> dom0(state.positions.size());
  for (std::size_t i = 0; i < state.positions.size(); ++i)
    dom0[i] = partition.classifier(state.positions[i]);

  std::vector<ParticleSystem> out;
  std::size_t si = 0;
  const std::size_t nstep = static_cast<std::size_t>(std::llround(T / dt));
  const auto check_and_snap = [&](double t) {
    while (si < snaps.size() && snaps[si] <= t + 0.25 * dt) {
      for (std::size_t i = 0; i < state.positions.size(); ++i) {
        const Vec2& p = state.positions[i];
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
          std::ostringstream msg;
          msg << "evolve: non-finite position for particle " << i << " at t=" << t;
          throw std::runtime_error(msg.str());
        }
        if (partition.classifier(p) != dom0[i]) {
          std::ostringstream msg;
          msg << "evolve: particle " << i << " changed domain by t=" << t;
          throw std::runtime_error(msg.str());
        }
      }
      state.time = snaps[si];
      out.push_back(state);
      ++si;
    }
  };

  double t = 0.0;
  check_and_snap(t);
  for (std::size_t step = 0; step < nstep; ++step) {
    std::vector<double> masses = domain_masses(state, field, partition);
    if (coupling == MassCoupling::Global) {
      double total = 0.0;
      for (double mk : masses) total += mk;
      std::fill(masses.begin(), masses.end(), total);
    }
    for (std::size_t i = 0; i < state.positions.size(); ++i) {
      const double m = masses[static_cast<std::size_t>(dom0[i])];
      state.positions[i] = advance_particle(state.positions[i], dt, m, field);
    }
    t += dt;
    check_and_snap(t);
  }
  return out;
}

namespace {

// coordinate flow of the example field: repelling branch t -> t e^s on
// (0,1/2], attracting branch toward +-1 beyond
double coord_flow(double u, double t) {
  if (u == 0.0) return 0.0;
  const double sign = (u > 0.0) ? 1.0 : -1.0;
  double a = std::fabs(u);
  if (a <= 0.5) {
    const double t_exit = std::log(0.5 / a);
    if (t <= t_exit) return sign * a * std::exp(t);
    a = 0.5;
    t -= t_exit;
  }
  return sign * (1.0 + (a - 1.0) * std::exp(-t));
}

}  // namespace

Vec2 cauchy_closed_form(const Vec2& u, double t) {
  if (t < 0.0) throw std::invalid_argument("cauchy_closed_form: negative time");
  if (u.x == 0.0 || u.y == 0.0)
    throw std::invalid_argument("cauchy_closed_form: start lies on a repelling boundary");
  return Vec2{coord_flow(u.x, t), coord_flow(u.y, t)};
}

EmpiricalMeasure limit_measure(const EmpiricalMeasure& mu0, const DomainPartition& partition,
                               const std::vector<Vec2>& attractors) {
  validate_measure(mu0);
  if (static_cast<int>(attractors.size()) != partition.count)
    throw std::invalid_argument("limit_measure: attractor count mismatch");
  std::vector<double> p(attractors.size(), 0.0);
  for (std::size_t i = 0; i < mu0.atoms.size(); ++i) {
    const Vec2 a = from_vec(mu0.atoms[i]);
    p[static_cast<std::size_t>(partition.classifier(a))] += mu0.weights[i];
  }
  EmpiricalMeasure nu;
  for (std::size_t k = 0; k < attractors.size(); ++k) {
    if (p[k] <= 0.0) continue;
    nu.atoms.push_back(to_vec(attractors[k]));
    nu.weights.push_back(p[k]);
  }
  return nu;
}

EmpiricalMeasure measure_of(const ParticleSystem& system) {
  EmpiricalMeasure mu;
  mu.atoms.reserve(system.positions.size());
  for (const Vec2& p : system.positions) mu.atoms.push_back(to_vec(p));
  mu.weights.assign(system.positions.size(), 1.0 / static_cast<double>(system.positions.size()));
  return mu;
}

std::vector<std::pair<double, double>> rho_to_limit(const std::vector<ParticleSystem>& trajectory,
                                                    const EmpiricalMeasure& limit) {
  if (trajectory.empty()) throw std::invalid_argument("rho_to_limit: empty trajectory");
  std::vector<std::pair<double, double>> out;
  out.reserve(trajectory.size());
  for (const ParticleSystem& s : trajectory)
    out.emplace_back(s.time, rho_value(measure_of(s), limit));
  return out;
}

std::vector<Vec2> brownian_curve(std::size_t particles, RngStream stream) {
  if (particles == 0) throw std::invalid_argument("brownian_curve: need at least one particle");
  std::vector<Vec2> pts(particles);
  const double sd = std::sqrt(1.0 / static_cast<double>(particles));
  double x = 0.0, y = 0.0;
  for (std::size_t i = 0; i < particles; ++i) {
    x += sd * stream.normal();
    y += sd * stream.normal();
    pts[i] = Vec2{x, y};
  }
  return pts;
}

std::vector<Vec2> weave_curve() {
  std::vector<Vec2> pts;
  pts.reserve(200);
  const auto seg = [&](Vec2 a, Vec2 b, int k) {
    for (int j = 0; j < k; ++j) {
      const double lam = static_cast<double>(j) / k;
      pts.push_back(Vec2{(1 - lam) * a.x + lam * b.x, (1 - lam) * a.y + lam * b.y});
    }
  };
  seg({2.4, 2.4}, {1.0, 1.0}, 30);
  seg({1.0, 1.0}, {2.1, 2.3}, 22);
  seg({2.1, 2.3}, {1.02, 0.98}, 22);
  seg({1.02, 0.98}, {2.2, 0.9}, 14);
  seg({2.2, 0.9}, {2.2, -0.9}, 9);  // crossing in steps of 0.2: min |y| = 0.1
  seg({2.2, -0.9}, {1.0, -1.0}, 24);
  seg({1.0, -1.0}, {2.1, -2.3}, 22);
  seg({2.1, -2.3}, {0.98, -1.02}, 22);
  seg({0.98, -1.02}, {2.3, -0.9}, 12);
  seg({2.3, -0.9}, {2.3, 0.9}, 9);
  seg({2.3, 0.9}, {1.02, 1.02}, 13);
  pts.push_back(Vec2{1.02, 1.02});
  return pts;
}

std::vector<std::pair<double, Estimate>> type_prob_over_time(const TypeSpec& spec,
                                                             const FlowConfig& config,
                                                             const std::vector<double>& times,
                                                             std::uint64_t replicas,
                                                             RngStream stream) {
  validate_type_spec(spec);
  if (times.empty()) throw std::invalid_argument("type_prob_over_time: no times");
  if (replicas < 1) throw std::invalid_argument("type_prob_over_time: replicas must be >= 1");
  // the type balls must sit strictly inside their domains
  for (std::size_t k = 0; k < spec.centers.size(); ++k) {
    const Vec2 z = from_vec(spec.centers[k]);
    if (!(config.partition.boundary_distance(z) > spec.radius))
      throw std::invalid_argument("type_prob_over_time: ball not inside its domain");
  }
  std::vector<double> sorted = times;
  std::sort(sorted.begin(), sorted.end());
  const double T = sorted.back();

  std::vector<std::uint64_t> hits(sorted.size(), 0);
  for (std::uint64_t r = 0; r < replicas; ++r) {
    const std::vector<Vec2> curve = brownian_curve(config.particles, stream.substream(r));
    const ParticleSystem sys = particles_from_curve(curve);
    const std::vector<ParticleSystem> traj =
        evolve(sys, config.field, config.partition, T, config.dt, sorted, config.coupling);
    for (std::size_t i = 0; i < traj.size(); ++i) {
      std::vector<Vec> pts;
      pts.reserve(traj[i].positions.size());
      for (const Vec2& p : traj[i].positions) pts.push_back(to_vec(p));
      if (match_type_points(pts, traj[i].params, spec).matched) ++hits[i];
    }
  }
  std::vector<std::pair<double, Estimate>> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    Estimate e;
    e.samples = replicas;
    e.seed = stream.seed();
    e.value = static_cast<double>(hits[i]) / static_cast<double>(replicas);
    e.std_error = std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(replicas));
    out.emplace_back(sorted[i], e);
  }
  return out;
}

double visitation_escape_mass(const ParticleSystem& system, const TypeSpec& spec, double delta,
                              int k) {
  if (k != 2) throw std::invalid_argument("visitation_escape_mass: only k = 2 is supported");
  if (!(delta > 0.0)) throw std::invalid_argument("visitation_escape_mass: delta must be positive");
  validate_type_spec(spec);
  std::vector<Vec2> balls;
  for (std::size_t m = 0; m + 1 < spec.sequence.size(); ++m) {
    const Vec& a = spec.centers[spec.sequence[m] - 1];
    const Vec& b = spec.centers[spec.sequence[m + 1] - 1];
    balls.push_back(Vec2{b[0] - a[0], b[1] - a[1]});
  }
  const std::size_t n = system.positions.size();
  if (n < 2) throw std::invalid_argument("visitation_escape_mass: need at least two particles");
  const double d2 = delta * delta;
  std::uint64_t escaped = 0, total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = system.positions[j].x - system.positions[i].x;
      const double dy = system.positions[j].y - system.positions[i].y;
      bool inside = false;
      for (const Vec2& b : balls) {
        const double ex = dx - b.x, ey = dy - b.y;
        if (ex * ex + ey * ey <= d2) {
          inside = true;
          break;
        }
      }
      ++total;
      if (!inside) ++escaped;
    }
  }
  return static_cast<double>(escaped) / static_cast<double>(total);
}

Vec2 interaction_coefficient(const Vec2& u, const EmpiricalMeasure& mu, const FieldSpec& field,
                             const DomainPartition& partition) {
  std::vector<double> m(static_cast<std::size_t>(partition.count), 0.0);
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    const Vec2 a = from_vec(mu.atoms[i]);
    m[static_cast<std::size_t>(partition.classifier(a))] += mu.weights[i] * field.h(a);
  }
  return drift(u, m, field, partition);
}

Vec2 mean_field_coefficient(const Vec2& u, const EmpiricalMeasure& mu, const FieldSpec& field) {
  double mass = 0.0;
  for (std::size_t i = 0; i < mu.atoms.size(); ++i)
    mass += mu.weights[i] * field.h(from_vec(mu.atoms[i]));
  const Vec2 v = field.V(u);
  return Vec2{v.x * mass, v.y * mass};
}

double lipschitz_probe(const FieldSpec& field, const DomainPartition& partition,
                       std::uint64_t samples, RngStream stream) {
  if (samples < 1) throw std::invalid_argument("lipschitz_probe: samples must be >= 1");
  (void)partition;  // bounded sampling box; the partition plays no role here

  const auto random_measure = [&](RngStream& rs) {
    const std::size_t n = 1 + static_cast<std::size_t>(rs.uniform01() * 16.0);
    std::vector<Vec> atoms(n);
    for (Vec& a : atoms)
      a = Vec{3.0 * (2.0 * rs.uniform01() - 1.0), 3.0 * (2.0 * rs.uniform01() - 1.0)};
    return EmpiricalMeasure::equal_weight(std::move(atoms));
  };

  double max_ratio = 0.0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    RngStream rs = stream.substream(s);
    const Vec2 u{3.0 * (2.0 * rs.uniform01() - 1.0), 3.0 * (2.0 * rs.uniform01() - 1.0)};
    const Vec2 v{3.0 * (2.0 * rs.uniform01() - 1.0), 3.0 * (2.0 * rs.uniform01() - 1.0)};
    const EmpiricalMeasure mu = random_measure(rs);
    const EmpiricalMeasure nu = random_measure(rs);
    const double denom = std::hypot(u.x - v.x, u.y - v.y) + rho_value(mu, nu);
    if (denom <= 0.0) continue;
    const Vec2 au = mean_field_coefficient(u, mu, field);
    const Vec2 av = mean_field_coefficient(v, nu, field);
    const double num = std::hypot(au.x - av.x, au.y - av.y);
    max_ratio = std::max(max_ratio, num / denom);
  }
  return max_ratio;
}

}  // namespace randcurve
