#pragma once
#include <cstdint>
#include <functional>
#include <utility>

#include "randcurve/hitting.hpp"
#include "randcurve/polyline.hpp"
#include "randcurve/rng.hpp"
#include "randcurve/transport.hpp"
#include "randcurve/vec.hpp"

namespace randcurve {

struct Vec2 {
  double x = 0.0, y = 0.0;
};

inline Vec to_vec(const Vec2& p) { return Vec{p.x, p.y}; }
inline Vec2 from_vec(const Vec& v) { return Vec2{v[0], v[1]}; }

// partition of R^d into domains with one attractor strictly inside each
struct DomainPartition {
  std::function<int(const Vec2&)> classifier;           // 0-based domain index
  int count = 0;
  std::function<double(const Vec2&)> boundary_distance;
};

// plane quadrants; boundary = the coordinate axes
DomainPartition quadrant_partition();

// the N=4 piecewise field with breakpoints at +-1/2 and attractors (+-1,+-1)
Vec2 field_V_example(const Vec2& p);

// x^2 y^2 / ((1+x^2)(1+y^2)): zero exactly on the axes, positive elsewhere, bounded by 1
double weight_h_default(const Vec2& p);

struct FieldSpec {
  std::function<Vec2(const Vec2&)> V;
  std::function<double(const Vec2&)> h;
  std::vector<Vec2> attractors;
};

// the worked configuration: V = field_V_example, attractors (1,1),(1,-1),(-1,1),(-1,-1);
// oracle_weight swaps h for the constant 1 (closed-form dynamics when coupled globally)
FieldSpec example_field_spec(bool oracle_weight = false);

// how the interaction mass enters the drift:
//   PerDomain: a(u, mu) = V(u) * integral_{D_k(u)} h dmu   (coefficient form)
//   Global:    a(u, mu) = V(u) * integral_{R^d} h dmu      (worked-example form)
enum class MassCoupling { PerDomain, Global };

struct ParticleSystem {
  std::vector<Vec2> positions;
  std::vector<double> params;  // curve parameters r_i in [0,1]
  double time = 0.0;
};

ParticleSystem particles_from_curve(const std::vector<Vec2>& curve);

// V(p) * m_{domain(p)}
Vec2 drift(const Vec2& p, const std::vector<double>& domain_masses, const FieldSpec& field,
           const DomainPartition& partition);

// a(u, mu) = V(u) * integral over u's domain of h dmu
Vec2 interaction_coefficient(const Vec2& u, const EmpiricalMeasure& mu, const FieldSpec& field,
                             const DomainPartition& partition);

// a(u, mu) = V(u) * integral of h dmu over the whole plane (mean-field form)
Vec2 mean_field_coefficient(const Vec2& u, const EmpiricalMeasure& mu, const FieldSpec& field);

// interaction masses of the current configuration (uniform particle weights)
std::vector<double> domain_masses(const ParticleSystem& system, const FieldSpec& field,
                                  const DomainPartition& partition);

// RK4 with masses frozen within each step; steps straddling a field breakpoint
// are re-run with substeps; checks domain invariance and finiteness per snapshot
std::vector<ParticleSystem> evolve(const ParticleSystem& system, const FieldSpec& field,
                                   const DomainPartition& partition, double T, double dt,
                                   const std::vector<double>& snapshot_times,
                                   MassCoupling coupling = MassCoupling::PerDomain);

// exact solution of dx = V(x) dt for the example field, composed across branch
// exits; starts on an axis are rejected
Vec2 cauchy_closed_form(const Vec2& u, double t);

// nu = sum_k mu0(D_k) delta_{Z_k}
EmpiricalMeasure limit_measure(const EmpiricalMeasure& mu0, const DomainPartition& partition,
                               const std::vector<Vec2>& attractors);

EmpiricalMeasure measure_of(const ParticleSystem& system);

// rho(mu_t, nu) along a trajectory of snapshots
std::vector<std::pair<double, double>> rho_to_limit(const std::vector<ParticleSystem>& trajectory,
                                                    const EmpiricalMeasure& limit);

// Brownian initial curve on M uniform parameters (r_i = i/M, i = 1..M)
std::vector<Vec2> brownian_curve(std::size_t particles, RngStream stream);

// deterministic 200-point curve in the two right-hand quadrants that carries
// type (1,1,2,2,1) and keeps min |y| = 0.1 away from the boundary
std::vector<Vec2> weave_curve();

struct FlowConfig {
  FieldSpec field;
  DomainPartition partition;
  MassCoupling coupling = MassCoupling::PerDomain;
  std::size_t particles = 200;
  double dt = 1e-3;
};

// per-time fraction of evolved curve replicas matching the type (common
// random numbers: one initial curve per replica, all times from one run)
std::vector<std::pair<double, Estimate>> type_prob_over_time(const TypeSpec& spec,
                                                             const FlowConfig& config,
                                                             const std::vector<double>& times,
                                                             std::uint64_t replicas,
                                                             RngStream stream);

// mu_t^2-mass escaping every ball B(Z_{a(m+1)}-Z_{a(m)}, delta); k = 2 only
double visitation_escape_mass(const ParticleSystem& system, const TypeSpec& spec, double delta,
                              int k);

// max observed ||a(u,mu)-a(v,nu)|| / (||u-v|| + rho(mu,nu)) over random pairs
double lipschitz_probe(const FieldSpec& field, const DomainPartition& partition,
                       std::uint64_t samples, RngStream stream);

}  // namespace randcurve
