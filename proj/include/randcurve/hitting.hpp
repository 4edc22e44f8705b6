#pragma once
#include <cstdint>
#include <utility>

#include "randcurve/brownian.hpp"
#include "randcurve/vec.hpp"

namespace randcurve {

// Monte Carlo estimate with its own standard error
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

// ordered small-ball visiting problem for transient Brownian motion
struct HitChainQuery {
  std::size_t dim = 0;       // d >= 3
  Vec start;                 // x
  std::vector<Vec> targets;  // z_1 .. z_n, all distinct, distinct from x
  double radius = 0.0;       // eps > 0
};

void validate_hit_query(const HitChainQuery& q);

// Gamma(d/2-1) / (2 pi^{d/2}); all-time hitting constant, transient regime only
double wiener_hit_constant(std::size_t d);

// ||x-z_1||^{2-d} ... ||z_{n-1}-z_n||^{2-d} (eps^{d-2})^n, no constant
double chain_asymptotic_scale(const HitChainQuery& q);

// P(||G - mean|| <= radius) for centered isotropic Gaussian G with the given
// per-coordinate variance
double gaussian_ball_prob(const Vec& mean, double variance, double radius, std::size_t d);
double gaussian_ball_prob_norm(double mean_norm, double variance, double radius, std::size_t d);

// ordered visiting check on a discrete path (greedy earliest hits)
bool hit_chain_match(const std::vector<Vec>& points, const std::vector<Vec>& targets,
                     double radius);

// fraction of sampled paths over [0,1] visiting the target balls in order;
// paths are bridge-refined wherever a segment chord passes within 2 eps of a
// target, until the local step is <= (eps/4)^2. Ball entries between the
// refined points are still missed, so the estimate is biased low (one-sided).
Estimate mc_hit_chain(const HitChainQuery& q, std::uint64_t replicas, const TimeGrid& base_grid,
                      RngStream stream);

// n^{-2} log prod_k P{w(1/n) in B(dZ_k, eps/n)} for the alpha pattern cycled
// to length n; dZ_1 is measured from the origin
std::vector<std::pair<std::size_t, double>> type_rate_sequence(
    const std::vector<Vec>& centers, const std::vector<std::size_t>& alpha, double eps,
    const std::vector<std::size_t>& n_list, std::size_t d);

}  // namespace randcurve
