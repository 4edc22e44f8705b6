#pragma once
#include <functional>
#include <utility>

#include "randcurve/brownian.hpp"
#include "randcurve/hitting.hpp"
#include "randcurve/pins.hpp"

namespace randcurve {

// time average of the indicator of B(x, eps), mollified by 1/vol(B(0,eps))
Estimate occupation_density(const BrownianPath& path, double bandwidth, const Vec& x);

// double Riemann sum of f_eps(w(t2)-w(t1)-u) over the ordered time simplex;
// product trapezoid weights normalized to the simplex area, diagonal excluded
Estimate silt_estimate(const BrownianPath& path, double bandwidth, const Vec& u);

// pairwise simplex weights used by silt_estimate; exposed for oracles
std::vector<double> simplex_pair_weights(const TimeGrid& grid);

// l^k companion under a smooth map with Jacobian D: l^k(D^{-1} x)/|det D|^{k-1}
Estimate transformed_silt_prediction(const std::function<Estimate(const Vec&)>& l2_at,
                                     const std::vector<Vec>& jacobian, int k, const Vec& x);

// (s*)^2/(pi u v*) exp(-sqrt(2) u v*/s*)
double cond_silt_asymptotic(double u, double v_star, double s_star);

// conditional self-intersection mass at diagonal offset (u,u) given pins
struct PinnedSiltQuery {
  double u = 0.0;  // evaluation point is (u,u)
  PinSet pins;     // in R^2
};

struct PinnedSiltDerived {
  std::size_t k_star = 0;  // 1-based interval index
  double v_star = 0.0;     // min_k ||v_{k-1} + v_k||
  double s_star = 0.0;     // s_{k*} - s_{k*-1}
};

void validate_pinned_query(const PinnedSiltQuery& q);
PinnedSiltDerived pinned_derived(const PinnedSiltQuery& q);

struct CondSiltQuadrature {
  double value = 0.0;
  double log_value = 0.0;  // carries magnitudes below double underflow
  std::vector<double> same_interval;  // one term per pin interval
  double cross_interval = 0.0;
};

// E( double integral of delta_{(u,u)}(w(t2)-w(t1)) over 0<=t1<t2<=s_n | pins ),
// evaluated with the exact residual covariance: same-interval cells reduce to
// a 1-D integral handled in the log domain around the interior Laplace point,
// cross-interval cells use 2-D tensor quadrature
CondSiltQuadrature cond_silt_quadrature(const PinnedSiltQuery& q, double resolution = 1e-8);

// Monte Carlo counterpart: conditioned paths via decompose, silt_estimate at (u,u)
Estimate cond_silt_mc(const PinnedSiltQuery& q, double bandwidth, std::uint64_t replicas,
                      RngStream stream, std::size_t points_per_unit = 256);

// mean SILT at offsets of norm x, common random numbers across the x values
std::vector<std::pair<double, Estimate>> intermittency_probe(const std::vector<double>& x_list,
                                                             double bandwidth,
                                                             std::uint64_t replicas,
                                                             RngStream stream,
                                                             std::size_t grid_steps = 256);

}  // namespace randcurve
