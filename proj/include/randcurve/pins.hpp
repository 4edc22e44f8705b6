#pragma once
#include <cstdint>

#include "randcurve/grid.hpp"
#include "randcurve/rng.hpp"
#include "randcurve/vec.hpp"

namespace randcurve {

// pinned times and values; the pin (0, origin) is implicit
struct PinSet {
  std::vector<double> times;  // strictly increasing, in (0,1]
  std::vector<Vec> values;    // one vector per time

  std::size_t count() const { return times.size(); }
  double last_time() const { return times.empty() ? 0.0 : times.back(); }
};

void validate_pins(const PinSet& pins, std::size_t dim);

// piecewise-linear interpolant through (0, origin) and the pins;
// constant equal to the last pin value beyond the last pin time
Vec pin_polyline_at(const PinSet& pins, std::size_t dim, double t);

// exact per-coordinate covariance of the bridge residual of the pinned
// decomposition; zero across distinct pin intervals
double residual_covariance(double t, double s, const PinSet& pins);

// per-coordinate variance of the conditioned process w(t) given the pins
// (equals the residual variance on [0, s_n], Wiener variance on the tail)
double conditional_variance(double t, const PinSet& pins);

// sampled realisation of the pinned split w = poly + residual
struct Decomposition {
  std::size_t dim = 0;
  PinSet pins;
  TimeGrid grid;              // includes every pin time; spans [0,1]
  std::vector<Vec> poly;      // polygonal part at grid times
  std::vector<Vec> residual;  // bridge noise, plus free continuation past s_n
  bool has_tail = false;

  Vec path_at(std::size_t i) const { return add(poly[i], residual[i]); }
};

// samples the residual (independent bridge noise per pin interval, fresh
// Wiener continuation on (s_n, 1] when s_n < 1); poly is deterministic
Decomposition decompose(std::size_t dim, const PinSet& pins, RngStream stream,
                        std::size_t points_per_unit = 256);
Decomposition decompose(std::size_t dim, const PinSet& pins, RngStream stream,
                        const TimeGrid& grid);

}  // namespace randcurve
