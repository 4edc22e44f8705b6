#include "randcurve/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "randcurve/vec.hpp"

namespace randcurve {

TimeGrid::TimeGrid(std::vector<double> ts) : times(std::move(ts)) { validate_grid(*this); }

TimeGrid TimeGrid::uniform(std::size_t steps) {
  TimeGrid g;
  g.times.resize(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) g.times[i] = static_cast<double>(i) / steps;
  g.times.back() = 1.0;
  return g;
}

std::vector<double> TimeGrid::trapezoid_weights() const {
  const std::size_t n = times.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = times[i + 1] - times[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

void validate_grid(const TimeGrid& grid) {
  if (grid.times.empty()) throw std::invalid_argument("TimeGrid: empty grid");
  if (grid.times.front() != 0.0) throw std::invalid_argument("TimeGrid: first time must be 0");
  for (std::size_t i = 0; i < grid.times.size(); ++i) {
    const double t = grid.times[i];
    if (!std::isfinite(t) || t < 0.0 || t > 1.0)
      throw std::invalid_argument("TimeGrid: times must lie in [0,1]");
    if (i > 0 && !(grid.times[i - 1] < t))
      throw std::invalid_argument("TimeGrid: times must be strictly increasing");
  }
}

double ball_volume(std::size_t d, double r) {
  if (d == 0) throw std::invalid_argument("ball_volume: dimension must be positive");
  const double half = 0.5 * static_cast<double>(d);
  return std::pow(M_PI, half) / std::tgamma(half + 1.0) * std::pow(r, static_cast<double>(d));
}

}  // namespace randcurve
