#pragma once
#include <cstddef>
#include <vector>

namespace randcurve {

// strictly increasing times in [0,1], starting at 0
struct TimeGrid {
  std::vector<double> times;

  TimeGrid() = default;
  explicit TimeGrid(std::vector<double> ts);

  static TimeGrid uniform(std::size_t steps);  // steps+1 points on [0,1]

  std::size_t size() const { return times.size(); }
  std::size_t cells() const { return times.empty() ? 0 : times.size() - 1; }
  double dt(std::size_t cell) const { return times[cell + 1] - times[cell]; }

  // trapezoid weights over [0, times.back()]
  std::vector<double> trapezoid_weights() const;
};

void validate_grid(const TimeGrid& grid);

}  // namespace randcurve
