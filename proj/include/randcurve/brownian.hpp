#pragma once
#include <cstdint>

#include "randcurve/grid.hpp"
#include "randcurve/rng.hpp"
#include "randcurve/vec.hpp"

namespace randcurve {

// sampled Brownian trajectory on a time grid
struct BrownianPath {
  std::size_t dim = 0;
  TimeGrid grid;
  std::vector<Vec> points;       // one per grid time
  std::uint64_t seed = 0;        // stream id provenance
  std::uint64_t stream_id = 0;

  const Vec& at(std::size_t i) const { return points[i]; }
};

// independent mean-zero increments with per-coordinate variance dt;
// starts at the origin unless `start` is given
BrownianPath sample_path(std::size_t dim, const TimeGrid& grid, RngStream stream);
BrownianPath sample_path(std::size_t dim, const TimeGrid& grid, RngStream stream,
                         const Vec& start);

// inserts 2^levels - 1 conditionally sampled midpoints into one grid cell;
// marginals at the pre-existing grid points are unchanged
BrownianPath refine_bridge(const BrownianPath& path, std::size_t cell_index, int levels,
                           RngStream stream);

}  // namespace randcurve
