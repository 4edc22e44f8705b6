#include "randcurve/brownian.hpp"

#include <cmath>
#include <stdexcept>

namespace randcurve {

BrownianPath sample_path(std::size_t dim, const TimeGrid& grid, RngStream stream) {
  return sample_path(dim, grid, stream, Vec(dim, 0.0));
}

BrownianPath sample_path(std::size_t dim, const TimeGrid& grid, RngStream stream,
                         const Vec& start) {
  if (dim < 1) throw std::invalid_argument("sample_path: dim must be >= 1");
  validate_grid(grid);
  if (start.size() != dim) throw std::invalid_argument("sample_path: start dimension mismatch");

  BrownianPath path;
  path.dim = dim;
  path.grid = grid;
  path.seed = stream.seed();
  path.stream_id = stream.stream_id();
  path.points.resize(grid.size(), Vec(dim, 0.0));
  path.points[0] = start;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double sd = std::sqrt(grid.dt(i));
    Vec& next = path.points[i + 1];
    const Vec& cur = path.points[i];
    for (std::size_t c = 0; c < dim; ++c) next[c] = cur[c] + sd * stream.normal();
  }
  return path;
}

BrownianPath refine_bridge(const BrownianPath& path, std::size_t cell_index, int levels,
                           RngStream stream) {
  if (levels < 1) throw std::invalid_argument("refine_bridge: levels must be >= 1");
  if (cell_index + 1 >= path.grid.size())
    throw std::out_of_range("refine_bridge: invalid cell index");

  // conditional midpoint insertion, breadth-first so draw order is fixed
  std::vector<double> ts = {path.grid.times[cell_index], path.grid.times[cell_index + 1]};
  std::vector<Vec> vs = {path.points[cell_index], path.points[cell_index + 1]};
  for (int lvl = 0; lvl < levels; ++lvl) {
    std::vector<double> nts;
    std::vector<Vec> nvs;
    nts.reserve(2 * ts.size() - 1);
    nvs.reserve(2 * vs.size() - 1);
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
      const double a = ts[i], b = ts[i + 1];
      const double mid = 0.5 * (a + b);
      const double sd = 0.5 * std::sqrt(b - a);  // bridge midpoint sd: sqrt(dt/4)
      Vec m(path.dim);
      for (std::size_t c = 0; c < path.dim; ++c)
        m[c] = 0.5 * (vs[i][c] + vs[i + 1][c]) + sd * stream.normal();
      nts.push_back(a);
      nvs.push_back(vs[i]);
      nts.push_back(mid);
      nvs.push_back(std::move(m));
    }
    nts.push_back(ts.back());
    nvs.push_back(vs.back());
    ts = std::move(nts);
    vs = std::move(nvs);
  }

  BrownianPath out;
  out.dim = path.dim;
  out.seed = path.seed;
  out.stream_id = path.stream_id;
  out.grid.times.reserve(path.grid.size() + ts.size() - 2);
  out.points.reserve(path.grid.size() + ts.size() - 2);
  for (std::size_t i = 0; i < path.grid.size(); ++i) {
    out.grid.times.push_back(path.grid.times[i]);
    out.points.push_back(path.points[i]);
    if (i == cell_index) {
      for (std::size_t j = 1; j + 1 < ts.size(); ++j) {
        out.grid.times.push_back(ts[j]);
        out.points.push_back(vs[j]);
      }
    }
  }
  return out;
}

}  // namespace randcurve
