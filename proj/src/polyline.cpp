#include "randcurve/polyline.hpp"

#include <stdexcept>

namespace randcurve {

void validate_polyline(const PolygonalLine& line) {
  if (line.vertices.empty()) throw std::invalid_argument("PolygonalLine: needs at least one vertex");
  const std::size_t d = line.vertices.front().size();
  for (const Vec& v : line.vertices) {
    if (v.size() != d) throw std::invalid_argument("PolygonalLine: mixed dimensions");
    if (!all_finite(v)) throw std::invalid_argument("PolygonalLine: non-finite vertex");
  }
}

Vec polyline_eval(const PolygonalLine& line, const std::vector<double>& knot_times, double t) {
  validate_polyline(line);
  if (knot_times.size() != line.vertices.size())
    throw std::invalid_argument("polyline_eval: knot count mismatch");
  for (std::size_t i = 1; i < knot_times.size(); ++i)
    if (!(knot_times[i - 1] < knot_times[i]))
      throw std::invalid_argument("polyline_eval: knots must be strictly increasing");
  if (t < knot_times.front() || t > knot_times.back())
    throw std::out_of_range("polyline_eval: t outside knot range");

  std::size_t k = 1;
  while (k < knot_times.size() && knot_times[k] < t) ++k;
  if (k == knot_times.size()) return line.vertices.back();
  const double lo = knot_times[k - 1], hi = knot_times[k];
  const double lam = (t - lo) / (hi - lo);
  Vec out(line.vertices.front().size());
  for (std::size_t c = 0; c < out.size(); ++c)
    out[c] = (1.0 - lam) * line.vertices[k - 1][c] + lam * line.vertices[k][c];
  return out;
}

void validate_type_spec(const TypeSpec& spec) {
  if (spec.centers.empty()) throw std::invalid_argument("TypeSpec: no centers");
  if (!(spec.radius > 0.0)) throw std::invalid_argument("TypeSpec: radius must be positive");
  const std::size_t d = spec.centers.front().size();
  for (const Vec& z : spec.centers) {
    if (z.size() != d) throw std::invalid_argument("TypeSpec: mixed center dimensions");
    if (!all_finite(z)) throw std::invalid_argument("TypeSpec: non-finite center");
  }
  for (std::size_t k = 0; k < spec.centers.size(); ++k)
    for (std::size_t j = k + 1; j < spec.centers.size(); ++j)
      if (!(dist(spec.centers[k], spec.centers[j]) > 2.0 * spec.radius))
        throw std::invalid_argument("TypeSpec: center balls overlap");
  if (spec.sequence.empty()) throw std::invalid_argument("TypeSpec: empty sequence");
  for (std::size_t a : spec.sequence)
    if (a < 1 || a > spec.centers.size())
      throw std::invalid_argument("TypeSpec: sequence index out of range");
}

MatchResult match_type_points(const std::vector<Vec>& points, const std::vector<double>& times,
                              const TypeSpec& spec) {
  validate_type_spec(spec);
  if (points.size() != times.size())
    throw std::invalid_argument("match_type: points/times length mismatch");
  if (!points.empty() && points.front().size() != spec.centers.front().size())
    throw std::invalid_argument("match_type: dimension mismatch");

  MatchResult res;
  std::vector<double> hit_times;
  hit_times.reserve(spec.sequence.size());
  std::size_t i = 0;
  for (std::size_t a : spec.sequence) {
    const Vec& z = spec.centers[a - 1];
    bool found = false;
    for (; i < points.size(); ++i) {
      if (dist(points[i], z) <= spec.radius) {
        hit_times.push_back(times[i]);
        ++i;  // times must strictly increase, so this index is spent
        found = true;
        break;
      }
    }
    if (!found) return res;
  }
  res.matched = true;
  res.times = std::move(hit_times);
  return res;
}

MatchResult match_type(const BrownianPath& path, const TypeSpec& spec) {
  if (path.dim != spec.centers.front().size())
    throw std::invalid_argument("match_type: dimension mismatch");
  return match_type_points(path.points, path.grid.times, spec);
}

}  // namespace randcurve
