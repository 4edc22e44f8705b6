#pragma once
#include <optional>

#include "randcurve/brownian.hpp"
#include "randcurve/vec.hpp"

namespace randcurve {

struct PolygonalLine {
  std::vector<Vec> vertices;  // at least one, finite coordinates
};

void validate_polyline(const PolygonalLine& line);

// linear interpolation between bracketing vertices; t must lie in the knot range
Vec polyline_eval(const PolygonalLine& line, const std::vector<double>& knot_times, double t);

// attractor centres, ball radius and the index sequence to visit
struct TypeSpec {
  std::vector<Vec> centers;      // pairwise ||Z_k - Z_j|| > 2 eps
  double radius = 0.0;           // eps > 0
  std::vector<std::size_t> sequence;  // 1-based indices into centers
};

void validate_type_spec(const TypeSpec& spec);

struct MatchResult {
  bool matched = false;
  std::optional<std::vector<double>> times;  // greedy earliest hit times
};

// true iff the sampled points visit B(Z_{a(1)},eps), ..., B(Z_{a(n)},eps) at
// strictly increasing grid times, in order; closed balls, earliest-hit greedy
MatchResult match_type(const BrownianPath& path, const TypeSpec& spec);
MatchResult match_type_points(const std::vector<Vec>& points, const std::vector<double>& times,
                              const TypeSpec& spec);

}  // namespace randcurve
