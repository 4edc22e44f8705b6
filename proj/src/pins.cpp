#include "randcurve/pins.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace randcurve {

void validate_pins(const PinSet& pins, std::size_t dim) {
  if (pins.times.size() != pins.values.size())
    throw std::invalid_argument("PinSet: times/values length mismatch");
  double prev = 0.0;
  for (std::size_t k = 0; k < pins.times.size(); ++k) {
    const double s = pins.times[k];
    if (!(s > 0.0) || s > 1.0) throw std::invalid_argument("PinSet: pin time must lie in (0,1]");
    if (k > 0 && !(s > prev)) throw std::invalid_argument("PinSet: duplicate or decreasing pin time");
    if (pins.values[k].size() != dim) throw std::invalid_argument("PinSet: value dimension mismatch");
    if (!all_finite(pins.values[k])) throw std::invalid_argument("PinSet: non-finite pin value");
    prev = s;
  }
}

namespace {

// index k such that t lies in (s_{k-1}, s_k], with s_0 = 0; pins.count() if beyond
std::size_t interval_of(double t, const PinSet& pins) {
  std::size_t k = 0;
  while (k < pins.times.size() && t > pins.times[k]) ++k;
  return k;
}

}  // namespace

Vec pin_polyline_at(const PinSet& pins, std::size_t dim, double t) {
  const Vec origin(dim, 0.0);
  if (pins.times.empty()) return origin;
  if (t <= 0.0) return origin;
  if (t >= pins.times.back()) return pins.values.back();
  const std::size_t k = interval_of(t, pins);
  const double lo = (k == 0) ? 0.0 : pins.times[k - 1];
  const double hi = pins.times[k];
  const Vec& vlo = (k == 0) ? origin : pins.values[k - 1];
  const Vec& vhi = pins.values[k];
  const double lam = (t - lo) / (hi - lo);
  Vec out(dim);
  for (std::size_t c = 0; c < dim; ++c) out[c] = (1.0 - lam) * vlo[c] + lam * vhi[c];
  return out;
}

double residual_covariance(double t, double s, const PinSet& pins) {
  if (pins.times.empty()) throw std::invalid_argument("residual_covariance: no pins");
  const double sn = pins.times.back();
  if (t < 0.0 || s < 0.0 || t > sn || s > sn)
    throw std::out_of_range("residual_covariance: arguments beyond the last pin time");
  const std::size_t kt = interval_of(t, pins);
  const std::size_t ks = interval_of(s, pins);
  if (kt != ks) return 0.0;  // independent bridges across intervals
  const double lo = (kt == 0) ? 0.0 : pins.times[kt - 1];
  const double len = pins.times[kt] - lo;
  const double tp = t - lo, sp = s - lo;
  return std::min(tp, sp) - tp * sp / len;
}

double conditional_variance(double t, const PinSet& pins) {
  const double sn = pins.last_time();
  if (t <= sn) return residual_covariance(t, t, pins);
  return t - sn;  // free Wiener continuation
}

Decomposition decompose(std::size_t dim, const PinSet& pins, RngStream stream,
                        std::size_t points_per_unit) {
  // per-interval uniform subgrids so every pin time is a grid point
  std::vector<double> ts = {0.0};
  double prev = 0.0;
  auto push_span = [&](double lo, double hi) {
    const std::size_t n =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) * points_per_unit)));
    for (std::size_t j = 1; j <= n; ++j) ts.push_back(lo + (hi - lo) * static_cast<double>(j) / n);
  };
  for (double s : pins.times) {
    push_span(prev, s);
    prev = s;
  }
  if (prev < 1.0) push_span(prev, 1.0);
  return decompose(dim, pins, stream, TimeGrid(std::move(ts)));
}

Decomposition decompose(std::size_t dim, const PinSet& pins, RngStream stream,
                        const TimeGrid& grid) {
  if (dim < 1) throw std::invalid_argument("decompose: dim must be >= 1");
  validate_pins(pins, dim);
  if (pins.times.empty()) throw std::invalid_argument("decompose: at least one pin required");
  validate_grid(grid);
  for (double s : pins.times)
    if (!std::binary_search(grid.times.begin(), grid.times.end(), s))
      throw std::invalid_argument("decompose: grid must contain every pin time");

  Decomposition d;
  d.dim = dim;
  d.pins = pins;
  d.grid = grid;
  d.has_tail = pins.times.back() < grid.times.back();
  const std::size_t n = grid.size();
  d.poly.resize(n);
  d.residual.assign(n, Vec(dim, 0.0));
  for (std::size_t i = 0; i < n; ++i) d.poly[i] = pin_polyline_at(pins, dim, grid.times[i]);

  // independent bridge noise per pin interval: sample free increments, then
  // subtract the linear sweep so the residual vanishes at both interval ends
  std::size_t i = 0;
  double lo = 0.0;
  for (std::size_t k = 0; k <= pins.times.size(); ++k) {
    const bool tail = (k == pins.times.size());
    const double hi = tail ? grid.times.back() : pins.times[k];
    if (hi <= lo) break;
    // grid indices (i .. j) spanning [lo, hi]
    std::size_t j = i;
    while (grid.times[j] < hi) ++j;
    std::vector<Vec> x(j - i + 1, Vec(dim, 0.0));
    for (std::size_t m = 1; m < x.size(); ++m) {
      const double sd = std::sqrt(grid.times[i + m] - grid.times[i + m - 1]);
      for (std::size_t c = 0; c < dim; ++c) x[m][c] = x[m - 1][c] + sd * stream.normal();
    }
    const double len = hi - lo;
    for (std::size_t m = 0; m < x.size(); ++m) {
      const double lam = tail ? 0.0 : (grid.times[i + m] - lo) / len;
      for (std::size_t c = 0; c < dim; ++c)
        d.residual[i + m][c] = x[m][c] - lam * x.back()[c];
    }
    i = j;
    lo = hi;
    if (tail) break;
  }
  return d;
}

}  // namespace randcurve
