#include "randcurve/silt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "randcurve/special.hpp"

namespace randcurve {

Estimate occupation_density(const BrownianPath& path, double bandwidth, const Vec& x) {
  if (!(bandwidth > 0.0)) throw std::invalid_argument("occupation_density: bandwidth must be positive");
  if (x.size() != path.dim) throw std::invalid_argument("occupation_density: point dimension mismatch");
  const std::vector<double> w = path.grid.trapezoid_weights();
  const double vol = ball_volume(path.dim, bandwidth);
  double acc = 0.0;
  for (std::size_t i = 0; i < path.points.size(); ++i)
    if (dist(path.points[i], x) <= bandwidth) acc += w[i];
  Estimate e;
  e.value = acc / vol;
  e.samples = 1;
  e.seed = path.seed;
  return e;
}

std::vector<double> simplex_pair_weights(const TimeGrid& grid) {
  const std::vector<double> w = grid.trapezoid_weights();
  const std::size_t n = w.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) total += w[i] * w[j];
  const double horizon = grid.times.back();
  const double target = 0.5 * horizon * horizon;  // area of {0 <= t1 < t2 <= T}
  const double s = target / total;
  std::vector<double> out;
  out.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(s * w[i] * w[j]);
  return out;
}

Estimate silt_estimate(const BrownianPath& path, double bandwidth, const Vec& u) {
  if (!(bandwidth > 0.0)) throw std::invalid_argument("silt_estimate: bandwidth must be positive");
  if (u.size() != path.dim) throw std::invalid_argument("silt_estimate: offset dimension mismatch");
  const std::size_t n = path.points.size();
  if (n < 2) throw std::invalid_argument("silt_estimate: need at least two grid points");
  const std::vector<double> w = path.grid.trapezoid_weights();
  double total = 0.0, acc = 0.0;
  const double eps2 = bandwidth * bandwidth;
  const std::size_t d = path.dim;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& pi = path.points[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec& pj = path.points[j];
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double dd = pj[c] - pi[c] - u[c];
        s += dd * dd;
      }
      const double ww = w[i] * w[j];
      total += ww;
      if (s <= eps2) acc += ww;
    }
  }
  const double horizon = path.grid.times.back();
  const double scale = 0.5 * horizon * horizon / total;
  Estimate e;
  e.value = scale * acc / ball_volume(d, bandwidth);
  e.samples = 1;
  e.seed = path.seed;
  return e;
}

Estimate transformed_silt_prediction(const std::function<Estimate(const Vec&)>& l2_at,
                                     const std::vector<Vec>& jacobian, int k, const Vec& x) {
  if (k < 2) throw std::invalid_argument("transformed_silt_prediction: k must be >= 2");
  const std::size_t d = x.size();
  if (jacobian.size() != d) throw std::invalid_argument("transformed_silt_prediction: Jacobian shape");
  for (const Vec& row : jacobian)
    if (row.size() != d) throw std::invalid_argument("transformed_silt_prediction: Jacobian shape");

  // Gaussian elimination with partial pivoting: solve D y = x, det from pivots
  std::vector<Vec> a = jacobian;
  Vec y = x;
  double det = 1.0;
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < d; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0) throw std::invalid_argument("transformed_silt_prediction: singular Jacobian");
    if (piv != col) {
      std::swap(a[piv], a[col]);
      std::swap(y[piv], y[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < d; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t cc = col; cc < d; ++cc) a[r][cc] -= f * a[col][cc];
      y[r] -= f * y[col];
    }
  }
  for (std::size_t r = d; r-- > 0;) {
    for (std::size_t cc = r + 1; cc < d; ++cc) y[r] -= a[r][cc] * y[cc];
    y[r] /= a[r][r];
  }

  Estimate e = l2_at(y);
  const double f = std::pow(std::fabs(det), static_cast<double>(k - 1));
  e.value /= f;
  e.std_error /= f;
  return e;
}

double cond_silt_asymptotic(double u, double v_star, double s_star) {
  if (!(u > 0.0 && v_star > 0.0 && s_star > 0.0))
    throw std::invalid_argument("cond_silt_asymptotic: inputs must be positive");
  return s_star * s_star / (M_PI * u * v_star) * std::exp(-M_SQRT2 * u * v_star / s_star);
}

void validate_pinned_query(const PinnedSiltQuery& q) {
  if (q.u == 0.0) throw std::invalid_argument("PinnedSiltQuery: u must be nonzero");
  validate_pins(q.pins, 2);
  if (q.pins.times.empty()) throw std::invalid_argument("PinnedSiltQuery: needs at least one pin");
  double prev = 0.0;
  for (double s : q.pins.times) {
    if (!(s > prev)) throw std::invalid_argument("PinnedSiltQuery: zero-length pin interval");
    prev = s;
  }
}

PinnedSiltDerived pinned_derived(const PinnedSiltQuery& q) {
  validate_pinned_query(q);
  PinnedSiltDerived d;
  double best = std::numeric_limits<double>::infinity();
  Vec prev(2, 0.0);
  double prev_t = 0.0;
  for (std::size_t k = 0; k < q.pins.count(); ++k) {
    const Vec sum = add(prev, q.pins.values[k]);
    const double nn = norm(sum);
    if (nn < best) {
      best = nn;
      d.k_star = k + 1;
      d.v_star = nn;
      d.s_star = q.pins.times[k] - prev_t;
    }
    prev = q.pins.values[k];
    prev_t = q.pins.times[k];
  }
  return d;
}

namespace {

// exponent of the same-interval reduced integrand at lag a, interval length L
struct SameIntervalCell {
  double L;
  Vec w;   // offset minus nothing: (u,u)
  Vec dv;  // v_k - v_{k-1}
  double p(double a) const {
    const double m0 = w[0] - a * dv[0] / L;
    const double m1 = w[1] - a * dv[1] / L;
    return L * (m0 * m0 + m1 * m1) / (2.0 * a * (L - a));
  }
};

double interior_minimum(const SameIntervalCell& cell) {
  // stationarity reduces to A a^2 + 2 L |w|^2 a - L^2 |w|^2 = 0 with
  // A = |dv|^2 - 2 w.dv; fall back to golden section when degenerate
  const double w2 = dot(cell.w, cell.w);
  const double A = dot(cell.dv, cell.dv) - 2.0 * dot(cell.w, cell.dv);
  const double L = cell.L;
  double a_star = 0.5 * L;
  if (std::fabs(A) > 1e-300) {
    const double disc = L * L * w2 * w2 + A * L * L * w2;
    if (disc >= 0.0) {
      const double root = (-L * w2 + std::sqrt(disc)) / A;
      if (root > 0.0 && root < L) a_star = root;
    }
  } else if (w2 > 0.0) {
    a_star = 0.5 * L;
  }
  // golden-section polish (also covers the fallback path)
  double lo = std::max(1e-14 * L, a_star / 64.0);
  double hi = std::min(L * (1.0 - 1e-14), std::min(L - 1e-14 * L, a_star * 64.0));
  if (!(lo < hi)) {
    lo = 1e-14 * L;
    hi = L * (1.0 - 1e-14);
  }
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = cell.p(x1), f2 = cell.p(x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = cell.p(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = cell.p(x2);
    }
    if (hi - lo < 1e-13 * cell.L) break;
  }
  return 0.5 * (lo + hi);
}

// log of int_0^L (L / (2 pi a)) exp(-p(a)) da, via y = log a panels around a*
double same_interval_log(const SameIntervalCell& cell, double resolution) {
  const double a_star = interior_minimum(cell);
  const double p_star = cell.p(a_star);
  const double cut = 110.0;  // e-folds beyond which the tail is negligible

  // bracket in log-lag where the exponent has climbed by `cut`
  double ylo = std::log(a_star);
  {
    double step = 0.5;
    while (cell.p(std::exp(ylo)) - p_star < cut && ylo > std::log(1e-300)) {
      ylo -= step;
      step *= 1.5;
    }
  }
  double yhi_limit = std::log(cell.L * (1.0 - 1e-12));
  double yhi = std::log(a_star);
  {
    double hi = yhi_limit;
    if (cell.p(std::exp(hi)) - p_star < cut) {
      yhi = hi;
    } else {
      double lo = std::log(a_star);
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cell.p(std::exp(mid)) - p_star < cut)
          lo = mid;
        else
          hi = mid;
      }
      yhi = hi;
    }
  }
  const auto f = [&](double y) {
    const double a = std::exp(y);
    if (a <= 0.0 || a >= cell.L) return 0.0;
    const double e = cell.p(a) - p_star;
    return (e > cut) ? 0.0 : std::exp(-e);
  };
  const double ymid = std::log(a_star);
  const double integral = adaptive_simpson(f, ylo, ymid, resolution) +
                          adaptive_simpson(f, ymid, yhi, resolution);
  return std::log(cell.L / (2.0 * M_PI)) + std::log(integral) - p_star;
}

}  // namespace

CondSiltQuadrature cond_silt_quadrature(const PinnedSiltQuery& q, double resolution) {
  validate_pinned_query(q);
  const PinSet& pins = q.pins;
  const std::size_t n = pins.count();
  const Vec offset = {q.u, q.u};

  CondSiltQuadrature out;
  std::vector<double> logs;

  // same-interval cells
  std::vector<double> lo_times(n), hi_times(n);
  for (std::size_t k = 0; k < n; ++k) {
    lo_times[k] = (k == 0) ? 0.0 : pins.times[k - 1];
    hi_times[k] = pins.times[k];
    SameIntervalCell cell;
    cell.L = hi_times[k] - lo_times[k];
    cell.w = offset;
    const Vec prev = (k == 0) ? Vec(2, 0.0) : pins.values[k - 1];
    cell.dv = sub(pins.values[k], prev);
    const double lg = same_interval_log(cell, resolution);
    logs.push_back(lg);
    out.same_interval.push_back(std::exp(lg));
  }

  // cross-interval cells: independent bridge residuals, exact covariance
  double cross = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double Li = hi_times[i] - lo_times[i];
      const double Lj = hi_times[j] - lo_times[j];
      const Vec vi0 = (i == 0) ? Vec(2, 0.0) : pins.values[i - 1];
      const Vec vj0 = (j == 0) ? Vec(2, 0.0) : pins.values[j - 1];
      const auto poly_i = [&](double t) {
        const double lam = (t - lo_times[i]) / Li;
        return Vec{(1 - lam) * vi0[0] + lam * pins.values[i][0],
                   (1 - lam) * vi0[1] + lam * pins.values[i][1]};
      };
      const auto poly_j = [&](double t) {
        const double lam = (t - lo_times[j]) / Lj;
        return Vec{(1 - lam) * vj0[0] + lam * pins.values[j][0],
                   (1 - lam) * vj0[1] + lam * pins.values[j][1]};
      };
      const auto integrand = [&](double t1, double t2) {
        const double g1 = (t1 - lo_times[i]) * (hi_times[i] - t1) / Li;
        const double g2 = (t2 - lo_times[j]) * (hi_times[j] - t2) / Lj;
        const double s2 = g1 + g2;
        if (s2 <= 0.0) return 0.0;
        const Vec p1 = poly_i(t1), p2 = poly_j(t2);
        const double m0 = offset[0] - (p2[0] - p1[0]);
        const double m1 = offset[1] - (p2[1] - p1[1]);
        const double e = (m0 * m0 + m1 * m1) / (2.0 * s2);
        if (e > 700.0) return 0.0;
        return std::exp(-e) / (2.0 * M_PI * s2);
      };
      const auto outer = [&](double t2) {
        return adaptive_simpson([&](double t1) { return integrand(t1, t2); }, lo_times[i],
                                hi_times[i], resolution * 0.1);
      };
      cross += adaptive_simpson(outer, lo_times[j], hi_times[j], resolution * 0.1);
    }
  }
  out.cross_interval = cross;
  if (cross > 0.0) logs.push_back(std::log(cross));

  double lmax = -std::numeric_limits<double>::infinity();
  for (double l : logs) lmax = std::max(lmax, l);
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - lmax);
  out.log_value = lmax + std::log(acc);
  out.value = std::exp(out.log_value);
  return out;
}

Estimate cond_silt_mc(const PinnedSiltQuery& q, double bandwidth, std::uint64_t replicas,
                      RngStream stream, std::size_t points_per_unit) {
  validate_pinned_query(q);
  if (!(bandwidth > 0.0)) throw std::invalid_argument("cond_silt_mc: bandwidth must be positive");
  if (replicas < 1) throw std::invalid_argument("cond_silt_mc: replicas must be >= 1");
  const Vec offset = {q.u, q.u};
  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t r = 0; r < replicas; ++r) {
    const Decomposition d = decompose(2, q.pins, stream.substream(r), points_per_unit);
    BrownianPath path;
    path.dim = 2;
    path.grid = d.grid;
    path.seed = stream.seed();
    path.stream_id = stream.stream_id();
    path.points.resize(d.grid.size());
    for (std::size_t i = 0; i < d.grid.size(); ++i) path.points[i] = d.path_at(i);
    const double v = silt_estimate(path, bandwidth, offset).value;
    sum += v;
    sumsq += v * v;
  }
  const double nrep = static_cast<double>(replicas);
  Estimate e;
  e.value = sum / nrep;
  e.samples = replicas;
  e.seed = stream.seed();
  if (replicas > 1) {
    const double var = std::max(0.0, (sumsq - sum * sum / nrep) / (nrep - 1.0));
    e.std_error = std::sqrt(var / nrep);
  }
  return e;
}

std::vector<std::pair<double, Estimate>> intermittency_probe(const std::vector<double>& x_list,
                                                             double bandwidth,
                                                             std::uint64_t replicas,
                                                             RngStream stream,
                                                             std::size_t grid_steps) {
  if (x_list.empty()) throw std::invalid_argument("intermittency_probe: empty x list");
  for (std::size_t i = 0; i < x_list.size(); ++i) {
    if (!(x_list[i] > 0.0)) throw std::invalid_argument("intermittency_probe: x must be positive");
    if (i > 0 && !(x_list[i] < x_list[i - 1]))
      throw std::invalid_argument("intermittency_probe: x list must be strictly decreasing");
  }
  if (replicas < 1) throw std::invalid_argument("intermittency_probe: replicas must be >= 1");

  const TimeGrid grid = TimeGrid::uniform(grid_steps);
  std::vector<Vec> offsets;
  for (double x : x_list) offsets.push_back(Vec{x / M_SQRT2, x / M_SQRT2});
  std::vector<double> sum(x_list.size(), 0.0), sumsq(x_list.size(), 0.0);
  for (std::uint64_t r = 0; r < replicas; ++r) {
    const BrownianPath path = sample_path(2, grid, stream.substream(r));
    for (std::size_t k = 0; k < offsets.size(); ++k) {
      const double v = silt_estimate(path, bandwidth, offsets[k]).value;
      sum[k] += v;
      sumsq[k] += v * v;
    }
  }
  const double nrep = static_cast<double>(replicas);
  std::vector<std::pair<double, Estimate>> out;
  for (std::size_t k = 0; k < x_list.size(); ++k) {
    Estimate e;
    e.value = sum[k] / nrep;
    e.samples = replicas;
    e.seed = stream.seed();
    if (replicas > 1) {
      const double var = std::max(0.0, (sumsq[k] - sum[k] * sum[k] / nrep) / (nrep - 1.0));
      e.std_error = std::sqrt(var / nrep);
    }
    out.emplace_back(x_list[k], e);
  }
  return out;
}

}  // namespace randcurve
