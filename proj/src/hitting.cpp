#include "randcurve/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "randcurve/special.hpp"

namespace randcurve {

void validate_hit_query(const HitChainQuery& q) {
  if (q.dim < 3) throw std::invalid_argument("HitChainQuery: dimension must be >= 3 (transience)");
  if (!(q.radius > 0.0)) throw std::invalid_argument("HitChainQuery: radius must be positive");
  if (q.start.size() != q.dim) throw std::invalid_argument("HitChainQuery: start dimension mismatch");
  if (q.targets.empty()) throw std::invalid_argument("HitChainQuery: no targets");
  for (const Vec& z : q.targets) {
    if (z.size() != q.dim) throw std::invalid_argument("HitChainQuery: target dimension mismatch");
    if (!all_finite(z)) throw std::invalid_argument("HitChainQuery: non-finite target");
  }
  for (std::size_t i = 0; i < q.targets.size(); ++i)
    for (std::size_t j = i + 1; j < q.targets.size(); ++j)
      if (dist(q.targets[i], q.targets[j]) == 0.0)
        throw std::invalid_argument("HitChainQuery: coincident targets");
}

double wiener_hit_constant(std::size_t d) {
  if (d < 3) throw std::invalid_argument("wiener_hit_constant: requires d >= 3");
  const double half = 0.5 * static_cast<double>(d);
  return std::tgamma(half - 1.0) / (2.0 * std::pow(M_PI, half));
}

double chain_asymptotic_scale(const HitChainQuery& q) {
  validate_hit_query(q);
  const double expo = 2.0 - static_cast<double>(q.dim);
  double scale = 1.0;
  const Vec* prev = &q.start;
  for (const Vec& z : q.targets) {
    const double r = dist(*prev, z);
    if (r == 0.0) throw std::invalid_argument("chain_asymptotic_scale: coincident consecutive points");
    scale *= std::pow(r, expo);
    prev = &z;
  }
  scale *= std::pow(q.radius, -expo * static_cast<double>(q.targets.size()));
  return scale;
}

double gaussian_ball_prob(const Vec& mean, double variance, double radius, std::size_t d) {
  if (mean.size() != d) throw std::invalid_argument("gaussian_ball_prob: mean dimension mismatch");
  return gaussian_ball_prob_norm(norm(mean), variance, radius, d);
}

double gaussian_ball_prob_norm(double mean_norm, double variance, double radius, std::size_t d) {
  if (!(variance > 0.0)) throw std::invalid_argument("gaussian_ball_prob: variance must be positive");
  if (!(radius > 0.0)) throw std::invalid_argument("gaussian_ball_prob: radius must be positive");
  if (d < 1) throw std::invalid_argument("gaussian_ball_prob: dimension must be positive");
  const double sd = std::sqrt(variance);
  const double lam = std::fabs(mean_norm) / sd;  // standardized center offset
  const double t = radius / sd;                  // standardized radius
  if (d == 1) return normal_sf(lam - t) - normal_sf(lam + t);
  // slice along the offset axis: remaining d-1 coordinates give a chi^2 factor
  const auto integrand = [&](double x) {
    const double rem = t * t - (x - lam) * (x - lam);
    if (rem <= 0.0) return 0.0;
    return normal_pdf(x) * chi2_cdf(d - 1, rem);
  };
  double lo = lam - t, hi = lam + t;
  // the standard normal weight is numerically zero beyond |x| ~ 38.6
  lo = std::max(lo, -40.0);
  hi = std::min(hi, 40.0);
  if (lo >= hi) return 0.0;
  return adaptive_simpson(integrand, lo, hi, 1e-11, 0.0);
}

bool hit_chain_match(const std::vector<Vec>& points, const std::vector<Vec>& targets,
                     double radius) {
  std::size_t i = 0;
  for (const Vec& z : targets) {
    bool found = false;
    for (; i < points.size(); ++i) {
      if (dist(points[i], z) <= radius) {
        ++i;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

namespace {

double point_segment_dist(const Vec& a, const Vec& b, const Vec& z) {
  double ab2 = 0.0, apz = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const double d = b[c] - a[c];
    ab2 += d * d;
    apz += d * (z[c] - a[c]);
  }
  double lam = (ab2 > 0.0) ? apz / ab2 : 0.0;
  lam = std::clamp(lam, 0.0, 1.0);
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const double d = a[c] + lam * (b[c] - a[c]) - z[c];
    s += d * d;
  }
  return std::sqrt(s);
}

// depth-first in-order refinement: split while the chord passes near a target
// and the step exceeds dt_min; emits interior points in time order
void refine_segment(double ta, double tb, const Vec& wa, const Vec& wb,
                    const std::vector<Vec>& targets, double near_dist, double dt_min,
                    RngStream& stream, std::vector<Vec>& out) {
  if (tb - ta <= dt_min) return;
  bool near = false;
  for (const Vec& z : targets)
    if (point_segment_dist(wa, wb, z) <= near_dist) {
      near = true;
      break;
    }
  if (!near) return;
  const double tm = 0.5 * (ta + tb);
  const double sd = 0.5 * std::sqrt(tb - ta);
  Vec wm(wa.size());
  for (std::size_t c = 0; c < wa.size(); ++c)
    wm[c] = 0.5 * (wa[c] + wb[c]) + sd * stream.normal();
  refine_segment(ta, tm, wa, wm, targets, near_dist, dt_min, stream, out);
  out.push_back(wm);
  refine_segment(tm, tb, wm, wb, targets, near_dist, dt_min, stream, out);
}

}  // namespace

Estimate mc_hit_chain(const HitChainQuery& q, std::uint64_t replicas, const TimeGrid& base_grid,
                      RngStream stream) {
  validate_hit_query(q);
  if (replicas < 1) throw std::invalid_argument("mc_hit_chain: replicas must be >= 1");
  validate_grid(base_grid);

  const double dt_min = std::pow(q.radius / 4.0, 2);
  const double near_dist = 2.0 * q.radius;
  std::uint64_t hits = 0;
  std::vector<Vec> pts;
  for (std::uint64_t r = 0; r < replicas; ++r) {
    RngStream rep = stream.substream(r);
    const BrownianPath path = sample_path(q.dim, base_grid, rep, q.start);
    // refinement draws follow the base-path draws on the same replica stream
    pts.clear();
    pts.push_back(path.points.front());
    for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
      refine_segment(path.grid.times[i], path.grid.times[i + 1], path.points[i],
                     path.points[i + 1], q.targets, near_dist, dt_min, rep, pts);
      pts.push_back(path.points[i + 1]);
    }
    if (hit_chain_match(pts, q.targets, q.radius)) ++hits;
  }
  Estimate e;
  e.samples = replicas;
  e.seed = stream.seed();
  e.value = static_cast<double>(hits) / static_cast<double>(replicas);
  e.std_error = std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(replicas));
  return e;
}

std::vector<std::pair<std::size_t, double>> type_rate_sequence(
    const std::vector<Vec>& centers, const std::vector<std::size_t>& alpha, double eps,
    const std::vector<std::size_t>& n_list, std::size_t d) {
  if (centers.empty()) throw std::invalid_argument("type_rate_sequence: no centers");
  if (alpha.empty()) throw std::invalid_argument("type_rate_sequence: empty alpha pattern");
  for (std::size_t a : alpha)
    if (a < 1 || a > centers.size())
      throw std::invalid_argument("type_rate_sequence: alpha index out of range");
  for (const Vec& z : centers)
    if (z.size() != d) throw std::invalid_argument("type_rate_sequence: center dimension mismatch");
  if (!(eps > 0.0)) throw std::invalid_argument("type_rate_sequence: eps must be positive");

  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(n_list.size());
  for (std::size_t n : n_list) {
    if (n < alpha.size())
      throw std::invalid_argument("type_rate_sequence: n shorter than the alpha pattern");
    const double var = 1.0 / static_cast<double>(n);
    const double rad = eps / static_cast<double>(n);
    double log_prod = 0.0;
    Vec prev(d, 0.0);  // chain starts at the origin
    for (std::size_t k = 0; k < n; ++k) {
      const Vec& zk = centers[alpha[k % alpha.size()] - 1];
      const double step = dist(zk, prev);
      const double p = gaussian_ball_prob_norm(step, var, rad, d);
      log_prod += std::log(p);  // log(0) = -inf reported as such
      prev = zk;
    }
    out.emplace_back(n, log_prod / (static_cast<double>(n) * static_cast<double>(n)));
  }
  return out;
}

}  // namespace randcurve
