#include "randcurve/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace randcurve {

EmpiricalMeasure EmpiricalMeasure::equal_weight(std::vector<Vec> atoms) {
  EmpiricalMeasure m;
  m.weights.assign(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
  m.atoms = std::move(atoms);
  return m;
}

void validate_measure(const EmpiricalMeasure& mu) {
  if (mu.atoms.empty()) throw std::invalid_argument("EmpiricalMeasure: no atoms");
  if (mu.atoms.size() != mu.weights.size())
    throw std::invalid_argument("EmpiricalMeasure: atoms/weights length mismatch");
  const std::size_t d = mu.atoms.front().size();
  double sum = 0.0;
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    if (mu.atoms[i].size() != d) throw std::invalid_argument("EmpiricalMeasure: mixed dimensions");
    if (!all_finite(mu.atoms[i])) throw std::invalid_argument("EmpiricalMeasure: non-finite atom");
    if (!(mu.weights[i] > 0.0)) throw std::invalid_argument("EmpiricalMeasure: weights must be positive");
    sum += mu.weights[i];
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("EmpiricalMeasure: weights must sum to 1");
}

double bounded_cost(const Vec& u, const Vec& v) {
  const double r = dist(u, v);
  return r / (1.0 + r);
}

namespace {

constexpr std::int64_t kDenominatorCap = 1000000;

// smallest denominator q <= cap with |w*q - round(w*q)| tiny, by continued fractions
std::int64_t rational_denominator(double w, std::int64_t cap) {
  double x = w;
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int it = 0; it < 64; ++it) {
    const double fl = std::floor(x);
    const std::int64_t a = static_cast<std::int64_t>(fl);
    const std::int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > cap || q2 <= 0) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (std::fabs(w - static_cast<double>(p1) / static_cast<double>(q2 == 0 ? 1 : q1)) < 1e-12)
      break;
    const double frac = x - fl;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  return q1 > 0 ? q1 : 1;
}

std::int64_t lcm_capped(std::int64_t a, std::int64_t b, std::int64_t cap) {
  const std::int64_t g = std::gcd(a, b);
  const std::int64_t l = a / g * b;
  return (l > cap || l <= 0) ? cap : l;
}

// integer masses summing exactly to `denom` (largest-remainder rounding)
std::vector<std::int64_t> scale_weights(const std::vector<double>& w, std::int64_t denom) {
  std::vector<std::int64_t> m(w.size());
  std::vector<std::pair<double, std::size_t>> rem(w.size());
  std::int64_t total = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double exact = w[i] * static_cast<double>(denom);
    m[i] = static_cast<std::int64_t>(std::floor(exact));
    rem[i] = {exact - std::floor(exact), i};
    total += m[i];
  }
  std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; total < denom && i < rem.size(); ++i, ++total) ++m[rem[i].second];
  if (total != denom) {  // defensively absorb into the largest cell
    std::size_t big = 0;
    for (std::size_t i = 1; i < m.size(); ++i)
      if (m[i] > m[big]) big = i;
    m[big] += denom - total;
  }
  return m;
}

// successive shortest augmenting paths with Johnson potentials on the
// complete bipartite graph; exact for integral supplies
struct BipartiteFlow {
  std::size_t m, n;
  std::vector<double> cost;           // m x n
  std::vector<std::int64_t> supply;   // size m
  std::vector<std::int64_t> demand;   // size n
  std::vector<std::int64_t> flow;     // m x n

  double solve() {
    flow.assign(m * n, 0);
    std::vector<double> pot_src(m, 0.0), pot_dst(n, 0.0);
    // initial potentials: one Bellman-Ford-style relaxation (graph is bipartite,
    // all residual arcs go source->target initially)
    for (std::size_t j = 0; j < n; ++j) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) best = std::min(best, cost[i * n + j]);
      pot_dst[j] = best;
    }
    std::int64_t remaining = 0;
    for (std::int64_t s : supply) remaining += s;

    std::vector<std::int64_t> res_supply = supply, res_demand = demand;
    while (remaining > 0) {
      // Dijkstra over nodes: sources 0..m-1, targets m..m+n-1
      const std::size_t N = m + n;
      std::vector<double> dist(N, std::numeric_limits<double>::infinity());
      std::vector<int> prev(N, -1);
      using Item = std::pair<double, std::size_t>;
      std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
      for (std::size_t i = 0; i < m; ++i)
        if (res_supply[i] > 0) {
          dist[i] = 0.0;
          pq.push({0.0, i});
        }
      while (!pq.empty()) {
        const auto [d0, u] = pq.top();
        pq.pop();
        if (d0 > dist[u] + 1e-15) continue;
        if (u < m) {
          const std::size_t i = u;
          for (std::size_t j = 0; j < n; ++j) {
            const double rc = cost[i * n + j] + pot_src[i] - pot_dst[j];
            const double nd = dist[u] + std::max(0.0, rc);
            if (nd < dist[m + j] - 1e-18) {
              dist[m + j] = nd;
              prev[m + j] = static_cast<int>(i);
              pq.push({nd, m + j});
            }
          }
        } else {
          const std::size_t j = u - m;
          for (std::size_t i = 0; i < m; ++i) {
            if (flow[i * n + j] <= 0) continue;  // reverse arc
            const double rc = -(cost[i * n + j] + pot_src[i] - pot_dst[j]);
            const double nd = dist[u] + std::max(0.0, rc);
            if (nd < dist[i] - 1e-18) {
              dist[i] = nd;
              prev[i] = static_cast<int>(m + j);
              pq.push({nd, i});
            }
          }
        }
      }
      // closest target with unmet demand
      std::size_t best_j = n;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j)
        if (res_demand[j] > 0 && dist[m + j] < best_d) {
          best_d = dist[m + j];
          best_j = j;
        }
      if (best_j == n) throw std::runtime_error("transport: flow infeasible");
      // update potentials
      for (std::size_t i = 0; i < m; ++i)
        if (std::isfinite(dist[i])) pot_src[i] += dist[i];
      for (std::size_t j = 0; j < n; ++j)
        if (std::isfinite(dist[m + j])) pot_dst[j] += dist[m + j];
      // trace path, find bottleneck
      std::int64_t push = res_demand[best_j];
      {
        std::size_t u = m + best_j;
        while (prev[u] != -1) {
          const std::size_t p = static_cast<std::size_t>(prev[u]);
          if (u >= m) {
            // arc p -> u (forward): capacity unlimited
          } else {
            push = std::min(push, flow[u * n + (p - m)]);
          }
          u = p;
        }
        push = std::min(push, res_supply[u]);
      }
      // apply
      {
        std::size_t u = m + best_j;
        while (prev[u] != -1) {
          const std::size_t p = static_cast<std::size_t>(prev[u]);
          if (u >= m)
            flow[p * n + (u - m)] += push;
          else
            flow[u * n + (p - m)] -= push;
          u = p;
        }
        res_supply[u] -= push;
      }
      res_demand[best_j] -= push;
      remaining -= push;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (flow[i * n + j] > 0) total += static_cast<double>(flow[i * n + j]) * cost[i * n + j];
    return total;
  }
};

}  // namespace

std::pair<double, TransportPlan> rho(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  validate_measure(mu);
  validate_measure(nu);
  if (mu.atoms.front().size() != nu.atoms.front().size())
    throw std::invalid_argument("rho: dimension mismatch");

  std::int64_t denom = 1;
  for (double w : mu.weights) denom = lcm_capped(denom, rational_denominator(w, kDenominatorCap), kDenominatorCap);
  for (double w : nu.weights) denom = lcm_capped(denom, rational_denominator(w, kDenominatorCap), kDenominatorCap);

  BipartiteFlow net;
  net.m = mu.atoms.size();
  net.n = nu.atoms.size();
  net.supply = scale_weights(mu.weights, denom);
  net.demand = scale_weights(nu.weights, denom);
  net.cost.resize(net.m * net.n);
  for (std::size_t i = 0; i < net.m; ++i)
    for (std::size_t j = 0; j < net.n; ++j)
      net.cost[i * net.n + j] = bounded_cost(mu.atoms[i], nu.atoms[j]);

  const double total = net.solve() / static_cast<double>(denom);
  TransportPlan plan;
  for (std::size_t i = 0; i < net.m; ++i)
    for (std::size_t j = 0; j < net.n; ++j)
      if (net.flow[i * net.n + j] > 0)
        plan.flows.emplace_back(i, j,
                                static_cast<double>(net.flow[i * net.n + j]) /
                                    static_cast<double>(denom));
  for (std::size_t i = 0; i < net.m; ++i)
    plan.weight_rounding_error =
        std::max(plan.weight_rounding_error,
                 std::fabs(mu.weights[i] - static_cast<double>(net.supply[i]) / denom));
  for (std::size_t j = 0; j < net.n; ++j)
    plan.weight_rounding_error =
        std::max(plan.weight_rounding_error,
                 std::fabs(nu.weights[j] - static_cast<double>(net.demand[j]) / denom));
  return {total, std::move(plan)};
}

double rho_value(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  return rho(mu, nu).first;
}

}  // namespace randcurve
