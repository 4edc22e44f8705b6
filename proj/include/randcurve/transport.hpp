#pragma once
#include <cstdint>
#include <tuple>
#include <utility>

#include "randcurve/vec.hpp"

namespace randcurve {

// weighted atoms in R^d; weights positive, summing to one
struct EmpiricalMeasure {
  std::vector<Vec> atoms;
  std::vector<double> weights;

  static EmpiricalMeasure equal_weight(std::vector<Vec> atoms);
};

void validate_measure(const EmpiricalMeasure& mu);

struct TransportPlan {
  // (source atom, target atom, mass)
  std::vector<std::tuple<std::size_t, std::size_t, double>> flows;
  // largest |weight - scaled integer mass| across both margins; zero whenever
  // the weights fit a common denominator within the cap
  double weight_rounding_error = 0.0;
};

// ||u-v|| / (1 + ||u-v||), bounded by 1
double bounded_cost(const Vec& u, const Vec& v);

// exact optimal transport under the bounded cost via min-cost flow on the
// complete bipartite atom graph; weights are scaled to a common integer
// denominator (capped at 10^6, beyond which they are rounded)
std::pair<double, TransportPlan> rho(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

double rho_value(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

}  // namespace randcurve
