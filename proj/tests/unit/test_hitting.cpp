#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "randcurve/hitting.hpp"
#include "randcurve/special.hpp"

using namespace randcurve;

TEST_CASE("all-time hitting constant") {
  CHECK(wiener_hit_constant(3) == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-14));
  CHECK(wiener_hit_constant(4) == doctest::Approx(1.0 / (2.0 * M_PI * M_PI)).epsilon(1e-14));
  CHECK_THROWS_AS(wiener_hit_constant(2), std::invalid_argument);
}

TEST_CASE("chain scale product") {
  HitChainQuery q;
  q.dim = 3;
  q.start = Vec{0.0, 0.0, 0.0};
  q.targets = {Vec{1.0, 0.0, 0.0}, Vec{1.0, 1.0, 0.0}};
  q.radius = 0.1;
  CHECK(chain_asymptotic_scale(q) == doctest::Approx(0.01).epsilon(1e-12));

  HitChainQuery single;
  single.dim = 3;
  single.start = Vec{0.0, 0.0, 0.0};
  single.targets = {Vec{2.0, 0.0, 0.0}};
  single.radius = 0.1;
  CHECK(chain_asymptotic_scale(single) == doctest::Approx(0.05).epsilon(1e-12));
  HitChainQuery doubled = single;
  doubled.radius = 0.2;
  CHECK(chain_asymptotic_scale(doubled) / chain_asymptotic_scale(single) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("chain scale is multiplicative across a split") {
  HitChainQuery whole;
  whole.dim = 4;
  whole.start = Vec{0.0, 0.0, 0.0, 0.0};
  whole.targets = {Vec{1.0, 0, 0, 0}, Vec{1.0, 2.0, 0, 0}, Vec{0.5, 2.0, 1.0, 0}};
  whole.radius = 0.05;
  HitChainQuery head = whole;
  head.targets = {whole.targets[0], whole.targets[1]};
  HitChainQuery tail = whole;
  tail.start = whole.targets[1];
  tail.targets = {whole.targets[2]};
  CHECK(chain_asymptotic_scale(whole) ==
        doctest::Approx(chain_asymptotic_scale(head) * chain_asymptotic_scale(tail))
            .epsilon(1e-12));
}

TEST_CASE("gaussian ball probability closed forms") {
  CHECK(gaussian_ball_prob(Vec{0.0, 0.0}, 1.0, 50.0, 2) == doctest::Approx(1.0).epsilon(1e-9));
  // noncentral interval mass: G ~ N(0,1) landing in B(1, 1) = [0, 2]
  const double d1 = gaussian_ball_prob(Vec{1.0}, 1.0, 1.0, 1);
  CHECK(d1 == doctest::Approx(normal_cdf(2.0) - normal_cdf(0.0)).epsilon(1e-12));
  CHECK(d1 == doctest::Approx(0.4772499).epsilon(1e-6));
  CHECK(gaussian_ball_prob(Vec{0.0, 0.0}, 1.0, 1.0, 2) ==
        doctest::Approx(1.0 - std::exp(-0.5)).epsilon(1e-9));
  CHECK_THROWS_AS(gaussian_ball_prob(Vec{0.0}, 0.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("gaussian ball probability stays accurate in deep tails") {
  // noncentral d=1 tail: survival-function difference oracle
  const double lam = 14.0, t = 0.01;
  const double p = gaussian_ball_prob_norm(lam, 1.0, t, 1);
  const double oracle = normal_sf(lam - t) - normal_sf(lam + t);
  CHECK(p == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(p > 0.0);
  CHECK(p < 1e-40);
}

TEST_CASE("gaussian ball probability matches Monte Carlo") {
  RngStream stream(53, 0);
  struct Case {
    double mean, var, rad;
    std::size_t d;
  } cases[] = {{0.7, 0.8, 0.9, 2}, {1.5, 0.5, 1.0, 3}, {0.3, 2.0, 1.2, 4}};
  for (const auto& c : cases) {
    const double p = gaussian_ball_prob_norm(c.mean, c.var, c.rad, c.d);
    const std::size_t n = 1000000;
    std::size_t hits = 0;
    const double sd = std::sqrt(c.var);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < c.d; ++k) {
        double x = sd * stream.normal();
        if (k == 0) x -= c.mean;
        s += x * x;
      }
      if (s <= c.rad * c.rad) ++hits;
    }
    const double mc = static_cast<double>(hits) / n;
    const double se = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::fabs(mc - p) < 4.0 * se);
  }
}

TEST_CASE("offset ball mass grows with the variance until it saturates") {
  // mass reaching a ball away from the center rises with the spread
  double prev = 0.0;
  for (double var : {0.05, 0.2, 0.5, 1.0, 2.0}) {
    const double p = gaussian_ball_prob_norm(2.0, var, 0.5, 2);
    CHECK(p >= prev);
    prev = p;
  }
}

TEST_CASE("ball probability is monotone in the radius") {
  RngStream stream(59, 0);
  for (int i = 0; i < 50; ++i) {
    const double mean = 2.0 * std::fabs(stream.normal());
    const double var = 0.1 + stream.uniform01();
    const double r1 = 0.1 + stream.uniform01();
    const double r2 = r1 + 0.5 * stream.uniform01();
    const std::size_t d = 1 + static_cast<std::size_t>(stream.uniform01() * 4.0);
    CHECK(gaussian_ball_prob_norm(mean, var, r2, d) >=
          gaussian_ball_prob_norm(mean, var, r1, d) - 1e-12);
  }
}

TEST_CASE("ordered visit check on handcrafted paths") {
  const Vec A{1.0, 0.0, 0.0}, B{2.0, 0.0, 0.0};
  const std::vector<Vec> path = {Vec{0, 0, 0}, A, Vec{1.5, 0.5, 0}, B};
  CHECK(hit_chain_match(path, {A, B}, 0.1));
  CHECK_FALSE(hit_chain_match(path, {B, A}, 0.1));
  CHECK_FALSE(hit_chain_match({Vec{0, 0, 0}, A}, {A, A}, 0.1));
}

TEST_CASE("mc hit chain basics") {
  HitChainQuery q;
  q.dim = 3;
  q.start = Vec{1.0, 0.0, 0.0};
  q.targets = {Vec{1.0, 0.0, 0.0}};  // start inside the ball
  q.radius = 0.2;
  const Estimate e = mc_hit_chain(q, 200, TimeGrid::uniform(16), RngStream(61, 0));
  CHECK(e.value == 1.0);
  CHECK(e.std_error == 0.0);

  HitChainQuery q2;
  q2.dim = 3;
  q2.start = Vec{0.0, 0.0, 0.0};
  q2.targets = {Vec{1.0, 0.0, 0.0}};
  q2.radius = 0.2;
  const Estimate a = mc_hit_chain(q2, 500, TimeGrid::uniform(200), RngStream(61, 1));
  const Estimate b = mc_hit_chain(q2, 500, TimeGrid::uniform(200), RngStream(61, 1));
  CHECK(a.value == b.value);
  CHECK(a.value > 0.0);
  CHECK(a.value < 0.3);
}

TEST_CASE("appending a target cannot raise the hit probability") {
  HitChainQuery q1;
  q1.dim = 3;
  q1.start = Vec{0.0, 0.0, 0.0};
  q1.targets = {Vec{0.8, 0.0, 0.0}};
  q1.radius = 0.25;
  HitChainQuery q2 = q1;
  q2.targets.push_back(Vec{0.0, 0.8, 0.0});
  const TimeGrid grid = TimeGrid::uniform(300);
  const Estimate e1 = mc_hit_chain(q1, 4000, grid, RngStream(67, 0));
  const Estimate e2 = mc_hit_chain(q2, 4000, grid, RngStream(67, 0));
  const double comb = std::hypot(e1.std_error, e2.std_error);
  CHECK(e2.value <= e1.value + 2.0 * comb);
}

TEST_CASE("type rate sequence in one dimension") {
  const std::vector<Vec> centers = {Vec{0.0}, Vec{1.0}};
  const std::vector<std::size_t> alpha = {1, 2};
  const auto rates = type_rate_sequence(centers, alpha, 0.1, {25, 50, 100, 200}, 1);
  REQUIRE(rates.size() == 4);

  // independent erf-based evaluation of the same chain
  const auto oracle_rate = [&](std::size_t n) {
    double acc = 0.0;
    double prev = 0.0;
    const double sd = std::sqrt(1.0 / n), rad = 0.1 / n;
    for (std::size_t k = 0; k < n; ++k) {
      const double z = (k % 2 == 0) ? 0.0 : 1.0;
      const double step = std::fabs(z - prev);
      acc += std::log(normal_sf((step - rad) / sd) - normal_sf((step + rad) / sd));
      prev = z;
    }
    return acc / (static_cast<double>(n) * n);
  };
  for (const auto& [n, rate] : rates)
    CHECK(rate == doctest::Approx(oracle_rate(n)).epsilon(1e-9));

  // convergence: successive gaps shrink toward the -1/2 limit
  for (std::size_t i = 0; i + 1 < rates.size(); ++i)
    CHECK(std::fabs(rates[i + 1].second - rates[i].second) <
          std::fabs(i > 0 ? rates[i].second - rates[i - 1].second : 1.0));

  // zero-displacement chain: rate tends to zero from below
  const auto flat = type_rate_sequence({Vec{0.0}}, {1}, 0.1, {50, 100, 200, 400}, 1);
  for (std::size_t i = 0; i + 1 < flat.size(); ++i) {
    CHECK(flat[i].second < 0.0);
    CHECK(flat[i + 1].second > flat[i].second);
  }
  CHECK(std::fabs(flat.back().second) < 0.02);
}

TEST_CASE("type rate scales with the squared displacement") {
  const auto r1 = type_rate_sequence({Vec{0.0}, Vec{1.0}}, {1, 2}, 0.1, {200}, 1);
  const auto r2 = type_rate_sequence({Vec{0.0}, Vec{2.0}}, {1, 2}, 0.1, {200}, 1);
  CHECK(std::fabs(r1[0].second - (-0.5)) < 0.05 * 0.5);
  CHECK(std::fabs(r2[0].second - (-2.0)) < 0.05 * 2.0);
}

TEST_CASE("hit query validation") {
  HitChainQuery q;
  q.dim = 2;
  q.start = Vec{0.0, 0.0};
  q.targets = {Vec{1.0, 0.0}};
  q.radius = 0.1;
  CHECK_THROWS_AS(validate_hit_query(q), std::invalid_argument);
  q.dim = 3;
  q.start = Vec{0.0, 0.0, 0.0};
  q.targets = {Vec{1.0, 0.0, 0.0}, Vec{1.0, 0.0, 0.0}};
  CHECK_THROWS_AS(validate_hit_query(q), std::invalid_argument);
}
