#include <cmath>
#include <random>

#include "doctest.h"
#include "memolab/frechet.hpp"

using namespace memolab;

namespace {

FrechetProblem real(std::vector<Value> s, double p) {
  FrechetProblem f;
  f.samples = std::move(s);
  f.power = p;
  return f;
}

// Oracle: direct sum, written independently of the library.
double naive_risk(Value y, const std::vector<Value>& s, double p) {
  double acc = 0.0;
  for (Value v : s) acc += std::pow(std::abs(y - v), p);
  return acc / s.size();
}

}  // namespace

TEST_CASE("frechet_mean examples") {
  auto a = frechet_mean(real({0, 1, 2}, 2));
  CHECK(a.minimizer == 1.0);
  CHECK(a.risk == doctest::Approx(2.0 / 3));

  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    auto one = frechet_mean(real({4.25}, p));
    CHECK(one.minimizer == 4.25);
    CHECK(one.risk == 0.0);
  }

  auto m = frechet_mean(real({0, 0, 3}, 1));
  CHECK(m.minimizer == 0.0);
  CHECK(m.risk == 1.0);

  CHECK(frechet_mean(real({5, 9}, 1)).minimizer == 5.0);
}

TEST_CASE("empirical_risk examples") {
  CHECK(empirical_risk(1, real({0, 1, 2}, 2)) == doctest::Approx(2.0 / 3));
  CHECK(empirical_risk(7, real({7}, 3)) == 0.0);
  CHECK(empirical_risk(0, real({0, 0, 3}, 1)) == 1.0);
}

TEST_CASE("minimizer beats random probes and stays in the confinement ball") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_int_distribution<int> size(1, 30);
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    for (int inst = 0; inst < 20; ++inst) {
      std::vector<Value> s(size(rng));
      for (auto& v : s) v = u(rng);
      auto prob = real(s, p);
      auto res = frechet_mean(prob);
      const double tol = res.resolution > 0 ? 1e-6 * (1 + res.risk) : 1e-12 * (1 + res.risk);
      for (int k = 0; k < 1000; ++k) {
        const double y = u(rng) * 2;
        REQUIRE(res.risk <= naive_risk(y, s, p) + tol);
      }
      double mean_dp = 0;
      for (Value v : s) mean_dp += std::pow(std::abs(v), p);
      CHECK(std::pow(std::abs(res.minimizer), p) <= std::pow(2.0, p) * mean_dp / s.size() * (1 + 1e-12));
    }
  }
}

TEST_CASE("p = 2 minimizer equals the sample mean on 1e3 multisets") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int inst = 0; inst < 1000; ++inst) {
    std::vector<Value> s(1 + inst % 50);
    double sum = 0;
    for (auto& v : s) sum += (v = u(rng));
    const double mean = sum / s.size();
    CHECK(std::abs(frechet_mean(real(s, 2)).minimizer - mean) <= 1e-12 * std::max(1.0, std::abs(mean)));
  }
}

TEST_CASE("discrete metric gives the mode with ties to the smallest label") {
  FrechetProblem f;
  f.samples = {2, 1, 2, 1, 0};
  f.metric = ValueMetric::kDiscrete;
  CHECK(frechet_mean(f).minimizer == 1.0);
  CHECK(frechet_mean(f).risk == doctest::Approx(0.6));
}

TEST_CASE("accumulator agrees with the batch solver") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> lab(0, 6);
  for (double p : {1.0, 2.0, 1.5}) {
    FrechetAccumulator acc(p, ValueMetric::kReal);
    std::vector<Value> seen;
    for (int i = 0; i < 60; ++i) {
      const Value y = lab(rng) * 0.5;
      acc.add(y);
      seen.push_back(y);
      CHECK(acc.mean() == doctest::Approx(frechet_mean(real(seen, p)).minimizer).epsilon(1e-12));
    }
  }
  FrechetAccumulator d(1, ValueMetric::kDiscrete);
  for (Value y : {3.0, 1.0, 3.0, 1.0}) d.add(y);
  CHECK(d.mean() == 1.0);
}

TEST_CASE("population minimum oracle") {
  std::vector<Value> v{0, 1, 2};
  std::vector<double> w{1, 1, 1};
  auto [y, r] = population_minimum(v, w, 2);
  CHECK(y == doctest::Approx(1.0));
  CHECK(r == doctest::Approx(2.0 / 3));
  std::vector<Value> v2{0, 3};
  std::vector<double> w2{1, 1};
  CHECK(population_minimum(v2, w2, 1).second == doctest::Approx(1.5));
}

TEST_CASE("check_convergence examples") {
  std::vector<Value> v{0, 1, 2};
  std::vector<double> w{1, 1, 1};
  std::vector<std::size_t> sizes{100, 10000};
  auto rows = check_convergence(v, w, 2, sizes, 20, 7);
  CHECK(rows[1].optimal_risk == doctest::Approx(2.0 / 3));
  CHECK(rows[1].mean_gap < 0.05);

  std::vector<Value> pm{1.5};
  std::vector<double> pw{1};
  auto degenerate = check_convergence(pm, pw, 2, sizes, 5, 1);
  CHECK(degenerate[0].max_gap == 0.0);

  std::vector<Value> v3{0, 3};
  std::vector<double> w3{1, 1};
  auto l1 = check_convergence(v3, w3, 1, sizes, 20, 3);
  CHECK(l1[0].optimal_risk == doctest::Approx(1.5));
  CHECK(l1[1].mean_gap < 0.05);
}
