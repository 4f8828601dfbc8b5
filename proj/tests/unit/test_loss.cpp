#include <cmath>
#include <random>

#include "doctest.h"
#include "memolab/error.hpp"
#include "memolab/loss.hpp"

using namespace memolab;

TEST_CASE("evaluate examples") {
  CHECK(LossModel::squared().evaluate(3, 3) == 0.0);
  CHECK(LossModel::squared().evaluate(0, 2) == 4.0);
  CHECK(LossModel::absolute().evaluate(-1, 2) == 3.0);
  CHECK(LossModel::zero_one(3).evaluate(1, 2) == 1.0);
  CHECK(LossModel::zero_one(3).evaluate(2, 2) == 0.0);
}

TEST_CASE("witness_pair examples") {
  auto sq = LossModel::squared();
  CHECK(sq.witness_pair(100) == std::pair<Value, Value>(0, 11));
  CHECK(sq.witness_pair(0) == std::pair<Value, Value>(0, 0));
  CHECK(sq.witness_pair(28) == std::pair<Value, Value>(0, 6));
  CHECK(LossModel::absolute().witness_pair(7) == std::pair<Value, Value>(0, 8));
  CHECK_THROWS_WITH_AS(LossModel::zero_one(2).witness_pair(1), doctest::Contains("bounded-loss"), LabError);
}

TEST_CASE("witness_pair always clears its threshold") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1e6);
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    auto loss = LossModel::power(p);
    for (int i = 0; i < 2000; ++i) {
      const double t = u(rng);
      auto [a, b] = loss.witness_pair(t);
      CHECK(loss.evaluate(a, b) >= t);
    }
  }
}

TEST_CASE("relaxed triangle with c = 2 for the squared loss on 1e5 triples") {
  auto loss = LossModel::squared();
  CHECK(loss.c_relaxed() == 2.0);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int i = 0; i < 100000; ++i) {
    const double a = u(rng), b = u(rng), c = u(rng);
    REQUIRE(loss.evaluate(a, c) <= 2.0 * (loss.evaluate(b, a) + loss.evaluate(b, c)) * (1 + 1e-12));
    REQUIRE(loss.evaluate(a, b) == loss.evaluate(b, a));
    REQUIRE(loss.evaluate(a, a) == 0.0);
  }
}

TEST_CASE("relaxed triangle constants for other exponents") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (double p : {1.0, 1.5, 3.0}) {
    auto loss = LossModel::power(p);
    for (int i = 0; i < 10000; ++i) {
      const double a = u(rng), b = u(rng), c = u(rng);
      CHECK(loss.evaluate(a, c) <= loss.c_relaxed() * (loss.evaluate(b, a) + loss.evaluate(b, c)) * (1 + 1e-12));
    }
  }
  CHECK(LossModel::zero_one(4).c_relaxed() == 1.0);
  CHECK(LossModel::power(3).c_relaxed() == 4.0);
}

TEST_CASE("default value is the origin") {
  CHECK(LossModel::squared().default_value() == 0.0);
  CHECK(LossModel::zero_one(3).default_value() == 0.0);
}
