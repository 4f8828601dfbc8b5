#include <cmath>

#include "doctest.h"
#include "memolab/error.hpp"
#include "memolab/process.hpp"

using namespace memolab;

TEST_CASE("rollout examples") {
  auto list = ProcessSampler::deterministic_list({0.1, 0.2, 0.1}, 0).rollout(3).points;
  CHECK(list == std::vector<Point>{0.1, 0.2, 0.1});

  auto fs = ProcessSampler::finite_support({0.25, 0.75}, {1, 1}, 42).rollout(4).points;
  REQUIRE(fs.size() == 4);
  for (const auto& p : fs) CHECK((p == Point(0.25) || p == Point(0.75)));

  auto geo = ProcessSampler::geometric_decay(0.5, 0).rollout(3).points;
  CHECK(geo == std::vector<Point>{0.5, 0.25, 0.125});
}

TEST_CASE("rollouts are reproducible and prefix-consistent") {
  auto s = ProcessSampler::iid_uniform(2, 77);
  auto a = s.rollout(50, 3).points;
  auto b = s.rollout(80, 3).points;
  CHECK(a == std::vector<Point>(b.begin(), b.begin() + 50));
  CHECK_FALSE(a == s.rollout(50, 4).points);
  auto m = ProcessSampler::mixed(0.5, {0.1, 0.9}, {1, 1}, 5);
  CHECK(m.rollout(10, 8).infinite_event == m.rollout(30, 8).infinite_event);
}

TEST_CASE("prefix_stats examples") {
  auto space = MetricSpace::unit_interval();
  std::vector<Point> a{0.1, 0.2, 0.1};
  auto s = prefix_stats(a, space);
  CHECK(s.distinct_count == 2);
  CHECK(*s.min_gap == doctest::Approx(0.1));

  std::vector<Point> b{0.5};
  CHECK_FALSE(prefix_stats(b, space).min_gap.has_value());

  std::vector<Point> c{0.5, 0.25, 0.125, 0.0625};
  auto sc = prefix_stats(c, space);
  CHECK(sc.distinct_count == 4);
  CHECK(*sc.min_gap == 0.0625);
}

TEST_CASE("geometric decay is certainly infinite with distinct_count(t) = t") {
  auto s = ProcessSampler::geometric_decay(0.5, 0);
  CHECK(s.support_class() == SupportClass::kCertainlyInfinite);
  auto counts = distinct_counts(s.rollout(1000).points);
  for (std::size_t t = 0; t < counts.size(); ++t) REQUIRE(counts[t] == t + 1);
}

TEST_CASE("finite support saturates within 100 m steps") {
  const std::size_t m = 6;
  std::vector<Point> values;
  for (std::size_t i = 0; i < m; ++i) values.emplace_back(static_cast<double>(i) / 8);
  auto s = ProcessSampler::finite_support(values, std::vector<double>(m, 1.0), 19);
  CHECK(s.support_class() == SupportClass::kCertainlyFinite);
  CHECK(s.support_size() == std::optional<std::size_t>(m));
  int saturated = 0;
  for (std::size_t trial = 0; trial < 1000; ++trial) {
    auto counts = distinct_counts(s.rollout(100 * m, trial).points);
    REQUIRE(counts.back() <= m);
    saturated += counts.back() == m;
  }
  CHECK(saturated >= 990);
}

TEST_CASE("prefix stats are monotone under extension") {
  auto space = MetricSpace::unit_interval();
  auto pts = ProcessSampler::iid_uniform(1, 8).rollout(300).points;
  std::size_t last_count = 0;
  double last_gap = INFINITY;
  for (std::size_t t = 1; t <= pts.size(); ++t) {
    auto s = prefix_stats(std::span<const Point>(pts.data(), t), space);
    CHECK(s.distinct_count >= last_count);
    if (s.min_gap) {
      CHECK(*s.min_gap <= last_gap);
      last_gap = *s.min_gap;
    }
    last_count = s.distinct_count;
  }
}

TEST_CASE("alternating process switches between constant and fresh blocks") {
  auto s = ProcessSampler::alternating(0.0, {3, 5}, 0);
  auto p = s.rollout(12).points;
  for (int t = 0; t < 3; ++t) CHECK(p[t] == Point(0.0));
  CHECK(p[3] == Point(0.125));
  CHECK(p[4] == Point(0.375));
  // Block after the last listed switch runs to 10, then fresh again.
  for (int t = 5; t < 10; ++t) CHECK(p[t] == Point(0.0));
  CHECK_FALSE(p[10] == Point(0.0));
}

TEST_CASE("mixed coin matches its probability") {
  auto s = ProcessSampler::mixed(0.3, {0.2, 0.4}, {1, 1}, 4);
  int hits = 0;
  for (int i = 0; i < 4000; ++i) hits += s.rollout(1, i).infinite_event;
  CHECK(hits / 4000.0 == doctest::Approx(0.3).epsilon(0.15));
  CHECK(s.support_class() == SupportClass::kMixed);
}

TEST_CASE("sampler validation") {
  CHECK_THROWS_AS(ProcessSampler::geometric_decay(1.0, 0), LabError);
  CHECK_THROWS_AS(ProcessSampler::finite_support({0.1}, {1, 2}, 0), LabError);
  CHECK_THROWS_AS(ProcessSampler::mixed(1.5, {0.1}, {1}, 0), LabError);
  CHECK_THROWS_AS(ProcessSampler::alternating(0.0, {5, 3}, 0), LabError);
}
