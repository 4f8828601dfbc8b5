#include <cmath>
#include <random>

#include "doctest.h"
#include "memolab/adversary.hpp"
#include "memolab/error.hpp"
#include "memolab/stats.hpp"

using namespace memolab;

namespace {

// Level 1: [0.45, 0.55]; level 2: [0.15, 0.25].
std::shared_ptr<const RandomPartition> two_level() {
  return std::make_shared<RandomPartition>(
      RandomPartition::unit_interval_from_centers({0.1, 0.1}, {{0.5}, {0.2}}));
}

std::string code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const LabError& e) {
    return e.code();
  }
  return "";
}

ProcessSampler visit_list() {
  std::vector<Point> pts(6, Point(0.9));
  pts.emplace_back(0.5);  // step 7
  pts.emplace_back(0.9);
  pts.emplace_back(0.2);  // step 9
  for (int i = 0; i < 40; ++i) pts.emplace_back(0.9);
  return ProcessSampler::deterministic_list(pts, 0);
}

}  // namespace

TEST_CASE("first visits on a fixed list") {
  auto part = two_level();
  auto xs = visit_list().rollout(49, 0).points;
  auto tau = first_visits(*part, xs);
  CHECK(tau == std::vector<std::size_t>{7, 9});
  auto th = estimate_first_visit_thresholds(visit_list(), *part, 1000, 49);
  REQUIRE(th.size() == 2);
  CHECK(th[0].T == 7);
  CHECK(th[1].T == 9);
  CHECK(th[0].reachable);
  CHECK(th[0].certified);
}

TEST_CASE("witness pairs and cell constancy") {
  auto part = two_level();
  auto th = estimate_first_visit_thresholds(visit_list(), *part, 1000, 49);
  auto target = sample_adversarial_target(part, th, LossModel::squared(), 11);
  CHECK(target.pair(1) == std::pair<Value, Value>{0.0, 6.0});
  for (int k = 1; k <= 2; ++k) {
    auto [a, b] = target.pair(k);
    CHECK(LossModel::squared().evaluate(a, b) >= 2 * 2 * static_cast<double>(target.threshold(k)));
  }
  CHECK(target(Point(0.9)) == 0.0);

  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int pairs = 0;
  while (pairs < 1000) {
    Point a(u(g)), b(u(g));
    if (target.cell(a) != target.cell(b)) continue;
    ++pairs;
    CHECK(target(a) == target(b));
  }
  auto f = target.as_target();
  CHECK(f.mean(Point(0.5)) == target(Point(0.5)));
}

TEST_CASE("coins are fair across draws") {
  auto part = two_level();
  auto th = estimate_first_visit_thresholds(visit_list(), *part, 1000, 49);
  std::size_t heads = 0;
  const std::size_t n = 2000;
  for (std::size_t r = 0; r < n; ++r) heads += AdversarialTarget(part, th, LossModel::squared(), 5, r).coin(1);
  CHECK(binomial_lower_bound(heads, n) < 0.5);
  CHECK(binomial_upper_bound(heads, n) > 0.5);
}

TEST_CASE("iid first-visit quantile against the geometric law") {
  auto part = two_level();
  auto sampler = ProcessSampler::iid_uniform(1, 17);
  auto th = estimate_first_visit_thresholds(sampler, *part, 4000, 2000);
  // Cell probabilities: 0.1 each; tau_k is geometric.
  for (int k = 1; k <= 2; ++k) {
    const double q = 1.0 - std::ldexp(1.0, -k);
    const double exact = std::ceil(std::log(1.0 - q) / std::log(0.9));
    CHECK(th[static_cast<std::size_t>(k - 1)].T >= exact);
    CHECK(th[static_cast<std::size_t>(k - 1)].T <= 1.5 * exact);
    CHECK(th[static_cast<std::size_t>(k - 1)].visits == 4000);
  }
}

TEST_CASE("unreachable levels") {
  auto part = two_level();
  auto never = ProcessSampler::deterministic_list({Point(0.9)}, 0);
  CHECK(code_of([&] { estimate_first_visit_thresholds(never, *part, 1000, 100); }) == errc::kHorizonInsufficient);
  auto one = ProcessSampler::deterministic_list({Point(0.9), Point(0.5)}, 0);
  auto th = estimate_first_visit_thresholds(one, *part, 1000, 100);
  CHECK(th[0].T == 2);
  CHECK_FALSE(th[1].reachable);
  CHECK(th[1].T == 0);
  auto target = sample_adversarial_target(part, th, LossModel::squared(), 1);
  CHECK(target.pair(2) == std::pair<Value, Value>{0.0, 0.0});
}

TEST_CASE("memorization is defeated, the oracle is not") {
  auto part = two_level();
  auto sampler = visit_list();
  auto th = estimate_first_visit_thresholds(sampler, *part, 1000, 49);
  auto loss = LossModel::squared();
  auto rows = evaluate_defeat(rule_factory(RuleKind::kMemorization, loss, MetricSpace::unit_interval()), sampler, part,
                              th, loss, 500, 49, 9);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.runs == 500);
    CHECK(r.mean_loss >= 0.9 * static_cast<double>(r.T));
    CHECK(r.mean_tau == static_cast<double>(r.T));
    CHECK(r.mean_running >= 0.9);
  }
  auto oracle = evaluate_defeat(oracle_factory(), sampler, part, th, loss, 50, 49, 9);
  for (const auto& r : oracle) CHECK(r.mean_loss == 0.0);
}

TEST_CASE("novelty test is fooled at the expected switch points") {
  auto tr = fool_hypothesis_test(novelty_test(), dyadic_sequence(), 200, 6, 1);
  CHECK(tr.switch_indices() == std::vector<std::size_t>{0, 1, 2, 3, 6, 7, 14});
  for (std::size_t k = 0; k < tr.steps.size(); ++k) {
    const auto& s = tr.steps[k];
    CHECK(s.mode == static_cast<int>(k % 2));
    if (k % 2 == 0) CHECK(s.frequency > 0.75);
    else CHECK(s.frequency < 0.25);
  }
  REQUIRE(tr.sequence.size() == 15);
  // Constant stretches repeat x_0; fresh stretches never repeat.
  for (std::size_t t = 4; t <= 6; ++t) CHECK(tr.sequence[t] == tr.sequence[0]);
  CHECK(tr.sequence[7] != tr.sequence[0]);
  CHECK(tr.sequence[1] != tr.sequence[3]);
}

TEST_CASE("tests that cannot be fooled within the cap") {
  CHECK(code_of([] { fool_hypothesis_test(constant_test(1), dyadic_sequence(), 200, 4, 1, 256); }) ==
        errc::kTestNonconvergent);
  CHECK(code_of([] { fool_hypothesis_test(coin_test(), dyadic_sequence(), 200, 4, 1, 256); }) ==
        errc::kTestNonconvergent);
  // A constant-0 test is never certified at n_0.
  CHECK(code_of([] { fool_hypothesis_test(constant_test(0), dyadic_sequence(), 200, 2, 1, 64); }) ==
        errc::kTestNonconvergent);
}

TEST_CASE("dyadic sequence is distinct") {
  auto xs = dyadic_sequence();
  std::vector<Point> v;
  for (std::size_t i = 0; i < 500; ++i) v.push_back(xs(i));
  std::sort(v.begin(), v.end(), [](const Point& a, const Point& b) { return a < b; });
  CHECK(std::adjacent_find(v.begin(), v.end()) == v.end());
}
