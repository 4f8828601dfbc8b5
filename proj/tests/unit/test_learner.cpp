#include <cmath>
#include <unordered_set>

#include "doctest.h"
#include "memolab/learner.hpp"

using namespace memolab;

TEST_CASE("memorization predict and observe") {
  MemorizationRule m;
  CHECK(m.predict(0.7) == 0.0);
  m.observe(0.3, 5);
  CHECK(m.predict(0.3) == 5.0);
  m.observe(0.3, 9);
  CHECK(m.predict(0.3) == 5.0);
  CHECK(m.predict(0.3) == m.predict(0.3));
  CHECK(m.stored() == 1);
}

TEST_CASE("frechet memorizer") {
  FrechetMemorizer sq(LossModel::squared());
  for (Value y : {0.0, 1.0, 2.0}) sq.observe(0.3, y);
  CHECK(sq.predict(0.3) == 1.0);
  CHECK(sq.labels_at(0.3) == 3);
  CHECK(sq.predict(0.4) == 0.0);

  FrechetMemorizer ab(LossModel::absolute());
  ab.observe(0.3, 5);
  ab.observe(0.3, 9);
  CHECK(ab.predict(0.3) == 5.0);
}

TEST_CASE("nearest neighbor breaks ties by insertion order") {
  NearestNeighborRule nn(MetricSpace::unit_interval());
  CHECK(nn.predict(0.5) == 0.0);
  nn.observe(0.2, 1);
  nn.observe(0.8, 2);
  CHECK(nn.predict(0.5) == 1.0);
  CHECK(nn.predict(0.7) == 2.0);
  NearestNeighborRule rev(MetricSpace::unit_interval());
  rev.observe(0.75, 2);
  rev.observe(0.25, 1);
  CHECK(rev.predict(0.5) == 2.0);
  rev.observe(0.75, 7);
  CHECK(rev.predict(0.75) == 2.0);

  NearestNeighborRule box(MetricSpace::box(2));
  box.observe(Point{0.1, 0.1}, 4);
  box.observe(Point{0.9, 0.9}, 6);
  CHECK(box.predict(Point{0.5, 0.5}) == 4.0);
  CHECK(box.predict(Point{0.6, 0.6}) == 6.0);
}

TEST_CASE("nearest neighbor agrees with a brute-force scan") {
  auto xs = ProcessSampler::iid_uniform(1, 4).rollout(400).points;
  auto qs = ProcessSampler::iid_uniform(1, 5).rollout(400).points;
  NearestNeighborRule nn(MetricSpace::unit_interval());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    nn.observe(xs[i], static_cast<Value>(i));
    std::size_t best = 0;
    for (std::size_t j = 1; j <= i; ++j)
      if (std::abs(xs[j].x() - qs[i].x()) < std::abs(xs[best].x() - qs[i].x())) best = j;
    REQUIRE(nn.predict(qs[i]) == static_cast<Value>(best));
  }
}

TEST_CASE("run_online on a constant process pays once") {
  MemorizationRule m;
  auto s = ProcessSampler::deterministic_list({0.4}, 0);
  auto run = run_online(m, s, Target::constant(3), LossModel::squared(), 64);
  const auto& tr = run.trajectory;
  REQUIRE(tr.per_round_losses.size() == 64);
  for (std::size_t T = 1; T <= 64; ++T) CHECK(tr.running_average[T - 1] == doctest::Approx(9.0 / T));
  CHECK(tr.checkpoints == std::vector<std::size_t>{1, 2, 4, 8, 16, 32, 64});
}

TEST_CASE("memorization errs at most once per distinct value") {
  std::vector<Point> vals;
  std::vector<Value> labels;
  for (int i = 0; i < 7; ++i) vals.emplace_back(i / 10.0), labels.push_back(i + 1.0);
  auto s = ProcessSampler::finite_support(vals, std::vector<double>(7, 1.0), 3);
  auto target = Target::table(vals, labels, 0.0);
  for (std::uint64_t r = 0; r < 50; ++r) {
    MemorizationRule m;
    auto run = run_online(m, s, target, LossModel::squared(), 2000, r);
    std::unordered_set<Point, PointHash> distinct(run.xs.begin(), run.xs.end());
    CHECK(run.trajectory.nonzero_rounds() <= distinct.size());
    double sum = 0;
    for (double l : run.trajectory.per_round_losses) sum += l;
    CHECK(run.trajectory.running_average.back() * 2000 == doctest::Approx(sum));
  }
}

TEST_CASE("all-new values miss every round") {
  MemorizationRule m;
  auto run = run_online(m, ProcessSampler::geometric_decay(0.5, 0), Target::constant(1), LossModel::squared(), 500);
  for (double a : run.trajectory.running_average) CHECK(a == 1.0);
}

TEST_CASE("inductive protocol") {
  auto two = ProcessSampler::finite_support({0.25, 0.75}, {1, 1}, 2);
  auto target = Target::affine(4, 1);
  auto xs = two.rollout(200).points;
  std::size_t last_novel = 0;
  std::unordered_set<Point, PointHash> seen;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (seen.insert(xs[i]).second) last_novel = i + 1;
  MemorizationRule m;
  CHECK(run_inductive(m, two, target, LossModel::squared(), last_novel + 1, 50) == 0.0);

  MemorizationRule cold;
  auto constant = ProcessSampler::deterministic_list({0.5}, 0);
  CHECK(run_inductive(cold, constant, Target::constant(2), LossModel::squared(), 1, 10) == 4.0);

  NearestNeighborRule nn(MetricSpace::unit_interval());
  CHECK(run_inductive(nn, two, target, LossModel::squared(), last_novel + 1, 50) == 0.0);
}

TEST_CASE("self-adaptive protocol") {
  auto two = ProcessSampler::finite_support({0.25, 0.75}, {1, 1}, 6);
  auto target = Target::affine(4, 1);
  MemorizationRule m;
  CHECK(run_self_adaptive(m, two, target, LossModel::squared(), 100, 40) == 0.0);

  // Labels frozen before round 1: memorization keeps predicting y0 = 0.
  MemorizationRule cold;
  auto xs = two.rollout(21).points;
  double want = 0;
  for (const auto& x : xs) want += std::pow(4 * x.x() + 1, 2);
  CHECK(run_self_adaptive(cold, two, target, LossModel::squared(), 1, 20) == doctest::Approx(want / 21));

  ConstantRule c;
  auto geo = ProcessSampler::geometric_decay(0.5, 0);
  auto gx = geo.rollout(11).points;
  double mean = 0;
  for (std::size_t i = 4; i < 11; ++i) mean += std::pow(4 * gx[i].x() + 1, 2);
  CHECK(run_self_adaptive(c, geo, target, LossModel::squared(), 5, 6) == doctest::Approx(mean / 7));
}

TEST_CASE("excess loss") {
  auto s = ProcessSampler::finite_support({0.1, 0.2, 0.3}, {1, 1, 1}, 5);
  auto target = Target::affine(10, 0);
  ConstantRule c;
  auto run = run_online(c, s, target, LossModel::squared(), 256);
  for (double e : excess_loss(run, [](const Point&) { return 0.0; }, LossModel::squared())) CHECK(e == 0.0);

  MemorizationRule m;
  auto mrun = run_online(m, s, target, LossModel::squared(), 256);
  auto ex = excess_loss(mrun, [](const Point&) { return 0.0; }, LossModel::squared());
  CHECK(ex.back() < 0.0);

  auto noisy = target.with_noise(0.5);
  FrechetMemorizer f(LossModel::squared());
  auto nrun = run_online(f, s, noisy, LossModel::squared(), 4096, 0, 9);
  auto bayes = excess_loss(nrun, [&](const Point& x) { return noisy.mean(x); }, LossModel::squared());
  CHECK(std::abs(bayes.back()) < 0.05);
}
