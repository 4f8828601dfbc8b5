#include "memolab/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "memolab/error.hpp"
#include "memolab/stats.hpp"

namespace memolab {

std::vector<std::size_t> first_visits(const RandomPartition& partition, std::span<const Point> rollout) {
  const int K = partition.K_max();
  std::vector<std::size_t> tau(static_cast<std::size_t>(K), 0);
  int remaining = K;
  for (std::size_t t = 0; t < rollout.size() && remaining > 0; ++t) {
    const int k = partition.cell_index(rollout[t]).index;
    if (k == 0) continue;
    auto& slot = tau[static_cast<std::size_t>(k - 1)];
    if (slot == 0) {
      slot = t + 1;
      --remaining;
    }
  }
  return tau;
}

std::vector<VisitThreshold> estimate_first_visit_thresholds(const ProcessSampler& sampler,
                                                            const RandomPartition& partition, std::size_t trials,
                                                            std::size_t horizon) {
  if (trials == 0) throw LabError(errc::kTrialsInsufficient, "first-visit thresholds need at least one trial");
  if (horizon == 0) throw LabError(errc::kInvalidArgument, "horizon must be positive");
  const int K = partition.K_max();
  const std::size_t n = sampler.deterministic() ? 1 : trials;
  std::vector<std::vector<std::size_t>> taus(static_cast<std::size_t>(K));
  for (std::size_t i = 0; i < n; ++i) {
    const Rollout r = sampler.rollout(horizon, i);
    const auto tau = first_visits(partition, r.points);
    for (int k = 1; k <= K; ++k) taus[static_cast<std::size_t>(k - 1)].push_back(tau[static_cast<std::size_t>(k - 1)]);
  }
  std::vector<VisitThreshold> out;
  int reachable = 0;
  for (int k = 1; k <= K; ++k) {
    auto& v = taus[static_cast<std::size_t>(k - 1)];
    VisitThreshold th;
    th.k = k;
    th.trials = n;
    th.visits = static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](std::size_t t) { return t > 0; }));
    th.reachable = th.visits > 0;
    if (th.reachable) {
      ++reachable;
      std::sort(v.begin(), v.end());
      if (n == 1) {
        th.T = v.front();
        th.certified = true;
      } else {
        const std::size_t j = quantile_upper_order(n, 1.0 - std::ldexp(1.0, -k));
        th.certified = j <= n;
        th.T = v[std::min(j, n) - 1];
      }
    }
    out.push_back(th);
  }
  if (2 * reachable < K)
    throw LabError(errc::kHorizonInsufficient,
                   "only " + std::to_string(reachable) + " of " + std::to_string(K) + " levels entered within horizon " +
                       std::to_string(horizon));
  return out;
}

AdversarialTarget::AdversarialTarget(std::shared_ptr<const RandomPartition> partition,
                                     std::span<const VisitThreshold> thresholds, const LossModel& loss,
                                     std::uint64_t seed, std::uint64_t draw)
    : partition_(std::move(partition)), fallback_(loss.default_value()) {
  if (!partition_) throw LabError(errc::kInvalidArgument, "adversarial target needs a partition");
  const int K = partition_->K_max();
  if (thresholds.size() != static_cast<std::size_t>(K))
    throw LabError(errc::kInvalidArgument, "one threshold per partition level required");
  Engine engine = make_engine(seed, StreamTag::kTarget, draw);
  std::bernoulli_distribution fair(0.5);
  for (const auto& th : thresholds) {
    const double need = 2.0 * loss.c_relaxed() * static_cast<double>(th.T);
    auto p = loss.witness_pair(need);
    if (loss.evaluate(p.first, p.second) < need)
      throw LabError(errc::kInvalidArgument, "witness pair below 2 c T at level " + std::to_string(th.k));
    pairs_.push_back(p);
    thresholds_.push_back(th.T);
    coins_.push_back(fair(engine));
  }
}

int AdversarialTarget::cell(const Point& x) const { return partition_->cell_index(x).index; }

Value AdversarialTarget::operator()(const Point& x) const {
  const int k = cell(x);
  if (k == 0) return fallback_;
  const auto& p = pairs_[static_cast<std::size_t>(k - 1)];
  return coins_[static_cast<std::size_t>(k - 1)] ? p.second : p.first;
}

Target AdversarialTarget::as_target() const {
  auto self = std::make_shared<AdversarialTarget>(*this);
  return Target::function([self](const Point& x) { return (*self)(x); }, "adversarial");
}

AdversarialTarget sample_adversarial_target(std::shared_ptr<const RandomPartition> partition,
                                            std::span<const VisitThreshold> thresholds, const LossModel& loss,
                                            std::uint64_t seed) {
  return AdversarialTarget(std::move(partition), thresholds, loss, seed, 0);
}

namespace {

void fill_bound(const std::vector<double>& v, double& mean, double& lower) {
  if (v.empty()) return;
  const Summary s = aggregate_mean(v);
  mean = s.estimate;
  lower = s.lower;
}

}  // namespace

std::vector<DefeatRow> evaluate_defeat(const RuleFactory& rule, const ProcessSampler& sampler,
                                       std::shared_ptr<const RandomPartition> partition,
                                       std::span<const VisitThreshold> thresholds, const LossModel& loss,
                                       std::size_t runs, std::size_t horizon, std::uint64_t seed) {
  if (runs == 0) throw LabError(errc::kTrialsInsufficient, "defeat evaluation needs at least one run");
  const int K = partition->K_max();
  std::vector<std::vector<double>> first_loss(static_cast<std::size_t>(K)), running(static_cast<std::size_t>(K)),
      taus(static_cast<std::size_t>(K));
  for (std::size_t r = 0; r < runs; ++r) {
    AdversarialTarget target(partition, thresholds, loss, seed, r);
    auto learner = rule(target);
    const OnlineRun run = run_online(*learner, sampler, target.as_target(), loss, horizon, r, seed);
    const auto tau = first_visits(*partition, run.xs);
    for (std::size_t k = 0; k < tau.size(); ++k) {
      if (tau[k] == 0) continue;
      first_loss[k].push_back(run.trajectory.per_round_losses[tau[k] - 1]);
      running[k].push_back(run.trajectory.running_average[tau[k] - 1]);
      taus[k].push_back(static_cast<double>(tau[k]));
    }
  }
  std::vector<DefeatRow> rows;
  for (int k = 1; k <= K; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    if (first_loss[i].empty()) continue;
    DefeatRow row;
    row.k = k;
    row.T = thresholds[i].T;
    row.runs = first_loss[i].size();
    fill_bound(first_loss[i], row.mean_loss, row.loss_lower);
    fill_bound(running[i], row.mean_running, row.running_lower);
    double lo = 0.0;
    fill_bound(taus[i], row.mean_tau, lo);
    rows.push_back(row);
  }
  return rows;
}

RuleFactory rule_factory(RuleKind kind, const LossModel& loss, const MetricSpace& space) {
  return [kind, loss, space](const AdversarialTarget&) { return make_rule(kind, loss, space); };
}

RuleFactory oracle_factory() {
  return [](const AdversarialTarget& target) -> std::unique_ptr<LearningRule> {
    return std::make_unique<OracleRule>([target](const Point& x) { return target(x); });
  };
}

HypothesisTest novelty_test() {
  return [](std::span<const Point> prefix, Engine&) -> int {
    if (prefix.empty()) return 1;
    const std::size_t n = prefix.size() - 1;
    const std::size_t window = (n + 1) / 2;
    const std::size_t first = n + 1 - window;
    std::unordered_set<Point, PointHash> seen(prefix.begin(), prefix.begin() + static_cast<std::ptrdiff_t>(first));
    for (std::size_t t = first; t <= n; ++t)
      if (seen.insert(prefix[t]).second) return 0;
    return 1;
  };
}

HypothesisTest constant_test(int output) {
  return [output](std::span<const Point>, Engine&) { return output; };
}

HypothesisTest coin_test() {
  return [](std::span<const Point>, Engine& rng) { return uniform01(rng) < 0.5 ? 1 : 0; };
}

DistinctSequence dyadic_sequence() {
  auto cache = std::make_shared<std::vector<Point>>();
  return [cache](std::size_t i) -> Point {
    if (i == 0) return Point(0.0);
    if (cache->size() < i) *cache = MetricSpace::unit_interval().dense_prefix(std::max<std::size_t>(i, 2 * cache->size()));
    return (*cache)[i - 1];
  };
}

std::vector<std::size_t> FoolingTranscript::switch_indices() const {
  std::vector<std::size_t> out;
  for (const auto& s : steps) out.push_back(s.n);
  return out;
}

FoolingTranscript fool_hypothesis_test(const HypothesisTest& test, const DistinctSequence& xs,
                                       std::size_t confidence_trials, std::size_t switches, std::uint64_t seed,
                                       std::size_t max_n) {
  if (confidence_trials == 0) throw LabError(errc::kTrialsInsufficient, "fooling needs at least one replay");
  FoolingTranscript tr;
  tr.sequence.push_back(xs(0));
  std::size_t replay_index = 0;
  for (std::size_t k = 0; k <= switches; ++k) {
    const int mode = static_cast<int>(k % 2);
    const std::size_t start = k == 0 ? 0 : tr.steps.back().n + 1;
    bool done = false;
    for (std::size_t n = start; n <= max_n && !done; ++n) {
      if (n >= tr.sequence.size()) tr.sequence.push_back(mode == 0 ? xs(0) : xs(n));
      std::size_t ones = 0;
      for (std::size_t r = 0; r < confidence_trials; ++r) {
        Engine engine = make_engine(seed, StreamTag::kTest, replay_index++);
        const int out = test(std::span<const Point>(tr.sequence.data(), n + 1), engine);
        if (out != 0 && out != 1) throw LabError(errc::kInvalidArgument, "hypothesis test must output 0 or 1");
        ones += static_cast<std::size_t>(out);
      }
      FoolingStep step{n, mode, ones, confidence_trials,
                       static_cast<double>(ones) / static_cast<double>(confidence_trials), 0.0};
      if (mode == 0) {
        step.bound = binomial_lower_bound(ones, confidence_trials);
        done = step.bound > 0.75;
      } else {
        step.bound = binomial_upper_bound(ones, confidence_trials);
        done = step.bound < 0.25;
      }
      if (done) tr.steps.push_back(step);
    }
    if (!done)
      throw LabError(errc::kTestNonconvergent, "mode " + std::to_string(mode) + " not certified by n = " +
                                                   std::to_string(max_n) + " after " + std::to_string(k) +
                                                   " switches");
  }
  return tr;
}

}  // namespace memolab
