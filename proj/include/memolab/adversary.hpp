#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "memolab/learner.hpp"
#include "memolab/loss.hpp"
#include "memolab/partition.hpp"
#include "memolab/process.hpp"
#include "memolab/rng.hpp"

namespace memolab {

struct VisitThreshold {
  int k = 0;
  std::size_t T = 0;         // 0 for unreachable levels
  bool reachable = false;
  bool certified = false;    // order statistic achieved the 0.99 correction
  std::size_t visits = 0;    // rollouts that entered A_k within the horizon
  std::size_t trials = 0;
};

// First visit of A_k is the first round t (1-based) with cell_index = k;
// tail-undetermined points count toward A_{K_max}. A rollout that never
// enters A_k within the horizon has tau_k = 0.
std::vector<std::size_t> first_visits(const RandomPartition& partition, std::span<const Point> rollout);

// T_k: order statistic of tau_k over `trials` rollouts bounding the
// (1 - 2^-k)-quantile with 0.99 confidence. Throws "horizon-insufficient"
// when fewer than half of the levels are ever entered.
std::vector<VisitThreshold> estimate_first_visit_thresholds(const ProcessSampler& sampler,
                                                            const RandomPartition& partition, std::size_t trials,
                                                            std::size_t horizon);

// Cell-constant random target: on A_k a fair coin picks y_{k,0} or y_{k,1},
// where the pair comes from witness_pair(2 c T_k). A_0 maps to the default.
class AdversarialTarget {
 public:
  AdversarialTarget(std::shared_ptr<const RandomPartition> partition, std::span<const VisitThreshold> thresholds,
                    const LossModel& loss, std::uint64_t seed, std::uint64_t draw = 0);

  Value operator()(const Point& x) const;
  int cell(const Point& x) const;  // resolved cell, tail mapped to K_max
  const std::pair<Value, Value>& pair(int k) const { return pairs_.at(static_cast<std::size_t>(k - 1)); }
  bool coin(int k) const { return coins_.at(static_cast<std::size_t>(k - 1)); }
  std::size_t threshold(int k) const { return thresholds_.at(static_cast<std::size_t>(k - 1)); }
  int K_max() const { return static_cast<int>(pairs_.size()); }
  Target as_target() const;

 private:
  std::shared_ptr<const RandomPartition> partition_;
  std::vector<std::pair<Value, Value>> pairs_;
  std::vector<bool> coins_;
  std::vector<std::size_t> thresholds_;
  Value fallback_;
};

AdversarialTarget sample_adversarial_target(std::shared_ptr<const RandomPartition> partition,
                                            std::span<const VisitThreshold> thresholds, const LossModel& loss,
                                            std::uint64_t seed);

using RuleFactory = std::function<std::unique_ptr<LearningRule>(const AdversarialTarget&)>;

struct DefeatRow {
  int k = 0;
  std::size_t T = 0;
  std::size_t runs = 0;         // runs that entered A_k
  double mean_loss = 0.0;       // loss at the first visit, averaged over runs
  double loss_lower = 0.0;      // one-sided 0.99 normal bound
  double mean_tau = 0.0;
  double mean_running = 0.0;    // running average L(tau_k), averaged over runs
  double running_lower = 0.0;
};

// Each run draws fresh coins (stream kTarget, run index), rolls out the
// sampler and plays the rule online; levels with no first visit are omitted.
std::vector<DefeatRow> evaluate_defeat(const RuleFactory& rule, const ProcessSampler& sampler,
                                       std::shared_ptr<const RandomPartition> partition,
                                       std::span<const VisitThreshold> thresholds, const LossModel& loss,
                                       std::size_t runs, std::size_t horizon, std::uint64_t seed);

RuleFactory rule_factory(RuleKind kind, const LossModel& loss, const MetricSpace& space);
RuleFactory oracle_factory();

// A decision procedure on prefixes X_0..X_n; randomness only through `rng`.
using HypothesisTest = std::function<int(std::span<const Point> prefix, Engine& rng)>;

// 1 iff none of the last ceil(n/2) points of X_0..X_n is a first occurrence.
HypothesisTest novelty_test();
HypothesisTest constant_test(int output);
HypothesisTest coin_test();

// x_0, x_1, ... pairwise distinct.
using DistinctSequence = std::function<Point(std::size_t)>;
// x_0 = 0 and x_i = i-th dyadic point of the unit interval.
DistinctSequence dyadic_sequence();

struct FoolingStep {
  std::size_t n = 0;
  int mode = 0;             // 0 = constant x_0, 1 = fresh x_t
  std::size_t ones = 0;     // replays with output 1
  std::size_t replays = 0;
  double frequency = 0.0;   // of output 1
  double bound = 0.0;       // 0.99 lower (even) or upper (odd) bound
};

struct FoolingTranscript {
  std::vector<Point> sequence;  // X_0..X_{n_last}
  std::vector<FoolingStep> steps;
  std::vector<std::size_t> switch_indices() const;
};

// Alternates the constant and fresh modes, certifying each n_k with
// `confidence_trials` replays: even k need a 0.99 lower bound above 3/4 on
// output 1, odd k an upper bound below 1/4. Throws "test-nonconvergent" when
// a mode reaches `max_n` uncertified.
FoolingTranscript fool_hypothesis_test(const HypothesisTest& test, const DistinctSequence& xs,
                                       std::size_t confidence_trials, std::size_t switches, std::uint64_t seed,
                                       std::size_t max_n = 1 << 14);

}  // namespace memolab
