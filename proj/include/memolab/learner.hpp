#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "memolab/frechet.hpp"
#include "memolab/loss.hpp"
#include "memolab/point.hpp"
#include "memolab/process.hpp"
#include "memolab/rng.hpp"

namespace memolab {

enum class RuleKind { kMemorization, kFrechetMemorizer, kNearestNeighbor, kConstantDefault };

std::string to_string(RuleKind kind);
RuleKind parse_rule_kind(const std::string& name);

// Online predictor. predict must not change observable state.
class LearningRule {
 public:
  virtual ~LearningRule() = default;
  virtual Value predict(const Point& x) const = 0;
  virtual void observe(const Point& x, Value y) = 0;
  // Instances revealed without labels (self-adaptive protocol).
  virtual void observe_unlabeled(const Point&) {}
  virtual std::string name() const = 0;
};

// Label source for the protocols: Y = f(X) + noise_sd * N(0, 1).
class Target {
 public:
  using Fn = std::function<Value(const Point&)>;

  static Target constant(Value y);
  static Target affine(double slope, double intercept);
  // Exact-match table; points missing from it get `fallback`.
  static Target table(std::vector<Point> xs, std::vector<Value> ys, Value fallback);
  static Target function(Fn f, std::string name);

  Target with_noise(double sd) const;

  // f*(x); for a noisy target the conditional mean, i.e. the Bayes
  // prediction under the squared loss.
  Value mean(const Point& x) const { return fn_(x); }
  Value sample(const Point& x, Engine& noise) const;
  double noise_sd() const { return noise_sd_; }
  const std::string& name() const { return name_; }

 private:
  Target(Fn fn, std::string name) : fn_(std::move(fn)), name_(std::move(name)) {}

  Fn fn_;
  std::string name_;
  double noise_sd_ = 0.0;
};

class MemorizationRule final : public LearningRule {
 public:
  explicit MemorizationRule(Value fallback = 0.0) : fallback_(fallback) {}
  Value predict(const Point& x) const override;
  void observe(const Point& x, Value y) override;
  std::string name() const override { return "memorization"; }
  std::size_t stored() const { return table_.size(); }

 private:
  Value fallback_;
  std::unordered_map<Point, Value, PointHash> table_;
};

class FrechetMemorizer final : public LearningRule {
 public:
  FrechetMemorizer(const LossModel& loss, Value fallback = 0.0);
  Value predict(const Point& x) const override;
  void observe(const Point& x, Value y) override;
  std::string name() const override { return "frechet-memorizer"; }
  std::size_t labels_at(const Point& x) const;

 private:
  double power_;
  ValueMetric metric_;
  Value fallback_;
  std::unordered_map<Point, FrechetAccumulator, PointHash> table_;
};

class NearestNeighborRule final : public LearningRule {
 public:
  explicit NearestNeighborRule(MetricSpace space, Value fallback = 0.0) : space_(space), fallback_(fallback) {}
  Value predict(const Point& x) const override;
  void observe(const Point& x, Value y) override;
  std::string name() const override { return "nearest-neighbor"; }

 private:
  struct Entry {
    Point x;
    Value y;
    std::size_t order;
  };
  MetricSpace space_;
  Value fallback_;
  std::vector<Entry> entries_;
  std::map<double, std::size_t> line_;  // 1-D index: coordinate -> entry
};

class ConstantRule final : public LearningRule {
 public:
  explicit ConstantRule(Value y = 0.0) : y_(y) {}
  Value predict(const Point&) const override { return y_; }
  void observe(const Point&, Value) override {}
  std::string name() const override { return "constant-default"; }

 private:
  Value y_;
};

// Predicts with direct access to a function (typically f* itself).
class OracleRule final : public LearningRule {
 public:
  explicit OracleRule(Target::Fn f) : f_(std::move(f)) {}
  Value predict(const Point& x) const override { return f_(x); }
  void observe(const Point&, Value) override {}
  std::string name() const override { return "oracle"; }

 private:
  Target::Fn f_;
};

std::unique_ptr<LearningRule> make_rule(RuleKind kind, const LossModel& loss, const MetricSpace& space);

// Powers of two up to the horizon, plus the horizon itself.
std::vector<std::size_t> default_checkpoints(std::size_t horizon);

struct LossTrajectory {
  std::vector<double> per_round_losses;
  std::vector<double> running_average;  // L(T) for T = 1..horizon
  std::vector<std::size_t> checkpoints;
  std::vector<double> checkpoint_averages;

  std::size_t nonzero_rounds() const;
};

// One realized run: instances, labels, predictions and the trajectory.
struct OnlineRun {
  std::vector<Point> xs;
  std::vector<Value> ys;
  std::vector<Value> predictions;
  LossTrajectory trajectory;
};

// Labels come from the kNoise stream at `run_index`; instances from the
// sampler's rollout `run_index`.
OnlineRun run_online(LearningRule& rule, const ProcessSampler& sampler, const Target& target, const LossModel& loss,
                     std::size_t horizon, std::uint64_t run_index = 0, std::uint64_t noise_seed = 0);

// Trains on rounds 1..t-1, then evaluates the frozen rule on rounds
// t..t+T and returns the average over those T+1 rounds.
double run_inductive(LearningRule& rule, const ProcessSampler& sampler, const Target& target, const LossModel& loss,
                     std::size_t t, std::size_t T, std::uint64_t run_index = 0, std::uint64_t noise_seed = 0);

// Labels stop at round t1 - 1; evaluation rounds t1..t1+T still reveal
// their instances (after the prediction) through observe_unlabeled.
double run_self_adaptive(LearningRule& rule, const ProcessSampler& sampler, const Target& target,
                         const LossModel& loss, std::size_t t1, std::size_t T, std::uint64_t run_index = 0,
                         std::uint64_t noise_seed = 0);

// Running average of loss(prediction, Y) - loss(reference(X), Y) at each
// checkpoint of the run.
std::vector<double> excess_loss(const OnlineRun& run, const Target::Fn& reference, const LossModel& loss);

}  // namespace memolab
