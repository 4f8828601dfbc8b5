#include "memolab/learner.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "memolab/error.hpp"

namespace memolab {

std::string to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::kMemorization: return "memorization";
    case RuleKind::kFrechetMemorizer: return "frechet-memorizer";
    case RuleKind::kNearestNeighbor: return "nearest-neighbor";
    case RuleKind::kConstantDefault: return "constant-default";
  }
  return "unknown";
}

RuleKind parse_rule_kind(const std::string& name) {
  for (auto k : {RuleKind::kMemorization, RuleKind::kFrechetMemorizer, RuleKind::kNearestNeighbor,
                 RuleKind::kConstantDefault})
    if (to_string(k) == name) return k;
  throw LabError(errc::kConfigInvalid, "unknown rule kind '" + name + "'");
}

Target Target::constant(Value y) {
  return Target([y](const Point&) { return y; }, fmt::format("constant({})", y));
}

Target Target::affine(double slope, double intercept) {
  return Target([slope, intercept](const Point& x) { return slope * x.x() + intercept; },
                fmt::format("affine({},{})", slope, intercept));
}

Target Target::table(std::vector<Point> xs, std::vector<Value> ys, Value fallback) {
  if (xs.size() != ys.size()) throw LabError(errc::kInvalidArgument, "target table columns differ in length");
  auto map = std::make_shared<std::unordered_map<Point, Value, PointHash>>();
  for (std::size_t i = 0; i < xs.size(); ++i) map->emplace(xs[i], ys[i]);
  return Target(
      [map, fallback](const Point& x) {
        auto it = map->find(x);
        return it == map->end() ? fallback : it->second;
      },
      fmt::format("table({})", xs.size()));
}

Target Target::function(Fn f, std::string name) { return Target(std::move(f), std::move(name)); }

Target Target::with_noise(double sd) const {
  if (!(sd >= 0.0) || !std::isfinite(sd)) throw LabError(errc::kInvalidArgument, "noise level must be nonnegative");
  Target t = *this;
  t.noise_sd_ = sd;
  if (sd > 0.0) t.name_ = fmt::format("{}+N(0,{}^2)", name_, sd);
  return t;
}

Value Target::sample(const Point& x, Engine& noise) const {
  const Value m = fn_(x);
  if (noise_sd_ == 0.0) return m;
  return m + noise_sd_ * std::normal_distribution<double>(0.0, 1.0)(noise);
}

Value MemorizationRule::predict(const Point& x) const {
  auto it = table_.find(x);
  return it == table_.end() ? fallback_ : it->second;
}

void MemorizationRule::observe(const Point& x, Value y) { table_.emplace(x, y); }

FrechetMemorizer::FrechetMemorizer(const LossModel& loss, Value fallback)
    : power_(loss.exponent()),
      metric_(loss.value_space() == ValueSpaceKind::kFiniteLabels ? ValueMetric::kDiscrete : ValueMetric::kReal),
      fallback_(fallback) {}

Value FrechetMemorizer::predict(const Point& x) const {
  auto it = table_.find(x);
  return it == table_.end() ? fallback_ : it->second.mean();
}

void FrechetMemorizer::observe(const Point& x, Value y) {
  table_.try_emplace(x, power_, metric_).first->second.add(y);
}

std::size_t FrechetMemorizer::labels_at(const Point& x) const {
  auto it = table_.find(x);
  return it == table_.end() ? 0 : it->second.size();
}

Value NearestNeighborRule::predict(const Point& x) const {
  if (entries_.empty()) return fallback_;
  if (space_.dim() == 1 && space_.kind() != SpaceKind::kFinite) {
    auto hi = line_.lower_bound(x.x());
    const Entry* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    auto consider = [&](const Entry& e) {
      const double d = space_.distance(x, e.x);
      if (d < best_d || (d == best_d && e.order < best->order)) best = &e, best_d = d;
    };
    if (hi != line_.end()) consider(entries_[hi->second]);
    if (hi != line_.begin()) consider(entries_[std::prev(hi)->second]);
    return best->y;
  }
  const Entry* best = &entries_.front();
  double best_d = space_.distance(x, best->x);
  for (const Entry& e : entries_) {
    const double d = space_.distance(x, e.x);
    if (d < best_d) best = &e, best_d = d;
  }
  return best->y;
}

void NearestNeighborRule::observe(const Point& x, Value y) {
  const std::size_t order = entries_.size();
  if (space_.dim() == 1 && space_.kind() != SpaceKind::kFinite) {
    // A repeated instance can never win a tie against its first copy.
    if (!line_.emplace(x.x(), order).second) return;
  }
  entries_.push_back({x, y, order});
}

std::unique_ptr<LearningRule> make_rule(RuleKind kind, const LossModel& loss, const MetricSpace& space) {
  const Value y0 = loss.default_value();
  switch (kind) {
    case RuleKind::kMemorization: return std::make_unique<MemorizationRule>(y0);
    case RuleKind::kFrechetMemorizer: return std::make_unique<FrechetMemorizer>(loss, y0);
    case RuleKind::kNearestNeighbor: return std::make_unique<NearestNeighborRule>(space, y0);
    case RuleKind::kConstantDefault: return std::make_unique<ConstantRule>(y0);
  }
  throw LabError(errc::kInvalidArgument, "unknown rule kind");
}

std::vector<std::size_t> default_checkpoints(std::size_t horizon) {
  std::vector<std::size_t> out;
  for (std::size_t c = 1; c <= horizon; c *= 2) out.push_back(c);
  if (out.empty() || out.back() != horizon) out.push_back(horizon);
  return out;
}

std::size_t LossTrajectory::nonzero_rounds() const {
  std::size_t n = 0;
  for (double l : per_round_losses) n += l != 0.0;
  return n;
}

OnlineRun run_online(LearningRule& rule, const ProcessSampler& sampler, const Target& target, const LossModel& loss,
                     std::size_t horizon, std::uint64_t run_index, std::uint64_t noise_seed) {
  if (horizon == 0) throw LabError(errc::kInvalidArgument, "horizon must be positive");
  OnlineRun run;
  run.xs = sampler.rollout(horizon, run_index).points;
  Engine noise = make_engine(noise_seed, StreamTag::kNoise, run_index);
  run.ys.reserve(horizon);
  run.predictions.reserve(horizon);
  auto& tr = run.trajectory;
  tr.per_round_losses.reserve(horizon);
  tr.running_average.reserve(horizon);
  double total = 0.0;
  for (std::size_t t = 0; t < horizon; ++t) {
    const Point& x = run.xs[t];
    const Value y = target.sample(x, noise);
    const Value yhat = rule.predict(x);
    rule.observe(x, y);
    const double l = loss.evaluate(yhat, y);
    total += l;
    run.ys.push_back(y);
    run.predictions.push_back(yhat);
    tr.per_round_losses.push_back(l);
    tr.running_average.push_back(total / static_cast<double>(t + 1));
  }
  tr.checkpoints = default_checkpoints(horizon);
  for (std::size_t c : tr.checkpoints) tr.checkpoint_averages.push_back(tr.running_average[c - 1]);
  return run;
}

double run_inductive(LearningRule& rule, const ProcessSampler& sampler, const Target& target, const LossModel& loss,
                     std::size_t t, std::size_t T, std::uint64_t run_index, std::uint64_t noise_seed) {
  if (t == 0 || T == 0) throw LabError(errc::kInvalidArgument, "inductive protocol needs t >= 1 and T >= 1");
  const auto xs = sampler.rollout(t + T, run_index).points;
  Engine noise = make_engine(noise_seed, StreamTag::kNoise, run_index);
  for (std::size_t i = 0; i + 1 < t; ++i) rule.observe(xs[i], target.sample(xs[i], noise));
  double total = 0.0;
  for (std::size_t i = t - 1; i < t + T; ++i) total += loss.evaluate(rule.predict(xs[i]), target.sample(xs[i], noise));
  return total / static_cast<double>(T + 1);
}

double run_self_adaptive(LearningRule& rule, const ProcessSampler& sampler, const Target& target,
                         const LossModel& loss, std::size_t t1, std::size_t T, std::uint64_t run_index,
                         std::uint64_t noise_seed) {
  if (t1 == 0 || T == 0) throw LabError(errc::kInvalidArgument, "self-adaptive protocol needs t1 >= 1 and T >= 1");
  const auto xs = sampler.rollout(t1 + T, run_index).points;
  Engine noise = make_engine(noise_seed, StreamTag::kNoise, run_index);
  for (std::size_t i = 0; i + 1 < t1; ++i) rule.observe(xs[i], target.sample(xs[i], noise));
  double total = 0.0;
  for (std::size_t i = t1 - 1; i < t1 + T; ++i) {
    total += loss.evaluate(rule.predict(xs[i]), target.sample(xs[i], noise));
    rule.observe_unlabeled(xs[i]);
  }
  return total / static_cast<double>(T + 1);
}

std::vector<double> excess_loss(const OnlineRun& run, const Target::Fn& reference, const LossModel& loss) {
  std::vector<double> out;
  const auto& cps = run.trajectory.checkpoints;
  out.reserve(cps.size());
  double total = 0.0;
  std::size_t next = 0;
  for (std::size_t t = 0; t < run.xs.size() && next < cps.size(); ++t) {
    total += run.trajectory.per_round_losses[t] - loss.evaluate(reference(run.xs[t]), run.ys[t]);
    if (t + 1 == cps[next]) {
      out.push_back(total / static_cast<double>(t + 1));
      ++next;
    }
  }
  return out;
}

}  // namespace memolab
