#include "memolab/frechet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "memolab/error.hpp"
#include "memolab/parallel.hpp"
#include "memolab/rng.hpp"
#include "memolab/stats.hpp"

namespace memolab {

namespace {

double dist(Value a, Value b, ValueMetric m) {
  if (m == ValueMetric::kDiscrete) return a == b ? 0.0 : 1.0;
  return std::abs(a - b);
}

double dpow(double d, double p) {
  if (p == 1.0) return d;
  if (p == 2.0) return d * d;
  return std::pow(d, p);
}

void validate(const FrechetProblem& problem) {
  if (problem.samples.empty()) throw LabError(errc::kInvalidArgument, "Fréchet mean needs at least one sample");
  if (!(problem.power >= 1.0)) throw LabError(errc::kInvalidArgument, "Fréchet exponent must be at least 1");
}

Value mode_of(std::span<const Value> samples) {
  std::map<Value, std::size_t> counts;
  for (Value y : samples) ++counts[y];
  Value best = counts.begin()->first;
  std::size_t most = 0;
  for (auto [y, c] : counts)
    if (c > most) best = y, most = c;
  return best;
}

}  // namespace

double empirical_risk(Value y, const FrechetProblem& problem) {
  validate(problem);
  long double s = 0.0L;
  for (Value v : problem.samples) s += dpow(dist(y, v, problem.metric), problem.power);
  return static_cast<double>(s / problem.samples.size());
}

double confinement_radius(const FrechetProblem& problem) {
  return 2.0 * std::pow(empirical_risk(problem.anchor, problem), 1.0 / problem.power);
}

FrechetResult frechet_mean(const FrechetProblem& problem) {
  validate(problem);
  FrechetResult r;
  const auto& s = problem.samples;
  if (problem.metric == ValueMetric::kDiscrete) {
    r.minimizer = mode_of(s);
  } else if (problem.power == 2.0) {
    long double sum = 0.0L;
    for (Value v : s) sum += v;
    r.minimizer = static_cast<double>(sum / s.size());
  } else if (problem.power == 1.0) {
    std::vector<Value> sorted(s);
    auto mid = sorted.begin() + static_cast<std::ptrdiff_t>((sorted.size() - 1) / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());
    r.minimizer = *mid;
  } else {
    const double rho = confinement_radius(problem);
    if (rho == 0.0) {
      r.minimizer = problem.anchor;
    } else {
      const double step = problem.resolution > 0.0 ? problem.resolution : rho / 1e4;
      const auto steps = static_cast<std::int64_t>(std::floor(2.0 * rho / step));
      std::vector<Value> candidates;
      candidates.reserve(static_cast<std::size_t>(steps) + 1 + s.size());
      for (std::int64_t i = 0; i <= steps; ++i) candidates.push_back(problem.anchor - rho + static_cast<double>(i) * step);
      for (Value v : s)
        if (std::abs(v - problem.anchor) <= rho) candidates.push_back(v);
      std::sort(candidates.begin(), candidates.end());
      double best = std::numeric_limits<double>::infinity();
      for (Value c : candidates) {
        const double risk = empirical_risk(c, problem);
        if (risk < best) best = risk, r.minimizer = c;
      }
      r.resolution = step;
    }
  }
  r.risk = empirical_risk(r.minimizer, problem);
  return r;
}

void FrechetAccumulator::add(Value y) {
  ++count_;
  if (metric_ == ValueMetric::kDiscrete) {
    ++counts_[y];
    return;
  }
  if (power_ == 2.0) {
    sum_ += y;
  } else if (power_ == 1.0) {
    if (lower_.empty() || y <= lower_.top())
      lower_.push(y);
    else
      upper_.push(y);
    // Keep |lower| = ceil(count / 2) so its top is the lower median.
    if (lower_.size() > upper_.size() + 1) {
      upper_.push(lower_.top());
      lower_.pop();
    } else if (upper_.size() > lower_.size()) {
      lower_.push(upper_.top());
      upper_.pop();
    }
  } else {
    samples_.push_back(y);
  }
}

Value FrechetAccumulator::mean() const {
  if (count_ == 0) throw LabError(errc::kInvalidArgument, "empty accumulator has no mean");
  if (metric_ == ValueMetric::kDiscrete) {
    Value best = counts_.begin()->first;
    std::size_t most = 0;
    for (auto [y, c] : counts_)
      if (c > most) best = y, most = c;
    return best;
  }
  if (power_ == 2.0) return static_cast<double>(sum_ / count_);
  if (power_ == 1.0) return lower_.top();
  FrechetProblem problem{samples_, power_, 0.0, metric_, 0.0};
  return frechet_mean(problem).minimizer;
}

std::pair<Value, double> population_minimum(std::span<const Value> values, std::span<const double> weights,
                                            double power) {
  if (values.empty() || values.size() != weights.size())
    throw LabError(errc::kInvalidArgument, "population law needs matching values and weights");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  auto risk = [&](Value y) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] / total * dpow(std::abs(y - values[i]), power);
    return static_cast<double>(s);
  };
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  std::vector<Value> candidates(values.begin(), values.end());
  constexpr int kGrid = 100000;
  for (int i = 0; i <= kGrid; ++i) candidates.push_back(*lo + (*hi - *lo) * i / kGrid);
  std::sort(candidates.begin(), candidates.end());
  std::pair<Value, double> best{*lo, std::numeric_limits<double>::infinity()};
  for (Value c : candidates) {
    const double r = risk(c);
    if (r < best.second) best = {c, r};
  }
  return best;
}

std::vector<ConvergenceRow> check_convergence(std::span<const Value> values, std::span<const double> weights,
                                              double power, std::span<const std::size_t> sample_sizes,
                                              std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw LabError(errc::kInvalidArgument, "convergence check needs trials");
  const double optimum = population_minimum(values, weights, power).second;
  std::vector<ConvergenceRow> rows;
  for (std::size_t si = 0; si < sample_sizes.size(); ++si) {
    const std::size_t n = sample_sizes[si];
    if (n == 0) throw LabError(errc::kInvalidArgument, "sample sizes must be positive");
    std::vector<double> gaps(trials);
    parallel_for(trials, [&](std::size_t t) {
      Engine engine = make_engine(seed, StreamTag::kTrial, (static_cast<std::uint64_t>(si) << 32) | t);
      std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
      FrechetProblem problem;
      problem.power = power;
      problem.samples.reserve(n);
      for (std::size_t i = 0; i < n; ++i) problem.samples.push_back(values[pick(engine)]);
      gaps[t] = std::abs(frechet_mean(problem).risk - optimum);
    });
    const Summary summary = aggregate_mean(gaps);
    ConvergenceRow row;
    row.n = n;
    row.trials = trials;
    row.optimal_risk = optimum;
    row.mean_gap = summary.estimate;
    row.gap_upper = summary.upper;
    row.max_gap = *std::max_element(gaps.begin(), gaps.end());
    rows.push_back(row);
  }
  return rows;
}

}  // namespace memolab
