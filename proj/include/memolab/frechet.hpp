#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <queue>
#include <span>
#include <vector>

#include "memolab/loss.hpp"

namespace memolab {

enum class ValueMetric { kReal, kDiscrete };

struct FrechetProblem {
  std::vector<Value> samples;
  double power = 2.0;
  Value anchor = 0.0;
  ValueMetric metric = ValueMetric::kReal;
  // Grid step for the general case; 0 picks (ball radius) / 1e4.
  double resolution = 0.0;
};

struct FrechetResult {
  Value minimizer = 0.0;
  double risk = 0.0;
  double resolution = 0.0;  // 0 when the minimizer is exact
};

double empirical_risk(Value y, const FrechetProblem& problem);

// Exact for p = 2 (mean), p = 1 (lower median) and the discrete metric
// (mode, smallest label on ties). Any other exponent is solved by a grid
// over the closed ball around the anchor of radius
// 2 * (mean d^p(anchor, Y_i))^(1/p), plus the samples inside that ball.
FrechetResult frechet_mean(const FrechetProblem& problem);

// Radius of the ball that must contain every minimizer.
double confinement_radius(const FrechetProblem& problem);

// Incremental Fréchet mean of a growing label multiset.
class FrechetAccumulator {
 public:
  FrechetAccumulator(double power, ValueMetric metric) : power_(power), metric_(metric) {}

  void add(Value y);
  std::size_t size() const { return count_; }
  Value mean() const;

 private:
  double power_;
  ValueMetric metric_;
  std::size_t count_ = 0;
  long double sum_ = 0.0L;
  std::priority_queue<Value> lower_;                                         // max-heap
  std::priority_queue<Value, std::vector<Value>, std::greater<Value>> upper_;  // min-heap
  std::map<Value, std::size_t> counts_;
  std::vector<Value> samples_;
};

struct ConvergenceRow {
  std::size_t n = 0;
  std::size_t trials = 0;
  double optimal_risk = 0.0;  // R*
  double mean_gap = 0.0;      // mean of |R_n(ŷ_n) - R*|
  double gap_upper = 0.0;     // one-sided 0.99 bound
  double max_gap = 0.0;
};

// Brute-force population minimum of sum_i w_i |y - v_i|^p over a fine grid
// on [min v, max v] together with the support points.
std::pair<Value, double> population_minimum(std::span<const Value> values, std::span<const double> weights,
                                            double power);

std::vector<ConvergenceRow> check_convergence(std::span<const Value> values, std::span<const double> weights,
                                              double power, std::span<const std::size_t> sample_sizes,
                                              std::size_t trials, std::uint64_t seed);

}  // namespace memolab
