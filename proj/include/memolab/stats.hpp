#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace memolab {

inline constexpr double kConfidence = 0.99;

// One-sided Clopper-Pearson bounds for a binomial proportion.
double binomial_upper_bound(std::size_t successes, std::size_t trials, double confidence = kConfidence);
double binomial_lower_bound(std::size_t successes, std::size_t trials, double confidence = kConfidence);

// Largest number of failures e such that observing e failures out of
// `trials` still certifies a failure rate below `rate` (upper bound < rate).
// Returns -1 when even zero failures cannot certify it.
long max_certifiable_failures(std::size_t trials, double rate, double confidence = kConfidence);

// Smallest 1-based order statistic j such that the j-th smallest of `n`
// i.i.d. samples upper-bounds the `q`-quantile with the given confidence
// (P(Bin(n, q) <= j - 1) >= confidence). Returns n + 1 if none does.
std::size_t quantile_upper_order(std::size_t n, double q, double confidence = kConfidence);

// Upper quantile of the standard normal, e.g. 2.326 for 0.99.
double normal_quantile(double p);

enum class EstimatorKind { kBernoulli, kMean };

struct Summary {
  std::string method;  // "exact-binomial" or "normal-approx"
  std::size_t n = 0;
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool insufficient_n = false;
};

Summary aggregate_bernoulli(std::size_t successes, std::size_t trials);
Summary aggregate_mean(std::span<const double> values);
Summary aggregate(std::span<const double> values, EstimatorKind kind);

}  // namespace memolab
