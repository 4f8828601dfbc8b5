#include "memolab/stats.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>

#include "memolab/error.hpp"

namespace memolab {

double binomial_upper_bound(std::size_t successes, std::size_t trials, double confidence) {
  if (trials == 0) return 1.0;
  if (successes >= trials) return 1.0;
  boost::math::beta_distribution<double> dist(static_cast<double>(successes) + 1.0,
                                              static_cast<double>(trials - successes));
  return boost::math::quantile(dist, confidence);
}

double binomial_lower_bound(std::size_t successes, std::size_t trials, double confidence) {
  if (trials == 0 || successes == 0) return 0.0;
  boost::math::beta_distribution<double> dist(static_cast<double>(successes),
                                              static_cast<double>(trials - successes) + 1.0);
  return boost::math::quantile(dist, 1.0 - confidence);
}

long max_certifiable_failures(std::size_t trials, double rate, double confidence) {
  long best = -1;
  for (std::size_t e = 0; e <= trials; ++e) {
    if (binomial_upper_bound(e, trials, confidence) < rate)
      best = static_cast<long>(e);
    else
      break;
  }
  return best;
}

std::size_t quantile_upper_order(std::size_t n, double q, double confidence) {
  if (n == 0) return 1;
  boost::math::binomial_distribution<double> dist(static_cast<double>(n), q);
  for (std::size_t j = 1; j <= n; ++j) {
    if (boost::math::cdf(dist, static_cast<double>(j - 1)) >= confidence) return j;
  }
  return n + 1;
}

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

Summary aggregate_bernoulli(std::size_t successes, std::size_t trials) {
  if (trials == 0) throw LabError(errc::kInvalidArgument, "aggregate needs at least one trial");
  Summary s;
  s.method = "exact-binomial";
  s.n = trials;
  s.estimate = static_cast<double>(successes) / static_cast<double>(trials);
  s.lower = binomial_lower_bound(successes, trials);
  s.upper = binomial_upper_bound(successes, trials);
  s.insufficient_n = trials < 2;
  return s;
}

Summary aggregate_mean(std::span<const double> values) {
  if (values.empty()) throw LabError(errc::kInvalidArgument, "aggregate needs at least one trial");
  Summary s;
  s.method = "normal-approx";
  s.n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.estimate = sum / static_cast<double>(values.size());
  if (values.size() < 2) {
    s.insufficient_n = true;
    s.lower = -std::numeric_limits<double>::infinity();
    s.upper = std::numeric_limits<double>::infinity();
    return s;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - s.estimate) * (v - s.estimate);
  const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  const double half = normal_quantile(kConfidence) * sd / std::sqrt(static_cast<double>(values.size()));
  s.lower = s.estimate - half;
  s.upper = s.estimate + half;
  return s;
}

Summary aggregate(std::span<const double> values, EstimatorKind kind) {
  if (kind == EstimatorKind::kMean) return aggregate_mean(values);
  std::size_t successes = 0;
  for (double v : values) {
    if (v != 0.0 && v != 1.0) throw LabError(errc::kInvalidArgument, "bernoulli trials must be 0 or 1");
    successes += v == 1.0 ? 1 : 0;
  }
  return aggregate_bernoulli(successes, values.size());
}

}  // namespace memolab
