#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "memolab/csv.hpp"
#include "memolab/error.hpp"
#include "memolab/stats.hpp"

using namespace memolab;

namespace {

// P(Bin(n, q) <= s) by direct summation.
long double binom_cdf(std::size_t s, std::size_t n, long double q) {
  long double term = std::pow(1.0L - q, static_cast<long double>(n));
  long double total = 0.0L;
  for (std::size_t i = 0; i <= s; ++i) {
    total += term;
    term *= static_cast<long double>(n - i) / static_cast<long double>(i + 1) * q / (1.0L - q);
  }
  return total;
}

}  // namespace

TEST_CASE("zero successes in 100 trials") {
  auto s = aggregate_bernoulli(0, 100);
  CHECK(s.estimate == 0.0);
  CHECK(s.method == "exact-binomial");
  CHECK(s.upper == doctest::Approx(1.0 - std::pow(0.01, 1.0 / 100)).epsilon(1e-12));
  CHECK(s.upper == doctest::Approx(0.045).epsilon(0.01));
  CHECK_FALSE(s.insufficient_n);
}

TEST_CASE("Clopper-Pearson bounds invert the binomial tail") {
  for (std::size_t n : {10u, 57u, 400u})
    for (std::size_t s = 0; s < n; s += n / 7 + 1) {
      const double u = binomial_upper_bound(s, n);
      CHECK(static_cast<double>(binom_cdf(s, n, u)) == doctest::Approx(0.01).epsilon(1e-6));
      if (s > 0) {
        const double l = binomial_lower_bound(s, n);
        CHECK(static_cast<double>(1.0L - binom_cdf(s - 1, n, l)) == doctest::Approx(0.01).epsilon(1e-6));
        CHECK(l < static_cast<double>(s) / n);
      }
      CHECK(u > static_cast<double>(s) / n);
    }
  CHECK(binomial_upper_bound(5, 5) == 1.0);
  CHECK(binomial_lower_bound(0, 5) == 0.0);
}

TEST_CASE("quantile order statistic against summation") {
  for (std::size_t n : {20u, 500u, 2000u})
    for (double q : {0.5, 0.75, 0.9375}) {
      std::size_t want = n + 1;
      for (std::size_t j = 1; j <= n; ++j)
        if (binom_cdf(j - 1, n, q) >= 0.99L) {
          want = j;
          break;
        }
      CHECK(quantile_upper_order(n, q) == want);
    }
}

TEST_CASE("max certifiable failures") {
  const long e = max_certifiable_failures(1000, 0.01);
  REQUIRE(e >= 0);
  CHECK(binomial_upper_bound(static_cast<std::size_t>(e), 1000) < 0.01);
  CHECK(binomial_upper_bound(static_cast<std::size_t>(e) + 1, 1000) >= 0.01);
  CHECK(max_certifiable_failures(100, 0.01) == -1);
}

TEST_CASE("mean summaries") {
  std::vector<double> c(50, 3.25);
  auto s = aggregate_mean(c);
  CHECK(s.estimate == 3.25);
  CHECK(s.lower == 3.25);
  CHECK(s.upper == 3.25);
  std::vector<double> one{1.0};
  CHECK(aggregate_mean(one).insufficient_n);
  CHECK(aggregate_bernoulli(1, 1).insufficient_n);
  CHECK_THROWS_AS(aggregate_bernoulli(0, 0), LabError);
  std::vector<double> v{1, 2, 3, 4, 5};
  auto m = aggregate(v, EstimatorKind::kMean);
  CHECK(m.estimate == 3.0);
  CHECK(m.upper - 3.0 == doctest::Approx(normal_quantile(0.99) * std::sqrt(2.5 / 5)));
  CHECK(normal_quantile(0.99) == doctest::Approx(2.326347874));
}

TEST_CASE("csv formatting round-trips reals") {
  for (double x : {0.1, 1.0 / 3, 2.0 / 3, 1e-300, 6.02214076e23, -0.0}) CHECK(std::stod(format_real(x)) == x);
  CsvTable t({"a", "b", "c"});
  t.add_row({std::string("x"), 0.5, std::int64_t{7}});
  CHECK(t.to_string() == "a,b,c\nx,0.5,7\n");
  CHECK_THROWS(t.add_row({0.5}));
}
