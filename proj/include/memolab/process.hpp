#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "memolab/metric_space.hpp"
#include "memolab/point.hpp"
#include "memolab/rng.hpp"

namespace memolab {

enum class SamplerKind {
  kFiniteSupportIid,
  kIidUniform,
  kGeometricDecay,
  kDeterministicList,
  kAlternatingAdversarial,
  kMixed,
};

// Declared truth of the finite-support condition for the generator family.
enum class SupportClass { kCertainlyFinite, kCertainlyInfinite, kMixed };

std::string to_string(SamplerKind kind);
std::string to_string(SupportClass support);

struct Rollout {
  std::vector<Point> points;
  // Whether this rollout takes infinitely many distinct values. Known per
  // rollout for every generator family.
  bool infinite_event = false;
};

// Seeded generator of an instance-space process X_1, X_2, ...
//
// rollout(h, i) returns the first h points of the i-th independent
// realization; it is a pure function of (seed, i, h) and rollout(h, i) is a
// prefix of rollout(h', i) for h <= h'.
class ProcessSampler {
 public:
  // i.i.d. draws from `values` with probabilities proportional to `weights`.
  static ProcessSampler finite_support(std::vector<Point> values, std::vector<double> weights, std::uint64_t seed);
  // i.i.d. uniform on [0,1]^dim.
  static ProcessSampler iid_uniform(std::size_t dim, std::uint64_t seed);
  // X_t = ratio^t, computed by repeated multiplication.
  static ProcessSampler geometric_decay(double ratio, std::uint64_t seed);
  // Replays `points` cyclically.
  static ProcessSampler deterministic_list(std::vector<Point> points, std::uint64_t seed);
  // Alternates between a constant block at x0 and a block of fresh points
  // x_t (t-th dense point of the unit interval) at the listed switch times;
  // after the last listed switch, block lengths keep doubling.
  static ProcessSampler alternating(Point x0, std::vector<std::size_t> switches, std::uint64_t seed);
  // With probability p behaves as iid_uniform(1) for the whole rollout
  // (event A), otherwise as finite_support(values, weights).
  static ProcessSampler mixed(double p, std::vector<Point> values, std::vector<double> weights, std::uint64_t seed);

  SamplerKind kind() const { return kind_; }
  SupportClass support_class() const;
  // True when every rollout index yields the same sequence.
  bool deterministic() const;
  // Declared number of support points of the finite component.
  std::optional<std::size_t> support_size() const;
  std::uint64_t seed() const { return seed_; }
  double infinite_probability() const { return p_; }
  std::size_t dim() const { return dim_; }
  const std::vector<Point>& values() const { return values_; }
  const std::vector<double>& weights() const { return weights_; }
  double ratio() const { return ratio_; }
  const std::vector<std::size_t>& switches() const { return switches_; }
  std::string describe() const;

  Rollout rollout(std::size_t horizon, std::uint64_t index = 0) const;

 private:
  explicit ProcessSampler(SamplerKind kind, std::uint64_t seed) : kind_(kind), seed_(seed) {}

  SamplerKind kind_;
  std::uint64_t seed_;
  std::size_t dim_ = 1;
  std::vector<Point> values_;
  std::vector<double> weights_;
  double ratio_ = 0.5;
  double p_ = 0.0;
  std::vector<std::size_t> switches_;
};

struct PrefixStats {
  std::size_t horizon = 0;
  std::size_t distinct_count = 0;
  std::optional<double> min_gap;  // undefined below two distinct values
};

PrefixStats prefix_stats(std::span<const Point> prefix, const MetricSpace& space);

// Number of distinct values among the first t points, for t = 1..size.
std::vector<std::size_t> distinct_counts(std::span<const Point> prefix);

}  // namespace memolab
