#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "memolab/learner.hpp"
#include "memolab/loss.hpp"
#include "memolab/metric_space.hpp"
#include "memolab/process.hpp"

namespace memolab {

enum class ExperimentKind {
  kConsistency,
  kPartitionFmv,
  kLemma1,
  kLemma2Tail,
  kAdversary,
  kFoolTest,
  kFrechetConvergence,
  kBayesExcess,
};

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& name);

struct SamplerConfig {
  std::string kind;
  std::vector<double> values;
  std::vector<double> weights;  // empty = uniform
  double ratio = 0.5;
  std::size_t dim = 1;
  double p = 0.5;
  double x0 = 0.0;
  std::vector<std::size_t> switches;
};

struct LossConfig {
  std::string kind = "squared";  // squared | absolute | power | zero-one
  double exponent = 2.0;
  std::size_t labels = 2;
};

struct TargetConfig {
  std::string kind = "constant";  // constant | affine | table
  double value = 0.0;
  double slope = 1.0;
  double intercept = 0.0;
  std::vector<double> table;  // f*(values[i]) for the sampler's values
  double noise_sd = 0.0;
};

struct ParamsConfig {
  std::size_t horizon = 0;
  int K_max = 0;
  std::vector<int> levels;
  std::vector<std::size_t> grid;
  std::vector<double> points;
  std::size_t schedule_trials = 1000;
  std::size_t confidence_trials = 200;
  std::size_t switches = 6;
  std::size_t max_n = 1 << 14;
  std::size_t min_switches = 4;
  std::string test = "novelty";
  std::vector<std::size_t> sample_sizes;
  double margin = 0.0;
  double tolerance = 0.05;
  double loss_factor = 0.9;
  double running_floor = 0.9;
  double required_fraction = 0.95;
  std::string space;  // empty = derived from the sampler
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kConsistency;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::string output;
  SamplerConfig sampler;
  RuleKind rule = RuleKind::kMemorization;
  LossConfig loss;
  TargetConfig target;
  ParamsConfig params;
  std::string echo;  // canonical INI text of every key that was set
};

struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::string> output;
};

// Throws "config-invalid" on syntax errors, unknown sections or keys,
// malformed values and missing fields required by the experiment kind.
ExperimentConfig parse_config(const std::string& text, const ConfigOverrides& overrides = {});
ExperimentConfig load_config(const std::string& path, const ConfigOverrides& overrides = {});

ProcessSampler make_sampler(const SamplerConfig& config, std::uint64_t seed);
LossModel make_loss(const LossConfig& config);
Target make_target(const TargetConfig& config, const SamplerConfig& sampler, const LossModel& loss);
MetricSpace make_space(const ExperimentConfig& config);

}  // namespace memolab
