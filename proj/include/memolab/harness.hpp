#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "memolab/config.hpp"
#include "memolab/csv.hpp"

namespace memolab {

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ExperimentReport {
  ExperimentConfig config;
  CsvTable table{{}};
  std::vector<Verdict> verdicts;
  double wall_seconds = 0.0;

  bool all_pass() const;
  // Config echo, seed, wall time and verdict lines.
  std::string meta() const;
};

// Seed of a named component: (master seed, experiment kind, component).
std::uint64_t component_seed(const ExperimentConfig& config, const std::string& component);

ExperimentReport run_experiment(const ExperimentConfig& config);

// Writes the CSV to `path` and the metadata to `path`.meta.
void write_report(const ExperimentReport& report, const std::string& path);

}  // namespace memolab
