#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "memolab/metric_space.hpp"
#include "memolab/point.hpp"
#include "memolab/process.hpp"
#include "memolab/rng.hpp"

namespace memolab {

// Level k of the schedule. Interval counts and index ranges are kept as
// doubles: for fast-converging processes they exceed every integer type.
struct ScheduleLevel {
  int k = 0;
  double mu = 0.0;  // 2^-(k+1)
  std::size_t N = 0;
  double delta = 0.0;
  double interval_count = 0.0;  // ceil(mu / delta)
  double i_begin = 0.0;         // i_{k-1}
  double i_end = 0.0;           // i_k
};

struct PartitionSchedule {
  std::vector<ScheduleLevel> levels;

  // Levels 1..size from (N_k, delta_k) pairs; fills mu, counts and ranges.
  static PartitionSchedule from_levels(const std::vector<std::pair<std::size_t, double>>& n_delta);

  int K_max() const { return static_cast<int>(levels.size()); }
  const ScheduleLevel& level(int k) const { return levels.at(static_cast<std::size_t>(k - 1)); }
};

inline constexpr std::size_t kScheduleHorizonCap = std::size_t{1} << 20;

// N_k: smallest horizon at which the distinct count has reached 4^(k+1) on a
// set of infinite-event rollouts whose 0.99 lower confidence bound clears
// 1 - 2^-(k+1). delta_k: half the ceil(2^-(k+1) n)-th smallest minimum gap
// at N_k, clamped below mu_k.
PartitionSchedule estimate_schedule(const ProcessSampler& sampler, const MetricSpace& space, int K_max,
                                    std::size_t trials, std::size_t horizon_cap = kScheduleHorizonCap);

enum class PartitionForm { kUnitInterval, kGeneralCover };

struct UnitLevel {
  int k = 0;
  double delta = 0.0;
  std::vector<double> centers;                        // q_i in draw order
  std::vector<std::pair<double, double>> intervals;   // clipped, sorted by left end
};

struct CoverLevel {
  int k = 0;
  double delta = 0.0;
  std::size_t M = 0;
  std::size_t b = 0;
  std::shared_ptr<const Cover> cover;
  std::vector<std::size_t> draws;    // sampled cell indices in draw order
  std::vector<std::size_t> members;  // sorted, unique
};

struct CellIndex {
  int index = 0;  // 0 = no level hit, otherwise last level hit
  bool tail_undetermined = false;  // hit at K_max, tail beyond truncation
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

struct VisitReport {
  std::set<int> cells;            // resolved cell indices (0 included)
  std::vector<bool> level_hit;    // level_hit[k-1]: B_k meets the prefix
  std::size_t tail_points = 0;    // points reported tail-undetermined
};

// A realized partition truncated at K_max levels.
class RandomPartition {
 public:
  // Unit-interval form from explicit centers; centers[k-1] holds the q_i of
  // level k.
  static RandomPartition unit_interval_from_centers(const std::vector<double>& deltas,
                                                    const std::vector<std::vector<double>>& centers);
  static RandomPartition general_from_levels(std::vector<CoverLevel> levels);

  PartitionForm form() const { return form_; }
  int K_max() const { return static_cast<int>(form_ == PartitionForm::kUnitInterval ? unit_.size() : cover_.size()); }
  const UnitLevel& unit_level(int k) const { return unit_.at(static_cast<std::size_t>(k - 1)); }
  const CoverLevel& cover_level(int k) const { return cover_.at(static_cast<std::size_t>(k - 1)); }

  bool in_level(int k, const Point& x) const;
  // Length of the merged union B_k (unit-interval form only).
  double level_measure(int k) const;
  std::size_t total_intervals() const;

  CellIndex cell_index(const Point& x) const;
  VisitReport visited_cells(std::span<const Point> prefix) const;

  // One line per level: k, delta and the interval endpoints (or the cover
  // parameters and sampled cells for the general form).
  std::string serialize() const;
  static RandomPartition parse(const std::string& text);

 private:
  PartitionForm form_ = PartitionForm::kUnitInterval;
  std::vector<UnitLevel> unit_;
  std::vector<CoverLevel> cover_;
  std::string space_name_;
};

inline constexpr std::size_t kMaxMaterializedIntervals = std::size_t{1} << 24;

// Draws q_i ~ U[0,1] for every index in every level, level k on stream
// (seed, kPartition, k). Throws "partition-too-large" above the cap.
RandomPartition build_unit_interval(const PartitionSchedule& schedule, std::uint64_t seed,
                                    std::size_t max_intervals = kMaxMaterializedIntervals);

// Cells per level: ceil(2^-(k+2) M).
std::size_t cells_per_level(int k, std::size_t M);

struct GeneralLevelInput {
  double delta = 0.0;
  std::size_t M = 0;
  std::shared_ptr<const Cover> cover;  // at least M cells
};

// Draws b_k independent uniform cells from the first M cover cells of each
// level. Throws "cover-too-small" when M < 2^(k+2).
RandomPartition build_general(const std::vector<GeneralLevelInput>& levels, std::uint64_t seed);

// Covers for the general form: level k uses eps_k = 2^-(k+3), m0 = 2^(k+2),
// delta_k and horizon N_k from the schedule.
std::vector<GeneralLevelInput> general_cover_levels(const MetricSpace& space, const ProcessSampler& sampler,
                                                    const PartitionSchedule& schedule, std::size_t trials);

// Exact draw of [x in B_k] for sorted distinct points of [0,1], without
// materializing the level: hit counts of the elementary pieces of
// U = union [x - delta/2, x + delta/2] follow sequential conditional
// binomials. Counts beyond 2^62 switch to independent Poisson pieces.
std::vector<char> draw_level_hits(double interval_count, double delta, std::span<const double> sorted_points,
                                  Engine& engine);

// Sorted distinct first coordinates.
std::vector<double> sorted_distinct(std::span<const Point> points);

struct Lemma1Report {
  int k = 0;
  std::size_t trials = 0;
  std::size_t misses = 0;
  double frequency = 0.0;
  double upper = 0.0;  // one-sided 0.99
  double bound = 0.0;  // exp(-2^(k+1))
};

// Throws "hypothesis-violated" unless #S > 4^(k+1) and all gaps exceed delta_k.
Lemma1Report mc_check_lemma1(const PartitionSchedule& schedule, int k, std::span<const double> S, std::size_t trials,
                             std::uint64_t seed);

struct TailRow {
  double x = 0.0;
  int k = 0;
  std::size_t trials = 0;
  std::size_t in_remainder = 0;
  double frequency = 0.0;
  double upper = 0.0;
  double bound = 0.0;  // 2^-(k-1)
};

// Frequencies of x in R_k (truncated at K_max) over independent redraws.
std::vector<TailRow> mc_check_tail(const PartitionSchedule& schedule, std::span<const double> points,
                                   std::size_t trials, std::uint64_t seed);

struct FmvRow {
  int k = 0;
  std::size_t N = 0;
  std::size_t trials = 0;  // infinite-event rollouts used
  std::size_t hits = 0;
  double frequency = 0.0;
  double lower = 0.0;      // one-sided 0.99
  double bound = 0.0;      // 1 - (2^-k + exp(-2^(k+1)))
};

// Paired redraws: rollout i of the sampler against an independent level draw
// i; counts how often B_k meets the first N_k points, on infinite-event
// rollouts only.
std::vector<FmvRow> fmv_statistic(const ProcessSampler& sampler, const PartitionSchedule& schedule,
                                  std::size_t trials, std::uint64_t seed);

}  // namespace memolab
