#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "memolab/point.hpp"

namespace memolab {

class ProcessSampler;

enum class SpaceKind { kUnitInterval, kRealLine, kBox, kFinite };

// A separable metric instance space together with a fixed enumeration of a
// countable dense subset.
//
// Dense enumerations are breadth-first over dyadic levels: level L lists, in
// increasing (lexicographic) order, the grid points j / 2^L not listed at an
// earlier level. For the unit interval this is 1/2, 1/4, 3/4, 1/8, 3/8, ...
// The real line additionally widens the range to [-L, L] at level L (level 0
// is the origin). Finite spaces {0, ..., m-1} enumerate their own elements
// and use the discrete metric.
class MetricSpace {
 public:
  static MetricSpace unit_interval();
  static MetricSpace real_line();
  static MetricSpace box(std::size_t dim);
  static MetricSpace finite(std::size_t size);
  // Inverse of name(): "unit-interval", "real-line", "box-<d>", "finite-<m>".
  static MetricSpace from_name(const std::string& name);

  SpaceKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  // Number of elements of a finite space; 0 for continuous spaces.
  std::size_t size() const { return size_; }
  std::string name() const;

  double distance(const Point& a, const Point& b) const;
  bool contains(const Point& p) const;

  // The first `count` dense points (fewer for a finite space).
  std::vector<Point> dense_prefix(std::size_t count) const;
  // The index-th dense point, 1-based.
  Point dense_point(std::size_t index) const;

 private:
  MetricSpace(SpaceKind kind, std::size_t dim, std::size_t size) : kind_(kind), dim_(dim), size_(size) {}

  SpaceKind kind_;
  std::size_t dim_;
  std::size_t size_;
};

// Cell G_index of a greedy cover: the closed ball of `radius` around
// `center`, minus every earlier cell. `predecessors` lists the earlier cells
// whose balls meet this one; the others cannot remove anything.
struct CoverCell {
  std::size_t index = 0;
  Point center;
  double radius = 0.0;
  std::vector<std::size_t> predecessors;
};

// The first `count` cells of the greedy disjoint cover of diameter `delta`.
// Membership is resolved by scanning cells in index order and returning the
// first ball that contains the point, which realizes the set differences
// exactly. Lookups go through a bucket grid so they stay cheap for large
// prefixes.
class Cover {
 public:
  Cover(MetricSpace space, double delta, std::size_t count);

  const MetricSpace& space() const { return space_; }
  double delta() const { return delta_; }
  double radius() const { return delta_ / 2.0; }
  std::size_t size() const { return centers_.size(); }

  // 1-based index of the cell containing x, or nullopt when x lies outside
  // the first size() cells.
  std::optional<std::size_t> cell_of(const Point& x) const;
  bool member(std::size_t index, const Point& x) const;

  const Point& center(std::size_t index) const { return centers_.at(index - 1); }
  std::vector<CoverCell> cells() const;

 private:
  struct Grid;

  std::vector<std::size_t> ball_candidates(const Point& x) const;

  MetricSpace space_;
  double delta_;
  std::vector<Point> centers_;
  std::shared_ptr<const Grid> grid_;
};

std::vector<CoverCell> greedy_cover(const MetricSpace& space, double delta, std::size_t count);

inline constexpr std::size_t kCoverCellCap = std::size_t{1} << 20;

struct ProcessCover {
  std::size_t M = 0;
  std::shared_ptr<const Cover> cover;  // holds exactly M cells
  std::size_t escapes = 0;             // rollouts leaving the first M cells
  std::size_t trials = 0;
  double escape_upper_bound = 0.0;     // one-sided 0.99 Clopper-Pearson
};

// Smallest M >= min_count such that rollouts of length `horizon` leave the
// first M cells with a certified (0.99 upper bound) frequency below epsilon.
// Throws "horizon-insufficient" when no M up to kCoverCellCap certifies.
ProcessCover cover_for_process(const MetricSpace& space, const ProcessSampler& sampler, double epsilon,
                               double delta, std::size_t min_count, std::size_t horizon, std::size_t trials);

}  // namespace memolab
