#pragma once

#include <cstddef>
#include <string>
#include <utility>

namespace memolab {

// Values of the label space are doubles: reals for the real line, label
// indices 0..m-1 for a finite label set.
using Value = double;

enum class ValueSpaceKind { kRealLine, kFiniteLabels };

// A loss on the value space. Real-line losses are |a - b|^p; finite label
// sets use the zero-one loss (the discrete metric, to any power).
class LossModel {
 public:
  static LossModel power(double p);
  static LossModel squared() { return power(2.0); }
  static LossModel absolute() { return power(1.0); }
  static LossModel zero_one(std::size_t labels);

  ValueSpaceKind value_space() const { return space_; }
  std::size_t labels() const { return labels_; }
  double exponent() const { return power_; }
  bool bounded() const { return space_ == ValueSpaceKind::kFiniteLabels; }
  // Relaxed-triangle constant: 2^(p-1) for p > 1 by convexity of t^p, and 1
  // for p <= 1 or the zero-one loss.
  double c_relaxed() const;
  // Fallback prediction of every rule: 0 on the reals, the first label.
  Value default_value() const { return 0.0; }
  std::string name() const;

  double distance(Value a, Value b) const;
  double evaluate(Value a, Value b) const;
  bool contains(Value y) const;

  // (0, floor(threshold^(1/p)) + 1), or (0, 0) for a zero threshold. The
  // pair's loss is re-checked against the threshold before returning.
  std::pair<Value, Value> witness_pair(double threshold) const;

 private:
  LossModel(ValueSpaceKind space, double p, std::size_t labels) : space_(space), power_(p), labels_(labels) {}

  ValueSpaceKind space_;
  double power_;
  std::size_t labels_;
};

}  // namespace memolab
