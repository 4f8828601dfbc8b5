#include "memolab/loss.hpp"

#include <cmath>

#include <fmt/format.h>

#include "memolab/error.hpp"

namespace memolab {

LossModel LossModel::power(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw LabError(errc::kInvalidArgument, "loss exponent must be positive");
  return LossModel(ValueSpaceKind::kRealLine, p, 0);
}

LossModel LossModel::zero_one(std::size_t labels) {
  if (labels < 2) throw LabError(errc::kInvalidArgument, "a label set needs at least two labels");
  return LossModel(ValueSpaceKind::kFiniteLabels, 1.0, labels);
}

double LossModel::c_relaxed() const {
  if (space_ == ValueSpaceKind::kFiniteLabels) return 1.0;
  return power_ > 1.0 ? std::pow(2.0, power_ - 1.0) : 1.0;
}

std::string LossModel::name() const {
  if (space_ == ValueSpaceKind::kFiniteLabels) return fmt::format("zero-one({})", labels_);
  if (power_ == 2.0) return "squared";
  if (power_ == 1.0) return "absolute";
  return fmt::format("power({})", power_);
}

double LossModel::distance(Value a, Value b) const {
  if (space_ == ValueSpaceKind::kFiniteLabels) return a == b ? 0.0 : 1.0;
  return std::abs(a - b);
}

double LossModel::evaluate(Value a, Value b) const {
  const double d = distance(a, b);
  if (power_ == 1.0) return d;
  if (power_ == 2.0) return d * d;
  return std::pow(d, power_);
}

bool LossModel::contains(Value y) const {
  if (space_ == ValueSpaceKind::kFiniteLabels)
    return y >= 0.0 && y < static_cast<double>(labels_) && std::floor(y) == y;
  return std::isfinite(y);
}

std::pair<Value, Value> LossModel::witness_pair(double threshold) const {
  if (bounded()) throw LabError(errc::kBoundedLoss, "no witness pair exists for a bounded loss");
  if (!(threshold >= 0.0) || !std::isfinite(threshold))
    throw LabError(errc::kInvalidArgument, "witness threshold must be finite and nonnegative");
  if (threshold == 0.0) return {0.0, 0.0};
  double b = std::floor(std::pow(threshold, 1.0 / power_)) + 1.0;
  while (evaluate(0.0, b) < threshold) b += 1.0;  // guards pow rounding
  return {0.0, b};
}

}  // namespace memolab
