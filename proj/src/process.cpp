#include "memolab/process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_set>

#include "memolab/error.hpp"

namespace memolab {

namespace {

void check_weights(const std::vector<Point>& values, const std::vector<double>& weights) {
  if (values.empty()) throw LabError(errc::kInvalidArgument, "finite support needs at least one value");
  if (values.size() != weights.size())
    throw LabError(errc::kInvalidArgument, "finite support values and weights differ in length");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw LabError(errc::kInvalidArgument, "weights must be nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw LabError(errc::kInvalidArgument, "weights must not all be zero");
}

}  // namespace

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::kFiniteSupportIid: return "finite-support-iid";
    case SamplerKind::kIidUniform: return "iid-uniform";
    case SamplerKind::kGeometricDecay: return "geometric-decay";
    case SamplerKind::kDeterministicList: return "deterministic-list";
    case SamplerKind::kAlternatingAdversarial: return "alternating-adversarial";
    case SamplerKind::kMixed: return "mixed";
  }
  return "unknown";
}

std::string to_string(SupportClass support) {
  switch (support) {
    case SupportClass::kCertainlyFinite: return "certainly-finite";
    case SupportClass::kCertainlyInfinite: return "certainly-infinite";
    case SupportClass::kMixed: return "mixed";
  }
  return "unknown";
}

ProcessSampler ProcessSampler::finite_support(std::vector<Point> values, std::vector<double> weights,
                                              std::uint64_t seed) {
  check_weights(values, weights);
  ProcessSampler s(SamplerKind::kFiniteSupportIid, seed);
  s.dim_ = values.front().dim();
  s.values_ = std::move(values);
  s.weights_ = std::move(weights);
  return s;
}

ProcessSampler ProcessSampler::iid_uniform(std::size_t dim, std::uint64_t seed) {
  if (dim < 1 || dim > kMaxDim) throw LabError(errc::kInvalidArgument, "iid-uniform dimension out of range");
  ProcessSampler s(SamplerKind::kIidUniform, seed);
  s.dim_ = dim;
  return s;
}

ProcessSampler ProcessSampler::geometric_decay(double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw LabError(errc::kInvalidArgument, "geometric-decay ratio must lie in (0,1)");
  ProcessSampler s(SamplerKind::kGeometricDecay, seed);
  s.ratio_ = ratio;
  return s;
}

ProcessSampler ProcessSampler::deterministic_list(std::vector<Point> points, std::uint64_t seed) {
  if (points.empty()) throw LabError(errc::kInvalidArgument, "deterministic-list needs at least one point");
  ProcessSampler s(SamplerKind::kDeterministicList, seed);
  s.dim_ = points.front().dim();
  s.values_ = std::move(points);
  return s;
}

ProcessSampler ProcessSampler::alternating(Point x0, std::vector<std::size_t> switches, std::uint64_t seed) {
  for (std::size_t i = 1; i < switches.size(); ++i)
    if (switches[i] <= switches[i - 1])
      throw LabError(errc::kInvalidArgument, "alternating switch times must increase strictly");
  ProcessSampler s(SamplerKind::kAlternatingAdversarial, seed);
  s.values_ = {x0};
  s.switches_ = std::move(switches);
  return s;
}

ProcessSampler ProcessSampler::mixed(double p, std::vector<Point> values, std::vector<double> weights,
                                     std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw LabError(errc::kInvalidArgument, "mixed probability must lie in [0,1]");
  check_weights(values, weights);
  ProcessSampler s(SamplerKind::kMixed, seed);
  s.p_ = p;
  s.values_ = std::move(values);
  s.weights_ = std::move(weights);
  return s;
}

SupportClass ProcessSampler::support_class() const {
  switch (kind_) {
    case SamplerKind::kFiniteSupportIid:
    case SamplerKind::kDeterministicList: return SupportClass::kCertainlyFinite;
    case SamplerKind::kMixed:
      if (p_ == 0.0) return SupportClass::kCertainlyFinite;
      if (p_ == 1.0) return SupportClass::kCertainlyInfinite;
      return SupportClass::kMixed;
    default: return SupportClass::kCertainlyInfinite;
  }
}

bool ProcessSampler::deterministic() const {
  return kind_ == SamplerKind::kGeometricDecay || kind_ == SamplerKind::kDeterministicList ||
         kind_ == SamplerKind::kAlternatingAdversarial;
}

std::optional<std::size_t> ProcessSampler::support_size() const {
  if (kind_ == SamplerKind::kFiniteSupportIid || kind_ == SamplerKind::kDeterministicList ||
      kind_ == SamplerKind::kMixed) {
    std::vector<Point> distinct = values_;
    std::sort(distinct.begin(), distinct.end(), [](const Point& a, const Point& b) { return a < b; });
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    return distinct.size();
  }
  return std::nullopt;
}

std::string ProcessSampler::describe() const {
  std::string out = to_string(kind_);
  switch (kind_) {
    case SamplerKind::kGeometricDecay: out += "(ratio=" + std::to_string(ratio_) + ")"; break;
    case SamplerKind::kFiniteSupportIid:
    case SamplerKind::kDeterministicList: out += "(" + std::to_string(values_.size()) + " values)"; break;
    case SamplerKind::kMixed: out += "(p=" + std::to_string(p_) + ")"; break;
    case SamplerKind::kIidUniform: out += "(dim=" + std::to_string(dim_) + ")"; break;
    default: break;
  }
  return out;
}

Rollout ProcessSampler::rollout(std::size_t horizon, std::uint64_t index) const {
  Rollout r;
  r.points.reserve(horizon);
  Engine engine = make_engine(seed_, StreamTag::kProcess, index);
  switch (kind_) {
    case SamplerKind::kFiniteSupportIid: {
      std::discrete_distribution<std::size_t> pick(weights_.begin(), weights_.end());
      for (std::size_t t = 0; t < horizon; ++t) r.points.push_back(values_[pick(engine)]);
      r.infinite_event = false;
      break;
    }
    case SamplerKind::kIidUniform: {
      std::array<double, kMaxDim> c{};
      for (std::size_t t = 0; t < horizon; ++t) {
        for (std::size_t d = 0; d < dim_; ++d) c[d] = uniform01(engine);
        r.points.emplace_back(std::span<const double>(c.data(), dim_));
      }
      r.infinite_event = true;
      break;
    }
    case SamplerKind::kGeometricDecay: {
      double x = 1.0;
      for (std::size_t t = 0; t < horizon; ++t) {
        x *= ratio_;
        r.points.emplace_back(x);
      }
      r.infinite_event = true;
      break;
    }
    case SamplerKind::kDeterministicList: {
      for (std::size_t t = 0; t < horizon; ++t) r.points.push_back(values_[t % values_.size()]);
      r.infinite_event = false;
      break;
    }
    case SamplerKind::kAlternatingAdversarial: {
      const auto fresh = MetricSpace::unit_interval().dense_prefix(horizon);
      std::size_t segment = 0;
      std::size_t end = switches_.empty() ? 1 : switches_.front();
      for (std::size_t t = 1; t <= horizon; ++t) {
        while (t > end) {
          ++segment;
          end = segment < switches_.size() ? switches_[segment] : std::max<std::size_t>(1, end * 2);
        }
        r.points.push_back(segment % 2 == 0 ? values_.front() : fresh[t - 1]);
      }
      r.infinite_event = true;
      break;
    }
    case SamplerKind::kMixed: {
      r.infinite_event = uniform01(engine) < p_;
      if (r.infinite_event) {
        for (std::size_t t = 0; t < horizon; ++t) r.points.emplace_back(uniform01(engine));
      } else {
        std::discrete_distribution<std::size_t> pick(weights_.begin(), weights_.end());
        for (std::size_t t = 0; t < horizon; ++t) r.points.push_back(values_[pick(engine)]);
      }
      break;
    }
  }
  return r;
}

PrefixStats prefix_stats(std::span<const Point> prefix, const MetricSpace& space) {
  if (prefix.empty()) throw LabError(errc::kInvalidArgument, "prefix_stats needs a nonempty prefix");
  PrefixStats stats;
  stats.horizon = prefix.size();
  std::vector<Point> distinct(prefix.begin(), prefix.end());
  std::sort(distinct.begin(), distinct.end(), [](const Point& a, const Point& b) { return a < b; });
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  stats.distinct_count = distinct.size();
  if (distinct.size() < 2) return stats;
  double gap = std::numeric_limits<double>::infinity();
  if (space.dim() == 1 && space.kind() != SpaceKind::kFinite) {
    for (std::size_t i = 1; i < distinct.size(); ++i) gap = std::min(gap, space.distance(distinct[i - 1], distinct[i]));
  } else {
    for (std::size_t i = 0; i < distinct.size(); ++i)
      for (std::size_t j = i + 1; j < distinct.size(); ++j) gap = std::min(gap, space.distance(distinct[i], distinct[j]));
  }
  stats.min_gap = gap;
  return stats;
}

std::vector<std::size_t> distinct_counts(std::span<const Point> prefix) {
  std::vector<std::size_t> out;
  out.reserve(prefix.size());
  std::unordered_set<Point, PointHash> seen;
  for (const Point& p : prefix) {
    seen.insert(p);
    out.push_back(seen.size());
  }
  return out;
}

}  // namespace memolab
