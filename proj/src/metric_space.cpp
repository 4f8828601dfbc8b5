#include "memolab/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "memolab/error.hpp"
#include "memolab/parallel.hpp"
#include "memolab/process.hpp"
#include "memolab/rng.hpp"
#include "memolab/stats.hpp"

namespace memolab {

namespace {

// Appends the level-L dyadic grid points of (0,1)^dim that are new at L.
void append_box_level(std::size_t dim, int level, std::size_t limit, std::vector<Point>& out) {
  const std::int64_t top = (std::int64_t{1} << level) - 1;
  const double scale = std::ldexp(1.0, -level);
  std::array<std::int64_t, kMaxDim> j{};
  j.fill(1);
  std::array<double, kMaxDim> coords{};
  while (out.size() < limit) {
    bool fresh = false;
    for (std::size_t d = 0; d < dim; ++d) fresh = fresh || (j[d] & 1);
    if (fresh) {
      for (std::size_t d = 0; d < dim; ++d) coords[d] = static_cast<double>(j[d]) * scale;
      out.emplace_back(std::span<const double>(coords.data(), dim));
    }
    std::size_t d = dim;
    while (d > 0) {
      --d;
      if (++j[d] <= top) break;
      j[d] = 1;
      if (d == 0) return;
    }
  }
}

void append_line_level(int level, std::size_t limit, std::vector<Point>& out) {
  if (level == 0) {
    out.emplace_back(0.0);
    return;
  }
  const std::int64_t per_unit = std::int64_t{1} << level;
  const double scale = std::ldexp(1.0, -level);
  for (std::int64_t j = -level * per_unit; j <= level * per_unit && out.size() < limit; ++j) {
    const double x = static_cast<double>(j) * scale;
    const bool seen = (j % 2 == 0) && std::abs(x) <= static_cast<double>(level - 1);
    if (!seen) out.emplace_back(x);
  }
}

std::int64_t bucket_coord(double v, double width) {
  const double b = std::floor(v / width);
  constexpr double kLimit = 4.0e18;
  return static_cast<std::int64_t>(std::clamp(b, -kLimit, kLimit));
}

}  // namespace

MetricSpace MetricSpace::unit_interval() { return MetricSpace(SpaceKind::kUnitInterval, 1, 0); }
MetricSpace MetricSpace::real_line() { return MetricSpace(SpaceKind::kRealLine, 1, 0); }

MetricSpace MetricSpace::box(std::size_t dim) {
  if (dim < 1 || dim > kMaxDim)
    throw LabError(errc::kInvalidArgument, "box dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  return MetricSpace(SpaceKind::kBox, dim, 0);
}

MetricSpace MetricSpace::finite(std::size_t size) {
  if (size == 0) throw LabError(errc::kInvalidArgument, "finite space must be nonempty");
  return MetricSpace(SpaceKind::kFinite, 1, size);
}

MetricSpace MetricSpace::from_name(const std::string& name) {
  if (name == "unit-interval") return unit_interval();
  if (name == "real-line") return real_line();
  auto suffix = [&](const std::string& prefix) -> std::optional<std::size_t> {
    if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size()) return std::nullopt;
    std::size_t value = 0;
    for (char c : name.substr(prefix.size())) {
      if (c < '0' || c > '9') return std::nullopt;
      value = value * 10 + static_cast<std::size_t>(c - '0');
    }
    return value;
  };
  if (auto d = suffix("box-")) return box(*d);
  if (auto m = suffix("finite-")) return finite(*m);
  throw LabError(errc::kInvalidArgument, "unknown space '" + name + "'");
}

std::string MetricSpace::name() const {
  switch (kind_) {
    case SpaceKind::kUnitInterval: return "unit-interval";
    case SpaceKind::kRealLine: return "real-line";
    case SpaceKind::kBox: return "box-" + std::to_string(dim_);
    case SpaceKind::kFinite: return "finite-" + std::to_string(size_);
  }
  return "unknown";
}

double MetricSpace::distance(const Point& a, const Point& b) const {
  if (kind_ == SpaceKind::kFinite) return a == b ? 0.0 : 1.0;
  if (dim_ == 1) return std::abs(a.x() - b.x());
  double s = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

bool MetricSpace::contains(const Point& p) const {
  if (p.dim() != dim_) return false;
  switch (kind_) {
    case SpaceKind::kRealLine: return std::isfinite(p.x());
    case SpaceKind::kFinite:
      return p.x() >= 0.0 && p.x() < static_cast<double>(size_) && std::floor(p.x()) == p.x();
    default:
      for (double c : p.coords())
        if (!(c >= 0.0 && c <= 1.0)) return false;
      return true;
  }
}

std::vector<Point> MetricSpace::dense_prefix(std::size_t count) const {
  std::vector<Point> out;
  if (kind_ == SpaceKind::kFinite) {
    for (std::size_t i = 0; i < std::min(count, size_); ++i) out.emplace_back(static_cast<double>(i));
    return out;
  }
  out.reserve(count);
  for (int level = kind_ == SpaceKind::kRealLine ? 0 : 1; out.size() < count; ++level) {
    if (level > 60) throw LabError(errc::kInvalidArgument, "dense enumeration exhausted");
    if (kind_ == SpaceKind::kRealLine)
      append_line_level(level, count, out);
    else
      append_box_level(dim_, level, count, out);
  }
  return out;
}

Point MetricSpace::dense_point(std::size_t index) const {
  if (index == 0) throw LabError(errc::kInvalidArgument, "dense enumeration is 1-based");
  auto prefix = dense_prefix(index);
  if (prefix.size() < index) throw LabError(errc::kInvalidArgument, "finite space has no such element");
  return prefix.back();
}

// Bucket grid of side `width` over the centers; each bucket keeps its
// center indices in increasing order.
struct Cover::Grid {
  double width = 1.0;
  std::size_t dim = 1;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets;

  static std::uint64_t key(std::span<const std::int64_t> cell) {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (auto c : cell) h = splitmix64(h ^ static_cast<std::uint64_t>(c));
    return h;
  }

  // Calls fn(bucket) for every bucket meeting the box [x - reach, x + reach].
  template <typename Fn>
  void for_each_bucket(const Point& x, double reach, Fn&& fn) const {
    std::array<std::int64_t, kMaxDim> lo{}, hi{}, cur{};
    for (std::size_t d = 0; d < dim; ++d) {
      lo[d] = bucket_coord(x[d] - reach, width);
      hi[d] = bucket_coord(x[d] + reach, width);
      cur[d] = lo[d];
    }
    while (true) {
      auto it = buckets.find(key(std::span<const std::int64_t>(cur.data(), dim)));
      if (it != buckets.end()) fn(it->second);
      std::size_t d = dim;
      while (d > 0) {
        --d;
        if (++cur[d] <= hi[d]) break;
        cur[d] = lo[d];
        if (d == 0) return;
      }
    }
  }
};

Cover::Cover(MetricSpace space, double delta, std::size_t count) : space_(space), delta_(delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw LabError(errc::kInvalidArgument, "cover delta must be positive");
  if (count == 0) throw LabError(errc::kInvalidArgument, "cover count must be positive");
  if (count > kCoverCellCap) throw LabError(errc::kInvalidArgument, "cover count exceeds the cell cap");
  centers_ = space_.dense_prefix(count);
  if (space_.kind() == SpaceKind::kFinite) return;
  auto grid = std::make_shared<Grid>();
  grid->width = radius();
  grid->dim = space_.dim();
  std::array<std::int64_t, kMaxDim> cell{};
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    for (std::size_t d = 0; d < grid->dim; ++d) cell[d] = bucket_coord(centers_[i][d], grid->width);
    grid->buckets[Grid::key(std::span<const std::int64_t>(cell.data(), grid->dim))].push_back(
        static_cast<std::uint32_t>(i));
  }
  grid_ = std::move(grid);
}

std::optional<std::size_t> Cover::cell_of(const Point& x) const {
  const double r = radius();
  if (space_.kind() == SpaceKind::kFinite) {
    if (centers_.empty()) return std::nullopt;
    if (r >= 1.0) return 1;
    for (std::size_t i = 0; i < centers_.size(); ++i)
      if (centers_[i] == x) return i + 1;
    return std::nullopt;
  }
  std::size_t best = std::numeric_limits<std::size_t>::max();
  grid_->for_each_bucket(x, r, [&](const std::vector<std::uint32_t>& bucket) {
    for (std::uint32_t i : bucket) {
      if (i >= best) break;
      if (space_.distance(x, centers_[i]) <= r) {
        best = i;
        break;
      }
    }
  });
  if (best == std::numeric_limits<std::size_t>::max()) return std::nullopt;
  return best + 1;
}

bool Cover::member(std::size_t index, const Point& x) const {
  auto c = cell_of(x);
  return c && *c == index;
}

std::vector<std::size_t> Cover::ball_candidates(const Point& x) const {
  std::vector<std::size_t> out;
  const double reach = delta_;
  if (space_.kind() == SpaceKind::kFinite) {
    for (std::size_t i = 0; i < centers_.size(); ++i)
      if (space_.distance(x, centers_[i]) <= reach) out.push_back(i);
    return out;
  }
  grid_->for_each_bucket(x, reach, [&](const std::vector<std::uint32_t>& bucket) {
    for (std::uint32_t i : bucket)
      if (space_.distance(x, centers_[i]) <= reach) out.push_back(i);
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CoverCell> Cover::cells() const {
  std::vector<CoverCell> out;
  out.reserve(centers_.size());
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    CoverCell cell;
    cell.index = i + 1;
    cell.center = centers_[i];
    cell.radius = radius();
    for (std::size_t j : ball_candidates(centers_[i])) {
      if (j >= i) break;
      cell.predecessors.push_back(j + 1);
    }
    out.push_back(std::move(cell));
  }
  return out;
}

std::vector<CoverCell> greedy_cover(const MetricSpace& space, double delta, std::size_t count) {
  return Cover(space, delta, count).cells();
}

ProcessCover cover_for_process(const MetricSpace& space, const ProcessSampler& sampler, double epsilon,
                               double delta, std::size_t min_count, std::size_t horizon, std::size_t trials) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw LabError(errc::kInvalidArgument, "epsilon must lie in (0, 1)");
  if (min_count == 0 || horizon == 0 || trials == 0)
    throw LabError(errc::kInvalidArgument, "min_count, horizon and trials must be positive");
  const long allowed = max_certifiable_failures(trials, epsilon);
  if (allowed < 0)
    throw LabError(errc::kTrialsInsufficient,
                   std::to_string(trials) + " trials cannot certify an escape rate below " + std::to_string(epsilon));

  std::vector<std::vector<Point>> rollouts(trials);
  parallel_for(trials, [&](std::size_t t) { rollouts[t] = sampler.rollout(horizon, t).points; });

  constexpr std::size_t kUncovered = std::numeric_limits<std::size_t>::max();
  std::size_t prefix = std::max<std::size_t>(min_count, 1024);
  if (space.kind() == SpaceKind::kFinite) prefix = std::min(prefix, space.size());
  prefix = std::min(prefix, kCoverCellCap);
  while (true) {
    const Cover probe(space, delta, prefix);
    // Deepest cell index reached by each rollout.
    std::vector<std::size_t> deepest(trials, 0);
    parallel_for(trials, [&](std::size_t t) {
      std::size_t worst = 0;
      for (const Point& x : rollouts[t]) {
        auto c = probe.cell_of(x);
        if (!c) {
          worst = kUncovered;
          break;
        }
        worst = std::max(worst, *c);
      }
      deepest[t] = worst;
    });
    std::sort(deepest.begin(), deepest.end());
    // Keep all but `allowed` rollouts inside the first M cells.
    const std::size_t needed = trials - static_cast<std::size_t>(allowed);
    const std::size_t order_stat = deepest[needed - 1];
    const bool exhausted = prefix >= kCoverCellCap || (space.kind() == SpaceKind::kFinite && prefix >= space.size());
    if (order_stat == kUncovered) {
      if (exhausted)
        throw LabError(errc::kHorizonInsufficient,
                       "no cover prefix up to " + std::to_string(prefix) + " cells certifies the escape bound");
      prefix = std::min(prefix * 2, kCoverCellCap);
      if (space.kind() == SpaceKind::kFinite) prefix = std::min(prefix, space.size());
      continue;
    }
    ProcessCover result;
    result.M = std::max(min_count, order_stat);
    if (space.kind() == SpaceKind::kFinite) result.M = std::min(result.M, space.size());
    result.trials = trials;
    result.escapes = static_cast<std::size_t>(
        std::count_if(deepest.begin(), deepest.end(), [&](std::size_t d) { return d > result.M; }));
    result.escape_upper_bound = binomial_upper_bound(result.escapes, trials);
    result.cover = std::make_shared<const Cover>(space, delta, result.M);
    return result;
  }
}

}  // namespace memolab
