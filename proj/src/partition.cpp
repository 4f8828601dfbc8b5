#include "memolab/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "memolab/csv.hpp"
#include "memolab/error.hpp"
#include "memolab/parallel.hpp"
#include "memolab/stats.hpp"

namespace memolab {

namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();
constexpr double kTwo62 = 4611686018427387904.0;

double mu_of(int k) { return std::ldexp(1.0, -(k + 1)); }

std::uint64_t level_stream(std::uint64_t trial, int k) { return trial * 64 + static_cast<std::uint64_t>(k); }

std::size_t target_count(int k) { return std::size_t{1} << (2 * k + 2); }

// Distinct-count reach times of one rollout for each level, or kUnreached.
struct ReachTimes {
  bool infinite_event = false;
  std::vector<std::size_t> times;
};

ReachTimes reach_times(const ProcessSampler& sampler, std::uint64_t index, int K, std::size_t cap) {
  ReachTimes out;
  out.times.assign(static_cast<std::size_t>(K), kUnreached);
  const std::size_t top = target_count(K);
  std::size_t horizon = std::min(cap, std::max<std::size_t>(top, 64));
  while (true) {
    const Rollout r = sampler.rollout(horizon, index);
    out.infinite_event = r.infinite_event;
    if (!r.infinite_event) return out;
    const auto counts = distinct_counts(r.points);
    for (int k = 1; k <= K; ++k) {
      auto it = std::lower_bound(counts.begin(), counts.end(), target_count(k));
      if (it != counts.end()) out.times[static_cast<std::size_t>(k - 1)] = static_cast<std::size_t>(it - counts.begin()) + 1;
    }
    if (counts.back() >= top || horizon >= cap) return out;
    horizon = std::min(cap, horizon * 2);
  }
}

// Smallest j with a 0.99 lower confidence bound of j / n at least `level`.
std::size_t min_successes(std::size_t n, double level) {
  if (binomial_lower_bound(n, n) < level) return 0;
  std::size_t lo = 1, hi = n;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (binomial_lower_bound(mid, n) >= level)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

struct Piece {
  double length;
  std::size_t first;
  std::size_t last;
};

// Pieces are computed per cluster of overlapping intervals, in coordinates
// relative to the cluster's first point: absolute endpoints x +- delta/2
// would round back to x once delta falls below the spacing of doubles.
std::vector<Piece> elementary_pieces(double half, std::span<const double> pts) {
  std::vector<Piece> pieces;
  std::size_t begin = 0;
  while (begin < pts.size()) {
    std::size_t end = begin + 1;
    while (end < pts.size() && pts[end] - pts[end - 1] <= 2 * half) ++end;
    const double base = pts[begin];
    const std::size_t s = end - begin;
    std::vector<double> starts(s), ends(s), coords;
    coords.reserve(2 * s);
    for (std::size_t j = 0; j < s; ++j) {
      const double off = pts[begin + j] - base;
      starts[j] = std::max(-base, off - half);
      ends[j] = std::min(1.0 - base, off + half);
      coords.push_back(starts[j]);
      coords.push_back(ends[j]);
    }
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    for (std::size_t i = 1; i < coords.size(); ++i) {
      const double c0 = coords[i - 1], c1 = coords[i];
      const double mid = c0 + (c1 - c0) / 2;
      const auto lo = static_cast<std::size_t>(std::lower_bound(ends.begin(), ends.end(), mid) - ends.begin());
      const auto hi_end =
          static_cast<std::size_t>(std::upper_bound(starts.begin(), starts.end(), mid) - starts.begin());
      if (hi_end == 0 || lo >= hi_end) continue;
      pieces.push_back({c1 - c0, begin + lo, begin + hi_end - 1});
    }
    begin = end;
  }
  return pieces;
}

std::vector<std::pair<double, double>> merge(std::vector<std::pair<double, double>> iv) {
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<double, double>> out;
  for (const auto& [lo, hi] : iv) {
    if (!out.empty() && lo <= out.back().second)
      out.back().second = std::max(out.back().second, hi);
    else
      out.emplace_back(lo, hi);
  }
  return out;
}

std::pair<double, double> clipped(double q, double delta) {
  return {std::max(0.0, q - delta / 2), std::min(1.0, q + delta / 2)};
}

}  // namespace

PartitionSchedule PartitionSchedule::from_levels(const std::vector<std::pair<std::size_t, double>>& n_delta) {
  PartitionSchedule s;
  double i = 0.0;
  for (std::size_t idx = 0; idx < n_delta.size(); ++idx) {
    ScheduleLevel lvl;
    lvl.k = static_cast<int>(idx) + 1;
    lvl.mu = mu_of(lvl.k);
    lvl.N = n_delta[idx].first;
    lvl.delta = n_delta[idx].second;
    if (!(lvl.delta > 0.0 && lvl.delta < lvl.mu))
      throw LabError(errc::kInvalidArgument, fmt::format("delta_{} must lie in (0, {})", lvl.k, lvl.mu));
    lvl.interval_count = std::ceil(lvl.mu / lvl.delta);
    lvl.i_begin = i;
    lvl.i_end = i + lvl.interval_count;
    i = lvl.i_end;
    s.levels.push_back(lvl);
  }
  return s;
}

PartitionSchedule estimate_schedule(const ProcessSampler& sampler, const MetricSpace& space, int K_max,
                                    std::size_t trials, std::size_t horizon_cap) {
  if (sampler.support_class() == SupportClass::kCertainlyFinite)
    throw LabError(errc::kFiniteSupportProcess, "schedule is undefined for a finite-support process");
  if (K_max < 1 || K_max > 12) throw LabError(errc::kInvalidArgument, "K_max must lie in [1, 12]");
  if (trials < 1000) throw LabError(errc::kTrialsInsufficient, "schedule estimation needs at least 1000 trials");
  for (int k = 1; k <= K_max; ++k)
    if (min_successes(trials, 1.0 - mu_of(k)) == 0)
      throw LabError(errc::kTrialsInsufficient, fmt::format("{} trials cannot certify level {} at 0.99", trials, k));

  const std::size_t runs = sampler.deterministic() ? 1 : trials;
  std::vector<ReachTimes> reach(runs);
  parallel_for(runs, [&](std::size_t t) { reach[t] = reach_times(sampler, t, K_max, horizon_cap); });
  std::vector<std::size_t> event_runs;
  for (std::size_t t = 0; t < runs; ++t)
    if (reach[t].infinite_event) event_runs.push_back(t);
  // A deterministic sampler stands for `trials` identical rollouts.
  const std::size_t n = sampler.deterministic() ? (event_runs.empty() ? 0 : trials) : event_runs.size();
  if (n == 0) throw LabError(errc::kTrialsInsufficient, "no rollout realized the infinite event");

  std::vector<std::pair<std::size_t, double>> n_delta;
  std::vector<std::size_t> Ns;
  for (int k = 1; k <= K_max; ++k) {
    const std::size_t j = min_successes(n, 1.0 - mu_of(k));
    if (j == 0)
      throw LabError(errc::kTrialsInsufficient,
                     fmt::format("{} infinite-event rollouts cannot certify level {} at 0.99", n, k));
    std::vector<std::size_t> times;
    for (std::size_t t : event_runs) times.push_back(reach[t].times[static_cast<std::size_t>(k - 1)]);
    std::sort(times.begin(), times.end());
    const std::size_t N = sampler.deterministic() ? times.front() : times[j - 1];
    if (N == kUnreached)
      throw LabError(errc::kHorizonInsufficient,
                     fmt::format("distinct count never reaches {} within {} steps", target_count(k), horizon_cap));
    Ns.push_back(N);
  }

  const std::size_t longest = *std::max_element(Ns.begin(), Ns.end());
  std::vector<std::vector<double>> per_run(event_runs.size());
  parallel_for(event_runs.size(), [&](std::size_t r) {
    const auto pts = sampler.rollout(longest, event_runs[r]).points;
    for (int k = 1; k <= K_max; ++k) {
      const auto st = prefix_stats(std::span<const Point>(pts.data(), Ns[static_cast<std::size_t>(k - 1)]), space);
      per_run[r].push_back(st.min_gap.value_or(std::numeric_limits<double>::infinity()));
    }
  });
  for (int k = 1; k <= K_max; ++k) {
    std::vector<double> g;
    for (const auto& row : per_run) g.push_back(row[static_cast<std::size_t>(k - 1)]);
    std::sort(g.begin(), g.end());
    const double mu = mu_of(k);
    double gap = g.front();
    if (!sampler.deterministic()) {
      const auto idx = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(mu * static_cast<double>(n))));
      gap = g[std::min(idx, g.size()) - 1];
    }
    const double delta = std::min(gap / 2, std::nextafter(mu, 0.0));
    n_delta.emplace_back(Ns[static_cast<std::size_t>(k - 1)], delta);
  }
  return PartitionSchedule::from_levels(n_delta);
}

RandomPartition RandomPartition::unit_interval_from_centers(const std::vector<double>& deltas,
                                                            const std::vector<std::vector<double>>& centers) {
  if (deltas.size() != centers.size()) throw LabError(errc::kInvalidArgument, "one delta per level is required");
  RandomPartition p;
  p.form_ = PartitionForm::kUnitInterval;
  p.space_name_ = "unit-interval";
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    UnitLevel lvl;
    lvl.k = static_cast<int>(i) + 1;
    lvl.delta = deltas[i];
    lvl.centers = centers[i];
    for (double q : lvl.centers) lvl.intervals.push_back(clipped(q, lvl.delta));
    std::sort(lvl.intervals.begin(), lvl.intervals.end());
    p.unit_.push_back(std::move(lvl));
  }
  return p;
}

RandomPartition RandomPartition::general_from_levels(std::vector<CoverLevel> levels) {
  RandomPartition p;
  p.form_ = PartitionForm::kGeneralCover;
  if (!levels.empty()) p.space_name_ = levels.front().cover->space().name();
  p.cover_ = std::move(levels);
  return p;
}

bool RandomPartition::in_level(int k, const Point& x) const {
  if (form_ == PartitionForm::kUnitInterval) {
    const auto& iv = unit_level(k).intervals;
    // Equal-width clipped intervals sorted by left end are also sorted by
    // right end, so only the last one starting at or before x can hold it.
    auto it = std::upper_bound(iv.begin(), iv.end(), x.x(),
                               [](double v, const std::pair<double, double>& i) { return v < i.first; });
    if (it == iv.begin()) return false;
    return x.x() <= std::prev(it)->second;
  }
  const auto& lvl = cover_level(k);
  auto c = lvl.cover->cell_of(x);
  return c && std::binary_search(lvl.members.begin(), lvl.members.end(), *c);
}

double RandomPartition::level_measure(int k) const {
  if (form_ != PartitionForm::kUnitInterval)
    throw LabError(errc::kInvalidArgument, "level measure is only exact for the unit-interval form");
  double total = 0.0;
  for (const auto& [lo, hi] : merge(unit_level(k).intervals)) total += hi - lo;
  return total;
}

std::size_t RandomPartition::total_intervals() const {
  std::size_t n = 0;
  for (const auto& l : unit_) n += l.intervals.size();
  for (const auto& l : cover_) n += l.draws.size();
  return n;
}

CellIndex RandomPartition::cell_index(const Point& x) const {
  const int K = K_max();
  for (int k = K; k >= 1; --k)
    if (in_level(k, x)) return {k, k == K};
  return {0, false};
}

VisitReport RandomPartition::visited_cells(std::span<const Point> prefix) const {
  VisitReport r;
  r.level_hit.assign(static_cast<std::size_t>(K_max()), false);
  for (const Point& x : prefix) {
    bool any = false;
    int last = 0;
    for (int k = 1; k <= K_max(); ++k)
      if (in_level(k, x)) {
        r.level_hit[static_cast<std::size_t>(k - 1)] = true;
        any = true;
        last = k;
      }
    if (any && last == K_max())
      ++r.tail_points;
    else
      r.cells.insert(last);
  }
  return r;
}

std::string RandomPartition::serialize() const {
  std::string out;
  if (form_ == PartitionForm::kUnitInterval) {
    out += "form unit-interval\n";
    out += fmt::format("K_max {}\n", K_max());
    for (const auto& l : unit_) {
      out += fmt::format("level {} {} {}", l.k, format_real(l.delta), l.intervals.size());
      for (const auto& [lo, hi] : l.intervals) out += " " + format_real(lo) + " " + format_real(hi);
      out += "\n";
    }
  } else {
    out += "form general-cover\n";
    out += "space " + space_name_ + "\n";
    out += fmt::format("K_max {}\n", K_max());
    for (const auto& l : cover_) {
      out += fmt::format("level {} {} {} {}", l.k, format_real(l.delta), l.M, l.b);
      for (std::size_t c : l.draws) out += fmt::format(" {}", c);
      out += "\n";
    }
  }
  return out;
}

RandomPartition RandomPartition::parse(const std::string& text) {
  std::istringstream in(text);
  auto fail = [](const std::string& why) { throw LabError(errc::kInvalidArgument, "bad partition text: " + why); };
  std::string word, form;
  if (!(in >> word >> form) || word != "form") fail("missing form line");
  RandomPartition p;
  std::string space = "unit-interval";
  if (form == "general-cover") {
    if (!(in >> word >> space) || word != "space") fail("missing space line");
    p.form_ = PartitionForm::kGeneralCover;
  } else if (form != "unit-interval") {
    fail("unknown form " + form);
  }
  p.space_name_ = space;
  int K = 0;
  if (!(in >> word >> K) || word != "K_max" || K < 0) fail("missing K_max line");
  for (int k = 1; k <= K; ++k) {
    int idx = 0;
    std::string delta_text;
    if (!(in >> word >> idx >> delta_text) || word != "level" || idx != k) fail("bad level header");
    const double delta = std::strtod(delta_text.c_str(), nullptr);
    if (p.form_ == PartitionForm::kUnitInterval) {
      UnitLevel l;
      l.k = k;
      l.delta = delta;
      std::size_t count = 0;
      if (!(in >> count)) fail("missing interval count");
      for (std::size_t i = 0; i < count; ++i) {
        std::string a, b;
        if (!(in >> a >> b)) fail("truncated interval list");
        l.intervals.emplace_back(std::strtod(a.c_str(), nullptr), std::strtod(b.c_str(), nullptr));
      }
      p.unit_.push_back(std::move(l));
    } else {
      CoverLevel l;
      l.k = k;
      l.delta = delta;
      if (!(in >> l.M >> l.b)) fail("missing cover sizes");
      for (std::size_t i = 0; i < l.b; ++i) {
        std::size_t c = 0;
        if (!(in >> c) || c < 1 || c > l.M) fail("bad cell index");
        l.draws.push_back(c);
      }
      l.members = l.draws;
      std::sort(l.members.begin(), l.members.end());
      l.members.erase(std::unique(l.members.begin(), l.members.end()), l.members.end());
      l.cover = std::make_shared<const Cover>(MetricSpace::from_name(space), delta, l.M);
      p.cover_.push_back(std::move(l));
    }
  }
  return p;
}

RandomPartition build_unit_interval(const PartitionSchedule& schedule, std::uint64_t seed, std::size_t max_intervals) {
  double total = 0.0;
  for (const auto& l : schedule.levels) total += l.interval_count;
  if (total > static_cast<double>(max_intervals))
    throw LabError(errc::kPartitionTooLarge,
                   fmt::format("{} intervals exceed the materialization cap of {}", total, max_intervals));
  std::vector<double> deltas;
  std::vector<std::vector<double>> centers;
  for (const auto& l : schedule.levels) {
    Engine engine = make_engine(seed, StreamTag::kPartition, static_cast<std::uint64_t>(l.k));
    std::vector<double> q(static_cast<std::size_t>(l.interval_count));
    for (double& v : q) v = uniform01(engine);
    deltas.push_back(l.delta);
    centers.push_back(std::move(q));
  }
  return RandomPartition::unit_interval_from_centers(deltas, centers);
}

std::size_t cells_per_level(int k, std::size_t M) {
  const std::size_t unit = std::size_t{1} << (k + 2);
  return (M + unit - 1) / unit;
}

RandomPartition build_general(const std::vector<GeneralLevelInput>& levels, std::uint64_t seed) {
  std::vector<CoverLevel> out;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    const auto& in = levels[i];
    if (in.M < (std::size_t{1} << (k + 2)))
      throw LabError(errc::kCoverTooSmall, fmt::format("level {} has M = {} < 2^{}", k, in.M, k + 2));
    if (!in.cover || in.cover->size() < in.M) throw LabError(errc::kInvalidArgument, "cover holds fewer than M cells");
    CoverLevel l;
    l.k = k;
    l.delta = in.delta;
    l.M = in.M;
    l.b = cells_per_level(k, in.M);
    l.cover = in.cover;
    Engine engine = make_engine(seed, StreamTag::kPartition, static_cast<std::uint64_t>(k));
    std::uniform_int_distribution<std::size_t> pick(1, in.M);
    for (std::size_t j = 0; j < l.b; ++j) l.draws.push_back(pick(engine));
    l.members = l.draws;
    std::sort(l.members.begin(), l.members.end());
    l.members.erase(std::unique(l.members.begin(), l.members.end()), l.members.end());
    out.push_back(std::move(l));
  }
  return RandomPartition::general_from_levels(std::move(out));
}

std::vector<GeneralLevelInput> general_cover_levels(const MetricSpace& space, const ProcessSampler& sampler,
                                                    const PartitionSchedule& schedule, std::size_t trials) {
  std::vector<GeneralLevelInput> out;
  for (const auto& l : schedule.levels) {
    const double eps = std::ldexp(1.0, -(l.k + 3));
    const std::size_t m0 = std::size_t{1} << (l.k + 2);
    auto pc = cover_for_process(space, sampler, eps, l.delta, m0, l.N, trials);
    out.push_back({l.delta, pc.M, pc.cover});
  }
  return out;
}

std::vector<char> draw_level_hits(double interval_count, double delta, std::span<const double> pts, Engine& engine) {
  std::vector<char> hit(pts.size(), 0);
  if (pts.empty() || !(interval_count >= 1.0)) return hit;
  const auto pieces = elementary_pieces(delta / 2, pts);
  if (pieces.empty()) return hit;
  std::vector<int> diff(pts.size() + 1, 0);
  auto mark = [&](const Piece& p) {
    ++diff[p.first];
    --diff[p.last + 1];
  };

  if (interval_count > kTwo62) {
    // Poissonized counts: pieces receive independent Poisson(n * length)
    // centers, so each piece is hit with probability 1 - exp(-n * length).
    for (const auto& p : pieces)
      if (uniform01(engine) < -std::expm1(-interval_count * p.length)) mark(p);
  } else {
    std::vector<double> cumulative;
    cumulative.reserve(pieces.size());
    double L = 0.0;
    for (const auto& p : pieces) cumulative.push_back(L += p.length);
    const auto n = static_cast<long long>(interval_count);
    long long H = std::binomial_distribution<long long>(n, std::min(1.0, L))(engine);
    if (static_cast<std::size_t>(H) <= 16 * pieces.size()) {
      // Each center landing in U is uniform on U.
      for (long long h = 0; h < H; ++h) {
        const double u = uniform01(engine) * L;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) --it;
        mark(pieces[static_cast<std::size_t>(it - cumulative.begin())]);
      }
    } else {
      // Multinomial split of H over the pieces by sequential binomials.
      double rest = L;
      for (const auto& p : pieces) {
        if (H == 0) break;
        const double prob = rest > 0.0 ? std::min(1.0, p.length / rest) : 1.0;
        const long long c = std::binomial_distribution<long long>(H, prob)(engine);
        if (c > 0) mark(p);
        H -= c;
        rest -= p.length;
      }
    }
  }
  int run = 0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    run += diff[j];
    hit[j] = run > 0;
  }
  return hit;
}

std::vector<double> sorted_distinct(std::span<const Point> points) {
  std::vector<double> xs;
  xs.reserve(points.size());
  for (const auto& p : points) xs.push_back(p.x());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

Lemma1Report mc_check_lemma1(const PartitionSchedule& schedule, int k, std::span<const double> S, std::size_t trials,
                             std::uint64_t seed) {
  if (k < 1 || k > schedule.K_max()) throw LabError(errc::kInvalidArgument, fmt::format("level {} not in schedule", k));
  const auto& lvl = schedule.level(k);
  std::vector<double> pts(S.begin(), S.end());
  std::sort(pts.begin(), pts.end());
  if (std::adjacent_find(pts.begin(), pts.end()) != pts.end())
    throw LabError(errc::kHypothesisViolated, "S contains repeated points");
  if (pts.size() <= target_count(k))
    throw LabError(errc::kHypothesisViolated, fmt::format("#S = {} must exceed {}", pts.size(), target_count(k)));
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (!(pts[i] - pts[i - 1] > lvl.delta))
      throw LabError(errc::kHypothesisViolated,
                     fmt::format("gap {} at {} does not exceed delta_{} = {}", pts[i] - pts[i - 1], pts[i], k, lvl.delta));
  std::vector<char> missed(trials, 0);
  parallel_for(trials, [&](std::size_t t) {
    Engine engine = make_engine(seed, StreamTag::kPartition, level_stream(t, k));
    const auto hit = draw_level_hits(lvl.interval_count, lvl.delta, pts, engine);
    missed[t] = std::none_of(hit.begin(), hit.end(), [](char h) { return h != 0; });
  });
  Lemma1Report r;
  r.k = k;
  r.trials = trials;
  r.misses = static_cast<std::size_t>(std::count(missed.begin(), missed.end(), 1));
  r.frequency = trials ? static_cast<double>(r.misses) / static_cast<double>(trials) : 0.0;
  r.upper = trials ? binomial_upper_bound(r.misses, trials) : 1.0;
  r.bound = std::exp(-std::ldexp(1.0, k + 1));
  return r;
}

std::vector<TailRow> mc_check_tail(const PartitionSchedule& schedule, std::span<const double> points,
                                   std::size_t trials, std::uint64_t seed) {
  std::vector<TailRow> rows;
  if (trials == 0 || points.empty()) return rows;
  const int K = schedule.K_max();
  std::vector<double> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  // counts[j][k-1]: trials with pts[j] in R_k.
  std::vector<std::vector<std::size_t>> per_trial(trials);
  parallel_for(trials, [&](std::size_t t) {
    std::vector<std::vector<char>> member(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k) {
      Engine engine = make_engine(seed, StreamTag::kPartition, level_stream(t, k));
      const auto& l = schedule.level(k);
      member[static_cast<std::size_t>(k - 1)] = draw_level_hits(l.interval_count, l.delta, pts, engine);
    }
    auto& out = per_trial[t];
    out.assign(pts.size() * static_cast<std::size_t>(K), 0);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      bool in_r = false;
      for (int k = K; k >= 1; --k) {
        in_r = in_r || member[static_cast<std::size_t>(k - 1)][j];
        out[j * static_cast<std::size_t>(K) + static_cast<std::size_t>(k - 1)] = in_r;
      }
    }
  });
  for (std::size_t j = 0; j < pts.size(); ++j) {
    for (int k = 1; k <= K; ++k) {
      TailRow row;
      row.x = pts[j];
      row.k = k;
      row.trials = trials;
      for (const auto& t : per_trial) row.in_remainder += t[j * static_cast<std::size_t>(K) + static_cast<std::size_t>(k - 1)];
      row.frequency = static_cast<double>(row.in_remainder) / static_cast<double>(trials);
      row.upper = binomial_upper_bound(row.in_remainder, trials);
      row.bound = std::ldexp(1.0, -(k - 1));
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<FmvRow> fmv_statistic(const ProcessSampler& sampler, const PartitionSchedule& schedule,
                                  std::size_t trials, std::uint64_t seed) {
  const int K = schedule.K_max();
  std::size_t longest = 0;
  for (const auto& l : schedule.levels) longest = std::max(longest, l.N);
  // Sorted distinct prefixes per level, shared when the sampler is deterministic.
  auto prefixes = [&](const Rollout& r) {
    std::vector<std::vector<double>> out;
    for (const auto& l : schedule.levels)
      out.push_back(sorted_distinct(std::span<const Point>(r.points.data(), std::min(l.N, r.points.size()))));
    return out;
  };
  std::vector<std::vector<double>> shared;
  bool shared_event = false;
  if (sampler.deterministic()) {
    const Rollout r = sampler.rollout(longest, 0);
    shared_event = r.infinite_event;
    shared = prefixes(r);
  }
  std::vector<std::vector<char>> hits(trials);  // empty when the rollout missed the infinite event
  parallel_for(trials, [&](std::size_t t) {
    std::vector<std::vector<double>> own;
    const std::vector<std::vector<double>>* pre = &shared;
    if (!sampler.deterministic()) {
      const Rollout r = sampler.rollout(longest, t);
      if (!r.infinite_event) return;
      own = prefixes(r);
      pre = &own;
    } else if (!shared_event) {
      return;
    }
    auto& row = hits[t];
    for (int k = 1; k <= K; ++k) {
      const auto& l = schedule.level(k);
      Engine engine = make_engine(seed, StreamTag::kPartition, level_stream(t, k));
      const auto h = draw_level_hits(l.interval_count, l.delta, (*pre)[static_cast<std::size_t>(k - 1)], engine);
      row.push_back(std::any_of(h.begin(), h.end(), [](char c) { return c != 0; }));
    }
  });
  std::vector<FmvRow> rows;
  for (int k = 1; k <= K; ++k) {
    FmvRow row;
    row.k = k;
    row.N = schedule.level(k).N;
    for (const auto& h : hits) {
      if (h.empty()) continue;
      ++row.trials;
      row.hits += h[static_cast<std::size_t>(k - 1)];
    }
    row.frequency = row.trials ? static_cast<double>(row.hits) / static_cast<double>(row.trials) : 0.0;
    row.lower = row.trials ? binomial_lower_bound(row.hits, row.trials) : 0.0;
    row.bound = 1.0 - (std::ldexp(1.0, -k) + std::exp(-std::ldexp(1.0, k + 1)));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace memolab
