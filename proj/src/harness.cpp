#include "memolab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include <fmt/format.h>

#include "memolab/adversary.hpp"
#include "memolab/error.hpp"
#include "memolab/frechet.hpp"
#include "memolab/partition.hpp"
#include "memolab/rng.hpp"
#include "memolab/stats.hpp"

namespace memolab {

namespace {

using Row = std::vector<CsvCell>;

CsvCell count(std::size_t n) { return static_cast<std::int64_t>(n); }
CsvCell flag(bool b) { return std::string(b ? "pass" : "fail"); }

struct Outcome {
  CsvTable table;
  std::vector<Verdict> verdicts;
};

Outcome run_consistency(const ExperimentConfig& c) {
  const auto& p = c.params;
  const LossModel loss = make_loss(c.loss);
  const MetricSpace space = make_space(c);
  const ProcessSampler sampler = make_sampler(c.sampler, component_seed(c, "sampler"));
  const Target target = make_target(c.target, c.sampler, loss);
  const std::uint64_t noise_seed = component_seed(c, "noise");

  // The error-count bound applies to exact-match rules on a noiseless
  // finite-support process.
  const bool bounded = sampler.support_class() == SupportClass::kCertainlyFinite && c.target.noise_sd == 0.0 &&
                       (c.rule == RuleKind::kMemorization || c.rule == RuleKind::kFrechetMemorizer);
  std::size_t support = 0;
  double M = 0.0;
  if (bounded) {
    support = *sampler.support_size();
    for (double v : c.sampler.values) M = std::max(M, loss.evaluate(loss.default_value(), target.mean(Point(v))));
  }
  const double average_bound = static_cast<double>(support) * M / static_cast<double>(p.horizon);

  CsvTable table({"run", "horizon", "nonzero_rounds", "final_average", "support_size", "max_default_loss",
                  "average_bound", "verdict"});
  std::size_t failures = 0;
  for (std::size_t r = 0; r < c.trials; ++r) {
    auto rule = make_rule(c.rule, loss, space);
    const OnlineRun run = run_online(*rule, sampler, target, loss, p.horizon, r, noise_seed);
    const std::size_t nonzero = run.trajectory.nonzero_rounds();
    const double final_average = run.trajectory.running_average.back();
    const bool ok = !bounded || (nonzero <= support && final_average <= average_bound);
    failures += !ok;
    table.add_row({count(r), count(p.horizon), count(nonzero), final_average, count(support), M, average_bound,
                   bounded ? flag(ok) : CsvCell(std::string("n/a"))});
  }
  std::vector<Verdict> verdicts;
  if (bounded)
    verdicts.push_back({"error-count", failures == 0,
                        fmt::format("{} of {} runs exceed {} nonzero rounds or the average bound", failures, c.trials,
                                    support)});
  return {std::move(table), std::move(verdicts)};
}

Outcome run_bayes_excess(const ExperimentConfig& c) {
  const auto& p = c.params;
  const LossModel loss = make_loss(c.loss);
  const MetricSpace space = make_space(c);
  const ProcessSampler sampler = make_sampler(c.sampler, component_seed(c, "sampler"));
  const Target target = make_target(c.target, c.sampler, loss);
  const std::uint64_t noise_seed = component_seed(c, "noise");
  const Target::Fn bayes = [&target](const Point& x) { return target.mean(x); };

  CsvTable table({"run", "horizon", "final_excess", "tolerance", "verdict"});
  std::size_t passes = 0;
  for (std::size_t r = 0; r < c.trials; ++r) {
    auto rule = make_rule(c.rule, loss, space);
    const OnlineRun run = run_online(*rule, sampler, target, loss, p.horizon, r, noise_seed);
    const double excess = excess_loss(run, bayes, loss).back();
    const bool ok = excess <= p.tolerance;
    passes += ok;
    table.add_row({count(r), count(p.horizon), excess, p.tolerance, flag(ok)});
  }
  const double need = p.required_fraction * static_cast<double>(c.trials);
  return {std::move(table),
          {{"excess-within-tolerance", static_cast<double>(passes) >= need,
            fmt::format("{} of {} runs within {} (need {})", passes, c.trials, p.tolerance, need)}}};
}

PartitionSchedule schedule_for(const ExperimentConfig& c, const ProcessSampler& sampler, int K_max) {
  return estimate_schedule(sampler, make_space(c), K_max, c.params.schedule_trials);
}

Outcome run_partition_fmv(const ExperimentConfig& c) {
  const auto& p = c.params;
  const double margin = p.margin > 0.0 ? p.margin : 0.03;
  const ProcessSampler sampler = make_sampler(c.sampler, component_seed(c, "sampler"));
  const PartitionSchedule schedule = schedule_for(c, sampler, p.K_max);
  const auto rows = fmv_statistic(sampler, schedule, c.trials, component_seed(c, "partition"));
  CsvTable table({"k", "N", "delta", "trials", "hits", "frequency", "lower", "bound", "threshold", "verdict"});
  std::size_t failures = 0;
  for (const auto& r : rows) {
    const double threshold = r.bound - margin;
    const bool ok = r.frequency >= threshold;
    failures += !ok;
    table.add_row({count(static_cast<std::size_t>(r.k)), count(r.N), schedule.level(r.k).delta, count(r.trials),
                   count(r.hits), r.frequency, r.lower, r.bound, threshold, flag(ok)});
  }
  return {std::move(table),
          {{"fmv-hit-frequency", failures == 0,
            fmt::format("{} of {} levels below bound - {}", failures, rows.size(), margin)}}};
}

Outcome run_lemma1(const ExperimentConfig& c) {
  const auto& p = c.params;
  const double margin = p.margin > 0.0 ? p.margin : 0.012;
  const ProcessSampler sampler = make_sampler(c.sampler, component_seed(c, "sampler"));
  const int K = *std::max_element(p.levels.begin(), p.levels.end());
  const PartitionSchedule schedule = schedule_for(c, sampler, K);
  CsvTable table({"k", "points", "delta", "trials", "misses", "frequency", "upper", "bound", "threshold", "verdict"});
  std::size_t failures = 0;
  for (std::size_t i = 0; i < p.levels.size(); ++i) {
    const int k = p.levels[i];
    std::vector<double> S(p.grid[i]);
    for (std::size_t j = 0; j < S.size(); ++j) S[j] = (static_cast<double>(j) + 0.5) / static_cast<double>(S.size());
    const auto rep = mc_check_lemma1(schedule, k, S, c.trials, component_seed(c, "partition") + static_cast<std::uint64_t>(k));
    const double threshold = rep.bound + margin;
    const bool ok = rep.upper <= threshold;
    failures += !ok;
    table.add_row({count(static_cast<std::size_t>(k)), count(S.size()), schedule.level(k).delta, count(rep.trials),
                   count(rep.misses), rep.frequency, rep.upper, rep.bound, threshold, flag(ok)});
  }
  return {std::move(table),
          {{"lemma1-miss-bound", failures == 0,
            fmt::format("{} of {} levels above bound + {}", failures, p.levels.size(), margin)}}};
}

Outcome run_tail(const ExperimentConfig& c) {
  const auto& p = c.params;
  const ProcessSampler sampler = make_sampler(c.sampler, component_seed(c, "sampler"));
  const PartitionSchedule schedule = schedule_for(c, sampler, p.K_max);
  const auto rows = mc_check_tail(schedule, p.points, c.trials, component_seed(c, "partition"));
  CsvTable table({"x", "k", "trials", "in_remainder", "frequency", "upper", "bound", "verdict"});
  std::size_t failures = 0;
  for (const auto& r : rows) {
    const bool ok = r.upper <= r.bound;
    failures += !ok;
    table.add_row({r.x, count(static_cast<std::size_t>(r.k)), count(r.trials), count(r.in_remainder), r.frequency,
                   r.upper, r.bound, flag(ok)});
  }
  return {std::move(table),
          {{"tail-decay", failures == 0, fmt::format("{} of {} (x, k) pairs above 2^-(k-1)", failures, rows.size())}}};
}

Outcome run_adversary(const ExperimentConfig& c) {
  const auto& p = c.params;
  const LossModel loss = make_loss(c.loss);
  const ProcessSampler sampler = make_sampler(c.sampler, component_seed(c, "sampler"));
  const PartitionSchedule schedule = schedule_for(c, sampler, p.K_max);
  auto partition =
      std::make_shared<const RandomPartition>(build_unit_interval(schedule, component_seed(c, "partition")));
  const auto thresholds = estimate_first_visit_thresholds(sampler, *partition, p.schedule_trials, p.horizon);
  const auto rows = evaluate_defeat(rule_factory(c.rule, loss, make_space(c)), sampler, partition, thresholds, loss,
                                    c.trials, p.horizon, component_seed(c, "target"));
  CsvTable table({"k", "T", "runs", "mean_tau", "mean_loss", "loss_lower", "loss_threshold", "mean_running",
                  "running_lower", "running_threshold", "verdict"});
  std::size_t failures = 0;
  for (const auto& r : rows) {
    const double loss_threshold = p.loss_factor * static_cast<double>(r.T);
    const bool ok = r.mean_loss >= loss_threshold && r.mean_running >= p.running_floor;
    failures += !ok;
    table.add_row({count(static_cast<std::size_t>(r.k)), count(r.T), count(r.runs), r.mean_tau, r.mean_loss,
                   r.loss_lower, loss_threshold, r.mean_running, r.running_lower, p.running_floor, flag(ok)});
  }
  return {std::move(table),
          {{"defeat", failures == 0 && !rows.empty(),
            fmt::format("{} of {} observed levels below {} T_k or running floor {}", failures, rows.size(),
                        p.loss_factor, p.running_floor)}}};
}

HypothesisTest named_test(const std::string& name) {
  if (name == "novelty") return novelty_test();
  if (name == "constant-0") return constant_test(0);
  if (name == "constant-1") return constant_test(1);
  return coin_test();
}

Outcome run_fool_test(const ExperimentConfig& c) {
  const auto& p = c.params;
  const auto tr = fool_hypothesis_test(named_test(p.test), dyadic_sequence(), p.confidence_trials, p.switches,
                                       component_seed(c, "test"), p.max_n);
  CsvTable table({"index", "n", "mode", "ones", "replays", "frequency", "bound", "verdict"});
  std::size_t failures = 0;
  for (std::size_t i = 0; i < tr.steps.size(); ++i) {
    const auto& s = tr.steps[i];
    const bool ok = s.mode == 0 ? s.frequency > 0.75 : s.frequency < 0.25;
    failures += !ok;
    table.add_row({count(i), count(s.n), std::string(s.mode == 0 ? "constant" : "fresh"), count(s.ones),
                   count(s.replays), s.frequency, s.bound, flag(ok)});
  }
  return {std::move(table),
          {{"fooled", failures == 0 && tr.steps.size() >= p.min_switches,
            fmt::format("{} switch indices (need {}), {} with the wrong decision frequency", tr.steps.size(),
                        p.min_switches, failures)}}};
}

Outcome run_frechet(const ExperimentConfig& c) {
  const auto& p = c.params;
  std::vector<double> weights =
      c.sampler.weights.empty() ? std::vector<double>(c.sampler.values.size(), 1.0) : c.sampler.weights;
  const double power = c.loss.kind == "absolute" ? 1.0 : c.loss.kind == "power" ? c.loss.exponent : 2.0;
  const auto rows =
      check_convergence(c.sampler.values, weights, power, p.sample_sizes, c.trials, component_seed(c, "trials"));
  CsvTable table({"n", "trials", "optimal_risk", "mean_gap", "gap_upper", "max_gap", "tolerance"});
  for (const auto& r : rows)
    table.add_row({count(r.n), count(r.trials), r.optimal_risk, r.mean_gap, r.gap_upper, r.max_gap, p.tolerance});
  const auto& last = rows.back();
  return {std::move(table),
          {{"risk-gap", last.mean_gap <= p.tolerance,
            fmt::format("mean |R_n - R*| = {} at n = {} (tolerance {})", format_real(last.mean_gap), last.n,
                        p.tolerance)}}};
}

}  // namespace

bool ExperimentReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

std::string ExperimentReport::meta() const {
  std::ostringstream out;
  out << "kind = " << to_string(config.kind) << "\n";
  out << "seed = " << config.seed << "\n";
  out << "wall_seconds = " << fmt::format("{:.3f}", wall_seconds) << "\n";
  out << "rows = " << table.size() << "\n";
  for (const auto& v : verdicts) out << "verdict " << v.name << " = " << (v.pass ? "pass" : "fail") << " ; " << v.detail << "\n";
  out << "status = " << (all_pass() ? "pass" : "fail") << "\n";
  out << "\n# config\n" << config.echo;
  return out.str();
}

std::uint64_t component_seed(const ExperimentConfig& config, const std::string& component) {
  const std::uint64_t experiment = derive_seed(config.seed, StreamTag::kExperiment, tag_hash(to_string(config.kind)));
  return derive_seed(experiment, StreamTag::kExperiment, tag_hash(component));
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome{CsvTable({}), {}};
  switch (config.kind) {
    case ExperimentKind::kConsistency: outcome = run_consistency(config); break;
    case ExperimentKind::kBayesExcess: outcome = run_bayes_excess(config); break;
    case ExperimentKind::kPartitionFmv: outcome = run_partition_fmv(config); break;
    case ExperimentKind::kLemma1: outcome = run_lemma1(config); break;
    case ExperimentKind::kLemma2Tail: outcome = run_tail(config); break;
    case ExperimentKind::kAdversary: outcome = run_adversary(config); break;
    case ExperimentKind::kFoolTest: outcome = run_fool_test(config); break;
    case ExperimentKind::kFrechetConvergence: outcome = run_frechet(config); break;
  }
  ExperimentReport report;
  report.config = config;
  report.table = std::move(outcome.table);
  report.verdicts = std::move(outcome.verdicts);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void write_report(const ExperimentReport& report, const std::string& path) {
  const std::filesystem::path out(path);
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  {
    std::ofstream csv(path, std::ios::binary);
    if (!csv) throw LabError(errc::kInvalidArgument, "cannot write '" + path + "'");
    report.table.write(csv);
  }
  std::ofstream meta(path + ".meta", std::ios::binary);
  meta << report.meta();
}

}  // namespace memolab
