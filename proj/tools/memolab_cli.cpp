#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "memolab/error.hpp"
#include "memolab/harness.hpp"

using namespace memolab;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::string out;
};

const std::map<std::string, std::set<ExperimentKind>>& subcommand_kinds() {
  static const std::map<std::string, std::set<ExperimentKind>> kinds = {
      {"simulate", {ExperimentKind::kConsistency, ExperimentKind::kBayesExcess}},
      {"partition", {ExperimentKind::kPartitionFmv}},
      {"lemma1", {ExperimentKind::kLemma1}},
      {"tail", {ExperimentKind::kLemma2Tail}},
      {"adversary", {ExperimentKind::kAdversary}},
      {"fool-test", {ExperimentKind::kFoolTest}},
      {"frechet", {ExperimentKind::kFrechetConvergence}},
  };
  return kinds;
}

ConfigOverrides overrides_of(const Options& o) {
  ConfigOverrides ov;
  ov.seed = o.seed;
  ov.trials = o.trials;
  return ov;
}

std::string output_path(const ExperimentConfig& c, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (!c.output.empty()) return c.output;
  return "results/" + to_string(c.kind) + ".csv";
}

void print_report(const std::string& label, const ExperimentReport& report, const std::string& path) {
  fmt::print("{} {} -> {} ({:.1f}s)\n", report.all_pass() ? "PASS" : "FAIL", label, path, report.wall_seconds);
  for (const auto& v : report.verdicts) fmt::print("  {} {}: {}\n", v.pass ? "pass" : "fail", v.name, v.detail);
}

int run_single(const std::string& sub, const Options& o) {
  const ExperimentConfig c = load_config(o.config, overrides_of(o));
  if (!subcommand_kinds().at(sub).count(c.kind))
    throw LabError(errc::kConfigInvalid,
                   "experiment kind '" + to_string(c.kind) + "' does not belong to subcommand '" + sub + "'");
  const ExperimentReport report = run_experiment(c);
  const std::string path = output_path(c, o.out);
  write_report(report, path);
  print_report(to_string(c.kind), report, path);
  return report.all_pass() ? 0 : 1;
}

int run_all(const Options& o) {
  const std::string dir = o.config.empty() ? "configs" : o.config;
  const std::string out_dir = o.out.empty() ? "results" : o.out;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".ini") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw LabError(errc::kConfigInvalid, "no .ini files in '" + dir + "'");
  int status = 0;
  for (const auto& f : files) {
    try {
      const ExperimentConfig c = load_config(f.string(), overrides_of(o));
      const ExperimentReport report = run_experiment(c);
      const std::string path = (std::filesystem::path(out_dir) / f.stem()).string() + ".csv";
      write_report(report, path);
      print_report(f.filename().string(), report, path);
      if (!report.all_pass()) status = std::max(status, 1);
    } catch (const std::exception& e) {
      fmt::print("ERROR {}: {}\n", f.filename().string(), e.what());
      status = 2;
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"memolab: online learning experiments"};
  app.require_subcommand(1);
  Options o;
  std::vector<std::pair<std::string, CLI::App*>> subs;
  const std::vector<std::pair<std::string, std::string>> names = {
      {"simulate", "online consistency or Bayes excess runs"},
      {"partition", "FMV hit frequencies for a random partition"},
      {"lemma1", "Monte Carlo check of the level miss bound"},
      {"tail", "Monte Carlo check of remainder tail decay"},
      {"adversary", "adversarial target against a learning rule"},
      {"fool-test", "fool a hypothesis test for finite support"},
      {"frechet", "Frechet mean risk convergence"},
      {"verify-all", "run every config in a directory"},
  };
  for (const auto& [name, help] : names) {
    auto* sub = app.add_subcommand(name, help);
    if (name == "verify-all")
      sub->add_option("--config", o.config, "config directory (default configs)");
    else
      sub->add_option("--config", o.config, "experiment config (.ini)")->required();
    sub->add_option("--seed", o.seed, "override the master seed");
    sub->add_option("--out", o.out, name == "verify-all" ? "output directory" : "output CSV path");
    sub->add_option("--trials", o.trials, "override the trial count");
    subs.emplace_back(name, sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    for (const auto& [name, sub] : subs) {
      if (!sub->parsed()) continue;
      return name == "verify-all" ? run_all(o) : run_single(name, o);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
