#include <string>

#include "doctest.h"
#include "memolab/error.hpp"
#include "memolab/harness.hpp"

using namespace memolab;

namespace {

const char* kConsistency = R"([experiment]
kind = consistency
seed = 5
trials = 20

[sampler]
kind = finite-support-iid
values = 0.1, 0.5, 0.9

[rule]
kind = memorization

[target]
kind = table
table = 1, 2, 3

[params]
horizon = 2000
)";

std::string code_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const LabError& e) {
    return e.code();
  }
  return "";
}

std::string with(std::string text, const std::string& from, const std::string& to) {
  auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("valid config parses") {
  auto c = parse_config(kConsistency);
  CHECK(c.kind == ExperimentKind::kConsistency);
  CHECK(c.seed == 5);
  CHECK(c.trials == 20);
  CHECK(c.sampler.values == std::vector<double>{0.1, 0.5, 0.9});
  CHECK(c.target.table.size() == 3);
  CHECK(c.params.horizon == 2000);
  CHECK(c.echo.find("kind=consistency") != std::string::npos);
}

TEST_CASE("invalid configs are rejected before running") {
  CHECK(code_of(with(kConsistency, "[params]", "[bogus]")) == errc::kConfigInvalid);
  CHECK(code_of(with(kConsistency, "horizon = 2000", "horizon = 2000\ncolour = red")) == errc::kConfigInvalid);
  CHECK(code_of(with(kConsistency, "horizon = 2000", "horizon = -3")) == errc::kConfigInvalid);
  CHECK(code_of(with(kConsistency, "horizon = 2000", "horizon = 12abc")) == errc::kConfigInvalid);
  CHECK(code_of(with(kConsistency, "horizon = 2000", "")) == errc::kConfigInvalid);
  CHECK(code_of(with(kConsistency, "kind = consistency", "kind = regression")) == errc::kConfigInvalid);
  CHECK(code_of(with(kConsistency, "kind = memorization", "kind = oracle")) == errc::kConfigInvalid);
  CHECK(code_of(with(kConsistency, "table = 1, 2, 3", "table = 1, 2")) == errc::kConfigInvalid);
  CHECK(code_of(with(kConsistency, "seed = 5", "")) == errc::kConfigInvalid);
  CHECK(code_of(with(kConsistency, "trials = 20", "trials = 0")) == errc::kConfigInvalid);
  CHECK(code_of(with(kConsistency, "seed = 5", "seed = 5\nseed = 6")) == errc::kConfigInvalid);
  CHECK(code_of("not an ini [") == errc::kConfigInvalid);
}

TEST_CASE("overrides replace seed, trials and output") {
  ConfigOverrides ov;
  ov.seed = 99;
  ov.trials = 3;
  ov.output = "x.csv";
  auto c = parse_config(kConsistency, ov);
  CHECK(c.seed == 99);
  CHECK(c.trials == 3);
  CHECK(c.output == "x.csv");
  CHECK(c.echo.find("seed=99") != std::string::npos);
  // The echo alone reproduces the run.
  auto again = parse_config(c.echo);
  CHECK(run_experiment(again).table.to_string() == run_experiment(c).table.to_string());
}

TEST_CASE("memorization consistency verdict") {
  auto report = run_experiment(parse_config(kConsistency));
  CHECK(report.all_pass());
  CHECK(report.table.size() == 20);
  CHECK(report.table.header().front() == "run");
  CHECK(report.meta().find("status = pass") != std::string::npos);
}

TEST_CASE("reruns are byte identical and seeds matter") {
  auto c = parse_config(kConsistency);
  const auto a = run_experiment(c).table.to_string();
  CHECK(a == run_experiment(c).table.to_string());
  ConfigOverrides ov;
  ov.seed = 6;
  auto other = parse_config(kConsistency, ov);
  CHECK(component_seed(c, "sampler") != component_seed(other, "sampler"));
  CHECK(component_seed(c, "sampler") != component_seed(c, "noise"));
}

TEST_CASE("a failing verdict is reported") {
  auto text = with(kConsistency, "[params]", "[params]\ntolerance = 0");
  text = with(text, "kind = consistency", "kind = bayes-excess");
  text = with(text, "kind = memorization", "kind = constant-default");
  auto report = run_experiment(parse_config(text));
  CHECK_FALSE(report.all_pass());
}
