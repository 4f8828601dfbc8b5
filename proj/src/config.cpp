#include "memolab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "memolab/error.hpp"

namespace memolab {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"experiment", {"kind", "seed", "trials", "output"}},
      {"sampler", {"kind", "values", "weights", "ratio", "dim", "p", "x0", "switches"}},
      {"rule", {"kind"}},
      {"loss", {"kind", "exponent", "labels"}},
      {"target", {"kind", "value", "slope", "intercept", "table", "noise_sd"}},
      {"params",
       {"horizon", "K_max", "levels", "grid", "points", "schedule_trials", "confidence_trials", "switches", "max_n",
        "min_switches", "test", "sample_sizes", "margin", "tolerance", "loss_factor", "running_floor",
        "required_fraction", "space"}},
  };
  return keys;
}

[[noreturn]] void invalid(const std::string& where, const std::string& what) {
  throw LabError(errc::kConfigInvalid, where + ": " + what);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double to_double(const std::string& where, const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    invalid(where, "not a real number: '" + raw + "'");
  return v;
}

std::uint64_t to_u64(const std::string& where, const std::string& raw) {
  const std::string s = trim(raw);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    invalid(where, "not a nonnegative integer: '" + raw + "'");
  return v;
}

std::vector<std::string> split(const std::string& raw) {
  std::vector<std::string> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<double> to_doubles(const std::string& where, const std::string& raw) {
  std::vector<double> out;
  for (const auto& s : split(raw)) out.push_back(to_double(where, s));
  if (out.empty()) invalid(where, "empty list");
  return out;
}

std::vector<std::size_t> to_sizes(const std::string& where, const std::string& raw) {
  std::vector<std::size_t> out;
  for (const auto& s : split(raw)) out.push_back(to_u64(where, s));
  if (out.empty()) invalid(where, "empty list");
  return out;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> raw(const std::string& section, const std::string& key) const {
    auto s = tree_.get_child_optional(section);
    if (!s) return std::nullopt;
    auto v = s->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return trim(*v);
  }
  bool has(const std::string& section, const std::string& key) const { return raw(section, key).has_value(); }

  std::string str(const std::string& section, const std::string& key, std::string fallback) const {
    auto v = raw(section, key);
    return v ? *v : fallback;
  }
  std::string required(const std::string& section, const std::string& key) const {
    auto v = raw(section, key);
    if (!v || v->empty()) invalid(section + "." + key, "required");
    return *v;
  }
  template <typename T>
  void real(const std::string& section, const std::string& key, T& out) const {
    if (auto v = raw(section, key)) out = static_cast<T>(to_double(section + "." + key, *v));
  }
  template <typename T>
  void count(const std::string& section, const std::string& key, T& out) const {
    if (auto v = raw(section, key)) out = static_cast<T>(to_u64(section + "." + key, *v));
  }
  void reals(const std::string& section, const std::string& key, std::vector<double>& out) const {
    if (auto v = raw(section, key)) out = to_doubles(section + "." + key, *v);
  }
  void counts(const std::string& section, const std::string& key, std::vector<std::size_t>& out) const {
    if (auto v = raw(section, key)) out = to_sizes(section + "." + key, *v);
  }

 private:
  const pt::ptree& tree_;
};

void check_keys(const pt::ptree& tree) {
  for (const auto& [section, body] : tree) {
    auto it = allowed_keys().find(section);
    if (it == allowed_keys().end()) invalid(section, "unknown section");
    if (!body.data().empty()) invalid(section, "key outside of a section");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) invalid(section + "." + key, "unknown key");
      if (!value.empty()) invalid(section + "." + key, "nested key");
    }
  }
}

void require(bool ok, const std::string& where, const std::string& what) {
  if (!ok) invalid(where, what);
}

void validate(const ExperimentConfig& c) {
  const auto& s = c.sampler;
  const auto& p = c.params;
  require(c.trials > 0, "experiment.trials", "must be positive");
  static const std::set<std::string> samplers = {"finite-support-iid", "iid-uniform", "geometric-decay",
                                                 "deterministic-list", "alternating-adversarial", "mixed"};
  if (c.kind != ExperimentKind::kFoolTest) {
    require(samplers.count(s.kind) > 0, "sampler.kind", "unknown sampler '" + s.kind + "'");
    if (s.kind == "finite-support-iid" || s.kind == "deterministic-list" || s.kind == "mixed")
      require(!s.values.empty(), "sampler.values", "required for " + s.kind);
    if (!s.weights.empty()) {
      require(s.weights.size() == s.values.size(), "sampler.weights", "length differs from values");
      for (double w : s.weights) require(w >= 0.0, "sampler.weights", "must be nonnegative");
    }
    require(s.ratio > 0.0 && s.ratio < 1.0, "sampler.ratio", "must lie in (0,1)");
    require(s.p >= 0.0 && s.p <= 1.0, "sampler.p", "must lie in [0,1]");
    require(s.dim >= 1 && s.dim <= kMaxDim, "sampler.dim", "out of range");
  }
  static const std::set<std::string> losses = {"squared", "absolute", "power", "zero-one"};
  require(losses.count(c.loss.kind) > 0, "loss.kind", "unknown loss '" + c.loss.kind + "'");
  require(c.loss.exponent > 0.0, "loss.exponent", "must be positive");
  require(c.loss.labels >= 2, "loss.labels", "at least two labels");
  static const std::set<std::string> targets = {"constant", "affine", "table"};
  require(targets.count(c.target.kind) > 0, "target.kind", "unknown target '" + c.target.kind + "'");
  if (c.target.kind == "table")
    require(c.target.table.size() == s.values.size(), "target.table", "one entry per sampler value required");
  require(c.target.noise_sd >= 0.0, "target.noise_sd", "must be nonnegative");
  require(p.margin >= 0.0, "params.margin", "must be nonnegative");
  require(p.tolerance >= 0.0, "params.tolerance", "must be nonnegative");
  require(p.required_fraction >= 0.0 && p.required_fraction <= 1.0, "params.required_fraction", "must lie in [0,1]");

  switch (c.kind) {
    case ExperimentKind::kConsistency:
    case ExperimentKind::kBayesExcess:
      require(p.horizon > 0, "params.horizon", "required");
      break;
    case ExperimentKind::kPartitionFmv:
    case ExperimentKind::kLemma2Tail:
      require(p.K_max >= 1, "params.K_max", "required");
      if (c.kind == ExperimentKind::kLemma2Tail) require(!p.points.empty(), "params.points", "required");
      break;
    case ExperimentKind::kLemma1:
      require(!p.levels.empty(), "params.levels", "required");
      require(p.grid.size() == p.levels.size(), "params.grid", "one grid size per level");
      for (int k : p.levels) require(k >= 1, "params.levels", "levels start at 1");
      break;
    case ExperimentKind::kAdversary:
      require(p.K_max >= 1, "params.K_max", "required");
      require(p.horizon > 0, "params.horizon", "required");
      break;
    case ExperimentKind::kFoolTest:
      require(p.test == "novelty" || p.test == "constant-0" || p.test == "constant-1" || p.test == "coin",
              "params.test", "unknown test '" + p.test + "'");
      require(p.switches >= 1, "params.switches", "must be positive");
      break;
    case ExperimentKind::kFrechetConvergence:
      require(s.kind == "finite-support-iid", "sampler.kind", "frechet-convergence draws from a finite support");
      require(!p.sample_sizes.empty(), "params.sample_sizes", "required");
      for (auto n : p.sample_sizes) require(n > 0, "params.sample_sizes", "must be positive");
      break;
  }
  if (c.kind == ExperimentKind::kBayesExcess)
    require(s.kind == "finite-support-iid" || s.kind == "mixed", "sampler.kind",
            "bayes-excess needs a finite-support sampler");
  if (!p.space.empty()) {
    try {
      (void)MetricSpace::from_name(p.space);
    } catch (const LabError& e) {
      invalid("params.space", e.what());
    }
  }
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kConsistency: return "consistency";
    case ExperimentKind::kPartitionFmv: return "partition-fmv";
    case ExperimentKind::kLemma1: return "lemma1";
    case ExperimentKind::kLemma2Tail: return "lemma2-tail";
    case ExperimentKind::kAdversary: return "adversary";
    case ExperimentKind::kFoolTest: return "fool-test";
    case ExperimentKind::kFrechetConvergence: return "frechet-convergence";
    case ExperimentKind::kBayesExcess: return "bayes-excess";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(ExperimentKind::kBayesExcess); ++i) {
    const auto kind = static_cast<ExperimentKind>(i);
    if (to_string(kind) == name) return kind;
  }
  invalid("experiment.kind", "unknown experiment kind '" + name + "'");
}

ExperimentConfig parse_config(const std::string& text, const ConfigOverrides& overrides) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    invalid("config", e.message() + " at line " + std::to_string(e.line()));
  }
  check_keys(tree);
  if (overrides.seed) tree.put("experiment.seed", std::to_string(*overrides.seed));
  if (overrides.trials) tree.put("experiment.trials", std::to_string(*overrides.trials));
  if (overrides.output) tree.put("experiment.output", *overrides.output);

  Reader r(tree);
  ExperimentConfig c;
  c.kind = parse_experiment_kind(r.required("experiment", "kind"));
  c.seed = to_u64("experiment.seed", r.required("experiment", "seed"));
  c.trials = static_cast<std::size_t>(to_u64("experiment.trials", r.required("experiment", "trials")));
  c.output = r.str("experiment", "output", "");

  auto& s = c.sampler;
  s.kind = r.str("sampler", "kind", "");
  r.reals("sampler", "values", s.values);
  r.reals("sampler", "weights", s.weights);
  r.real("sampler", "ratio", s.ratio);
  r.count("sampler", "dim", s.dim);
  r.real("sampler", "p", s.p);
  r.real("sampler", "x0", s.x0);
  r.counts("sampler", "switches", s.switches);

  if (r.has("rule", "kind")) {
    try {
      c.rule = parse_rule_kind(r.required("rule", "kind"));
    } catch (const LabError& e) {
      invalid("rule.kind", e.what());
    }
  }
  c.loss.kind = r.str("loss", "kind", "squared");
  r.real("loss", "exponent", c.loss.exponent);
  r.count("loss", "labels", c.loss.labels);

  auto& t = c.target;
  t.kind = r.str("target", "kind", "constant");
  r.real("target", "value", t.value);
  r.real("target", "slope", t.slope);
  r.real("target", "intercept", t.intercept);
  r.reals("target", "table", t.table);
  r.real("target", "noise_sd", t.noise_sd);

  auto& p = c.params;
  r.count("params", "horizon", p.horizon);
  r.count("params", "K_max", p.K_max);
  if (auto v = r.raw("params", "levels"))
    for (auto n : to_sizes("params.levels", *v)) p.levels.push_back(static_cast<int>(n));
  r.counts("params", "grid", p.grid);
  r.reals("params", "points", p.points);
  r.count("params", "schedule_trials", p.schedule_trials);
  r.count("params", "confidence_trials", p.confidence_trials);
  r.count("params", "switches", p.switches);
  r.count("params", "max_n", p.max_n);
  r.count("params", "min_switches", p.min_switches);
  p.test = r.str("params", "test", p.test);
  r.counts("params", "sample_sizes", p.sample_sizes);
  r.real("params", "margin", p.margin);
  r.real("params", "tolerance", p.tolerance);
  r.real("params", "loss_factor", p.loss_factor);
  r.real("params", "running_floor", p.running_floor);
  r.real("params", "required_fraction", p.required_fraction);
  p.space = r.str("params", "space", "");

  validate(c);
  std::ostringstream echo;
  pt::write_ini(echo, tree);
  c.echo = echo.str();
  return c;
}

ExperimentConfig load_config(const std::string& path, const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw LabError(errc::kConfigInvalid, "cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

ProcessSampler make_sampler(const SamplerConfig& c, std::uint64_t seed) {
  std::vector<Point> values(c.values.begin(), c.values.end());
  std::vector<double> weights = c.weights.empty() ? std::vector<double>(values.size(), 1.0) : c.weights;
  if (c.kind == "finite-support-iid") return ProcessSampler::finite_support(values, weights, seed);
  if (c.kind == "iid-uniform") return ProcessSampler::iid_uniform(c.dim, seed);
  if (c.kind == "geometric-decay") return ProcessSampler::geometric_decay(c.ratio, seed);
  if (c.kind == "deterministic-list") return ProcessSampler::deterministic_list(values, seed);
  if (c.kind == "alternating-adversarial") return ProcessSampler::alternating(Point(c.x0), c.switches, seed);
  if (c.kind == "mixed") return ProcessSampler::mixed(c.p, values, weights, seed);
  invalid("sampler.kind", "unknown sampler '" + c.kind + "'");
}

LossModel make_loss(const LossConfig& c) {
  if (c.kind == "squared") return LossModel::squared();
  if (c.kind == "absolute") return LossModel::absolute();
  if (c.kind == "power") return LossModel::power(c.exponent);
  if (c.kind == "zero-one") return LossModel::zero_one(c.labels);
  invalid("loss.kind", "unknown loss '" + c.kind + "'");
}

Target make_target(const TargetConfig& c, const SamplerConfig& sampler, const LossModel& loss) {
  Target t = Target::constant(c.value);
  if (c.kind == "affine") t = Target::affine(c.slope, c.intercept);
  if (c.kind == "table")
    t = Target::table(std::vector<Point>(sampler.values.begin(), sampler.values.end()), c.table, loss.default_value());
  return c.noise_sd > 0.0 ? t.with_noise(c.noise_sd) : t;
}

MetricSpace make_space(const ExperimentConfig& c) {
  if (!c.params.space.empty()) return MetricSpace::from_name(c.params.space);
  if (c.sampler.kind == "iid-uniform" && c.sampler.dim > 1)
    return MetricSpace::from_name("box-" + std::to_string(c.sampler.dim));
  const bool unit = std::all_of(c.sampler.values.begin(), c.sampler.values.end(),
                                [](double v) { return v >= 0.0 && v <= 1.0; }) &&
                    c.sampler.x0 >= 0.0 && c.sampler.x0 <= 1.0;
  return unit ? MetricSpace::unit_interval() : MetricSpace::real_line();
}

}  // namespace memolab
