#include "maillard/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace maillard {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

IniDocument IniDocument::parse(std::string_view text, std::string source) {
  IniDocument doc;
  doc.source_ = std::move(source);
  std::istringstream in{std::string(text)};
  std::string raw;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3)
        throw ConfigError(doc.source_ + ":" + std::to_string(lineno) + ": malformed section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(doc.source_ + ":" + std::to_string(lineno) + ": expected 'key = value'");
    if (section.empty())
      throw ConfigError(doc.source_ + ":" + std::to_string(lineno) + ": key outside of a [section]");
    const auto key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw ConfigError(doc.source_ + ":" + std::to_string(lineno) + ": empty key");
    doc.entries_[section + "." + key] = Entry{trim(std::string_view(line).substr(eq + 1)), lineno};
  }
  return doc;
}

IniDocument IniDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

void IniDocument::set(std::string_view dotted, std::string value) {
  const auto dot = dotted.find('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == dotted.size())
    throw ConfigError("override '" + std::string(dotted) + "' must look like --section.key=value");
  entries_[std::string(dotted)] = Entry{std::move(value), 0};
}

const IniDocument::Entry* IniDocument::find(const std::string& section, const std::string& key) const {
  const auto it = entries_.find(section + "." + key);
  return it == entries_.end() ? nullptr : &it->second;
}

bool IniDocument::has_section(const std::string& section) const {
  const auto prefix = section + ".";
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const auto& kv) { return kv.first.rfind(prefix, 0) == 0; });
}

std::vector<std::string> IniDocument::keys() const {
  std::vector<std::string> out;
  for (const auto& kv : entries_) out.push_back(kv.first);
  return out;
}

std::string IniDocument::where(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  std::string loc = e == nullptr || e->line == 0 ? std::string("<command line>")
                                                 : source_ + ":" + std::to_string(e->line);
  return loc + ": field " + section + "." + key;
}

const std::vector<std::string>& default_policy_ids() {
  static const std::vector<std::string> ids{"ms",   "msplus:B=4", "msplus:B=8", "msplus:B=16",
                                            "ucb1", "aoucb",      "ts",         "tssg",
                                            "moss", "imed"};
  return ids;
}

namespace {

class Reader {
 public:
  explicit Reader(const IniDocument& doc) : doc_(doc) {}

  std::optional<std::string> raw(const std::string& s, const std::string& k) {
    used_.insert(s + "." + k);
    const auto* e = doc_.find(s, k);
    if (e == nullptr) return std::nullopt;
    return e->value;
  }

  [[noreturn]] void fail(const std::string& s, const std::string& k, const std::string& msg) const {
    throw ConfigError(doc_.where(s, k) + ": " + msg);
  }

  double real(const std::string& s, const std::string& k, double fallback) {
    const auto v = raw(s, k);
    if (!v) return fallback;
    char* end = nullptr;
    errno = 0;
    const double x = std::strtod(v->c_str(), &end);
    if (v->empty() || *end != '\0' || errno != 0 || !std::isfinite(x))
      fail(s, k, "expected a real number, got '" + *v + "'");
    return x;
  }

  std::uint64_t integer(const std::string& s, const std::string& k, std::uint64_t fallback) {
    const auto v = raw(s, k);
    if (!v) return fallback;
    return parse_integer(s, k, *v);
  }

  std::uint64_t parse_integer(const std::string& s, const std::string& k, const std::string& v) const {
    char* end = nullptr;
    errno = 0;
    const auto x = std::strtoull(v.c_str(), &end, 10);
    if (v.empty() || v[0] == '-' || *end != '\0' || errno != 0)
      fail(s, k, "expected a non-negative integer, got '" + v + "'");
    return x;
  }

  bool boolean(const std::string& s, const std::string& k, bool fallback) {
    const auto v = raw(s, k);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
    if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
    fail(s, k, "expected a boolean, got '" + *v + "'");
  }

  std::string string(const std::string& s, const std::string& k, std::string fallback) {
    const auto v = raw(s, k);
    return v ? *v : fallback;
  }

  void reject_unknown() const {
    for (const auto& key : doc_.keys()) {
      if (used_.count(key) == 0) {
        const auto dot = key.find('.');
        fail(key.substr(0, dot), key.substr(dot + 1), "unknown key");
      }
    }
  }

 private:
  const IniDocument& doc_;
  std::set<std::string> used_;
};

}  // namespace

RunSpec parse_run_spec(const IniDocument& doc, Command command) {
  Reader r(doc);
  RunSpec spec;

  // [problem]
  const auto family = r.string("problem", "family", "GaussianEqual");
  try {
    spec.problem.family = parse_problem_family(family);
  } catch (const std::invalid_argument& e) {
    r.fail("problem", "family", e.what());
  }
  spec.problem.num_arms = r.integer("problem", "K", 10);
  spec.problem.noise_variance = r.real("problem", "noise_variance", 0.25);
  if (command == Command::SweepBooster) spec.problem = {ProblemFamily::BoosterTuning, 10, 1.0};
  try {
    (void)make_problem(spec.problem);
  } catch (const std::invalid_argument& e) {
    r.fail("problem", "K", e.what());
  }

  // [experiment]
  spec.horizon = r.integer("experiment", "T", command == Command::Ope ? 2000 : 20000);
  spec.trials = r.integer("experiment", "trials", 200);
  spec.base_seed = r.integer("experiment", "base_seed", 1);
  spec.trajectory_stride = r.integer("experiment", "trajectory_stride", 100);
  if (spec.horizon <= spec.problem.num_arms)
    r.fail("experiment", "T", "horizon must exceed K=" + std::to_string(spec.problem.num_arms));
  if (spec.trials == 0) r.fail("experiment", "trials", "need at least one trial");

  // [policies]
  const double default_sigma2 = command == Command::SweepBooster ? 1.0 : 0.25;
  spec.policy.sigma2 = r.real("policies", "sigma2", default_sigma2);
  spec.policy.c = r.real("policies", "C", 0.01);
  spec.policy.d = r.real("policies", "D", 0.01);
  spec.policy.booster = r.real("policies", "B", 4.0);
  if (!(spec.policy.sigma2 > 0.0)) r.fail("policies", "sigma2", "must be positive");
  const auto ids = r.raw("policies", "ids");
  spec.policy_ids = ids ? split_list(*ids) : default_policy_ids();
  if (spec.policy_ids.empty()) r.fail("policies", "ids", "no policies listed");
  {
    PolicyConfig probe = spec.policy;
    probe.horizon = spec.horizon;
    for (const auto& id : spec.policy_ids) {
      try {
        (void)make_policy(id, probe);
      } catch (const std::invalid_argument& e) {
        r.fail("policies", "ids", "policy '" + id + "': " + e.what());
      }
    }
  }

  // [output]
  spec.output_dir = r.string("output", "dir", "out");
  spec.svg = r.boolean("output", "svg", true);
  spec.per_trial_csv = r.boolean("output", "per_trial_csv", false);
  spec.trajectories = r.boolean("output", "trajectories", false);

  // [booster]
  if (command == Command::SweepBooster) {
    const auto list = r.raw("booster", "B");
    if (!list) {
      spec.boosters = {2, 4, 8, 16, 32, 64, 128};
    } else {
      for (const auto& item : split_list(*list)) {
        char* end = nullptr;
        const double b = std::strtod(item.c_str(), &end);
        if (*end != '\0' || !(b > 1.0)) r.fail("booster", "B", "each booster must be a real > 1, got '" + item + "'");
        spec.boosters.push_back(b);
      }
      if (spec.boosters.empty()) r.fail("booster", "B", "no booster values listed");
    }
    PolicyConfig probe = spec.policy;
    probe.booster = spec.boosters.front();
    try {
      probe.validate_msplus();
    } catch (const std::invalid_argument& e) {
      r.fail("policies", "C", e.what());
    }
  } else {
    (void)r.raw("booster", "B");
  }

  // [ope]
  spec.ope_logger = r.string("ope", "logger", "ms");
  spec.ope_logs = r.integer("ope", "logs", 200);
  spec.mc_samples = r.integer("ope", "mc_samples", 10000);
  spec.timing_decisions = r.integer("ope", "timing_decisions", 50);
  const auto targets = r.raw("ope", "targets");
  if (command == Command::Ope) {
    if (!targets) r.fail("ope", "targets", "missing target list (e.g. 'targets = 1, 2, uniform')");
    for (const auto& item : split_list(*targets)) {
      if (item == "uniform") {
        spec.ope_targets.push_back({"uniform", std::nullopt});
        continue;
      }
      const auto arm = r.parse_integer("ope", "targets", item);
      if (arm < 1 || arm > spec.problem.num_arms)
        r.fail("ope", "targets", "arm " + item + " outside 1.." + std::to_string(spec.problem.num_arms));
      spec.ope_targets.push_back({"arm" + item, static_cast<std::size_t>(arm - 1)});
    }
    if (spec.ope_targets.empty()) r.fail("ope", "targets", "empty target list");
    if (spec.ope_logs == 0) r.fail("ope", "logs", "need at least one log");
    if (spec.mc_samples == 0) r.fail("ope", "mc_samples", "need at least one sample");
    try {
      PolicyConfig probe = spec.policy;
      probe.horizon = spec.horizon;
      if (!make_policy(spec.ope_logger, probe)->has_distribution())
        r.fail("ope", "logger", "logger '" + spec.ope_logger + "' has no closed-form propensities");
    } catch (const std::invalid_argument& e) {
      r.fail("ope", "logger", e.what());
    }
    spec.ope_horizon = spec.horizon;
  }

  // [bounds]
  spec.bounds_c = r.real("bounds", "c", 0.1);
  if (!(spec.bounds_c > 0.0)) r.fail("bounds", "c", "must be positive");
  const auto denom = r.string("bounds", "log_denominator", "2sigma2");
  if (denom == "2sigma2") {
    spec.bounds_denominator = LogDenominator::TwoSigma2;
  } else if (denom == "sigma2") {
    spec.bounds_denominator = LogDenominator::Sigma2;
  } else {
    r.fail("bounds", "log_denominator", "expected '2sigma2' or 'sigma2', got '" + denom + "'");
  }

  r.reject_unknown();
  return spec;
}

}  // namespace maillard
