#include "maillard/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "maillard/format.hpp"
#include "maillard/svg.hpp"

namespace maillard {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

std::filesystem::path prepare_output(const RunSpec& spec) {
  std::filesystem::create_directories(spec.output_dir);
  return spec.output_dir;
}

std::string file_stem(const std::string& id) {
  std::string s;
  for (char c : id) s += std::isalnum(static_cast<unsigned char>(c)) || c == '.' ? c : '_';
  return s;
}

ExperimentConfig experiment_for(const RunSpec& spec, const std::string& policy_id) {
  ExperimentConfig c;
  c.problem = spec.problem;
  c.policy_id = policy_id;
  c.policy = spec.policy;
  c.horizon = spec.horizon;
  c.trials = spec.trials;
  c.base_seed = spec.base_seed;
  c.trajectory_stride = spec.trajectories ? spec.trajectory_stride : 0;
  return c;
}

std::string problem_title(const RunSpec& spec) {
  return std::string(to_string(spec.problem.family)) + " K=" + std::to_string(spec.problem.num_arms) +
         ", T=" + std::to_string(spec.horizon) + ", " + std::to_string(spec.trials) + " trials";
}

}  // namespace

std::vector<ExperimentSummary> cmd_run(const RunSpec& spec, std::ostream& out) {
  const auto dir = prepare_output(spec);
  std::vector<ExperimentSummary> summaries;
  std::vector<svg::Bar> bars;
  for (const auto& id : spec.policy_ids) {
    const auto config = experiment_for(spec, id);
    const auto trials = run_trials(config, spec.threads);
    summaries.push_back(summarize(config, trials));
    const auto& s = summaries.back();
    out << std::left << std::setw(14) << s.label << " mean " << format_real(s.mean) << "  std "
        << format_real(s.std) << "  max " << format_real(s.max) << '\n';

    if (spec.per_trial_csv) write_file(dir / ("trials_" + file_stem(id) + ".csv"), trials_to_csv(trials));
    if (spec.trajectories)
      write_file(dir / ("trajectory_" + file_stem(id) + ".csv"),
                 trajectories_to_csv(trials, config.horizon, config.trajectory_stride));

    PolicyConfig pc = spec.policy;
    pc.horizon = spec.horizon;
    const auto traits = make_policy(id, pc)->traits();
    svg::Bar bar{s.label, s.mean, s.std, {}};
    if (!traits.subgaussian_guarantee) bar.classes.push_back("no-guarantee");
    if (traits.fixed_budget) bar.classes.push_back("fixed-budget");
    bars.push_back(std::move(bar));
  }
  write_file(dir / "summary.csv", summaries_to_csv(summaries));
  write_file(dir / "summary.json", summaries_to_json(summaries));
  if (spec.svg) write_file(dir / "regret.svg", svg::bar_chart(problem_title(spec), bars));
  return summaries;
}

std::vector<ExperimentSummary> cmd_sweep_booster(const RunSpec& spec, std::ostream& out) {
  const auto dir = prepare_output(spec);
  std::vector<ExperimentConfig> grid;
  for (double b : spec.boosters) {
    auto config = experiment_for(spec, "msplus");
    config.policy.booster = b;
    grid.push_back(config);
  }
  const auto summaries = sweep(grid, spec.threads);

  std::string csv = "B,mean,std,max\n";
  std::vector<svg::Point> points;
  for (const auto& s : summaries) {
    const double b = s.config.policy.booster;
    csv += format_real(b) + ',' + format_real(s.mean) + ',' + format_real(s.std) + ',' + format_real(s.max) + '\n';
    points.push_back({std::log2(b), format_real(std::log2(b)), s.mean, s.std});
    out << "B=" << std::left << std::setw(6) << format_real(b) << " mean " << format_real(s.mean) << "  std "
        << format_real(s.std) << "  max " << format_real(s.max) << '\n';
  }
  write_file(dir / "booster.csv", csv);
  if (spec.svg)
    write_file(dir / "booster.svg",
               svg::line_chart("MS+ booster sweep, " + problem_title(spec), "log2(B)", points));
  return summaries;
}

OpeReport cmd_ope(const RunSpec& spec, std::ostream& out) {
  const auto dir = prepare_output(spec);
  const auto instance = make_problem(spec.problem);
  PolicyConfig pc = spec.policy;
  pc.horizon = spec.horizon;
  const auto logger = make_policy(spec.ope_logger, pc);
  const std::size_t k = instance.num_arms();

  std::vector<ActionDistribution> targets;
  OpeReport report;
  for (const auto& t : spec.ope_targets) {
    targets.push_back(t.arm ? ActionDistribution::point_mass(k, *t.arm) : ActionDistribution::uniform(k));
    double truth = 0.0;
    for (std::size_t a = 0; a < k; ++a) truth += targets.back()[a] * instance.arm(a).mean;
    report.rows.push_back({t.name, truth, 0.0, 0.0, spec.ope_logs});
  }

  std::vector<std::vector<double>> values(spec.ope_logs, std::vector<double>(targets.size()));
  parallel_for(spec.ope_logs, spec.threads, [&](std::size_t i) {
    const auto log = log_run(*logger, instance, spec.ope_horizon, derive_seed(spec.base_seed, i));
    for (std::size_t j = 0; j < targets.size(); ++j) values[i][j] = ips_value(log, targets[j]).value;
  });
  const double n = static_cast<double>(spec.ope_logs);
  for (std::size_t j = 0; j < targets.size(); ++j) {
    double sum = 0.0;
    for (const auto& v : values) sum += v[j];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& v : values) ss += (v[j] - mean) * (v[j] - mean);
    report.rows[j].estimate = mean;
    report.rows[j].standard_error = spec.ope_logs > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  }

  // Propensity cost: closed-form lookup vs Monte-Carlo estimation for TS, on
  // states visited by the first log.
  const auto log = log_run(*logger, instance, spec.ope_horizon, derive_seed(spec.base_seed, 0));
  write_file(dir / "log.csv", log_to_csv(log));
  write_file(dir / "log.jsonl", log_to_jsonl(log));
  std::vector<PolicyState> states;
  {
    PolicyState replay(k);
    const std::size_t every = std::max<std::size_t>(1, log.size() / std::max<std::size_t>(1, spec.timing_decisions));
    for (std::size_t i = 0; i < log.size(); ++i) {
      if (replay.initialized() && i % every == 0 && states.size() < spec.timing_decisions) states.push_back(replay);
      replay.update(log[i].arm, log[i].reward);
    }
    if (states.empty()) states.push_back(replay);
  }
  using clock = std::chrono::steady_clock;
  const auto ts = make_policy("ts", pc);
  RandomStream rng(derive_seed(spec.base_seed, ~std::uint64_t{0}));
  double sink = 0.0;
  const int repeats = 20;
  const auto c0 = clock::now();
  for (int r = 0; r < repeats; ++r)
    for (const auto& s : states) sink += (*logger->distribution(s))[0];
  const auto c1 = clock::now();
  for (const auto& s : states) sink += mc_propensity(*ts, s, spec.mc_samples, rng).frequencies[0];
  const auto c2 = clock::now();
  const double decisions = static_cast<double>(states.size());
  report.closed_form_seconds = std::chrono::duration<double>(c1 - c0).count() / (decisions * repeats);
  report.monte_carlo_seconds = std::chrono::duration<double>(c2 - c1).count() / decisions;
  [[maybe_unused]] static volatile double timing_sink;
  timing_sink = sink;

  std::string csv = "target,truth,ips_mean,ips_se,logs\n";
  nlohmann::ordered_json j;
  j["logger"] = logger->label();
  j["problem"] = std::string(to_string(spec.problem.family));
  j["K"] = k;
  j["T"] = spec.ope_horizon;
  j["logs"] = spec.ope_logs;
  j["targets"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    csv += row.target + ',' + format_real(row.truth) + ',' + format_real(row.estimate) + ',' +
           format_real(row.standard_error) + ',' + std::to_string(row.logs) + '\n';
    j["targets"].push_back({{"target", row.target},
                            {"truth", round_output(row.truth)},
                            {"ips_mean", round_output(row.estimate)},
                            {"ips_se", round_output(row.standard_error)}});
    out << std::left << std::setw(10) << row.target << " truth " << format_real(row.truth) << "  ips "
        << format_real(row.estimate) << " +/- " << format_real(row.standard_error) << '\n';
  }
  write_file(dir / "ope.csv", csv);
  write_file(dir / "ope.json", j.dump(2) + "\n");
  out << "propensity per decision: closed form " << format_real(report.closed_form_seconds)
      << " s, TS monte carlo (" << spec.mc_samples << " draws) " << format_real(report.monte_carlo_seconds)
      << " s, ratio " << format_real(report.monte_carlo_seconds / report.closed_form_seconds) << '\n';
  return report;
}

BoundReport cmd_bounds(const RunSpec& spec, std::ostream& out) {
  const auto dir = prepare_output(spec);
  const auto instance = make_problem(spec.problem);
  const auto report = bound_report(instance, spec.policy.sigma2, spec.bounds_c,
                                   static_cast<double>(spec.horizon), spec.bounds_denominator);
  const auto json = bound_report_json(report);
  write_file(dir / "bounds.json", json);
  write_file(dir / "bounds.csv", bound_report_csv(report));
  out << json;
  return report;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maillard sampling bandit experiments"};
  app.require_subcommand(1);
  std::string config_path;
  struct Sub {
    Command command;
    CLI::App* app;
  };
  const std::vector<std::pair<Command, std::pair<const char*, const char*>>> defs{
      {Command::Run, {"run", "run policies on one problem and summarize regret"}},
      {Command::SweepBooster, {"sweep-booster", "sweep the MS+ booster on the tuning problem"}},
      {Command::Ope, {"ope", "off-policy evaluation from closed-form propensities"}},
      {Command::Bounds, {"bounds", "print leading-term regret bounds for a problem"}},
  };
  std::vector<Sub> subs;
  for (const auto& [cmd, names] : defs) {
    auto* sub = app.add_subcommand(names.first, names.second);
    sub->add_option("-c,--config", config_path, "INI config file");
    sub->allow_extras();
    subs.push_back({cmd, sub});
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    const auto chosen = std::find_if(subs.begin(), subs.end(), [](const Sub& s) { return s.app->parsed(); });
    auto doc = config_path.empty() ? IniDocument{} : IniDocument::load(config_path);
    const auto extras = chosen->app->remaining();
    for (std::size_t i = 0; i < extras.size(); ++i) {
      const std::string& tok = extras[i];
      if (tok.rfind("--", 0) != 0) throw ConfigError("unexpected argument '" + tok + "'");
      const auto body = tok.substr(2);
      const auto eq = body.find('=');
      if (eq != std::string::npos) {
        doc.set(body.substr(0, eq), body.substr(eq + 1));
      } else if (i + 1 < extras.size() && extras[i + 1].rfind("--", 0) != 0) {
        doc.set(body, extras[++i]);
      } else {
        throw ConfigError("override '" + tok + "' has no value");
      }
    }
    auto spec = parse_run_spec(doc, chosen->command);
    spec.threads = threads_from_env();
    switch (chosen->command) {
      case Command::Run: cmd_run(spec, out); break;
      case Command::SweepBooster: cmd_sweep_booster(spec, out); break;
      case Command::Ope: cmd_ope(spec, out); break;
      case Command::Bounds: cmd_bounds(spec, out); break;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace maillard
