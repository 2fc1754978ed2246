// Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "maillard/bounds.hpp"
#include "maillard/commands.hpp"
#include "maillard/harness.hpp"
#include "maillard/ope.hpp"
#include "oracles.hpp"

using namespace maillard;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] AC%d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

constexpr double kSigma2 = 0.25;
constexpr std::uint64_t kHorizon = 20000;
constexpr std::size_t kTrials = 200;

struct GridRun {
  ProblemSpec problem;
  std::string policy_id;
  bool guaranteed = false;
  ExperimentSummary summary;
  double worst_identity_error = 0.0;
  bool pulls_sum_to_horizon = true;
};

std::vector<GridRun> grid;
std::size_t threads = 0;

// Criterion 10 is checked on every trial the grid produces.
void check_identity(const ExperimentConfig& cfg, std::span<const TrialResult> trials, GridRun& run) {
  const auto instance = make_problem(cfg.problem);
  for (const auto& tr : trials) {
    double expected = 0.0;
    std::uint64_t total = 0;
    for (std::size_t a = 0; a < tr.pulls.size(); ++a) {
      expected += instance.gap(a) * static_cast<double>(tr.pulls[a]);
      total += tr.pulls[a];
    }
    run.worst_identity_error = std::max(run.worst_identity_error, std::abs(expected - tr.final_regret));
    if (total != cfg.horizon) run.pulls_sum_to_horizon = false;
  }
}

GridRun run_cell(const ProblemSpec& problem, const std::string& id, const PolicyConfig& pc,
                 std::uint64_t horizon, std::size_t trials) {
  ExperimentConfig cfg;
  cfg.problem = problem;
  cfg.policy_id = id;
  cfg.policy = pc;
  cfg.horizon = horizon;
  cfg.trials = trials;
  cfg.base_seed = 1;
  cfg.trajectory_stride = 0;
  const auto results = run_trials(cfg, threads);
  GridRun run;
  run.problem = problem;
  run.policy_id = id;
  PolicyConfig with_horizon = pc;
  with_horizon.horizon = horizon;
  run.guaranteed = make_policy(id, with_horizon)->traits().subgaussian_guarantee;
  run.summary = summarize(cfg, results);
  check_identity(cfg, results, run);
  return run;
}

void ac1_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0, worst_sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto state = oracle::random_state(gen, 100, 1e6, 10.0);
    const double sigma2 = std::exp(std::log(0.05) + unit(gen) * std::log(400.0));
    PolicyConfig pc;
    pc.sigma2 = sigma2;
    pc.booster = 1.0 + unit(gen) * 127.0 + 1e-9;
    pc.c = 1e-3 + unit(gen) * (1.0 - 1e-3);
    pc.d = 1e-3 + unit(gen) * (1.0 - 1e-3);

    const auto ms = ms_distribution(state, sigma2);
    const auto ms_ref = oracle::ms_probs(state, sigma2);
    const auto mp = msplus_distribution(state, pc);
    const auto mp_ref = oracle::msplus_probs(state, sigma2, pc.booster, pc.c, pc.d);
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t a = 0; a < state.num_arms(); ++a) {
      worst = std::max<double>(worst, std::abs(ms[a] - ms_ref[a]));
      worst = std::max<double>(worst, std::abs(mp[a] - mp_ref[a]));
      s1 += ms[a];
      s2 += mp[a];
    }
    worst_sum = std::max({worst_sum, std::abs(s1 - 1.0), std::abs(s2 - 1.0)});
  }
  const double elapsed = seconds_since(start);
  report(1, "probability oracle", worst <= 1e-12 && worst_sum <= 1e-12 && elapsed < 10.0,
         fmt("max |p - p_ref| = %.3g, max |sum - 1| = %.3g over 10000 states in %.2f s (limits 1e-12, 1e-12, 10 s)",
             worst, worst_sum, elapsed));
}

void ac2_limit() {
  std::mt19937_64 gen(77);
  PolicyConfig pc;
  pc.sigma2 = kSigma2;
  pc.booster = 1.0 + 1e-6;
  pc.c = 1e-6;
  pc.d = 1e-6;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto state = oracle::random_state(gen, 100, 1e6, 10.0);
    const auto ms = ms_distribution(state, kSigma2);
    const auto mp = msplus_distribution(state, pc);
    for (std::size_t a = 0; a < state.num_arms(); ++a) worst = std::max(worst, std::abs(ms[a] - mp[a]));
  }
  report(2, "MS+ to MS limit", worst <= 1e-4, fmt("max |p_MS+ - p_MS| = %.3g over 1000 states (limit 1e-4)", worst));
}

void ac3_asymptotic() {
  const auto start = Clock::now();
  ExperimentConfig cfg;
  // GaussianEqual with K = 2 has means 1 and 0.5.
  cfg.problem = {ProblemFamily::GaussianEqual, 2, kSigma2};
  cfg.policy_id = "ms";
  cfg.policy.sigma2 = kSigma2;
  cfg.horizon = 100000;
  cfg.trials = kTrials;
  cfg.trajectory_stride = 0;
  const auto instance = make_problem(cfg.problem);
  const auto summary = run_experiment(cfg, threads);
  const double ratio = summary.mean / std::log(static_cast<double>(cfg.horizon));
  report(3, "asymptotic trend", instance.gap(1) == 0.5 && ratio >= 0.5 && ratio <= 3.0,
         fmt("gap %.3g, rate constant %.3g, mean Reg_T / ln T = %.4g (accept [0.5, 3.0]) in %.1f s",
             instance.gap(1), asymptotic_rate(instance, kSigma2), ratio, seconds_since(start)));
}

void build_grid() {
  const auto start = Clock::now();
  PolicyConfig pc;
  pc.sigma2 = kSigma2;
  for (const auto& problem : evaluation_problems(kSigma2)) {
    for (const auto& id : default_policy_ids()) grid.push_back(run_cell(problem, id, pc, kHorizon, kTrials));
  }
  std::printf("# evaluation grid: %zu cells, T = %llu, %zu trials each, %.1f s\n", grid.size(),
              static_cast<unsigned long long>(kHorizon), kTrials, seconds_since(start));
}

void ac4_minimax() {
  const double sigma = std::sqrt(kSigma2);
  int checked = 0;
  double worst_ratio = 0.0;
  std::string worst_cell, failed;
  for (const auto& run : grid) {
    if (!run.guaranteed) continue;
    const std::size_t k = run.problem.num_arms;
    const double env_t = 10.0 * minimax_envelope(k, kHorizon, sigma, MinimaxFlavor::LogT);
    const double env_k = 10.0 * minimax_envelope(k, kHorizon, sigma, MinimaxFlavor::LogK);
    const bool is_msplus = run.policy_id.starts_with("msplus");
    const double limit = is_msplus ? std::min(env_t, env_k) : env_t;
    ++checked;
    const double ratio = run.summary.mean / limit;
    const std::string cell = std::string(to_string(run.problem.family)) + "/K=" + std::to_string(k) + "/" + run.summary.label;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst_cell = cell;
    }
    if (ratio > 1.0) failed += " " + cell;
  }
  report(4, "minimax envelope", failed.empty() && checked > 0,
         fmt("%d guaranteed cells, worst mean / envelope = %.3g at %s%s%s", checked, worst_ratio,
             worst_cell.c_str(), failed.empty() ? "" : "; exceeded:", failed.c_str()));
}

void ac5_booster() {
  const auto start = Clock::now();
  PolicyConfig pc;
  pc.sigma2 = 1.0;
  const ProblemSpec problem{ProblemFamily::BoosterTuning, 10, 1.0};
  std::map<int, ExperimentSummary> by_b;
  for (int b : {2, 4, 16, 128}) {
    auto run = run_cell(problem, "msplus:B=" + std::to_string(b), pc, kHorizon, kTrials);
    by_b[b] = run.summary;
  }
  double max16 = -1.0;
  for (const auto& run : grid) {
    if (run.problem.family == ProblemFamily::GaussianEqual && run.problem.num_arms == 2 &&
        run.policy_id == "msplus:B=16")
      max16 = run.summary.max;
  }
  const bool ok = by_b[16].mean < by_b[2].mean && by_b[128].std > by_b[4].std && max16 >= 0.0 && max16 <= 2000.0;
  report(5, "booster tradeoff", ok,
         fmt("mean B=16 %.1f vs B=2 %.1f; std B=128 %.1f vs B=4 %.1f; max MS+16 on GaussianEqual K=2 = %.1f (limit 2000) in %.1f s",
             by_b[16].mean, by_b[2].mean, by_b[128].std, by_b[4].std, max16, seconds_since(start)));
}

void ac6_ordering() {
  double msplus = -1, aoucb = -1, tssg = -1;
  for (const auto& run : grid) {
    if (run.problem.family != ProblemFamily::GaussianEqual || run.problem.num_arms != 10) continue;
    if (run.policy_id == "msplus:B=8") msplus = run.summary.mean;
    if (run.policy_id == "aoucb") aoucb = run.summary.mean;
    if (run.policy_id == "tssg") tssg = run.summary.mean;
  }
  report(6, "relative ordering", msplus >= 0 && msplus < aoucb && msplus < tssg,
         fmt("GaussianEqual K=10: MS+8 %.1f, AOUCB %.1f, TS-SG %.1f", msplus, aoucb, tssg));
}

void ac7_ips() {
  const auto start = Clock::now();
  const BanditInstance instance({ArmModel::bernoulli(0.5), ArmModel::bernoulli(0.4), ArmModel::bernoulli(0.3)});
  PolicyConfig pc;
  pc.sigma2 = kSigma2;
  const auto logger = make_policy("ms", pc);
  constexpr std::size_t kLogs = 1000;
  std::vector<std::vector<double>> estimates(instance.num_arms(), std::vector<double>(kLogs));
  parallel_for(kLogs, threads, [&](std::size_t i) {
    const auto log = log_run(*logger, instance, 2000, derive_seed(7, i));
    for (std::size_t a = 0; a < instance.num_arms(); ++a)
      estimates[a][i] = ips_value(log, ActionDistribution::point_mass(instance.num_arms(), a)).value;
  });
  bool ok = true;
  std::string detail;
  for (std::size_t a = 0; a < instance.num_arms(); ++a) {
    const auto& e = estimates[a];
    double mean = 0.0;
    for (double v : e) mean += v;
    mean /= kLogs;
    double ss = 0.0;
    for (double v : e) ss += (v - mean) * (v - mean);
    const double se = std::sqrt(ss / (kLogs - 1) / kLogs);
    const double dev = std::abs(mean - instance.arm(a).mean);
    ok = ok && dev <= 3.0 * se;
    detail += fmt("arm %zu: %.4f vs %.2f (|dev| %.4f, 3 SE %.4f); ", a + 1, mean, instance.arm(a).mean, dev, 3.0 * se);
  }
  report(7, "IPS unbiasedness", ok, detail + fmt("%.1f s", seconds_since(start)));
}

void ac8_two_arm_ts() {
  std::mt19937_64 gen(31337);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PolicyConfig pc;
  pc.sigma2 = kSigma2;
  const auto ts = make_policy("ts", pc);
  constexpr std::size_t kSamples = 100000;
  double worst_z = 0.0;
  bool ok = true;
  for (int i = 0; i < 50; ++i) {
    std::vector<std::uint64_t> counts{1 + static_cast<std::uint64_t>(unit(gen) * 200),
                                      1 + static_cast<std::uint64_t>(unit(gen) * 200)};
    const double width = std::sqrt(kSigma2 * (1.0 / counts[0] + 1.0 / counts[1]));
    // Gaps up to three posterior widths keep the probability away from 0.
    std::vector<double> means{unit(gen), 0.0};
    means[1] = means[0] - unit(gen) * 3.0 * width;
    if (unit(gen) < 0.5) std::swap(means[0], means[1]);
    const auto state = PolicyState::from_statistics(counts, means);
    const auto exact = ts_two_arm_distribution(state, kSigma2);
    RandomStream rng(derive_seed(99, static_cast<std::uint64_t>(i)));
    std::size_t hits = 0;
    for (std::size_t s = 0; s < kSamples; ++s) hits += ts->select(state, rng) == 1 ? 1 : 0;
    const double freq = static_cast<double>(hits) / kSamples;
    const double p = exact[1];
    const double se = std::sqrt(p * (1.0 - p) / kSamples);
    const double z = se > 0 ? std::abs(freq - p) / se : (freq == p ? 0.0 : INFINITY);
    worst_z = std::max(worst_z, z);
    ok = ok && z <= 3.0;
  }
  const auto tie = PolicyState::from_statistics({5, 9}, {0.3, 0.3});
  const double at_zero = ts_two_arm_probability(tie, kSigma2);
  ok = ok && at_zero == 0.5;
  report(8, "two-arm TS closed form", ok,
         fmt("worst |MC - exact| = %.2f binomial SE over 50 states (limit 3); value at zero gap = %.17g", worst_z, at_zero));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void ac9_determinism() {
  const auto root = std::filesystem::temp_directory_path() / "maillard_acceptance_determinism";
  std::filesystem::remove_all(root);
  RunSpec spec = parse_run_spec(
      IniDocument::parse("[problem]\nfamily = GaussianEqual\nK = 10\n[experiment]\nT = 5000\ntrials = 40\n"),
      Command::Run);
  std::ostringstream sink;
  spec.threads = 1;
  spec.output_dir = root / "serial";
  cmd_run(spec, sink);
  spec.threads = 8;
  spec.output_dir = root / "parallel";
  cmd_run(spec, sink);
  const auto serial = slurp(root / "serial" / "summary.csv");
  const auto parallel = slurp(root / "parallel" / "summary.csv");
  report(9, "determinism", !serial.empty() && serial == parallel,
         fmt("summary.csv serial vs 8 workers: %zu bytes vs %zu bytes, %s", serial.size(), parallel.size(),
             serial == parallel ? "identical" : "different"));
  std::filesystem::remove_all(root);
}

void ac10_identity() {
  double worst = 0.0;
  bool sums = true;
  for (const auto& run : grid) {
    worst = std::max(worst, run.worst_identity_error);
    sums = sums && run.pulls_sum_to_horizon;
  }
  report(10, "regret accounting", !grid.empty() && worst <= 1e-9 && sums,
         fmt("%zu trials: max |regret - sum gap N| = %.3g (limit 1e-9), pull counts sum to T: %s",
             grid.size() * kTrials, worst, sums ? "yes" : "no"));
}

}  // namespace

int main() try {
  threads = resolve_threads(threads_from_env());
  const auto start = Clock::now();
  ac1_oracle();
  ac2_limit();
  ac3_asymptotic();
  build_grid();
  ac4_minimax();
  ac5_booster();
  ac6_ordering();
  ac7_ips();
  ac8_two_arm_ts();
  ac9_determinism();
  ac10_identity();
  std::printf("# %d failed, total %.1f s\n", failures, seconds_since(start));
  return failures == 0 ? 0 : 1;
} catch (const std::exception& e) {
  std::printf("[FAIL] acceptance aborted: %s\n", e.what());
  return 1;
}
