#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include <json.hpp>

#include "maillard/harness.hpp"
#include "maillard/ope.hpp"

using namespace maillard;

namespace {

BanditInstance three_arm_bernoulli() {
  return BanditInstance({ArmModel::bernoulli(0.5), ArmModel::bernoulli(0.4), ArmModel::bernoulli(0.3)});
}

class FixedArm final : public Policy {
 public:
  explicit FixedArm(std::size_t arm) : Policy({}), arm_(arm) {}
  std::string label() const override { return "fixed"; }
  std::size_t select(const PolicyState&, RandomStream&) const override { return arm_; }

 private:
  std::size_t arm_;
};

}  // namespace

TEST_CASE("initialization-only logs are all forced") {
  const auto p = make_policy("ms", {});
  const auto log = log_run(*p, three_arm_bernoulli(), 3, 1);
  REQUIRE(log.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(log[i].step == i + 1);
    CHECK(log[i].arm == i);
    CHECK(log[i].propensity == 1.0);
  }
}

TEST_CASE("logged propensities equal a replayed re-evaluation") {
  PolicyConfig cfg;
  cfg.booster = 8;
  for (const char* id : {"ms", "msplus:B=8"}) {
    const auto p = make_policy(id, cfg);
    const auto log = log_run(*p, three_arm_bernoulli(), 500, 9);
    PolicyState replay(3);
    for (const auto& rec : log) {
      if (rec.step > 3) {
        const auto d = *p->distribution(replay);
        CHECK(d[rec.arm] == rec.propensity);
        CHECK(rec.propensity > 0.0);
      }
      replay.update(rec.arm, rec.reward);
    }
  }
}

TEST_CASE("logs are deterministic in the seed") {
  const auto p = make_policy("ms", {});
  CHECK(log_run(*p, three_arm_bernoulli(), 400, 5) == log_run(*p, three_arm_bernoulli(), 400, 5));
  CHECK(log_run(*p, three_arm_bernoulli(), 400, 5) != log_run(*p, three_arm_bernoulli(), 400, 6));
}

TEST_CASE("policies without closed-form propensities cannot log") {
  const auto p = make_policy("ts", {});
  CHECK_THROWS_AS(log_run(*p, three_arm_bernoulli(), 10, 1), std::invalid_argument);
}

TEST_CASE("ips weights cancel when target matches the logging propensity") {
  std::vector<LogRecord> log{{1, 0, 9.0, 1.0}, {2, 1, 9.0, 1.0}};
  const double r = 0.625;
  for (std::uint64_t s = 3; s < 50; ++s) log.push_back({s, 1, r, 0.4});
  const auto est = ips_value(log, ActionDistribution({0.6, 0.4}));
  CHECK(est.value == r);
  CHECK(est.records == 47);
  CHECK(est.standard_error == 0.0);
}

TEST_CASE("ips edge cases") {
  const std::vector<LogRecord> log{{1, 0, 1, 1}, {2, 1, 1, 1}, {3, 0, 1.0, 0.5}, {4, 0, 0.0, 0.2}};
  CHECK(ips_value(log, ActionDistribution::point_mass(2, 1)).value == 0.0);
  CHECK(ips_value(log, ActionDistribution::point_mass(2, 0)).value == doctest::Approx(1.0));

  const std::vector<LogRecord> zero{{1, 0, 1, 1}, {2, 1, 1, 1}, {3, 0, 1.0, 0.0}};
  CHECK_THROWS_AS(ips_value(zero, ActionDistribution::uniform(2)), std::domain_error);
  const std::vector<LogRecord> forced{{1, 0, 1, 1}, {2, 1, 1, 1}};
  CHECK_THROWS_AS(ips_value(forced, ActionDistribution::uniform(2)), std::invalid_argument);
}

TEST_CASE("ips scales with rewards") {
  const auto p = make_policy("ms", {});
  auto log = log_run(*p, three_arm_bernoulli(), 300, 3);
  const auto target = ActionDistribution({0.2, 0.5, 0.3});
  const double base = ips_value(log, target).value;
  for (auto& r : log) r.reward *= -2.5;
  CHECK(ips_value(log, target).value == doctest::Approx(-2.5 * base).epsilon(1e-13));
}

TEST_CASE("ips is unbiased for point-mass targets") {
  const auto inst = three_arm_bernoulli();
  const auto p = make_policy("ms", {});
  const int logs = 1000;
  for (std::size_t arm = 0; arm < 3; ++arm) {
    double sum = 0, sum_sq = 0;
    const auto target = ActionDistribution::point_mass(3, arm);
    for (int i = 0; i < logs; ++i) {
      const double v = ips_value(log_run(*p, inst, 200, derive_seed(77, i)), target).value;
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / logs;
    const double se = std::sqrt((sum_sq / logs - mean * mean) / (logs - 1));
    CHECK(std::abs(mean - inst.arm(arm).mean) <= 3 * se);
  }
}

TEST_CASE("ips error shrinks like one over root R") {
  const auto inst = three_arm_bernoulli();
  const auto p = make_policy("ms", {});
  const auto target = ActionDistribution::point_mass(3, 1);
  const int groups = 30;
  std::vector<double> log_r, log_rmse;
  std::uint64_t seed = 0;
  for (int reps : {8, 32, 128}) {
    double sq = 0;
    for (int g = 0; g < groups; ++g) {
      double sum = 0;
      for (int i = 0; i < reps; ++i) sum += ips_value(log_run(*p, inst, 200, derive_seed(5, seed++)), target).value;
      const double err = sum / reps - inst.arm(1).mean;
      sq += err * err;
    }
    log_r.push_back(std::log(double(reps)));
    log_rmse.push_back(0.5 * std::log(sq / groups));
  }
  const double slope = (log_rmse.back() - log_rmse.front()) / (log_r.back() - log_r.front());
  CHECK(slope <= -0.25);
  CHECK(slope >= -1.0);
}

TEST_CASE("monte-carlo propensities") {
  const PolicyState s = PolicyState::from_statistics({5, 5, 5}, {0.1, 0.2, 0.3});
  RandomStream rng(8);

  SUBCASE("point-mass policy") {
    const FixedArm fixed(2);
    const auto est = mc_propensity(fixed, s, 1000, rng);
    CHECK(est.frequencies[2] == 1.0);
    CHECK(est.frequencies[0] == 0.0);
    CHECK(est.denominator(0) == doctest::Approx(1.0 / 2000));
    CHECK(est.denominator(2) == 1.0);
  }

  SUBCASE("single sample is one-hot") {
    const auto p = make_policy("ts", {});
    const auto est = mc_propensity(*p, s, 1, rng);
    int ones = 0;
    for (double f : est.frequencies.probs()) ones += f == 1.0;
    CHECK(ones == 1);
    CHECK(est.floor() == 0.5);
  }

  SUBCASE("two-arm TS agrees with the closed form") {
    const auto p = make_policy("ts", {});
    const auto two = PolicyState::from_statistics({8, 3}, {0.6, 0.45});
    const int n = 100000;
    const auto est = mc_propensity(*p, two, n, rng);
    const double q = ts_two_arm_probability(two, 0.25);
    CHECK(std::abs(est.frequencies[1] - q) <= 3 * std::sqrt(q * (1 - q) / n));
  }

  CHECK_THROWS_AS(mc_propensity(FixedArm(0), s, 0, rng), std::invalid_argument);
}

TEST_CASE("log serialization") {
  const auto p = make_policy("msplus", {});
  const auto log = log_run(*p, make_problem(ProblemFamily::GaussianEqual, 10, 0.25), 300, 2);
  const auto csv = log_to_csv(log);
  CHECK(csv.rfind("step,arm,reward,propensity\n1,1,", 0) == 0);
  const auto back = log_from_csv(csv);
  REQUIRE(back.size() == log.size());
  for (std::size_t i = 0; i < log.size(); ++i) {
    CHECK(back[i].step == log[i].step);
    CHECK(back[i].arm == log[i].arm);
    CHECK(back[i].reward == doctest::Approx(log[i].reward).epsilon(1e-11));
    CHECK(back[i].propensity == doctest::Approx(log[i].propensity).epsilon(1e-11));
  }
  CHECK_THROWS_AS(log_from_csv("step,arm\n"), std::invalid_argument);
  CHECK_THROWS_AS(log_from_csv("step,arm,reward,propensity\n2,1,0,1\n1,1,0,1\n"), std::invalid_argument);
  CHECK_THROWS_AS(log_from_csv("step,arm,reward,propensity\n1,0,0,1\n"), std::invalid_argument);

  const auto jsonl = log_to_jsonl(log);
  CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == 300);
  const auto first = nlohmann::json::parse(jsonl.substr(0, jsonl.find('\n')));
  CHECK(first["arm"] == 1);
  CHECK(first["propensity"] == 1.0);
}
