#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "nskd/attack.hpp"
#include "nskd/correlations.hpp"
#include "nskd/simulator.hpp"

using namespace nskd;

namespace {

const double kSqrt2 = std::sqrt(2.0);

ProtocolConfig make_config(int n, double p, std::int64_t rounds,
                           std::uint64_t seed) {
  ProtocolConfig c;
  c.n = n;
  c.p = p;
  c.rounds = rounds;
  c.seed = seed;
  return c;
}

// Empirical max-norm distance between transcript frequencies and a box.
double tomography_distance(const Transcript& t, const ConditionalBox& box) {
  std::vector<std::int64_t> cell(box.table.size(), 0);
  std::vector<std::int64_t> setting(static_cast<std::size_t>(box.na) * box.nb, 0);
  for (const Round& r : t.rounds) {
    ++cell[box.index(r.a, r.b, r.x, r.y)];
    ++setting[static_cast<std::size_t>(r.x) * box.nb + r.y];
  }
  double worst = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < box.na; ++x)
        for (int y = 0; y < box.nb; ++y) {
          std::int64_t n_xy = setting[static_cast<std::size_t>(x) * box.nb + y];
          if (n_xy == 0) continue;
          double emp = static_cast<double>(cell[box.index(a, b, x, y)]) / n_xy;
          worst = std::max(worst, std::fabs(emp - box.at(a, b, x, y)));
        }
  return worst;
}

}  // namespace

TEST_CASE("per-round rng streams are reproducible and distinct") {
  RoundRng r1(42, 7), r2(42, 7), r3(42, 8), r4(43, 7);
  std::uint64_t a = r1.next_u64();
  CHECK(a == r2.next_u64());
  CHECK(a != r3.next_u64());
  CHECK(a != r4.next_u64());
  for (int i = 0; i < 1000; ++i) {
    double u = r1.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("runs are deterministic for a fixed config") {
  ProtocolConfig config = make_config(2, 0.9, 500, 12345);
  RunResult first = run(config);
  RunResult second = run(config);
  REQUIRE(first.transcript.rounds.size() == second.transcript.rounds.size());
  for (std::size_t i = 0; i < first.transcript.rounds.size(); ++i) {
    const Round &a = first.transcript.rounds[i], &b = second.transcript.rounds[i];
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    CHECK(a.a == b.a);
    CHECK(a.b == b.b);
    CHECK(a.tag == b.tag);
  }
  CHECK(first.report.chain_est == second.report.chain_est);
  CHECK(first.report.qber_est == second.report.qber_est);

  config.rounds = 1;
  RunResult tiny1 = run(config), tiny2 = run(config);
  CHECK(tiny1.transcript.rounds[0].x == tiny2.transcript.rounds[0].x);
  CHECK(tiny1.transcript.rounds[0].b == tiny2.transcript.rounds[0].b);

  ProtocolConfig other = config;
  other.seed = 54321;
  other.rounds = 500;
  config.rounds = 500;
  RunResult shifted = run(other);
  bool any_diff = false;
  RunResult base = run(config);
  for (std::size_t i = 0; i < 500; ++i)
    any_diff |= (base.transcript.rounds[i].x != shifted.transcript.rounds[i].x ||
                 base.transcript.rounds[i].a != shifted.transcript.rounds[i].a);
  CHECK(any_diff);
}

TEST_CASE("sift tags partition rounds as prescribed") {
  ProtocolConfig config = make_config(3, 0.8, 200000, 99);
  config.q = 0.7;
  config.q_prime = 0.6;
  RunResult result = run(config);
  std::int64_t key = 0;
  for (const Round& r : result.transcript.rounds) {
    if (r.x == 0 && r.y == 0) CHECK(r.tag == SiftTag::Key);
    if (r.x >= 1) CHECK(r.tag == SiftTag::Test);
    if (r.x == 0 && r.y != 0) CHECK(r.tag == SiftTag::Discard);
    CHECK(r.x >= 0);
    CHECK(r.x <= 3);
    CHECK(r.y >= 0);
    CHECK(r.y <= 2);
    key += (r.tag == SiftTag::Key);
  }
  CHECK(key == result.report.key_count);
  double expect = config.rounds * config.q * config.q_prime;
  double sigma = std::sqrt(config.rounds * config.q * config.q_prime *
                           (1.0 - config.q * config.q_prime));
  CHECK(std::fabs(key - expect) <= 4.0 * sigma);
}

TEST_CASE("honest noise-free run matches the analytic chain value") {
  ProtocolConfig config = make_config(2, 1.0, 100000, 2024);
  RunResult result = run(config);
  CHECK(result.report.qber_est == 0.0);
  CHECK(result.report.qber_se == 0.0);
  CHECK(std::fabs(result.report.chain_est - (2.0 - kSqrt2)) <=
        3.0 * result.report.chain_se);
  CHECK_FALSE(result.report.eve_empirical_info.has_value());
}

TEST_CASE("honest noisy three-setting run matches the chain closed form") {
  ProtocolConfig config = make_config(3, 0.9, 100000, 777);
  RunResult result = run(config);
  double expected = quantum_chain_value(3, 0.9);
  CHECK(std::fabs(result.report.chain_est - expected) <=
        3.0 * result.report.chain_se);
  double qber = (1.0 - 0.9) / 2.0;
  CHECK(std::fabs(result.report.qber_est - qber) <=
        3.0 * std::max(result.report.qber_se, 1e-12));
}

TEST_CASE("key-bit flipping changes the qber but not the chain estimate") {
  ProtocolConfig config = make_config(2, 1.0, 100000, 31337);
  config.flip_r = 0.25;
  RunResult result = run(config);
  CHECK(std::fabs(result.report.qber_est - 0.25) <=
        3.0 * result.report.qber_se);
  CHECK(std::fabs(result.report.chain_est - (2.0 - kSqrt2)) <=
        3.0 * result.report.chain_se);
}

TEST_CASE("empirical distribution converges to the quantum box") {
  ProtocolConfig config = make_config(2, 0.9, 1000000, 4711);
  config.q = 0.5;
  config.q_prime = 0.5;
  ConditionalBox box =
      quantum_box(WernerParameter(0.9), MeasurementScheme::chained(2));

  SUBCASE("honest source") {
    RunResult result = run(config);
    CHECK(tomography_distance(result.transcript, box) <=
          5.0 * std::sqrt(1.0 / config.rounds));
  }
  SUBCASE("adversarial source is statistically indistinguishable") {
    config.adversarial = true;
    RunResult result = run(config);
    CHECK(tomography_distance(result.transcript, box) <=
          5.0 * std::sqrt(1.0 / config.rounds));
  }
}

TEST_CASE("eavesdropper information saturates the bound on the noise-free box") {
  ProtocolConfig config = make_config(2, 1.0, 100000, 271828);
  config.q = 0.7;
  config.q_prime = 0.7;
  config.adversarial = true;
  RunResult result = run(config);
  REQUIRE(result.report.eve_empirical_info.has_value());
  double info = *result.report.eve_empirical_info;
  double se = *result.report.eve_empirical_se;
  double bound = eve_info_bound(2.0 - kSqrt2, 0.0);
  CHECK(std::fabs(info - bound) <= 3.0 * se);
  CHECK(info <= bound + 3.0 * se);
}

TEST_CASE("eavesdropper information respects the bound across noise levels") {
  for (auto [n, p] : std::vector<std::pair<int, double>>{{2, 0.95}, {3, 0.9}}) {
    ProtocolConfig config = make_config(n, p, 80000, 1618);
    config.q = 0.7;
    config.q_prime = 0.7;
    config.adversarial = true;
    RunResult result = run(config);
    REQUIRE(result.report.eve_empirical_info.has_value());
    double bound = eve_info_bound(quantum_chain_value(n, p), 0.0);
    CHECK(*result.report.eve_empirical_info <=
          bound + 3.0 * *result.report.eve_empirical_se);
  }
}

TEST_CASE("a full flip erases the eavesdropper's knowledge") {
  ProtocolConfig config = make_config(2, 1.0, 100000, 393939);
  config.q = 0.7;
  config.q_prime = 0.7;
  config.adversarial = true;
  config.flip_r = 0.5;
  RunResult result = run(config);
  REQUIRE(result.report.eve_empirical_info.has_value());
  // Plug-in MI is biased up by ~(cells-1)/(2n ln2); allow that on top of 3 sigma.
  double slack = 3.0 * *result.report.eve_empirical_se + 1e-4;
  CHECK(*result.report.eve_empirical_info <= slack);
}

TEST_CASE("eve accuracy on a synthetic no-knowledge transcript is zero") {
  Transcript t;
  t.config = make_config(2, 1.0, 20000, 1);
  t.config.adversarial = true;
  for (int i = 0; i < 20000; ++i) {
    Round r{};
    r.x = 0;
    r.y = 0;
    r.a = i & 1;
    r.b = i & 1;
    r.tag = SiftTag::Key;
    r.eve_strategy = static_cast<int>(StrategyId::RR);
    r.eve_guess = -1;
    t.rounds.push_back(r);
  }
  EveAccuracy acc = eve_accuracy(t);
  CHECK(acc.info_bits == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("eve accuracy preconditions") {
  ProtocolConfig honest = make_config(2, 1.0, 20000, 5);
  RunResult result = run(honest);
  CHECK_THROWS_AS(eve_accuracy(result.transcript), std::invalid_argument);

  ProtocolConfig small = make_config(2, 1.0, 100, 5);
  small.adversarial = true;
  RunResult tiny = run(small);
  CHECK_THROWS_AS(eve_accuracy(tiny.transcript), std::invalid_argument);
}

TEST_CASE("achievable key length accounting") {
  ProtocolConfig config = make_config(2, 1.0, 100000, 11);
  RunResult result = run(config);
  std::int64_t bits = achievable_key_length(result.report, config);
  double expected = 0.81 * 100000 * (kSqrt2 - 1.0);
  CHECK(std::fabs(bits - expected) <= 0.05 * expected);

  EstimationReport leaky;
  leaky.chain_est = 1.2;
  leaky.qber_est = 0.0;
  leaky.key_count = 5000;
  CHECK(achievable_key_length(leaky, config) == 0);

  EstimationReport empty;
  empty.key_count = 0;
  CHECK(achievable_key_length(empty, config) == 0);
}

TEST_CASE("transcript csv format") {
  Transcript t;
  t.config = make_config(2, 1.0, 3, 9);
  t.rounds = {
      {0, 0, 0, 0, SiftTag::Key, -1, -1},
      {1, 0, 1, 0, SiftTag::Test, -1, -1},
      {0, 1, 1, 1, SiftTag::Discard, -1, -1},
  };
  std::ostringstream honest;
  write_transcript_csv(t, honest);
  CHECK(honest.str() ==
        "round_index,x,y,a,b,sift_tag\n"
        "0,0,0,0,0,KEY\n"
        "1,1,0,1,0,TEST\n"
        "2,0,1,1,1,DISCARD\n");

  t.config.adversarial = true;
  t.rounds[0].eve_strategy = static_cast<int>(StrategyId::DD);
  t.rounds[0].eve_guess = 0;
  t.rounds[1].eve_strategy = static_cast<int>(StrategyId::RR);
  t.rounds[2].eve_strategy = static_cast<int>(StrategyId::RR);
  std::ostringstream eve;
  write_transcript_csv(t, eve);
  CHECK(eve.str() ==
        "round_index,x,y,a,b,sift_tag,eve_component\n"
        "0,0,0,0,0,KEY,DD\n"
        "1,1,0,1,0,TEST,RR\n"
        "2,0,1,1,1,DISCARD,RR\n");
}

TEST_CASE("clause-mapped estimation on a synthetic transcript") {
  Transcript t;
  t.config = make_config(2, 1.0, 6, 1);
  t.rounds = {
      {1, 0, 0, 1, SiftTag::Test, -1, -1},   // clause 0 violated
      {1, 0, 0, 0, SiftTag::Test, -1, -1},   // clause 0 satisfied
      {1, 1, 0, 0, SiftTag::Test, -1, -1},   // clause 1 satisfied
      {2, 1, 1, 0, SiftTag::Test, -1, -1},   // clause 2 violated
      {2, 0, 1, 1, SiftTag::Test, -1, -1},   // wrapped clause counts equality
      {0, 0, 0, 1, SiftTag::Key, -1, -1},
  };
  EstimationReport report = estimate(t);
  CHECK(report.chain_est == doctest::Approx(0.5 + 0.0 + 1.0 + 1.0).epsilon(1e-12));
  CHECK(report.chain_se == doctest::Approx(std::sqrt(0.125)).epsilon(1e-12));
  CHECK(report.key_count == 1);
  CHECK(report.qber_est == doctest::Approx(1.0));
}

TEST_CASE("config validation") {
  ProtocolConfig config = make_config(2, 1.0, 10, 1);
  config.q = 0.0;
  CHECK_THROWS_AS(run(config), std::invalid_argument);
  config = make_config(2, 1.0, 0, 1);
  CHECK_THROWS_AS(run(config), std::invalid_argument);
  config = make_config(1, 1.0, 10, 1);
  CHECK_THROWS_AS(run(config), std::invalid_argument);
  config = make_config(2, 1.5, 10, 1);
  CHECK_THROWS_AS(run(config), std::invalid_argument);
  config = make_config(4, 1.0, 10, 1);
  config.adversarial = true;
  CHECK_THROWS_AS(run(config), std::invalid_argument);
  config = make_config(2, 1.0, 10, 1);
  config.flip_r = 0.6;
  CHECK_THROWS_AS(run(config), std::invalid_argument);
}
