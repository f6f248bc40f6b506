#include "nskd/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "nskd/correlations.hpp"
#include "nskd/keyrate.hpp"

namespace nskd {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RoundRng::RoundRng(std::uint64_t seed, std::uint64_t round_index)
    : state_(mix64(seed) + round_index) {}

std::uint64_t RoundRng::next_u64() {
  state_ += kGamma;
  return mix64(state_);
}

double RoundRng::next_unit() { return (next_u64() >> 11) * 0x1.0p-53; }

const char* sift_name(SiftTag tag) {
  switch (tag) {
    case SiftTag::Key: return "KEY";
    case SiftTag::Test: return "TEST";
    case SiftTag::Discard: return "DISCARD";
  }
  return "??";
}

namespace {

void check_config(const ProtocolConfig& c) {
  if (c.n < 2) throw std::invalid_argument("run: need n >= 2");
  if (c.rounds < 1) throw std::invalid_argument("run: need rounds >= 1");
  if (!(c.p >= 0.0 && c.p <= 1.0))
    throw std::invalid_argument("run: p must lie in [0,1]");
  if (!(c.q > 0.0 && c.q < 1.0 && c.q_prime > 0.0 && c.q_prime < 1.0))
    throw std::invalid_argument("run: q and q' must lie in (0,1)");
  if (!(c.flip_r >= 0.0 && c.flip_r <= 0.5))
    throw std::invalid_argument("run: flip_r must lie in [0,1/2]");
  if (c.adversarial && c.n > 3)
    throw std::invalid_argument("run: adversarial mode supports n = 2 and n = 3");
}

int pick_setting(double u, double key_prob, int num_alternatives) {
  if (u < key_prob) return 0;
  double v = (u - key_prob) / (1.0 - key_prob);
  int j = static_cast<int>(v * num_alternatives);
  return 1 + std::min(j, num_alternatives - 1);
}

void sample_outcome(const ConditionalBox& box, int x, int y, double u,
                    int& a, int& b) {
  double cum = 0.0;
  for (int oa = 0; oa < 2; ++oa)
    for (int ob = 0; ob < 2; ++ob) {
      cum += std::max(0.0, box.at(oa, ob, x, y));
      if (u < cum) {
        a = oa;
        b = ob;
        return;
      }
    }
  a = 1;
  b = 1;
}

SiftTag tag_of(int x, int y) {
  if (x >= 1) return SiftTag::Test;
  return y == 0 ? SiftTag::Key : SiftTag::Discard;
}

// Clause index for a test cell, or -1. Clause 2(i-1) is (x=i, y=i-1),
// clause 2(i-1)+1 is (x=i, y=i) except the last, which wraps to
// (x=n, y=0) with the target complemented.
struct ClauseMap {
  int n;
  int clause(int x, int y, bool& complemented) const {
    complemented = false;
    if (x < 1 || x > n) return -1;
    if (y == x - 1) return 2 * (x - 1);
    if (x < n && y == x) return 2 * (x - 1) + 1;
    if (x == n && y == 0) {
      complemented = true;
      return 2 * (n - 1) + 1;
    }
    return -1;
  }
};

}  // namespace

RunResult run(const ProtocolConfig& config) {
  check_config(config);
  const WernerParameter w(config.p);
  const MeasurementScheme scheme = MeasurementScheme::chained(config.n);
  const ConditionalBox honest = quantum_box(w, scheme);

  std::vector<const ConditionalBox*> component_box;
  std::vector<double> component_cum;
  std::vector<int> component_strategy;
  std::vector<int> component_guess;
  AttackDecomposition attack;
  if (config.adversarial) {
    attack = build_attack_mixture(honest);
    double total = 0.0;
    for (const auto& comp : attack.components) total += comp.weight;
    double cum = 0.0;
    for (const auto& comp : attack.components) {
      cum += comp.weight / total;
      component_box.push_back(&comp.box);
      component_cum.push_back(cum);
      component_strategy.push_back(static_cast<int>(comp.strategy));
      auto guess = deterministic_bob_key_bit(comp.box);
      component_guess.push_back(guess ? *guess : -1);
    }
    component_cum.back() = 1.0;
  }

  Transcript transcript;
  transcript.config = config;
  transcript.rounds.resize(config.rounds);

  for (std::int64_t i = 0; i < config.rounds; ++i) {
    RoundRng rng(config.seed, static_cast<std::uint64_t>(i));
    Round& round = transcript.rounds[i];
    round.x = pick_setting(rng.next_unit(), config.q, config.n);
    round.y = pick_setting(rng.next_unit(), config.q_prime, config.n - 1);
    round.tag = tag_of(round.x, round.y);

    const ConditionalBox* box = &honest;
    if (config.adversarial) {
      double u = rng.next_unit();
      std::size_t k = std::lower_bound(component_cum.begin(),
                                       component_cum.end(), u) -
                      component_cum.begin();
      k = std::min(k, component_cum.size() - 1);
      box = component_box[k];
      round.eve_strategy = component_strategy[k];
      round.eve_guess = component_guess[k];
    }
    sample_outcome(*box, round.x, round.y, rng.next_unit(), round.a, round.b);
    if (round.tag == SiftTag::Key && config.flip_r > 0.0 &&
        rng.next_unit() < config.flip_r)
      round.b ^= 1;
  }

  RunResult result{std::move(transcript), {}};
  result.report = estimate(result.transcript);
  return result;
}

EstimationReport estimate(const Transcript& transcript) {
  const int n = transcript.config.n;
  const ClauseMap clauses{n};
  const int num_clauses = 2 * n;
  std::vector<std::int64_t> seen(num_clauses, 0), hit(num_clauses, 0);

  std::int64_t key_count = 0, key_disagree = 0;
  for (const Round& r : transcript.rounds) {
    if (r.tag == SiftTag::Key) {
      ++key_count;
      key_disagree += (r.a != r.b);
    } else if (r.tag == SiftTag::Test) {
      bool complemented = false;
      int k = clauses.clause(r.x, r.y, complemented);
      if (k >= 0) {
        ++seen[k];
        bool counted = complemented ? (r.a == r.b) : (r.a != r.b);
        hit[k] += counted;
      }
    }
  }

  EstimationReport report;
  double chain = 0.0, var = 0.0;
  for (int k = 0; k < num_clauses; ++k) {
    if (seen[k] == 0) {
      // No statistics: fall back to the uninformative estimate.
      chain += 0.5;
      var += 0.25;
      continue;
    }
    double ph = static_cast<double>(hit[k]) / seen[k];
    chain += ph;
    var += ph * (1.0 - ph) / seen[k];
  }
  report.chain_est = chain;
  report.chain_se = std::sqrt(var);

  report.key_count = key_count;
  if (key_count > 0) {
    double ph = static_cast<double>(key_disagree) / key_count;
    report.qber_est = ph;
    report.qber_se = std::sqrt(ph * (1.0 - ph) / key_count);
  } else {
    report.qber_est = 0.5;
    report.qber_se = 0.5;
  }

  if (transcript.config.adversarial && key_count >= 10000) {
    EveAccuracy acc = eve_accuracy(transcript);
    report.eve_empirical_info = acc.info_bits;
    report.eve_empirical_se = acc.std_error;
  }
  return report;
}

EveAccuracy eve_accuracy(const Transcript& transcript) {
  if (!transcript.config.adversarial)
    throw std::invalid_argument("eve_accuracy: adversarial transcript required");

  // Eve's symbol: her predicted bit, or 2 when she has no prediction.
  std::array<std::array<std::int64_t, 2>, 3> counts{};
  std::int64_t total = 0;
  for (const Round& r : transcript.rounds) {
    if (r.tag != SiftTag::Key) continue;
    int g = (r.eve_guess < 0) ? 2 : r.eve_guess;
    ++counts[g][r.b & 1];
    ++total;
  }
  if (total < 10000)
    throw std::invalid_argument("eve_accuracy: need at least 10^4 key rounds");

  std::array<double, 3> pg{};
  std::array<double, 2> pb{};
  for (int g = 0; g < 3; ++g)
    for (int b = 0; b < 2; ++b) {
      double f = static_cast<double>(counts[g][b]) / total;
      pg[g] += f;
      pb[b] += f;
    }

  double info = 0.0, second_moment = 0.0;
  for (int g = 0; g < 3; ++g)
    for (int b = 0; b < 2; ++b) {
      if (counts[g][b] == 0) continue;
      double f = static_cast<double>(counts[g][b]) / total;
      double l = std::log2(f / (pg[g] * pb[b]));
      info += f * l;
      second_moment += f * l * l;
    }
  double variance = std::max(0.0, second_moment - info * info) /
                    static_cast<double>(total);
  return {info, std::sqrt(variance)};
}

std::int64_t achievable_key_length(const EstimationReport& report,
                                   const ProtocolConfig& config) {
  if (report.key_count <= 0) return 0;
  double qber = std::clamp(report.qber_est, 0.0, 0.5);
  double rate = (1.0 - binary_entropy(qber)) -
                eve_info_bound(std::max(0.0, report.chain_est), config.flip_r);
  if (rate <= 0.0) return 0;
  return static_cast<std::int64_t>(std::floor(report.key_count * rate));
}

void write_transcript_csv(const Transcript& transcript, std::ostream& out) {
  const bool eve = transcript.config.adversarial;
  out << "round_index,x,y,a,b,sift_tag";
  if (eve) out << ",eve_component";
  out << '\n';
  for (std::size_t i = 0; i < transcript.rounds.size(); ++i) {
    const Round& r = transcript.rounds[i];
    out << i << ',' << r.x << ',' << r.y << ',' << r.a << ',' << r.b << ','
        << sift_name(r.tag);
    if (eve)
      out << ','
          << (r.eve_strategy >= 0
                  ? strategy_name(static_cast<StrategyId>(r.eve_strategy))
                  : "");
    out << '\n';
  }
}

}  // namespace nskd
