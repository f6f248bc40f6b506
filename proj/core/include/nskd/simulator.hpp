#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "nskd/attack.hpp"

namespace nskd {

// Splittable counter-based generator: every protocol round gets its own
// stream derived from (seed, round index), so transcripts are stable
// under any generation order and rounds may consume different numbers
// of draws.
class RoundRng {
 public:
  RoundRng(std::uint64_t seed, std::uint64_t round_index);

  std::uint64_t next_u64();
  double next_unit();  // uniform in [0, 1)

 private:
  std::uint64_t state_;
};

enum class SiftTag { Key = 0, Test = 1, Discard = 2 };

const char* sift_name(SiftTag tag);

struct ProtocolConfig {
  int n = 2;
  double p = 1.0;
  std::int64_t rounds = 1;
  double q = 0.9;        // probability Alice picks the key setting x = 0
  double q_prime = 0.9;  // probability Bob picks y = 0
  double flip_r = 0.0;   // Bob's key-bit flip probability
  std::uint64_t seed = 1;
  bool adversarial = false;
};

struct Round {
  int x;
  int y;
  int a;
  int b;  // post-flip on key rounds when preprocessing is active
  SiftTag tag;
  int eve_strategy = -1;  // StrategyId of Eve's component, -1 when honest
  int eve_guess = -1;     // Eve's key-bit prediction, -1 when she has none
};

struct Transcript {
  ProtocolConfig config;
  std::vector<Round> rounds;
};

struct EstimationReport {
  double chain_est = 0.0;
  double chain_se = 0.0;
  double qber_est = 0.0;
  double qber_se = 0.0;
  std::int64_t key_count = 0;
  std::optional<double> eve_empirical_info;  // bits, adversarial runs only
  std::optional<double> eve_empirical_se;
};

struct EveAccuracy {
  double info_bits;
  double std_error;
};

struct RunResult {
  Transcript transcript;
  EstimationReport report;
};

// Executes the protocol: sample settings with (q, q'), outcomes from the
// quantum box (honest) or from a per-round component of the optimal
// attack mixture (adversarial), flip key bits with probability flip_r,
// tag, and estimate. Deterministic for a fixed config.
RunResult run(const ProtocolConfig& config);

// Pure fold over a transcript: chain estimate from the clause-mapped
// test rounds, QBER from key rounds, binomial standard errors. Fills
// the Eve fields for adversarial transcripts with enough key rounds.
EstimationReport estimate(const Transcript& transcript);

// Empirical mutual information between Eve's key-bit knowledge (her
// prediction, or a distinct no-knowledge symbol) and Bob's recorded key
// bit, with a delta-method standard error. Requires an adversarial
// transcript with at least 10^4 key rounds.
EveAccuracy eve_accuracy(const Transcript& transcript);

// floor(key_count * max(0, 1 - h(qber) - eve_info_bound(chain_est, r))).
std::int64_t achievable_key_length(const EstimationReport& report,
                                   const ProtocolConfig& config);

// Line records `round_index,x,y,a,b,sift_tag[,eve_component]`; the Eve
// column appears only for adversarial transcripts.
void write_transcript_csv(const Transcript& transcript, std::ostream& out);

}  // namespace nskd
