#pragma once

#include <array>
#include <optional>
#include <vector>

#include "nskd/nsbox.hpp"

namespace nskd {

// Extremal eavesdropping strategy classes, named by what Eve learns:
// DD both outcomes deterministic to her, DR Alice's outcome known and
// Bob's an independent coin, RR both outcomes hidden but correlated.
enum class StrategyId { DD = 0, DR = 1, RR = 2 };

const char* strategy_name(StrategyId id);

struct StrategyClass {
  StrategyId id;
  double chain_lower_bound;  // smallest chain value the class can show
  double corr_upper_bound;   // largest key-setting correlation
  bool corr_exact;           // DR pins corr to the bound instead of capping it
  double h_a_given_e;        // bits
  double h_b_given_e;
  double i_ab_given_e;
};

// The three class rows: DD (1, 1, 0,0,0), DR (0, corr=0, 0,1,0),
// RR (0, 1, 1,1,1).
const std::array<StrategyClass, 3>& strategy_table();

struct AttackComponent {
  double weight;
  ConditionalBox box;
  StrategyId strategy;
};

struct AttackDecomposition {
  // Class weights (p1, p2, p3) for (DD, DR, RR).
  std::array<double, 3> weights{};
  // Concrete extremal boxes realizing the attack; empty for the
  // weights-only analysis.
  std::vector<AttackComponent> components;

  // Total weight on components whose y=0 output Eve knows exactly.
  double deterministic_y0_weight() const;
};

// Eve's best class weights given the observed chain value and key
// correlation: p1 = min(chain, 1) maximizes her information, p3 covers
// the rest of the observed correlation, p2 takes the remainder.
AttackDecomposition optimal_weights(double chain_obs, double corr_obs);

// Upper bound on I(B:E) in bits: min(chain, 1) * (1 - h(r)) where r is
// Bob's bit-flip probability. At r = 0 this is the plain chain bound.
double eve_info_bound(double chain_obs, double flip_r);

// Upper bound on the intrinsic information: max(0, corr - chain).
double intrinsic_info_upper(double chain_obs, double corr_obs);

// Table-row classification of a single component box.
StrategyId classify_strategy(const ConditionalBox& box);

// The key-setting output Eve can predict for Bob, when the box fixes it.
std::optional<int> deterministic_bob_key_bit(const ConditionalBox& box);

// Decomposes a no-signalling target over deterministic and xor boxes by
// LP, maximizing the weight on deterministic components. Supports the
// chained layouts n = 2 and n = 3. Throws if the target fails
// validation or the decomposition cannot be certified.
AttackDecomposition build_attack_mixture(const ConditionalBox& target);

}  // namespace nskd
