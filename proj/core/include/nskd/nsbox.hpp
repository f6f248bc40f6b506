#pragma once

#include <cstddef>
#include <vector>

namespace nskd {

// Bipartite conditional distribution P(ab|xy) with binary outcomes,
// `na` settings for Alice and `nb` for Bob. The interesting members of
// this family are no-signalling: each party's marginal is independent
// of the other party's setting choice.
struct ConditionalBox {
  int na = 0;
  int nb = 0;
  std::vector<double> table;  // indexed by ((a*2 + b)*na + x)*nb + y

  ConditionalBox(int num_alice_settings, int num_bob_settings);

  std::size_t index(int a, int b, int x, int y) const {
    return ((static_cast<std::size_t>(a) * 2 + b) * na + x) * nb + y;
  }
  double at(int a, int b, int x, int y) const { return table[index(a, b, x, y)]; }
  double& at(int a, int b, int x, int y) { return table[index(a, b, x, y)]; }

  double alice_marginal(int a, int x, int y) const;  // P(a|xy), summed over b
  double bob_marginal(int b, int x, int y) const;    // P(b|xy), summed over a
};

enum class ConstraintKind {
  NegativeEntry,
  Normalization,
  AliceMarginal,
  BobMarginal,
};

struct ConstraintViolation {
  ConstraintKind kind;
  int a = -1;  // outcome involved, -1 when not applicable
  int b = -1;
  int x = -1;
  int y = -1;
  double magnitude = 0.0;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ConstraintViolation> violations;
  explicit operator bool() const { return ok; }
};

// Checks nonnegativity, per-setting normalization, and both no-signalling
// marginal families within `tol`.
ValidationReport validate(const ConditionalBox& box, double tol = 1e-9);

// Local extremal box: both outputs are functions of the local setting.
struct DeterministicBox {
  std::vector<int> alice_out;  // bit per Alice setting
  std::vector<int> bob_out;    // bit per Bob setting

  ConditionalBox to_box() const;
};

// All 2^{na+nb} deterministic boxes, ordered by (alice bits, bob bits)
// interpreted as binary counters. Guarded at na, nb <= 6.
std::vector<DeterministicBox> enumerate_deterministic(int na, int nb);

// Nonlocal extremal family used for eavesdropper mixtures: uniform
// marginals with a + b = parity[x*nb + y] (mod 2) enforced per cell.
ConditionalBox xor_box(int na, int nb, const std::vector<int>& parity);

// All 2^{na*nb} parity patterns. Guarded at na*nb <= 12.
std::vector<ConditionalBox> enumerate_xor_boxes(int na, int nb);

// The xor box winning every chain clause: chain_value(box, n) == 0.
ConditionalBox chain_perfect_box(int n);

// Canonical 2x2 PR box, a + b = x*y (mod 2).
ConditionalBox pr_box();

// All entries 1/4.
ConditionalBox uniform_box(int na, int nb);

// Bell functionals, all in the error-probability orientation: local
// boxes satisfy chain >= 1, no-signalling boxes only chain >= 0.
//
// chain_value sums, over i = 1..n, P(a != b | x=i, y=i-1) and
// P(a != b | x=i, y=i), where the final pair (x=n, y=n) wraps to
// (x=n, y=0) with the target complemented: it counts P(a == b).
double chain_value(const ConditionalBox& box, int n);

// chain_value specialized to n = 2 (requires the chained layout with
// Alice settings {0,1,2} and Bob settings {0,1}).
double chsh_value(const ConditionalBox& box);

// Key-setting correlator P(a=b|00) - P(a!=b|00).
double corr_value(const ConditionalBox& box);

enum class BellFunctional { Chsh, Chain, Corr };

struct BellValue {
  BellFunctional functional;
  int n;  // chain length, meaningful for Chain (2 for Chsh)
  double value;
};

BellValue evaluate(BellFunctional functional, const ConditionalBox& box, int n = 2);

// Minimum of chain_value over the no-signalling polytope of the chained
// layout (Alice settings {0..n}, Bob settings {0..n-1}) subject to
// P(b=0|y=0) = beta, solved as a dense LP. Guarded at n in {2..5}.
// The result certifies the monogamy bound: min >= max(0, 2*beta - 1).
double min_chain_given_marginal(int n, double beta);

}  // namespace nskd
