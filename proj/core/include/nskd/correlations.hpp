#pragma once

#include <array>

#include "nskd/nsbox.hpp"

namespace nskd {

// Two-qubit Werner state weight: p on the maximally entangled singlet
// component, 1-p on white noise.
struct WernerParameter {
  double p;

  explicit WernerParameter(double purity);
};

// Chained measurement scheme: Alice has settings {0..n} with phase
// pi/(2n) at x=0 (the key setting) and pi*x/n otherwise; Bob has
// settings {0..n-1} with phase pi*(y+1/2)/n.
struct MeasurementScheme {
  int n;

  static MeasurementScheme chained(int n);

  double alice_phase(int x) const;
  double bob_phase(int y) const;
  int num_alice_settings() const { return n + 1; }
  int num_bob_settings() const { return n; }

 private:
  explicit MeasurementScheme(int chain_length) : n(chain_length) {}
};

// Expectation of the +-1 outcome product for equatorial measurements at
// the given phases: E = p * cos(phi_a - phi_b).
double correlator(const WernerParameter& w, double phi_a, double phi_b);

// Full conditional distribution over the scheme,
// P(ab|xy) = (1 + (-1)^{a xor b} E(x,y)) / 4.
ConditionalBox quantum_box(const WernerParameter& w, const MeasurementScheme& s);

// Independent verification path: builds the 4x4 density matrix and the
// rank-1 measurement projectors explicitly and returns the four Born
// probabilities, ordered [P(00), P(01), P(10), P(11)].
std::array<double, 4> density_matrix_oracle(const WernerParameter& w,
                                            double phi_a, double phi_b);

// Closed form for chain_value(quantum_box(p, n), n): n*(1 - p*cos(pi/2n)).
double quantum_chain_value(int n, double p);

}  // namespace nskd
