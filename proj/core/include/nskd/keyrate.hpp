#pragma once

#include <vector>

namespace nskd {

// Binary entropy in bits, h(0) = h(1) = 0 by continuity.
double binary_entropy(double q);

// Mutual information between Alice's and Bob's key bits for Werner
// weight p after Bob flips his bit with probability r:
// 1 - h((1-p)/2 + r*p).
double mutual_info_ab(double p, double r = 0.0);

// One-way rate against the chain bound, K_n(p) = 1 - h((1+p)/2)
// - n*(1 - p*cos(pi/2n)). The clamped variant floors at zero.
double key_rate_chain_unclamped(int n, double p);
double key_rate_chain(int n, double p);

struct KeyRateReport {
  int n;
  double p;
  double r_opt;        // flip probability used
  double i_ab;         // bits
  double i_be_bound;   // bits
  double key_rate;     // max(0, i_ab - i_be_bound)
  bool threshold_flag; // true when the unclamped rate is positive
};

// Report at fixed r = 0.
KeyRateReport key_rate_report(int n, double p);

// Maximizes i_ab - eve_info_bound over the flip probability r in
// [0, 1/2]: coarse grid scan, then golden-section refinement.
KeyRateReport key_rate_preprocessed(int n, double p);

// Smallest p in [0.5, 1] with positive (unclamped) key rate, found by
// bisection to 1e-5. Guarded at n in {2..10}.
double threshold(int n, bool preprocessed);

// One report per (n, p), sorted by n then p.
std::vector<KeyRateReport> curve(const std::vector<int>& n_list,
                                 const std::vector<double>& p_grid,
                                 bool preprocessed);

}  // namespace nskd
