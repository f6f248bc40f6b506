#include "nskd/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nskd/attack.hpp"
#include "nskd/correlations.hpp"

namespace nskd {

double binary_entropy(double q) {
  if (!(q >= 0.0 && q <= 1.0))
    throw std::domain_error("binary_entropy: argument must lie in [0,1]");
  if (q == 0.0 || q == 1.0) return 0.0;
  return -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
}

double mutual_info_ab(double p, double r) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("mutual_info_ab: p must lie in [0,1]");
  if (!(r >= 0.0 && r <= 0.5))
    throw std::domain_error("mutual_info_ab: r must lie in [0,1/2]");
  double disagreement = (1.0 - p) / 2.0 + r * p;
  return 1.0 - binary_entropy(disagreement);
}

double key_rate_chain_unclamped(int n, double p) {
  return mutual_info_ab(p, 0.0) - quantum_chain_value(n, p);
}

double key_rate_chain(int n, double p) {
  return std::max(0.0, key_rate_chain_unclamped(n, p));
}

namespace {

constexpr double kPositiveRate = 1e-9;

// K(r) before clamping, for the chain bound at the given Werner weight.
double flip_rate(int n, double p, double r) {
  return mutual_info_ab(p, r) - eve_info_bound(quantum_chain_value(n, p), r);
}

// Coarse grid scan plus golden-section refinement. K(r) flattens to zero
// at r = 1/2 and can be non-concave near thresholds, so the grid stage
// is not optional.
double max_flip_rate(int n, double p, double& r_opt) {
  constexpr double kStep = 1e-3;
  double best_r = 0.0, best_k = flip_rate(n, p, 0.0);
  const int steps = static_cast<int>(0.5 / kStep + 0.5);
  for (int i = 1; i <= steps; ++i) {
    double r = std::min(0.5, i * kStep);
    double k = flip_rate(n, p, r);
    if (k > best_k) {
      best_k = k;
      best_r = r;
    }
  }

  double lo = std::max(0.0, best_r - kStep);
  double hi = std::min(0.5, best_r + kStep);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = flip_rate(n, p, c), fd = flip_rate(n, p, d);
  while (hi - lo > 1e-6) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = flip_rate(n, p, c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = flip_rate(n, p, d);
    }
  }
  double refined_r = (lo + hi) / 2.0;
  double refined_k = flip_rate(n, p, refined_r);
  if (refined_k > best_k) {
    r_opt = refined_r;
    return refined_k;
  }
  r_opt = best_r;
  return best_k;
}

KeyRateReport make_report(int n, double p, double r, double unclamped,
                          double i_ab, double i_be) {
  return {n, p, r, i_ab, i_be, std::max(0.0, unclamped),
          unclamped > kPositiveRate};
}

}  // namespace

KeyRateReport key_rate_report(int n, double p) {
  double chain = quantum_chain_value(n, p);
  double i_ab = mutual_info_ab(p, 0.0);
  double i_be = eve_info_bound(chain, 0.0);
  return make_report(n, p, 0.0, i_ab - i_be, i_ab, i_be);
}

KeyRateReport key_rate_preprocessed(int n, double p) {
  double r_opt = 0.0;
  double best = max_flip_rate(n, p, r_opt);
  double chain = quantum_chain_value(n, p);
  return make_report(n, p, r_opt, best, mutual_info_ab(p, r_opt),
                     eve_info_bound(chain, r_opt));
}

double threshold(int n, bool preprocessed) {
  if (n < 2 || n > 10)
    throw std::invalid_argument("threshold: need n in {2..10}");
  constexpr double kTol = 1e-5;
  double lo = 0.5, hi = 1.0;

  if (!preprocessed) {
    if (!(key_rate_chain_unclamped(n, lo) < 0.0 &&
          key_rate_chain_unclamped(n, hi) > 0.0))
      throw std::runtime_error("threshold: no sign change on [0.5, 1]");
    while (hi - lo > kTol) {
      double mid = (lo + hi) / 2.0;
      (key_rate_chain_unclamped(n, mid) > 0.0 ? hi : lo) = mid;
    }
    return (lo + hi) / 2.0;
  }

  // The preprocessed maximum over r never goes below zero (r = 1/2 gives
  // exactly zero), so bisect on positivity instead of on a sign change.
  auto positive = [n](double p) {
    double r = 0.0;
    return max_flip_rate(n, p, r) > kPositiveRate;
  };
  if (positive(lo) || !positive(hi))
    throw std::runtime_error("threshold: positivity bracket failed on [0.5, 1]");
  while (hi - lo > kTol) {
    double mid = (lo + hi) / 2.0;
    (positive(mid) ? hi : lo) = mid;
  }
  return (lo + hi) / 2.0;
}

std::vector<KeyRateReport> curve(const std::vector<int>& n_list,
                                 const std::vector<double>& p_grid,
                                 bool preprocessed) {
  if (n_list.empty() || p_grid.empty())
    throw std::invalid_argument("curve: grids must be nonempty");
  std::vector<int> ns = n_list;
  std::vector<double> ps = p_grid;
  std::sort(ns.begin(), ns.end());
  std::sort(ps.begin(), ps.end());
  std::vector<KeyRateReport> rows;
  rows.reserve(ns.size() * ps.size());
  for (int n : ns)
    for (double p : ps)
      rows.push_back(preprocessed ? key_rate_preprocessed(n, p)
                                  : key_rate_report(n, p));
  return rows;
}

}  // namespace nskd
