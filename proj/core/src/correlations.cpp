#include "nskd/correlations.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace nskd {

namespace {
constexpr double kPi = std::numbers::pi;
}

WernerParameter::WernerParameter(double purity) : p(purity) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("WernerParameter: purity must lie in [0,1]");
}

MeasurementScheme MeasurementScheme::chained(int n) {
  if (n < 2) throw std::invalid_argument("MeasurementScheme: need n >= 2");
  return MeasurementScheme(n);
}

double MeasurementScheme::alice_phase(int x) const {
  if (x < 0 || x > n)
    throw std::out_of_range("MeasurementScheme: Alice setting out of range");
  if (x == 0) return kPi / (2.0 * n);
  return kPi * x / n;
}

double MeasurementScheme::bob_phase(int y) const {
  if (y < 0 || y >= n)
    throw std::out_of_range("MeasurementScheme: Bob setting out of range");
  return kPi * (y + 0.5) / n;
}

double correlator(const WernerParameter& w, double phi_a, double phi_b) {
  return w.p * std::cos(phi_a - phi_b);
}

ConditionalBox quantum_box(const WernerParameter& w, const MeasurementScheme& s) {
  ConditionalBox box(s.num_alice_settings(), s.num_bob_settings());
  for (int x = 0; x < box.na; ++x)
    for (int y = 0; y < box.nb; ++y) {
      double e = correlator(w, s.alice_phase(x), s.bob_phase(y));
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          double sign = ((a ^ b) == 0) ? 1.0 : -1.0;
          box.at(a, b, x, y) = (1.0 + sign * e) / 4.0;
        }
    }
  return box;
}

std::array<double, 4> density_matrix_oracle(const WernerParameter& w,
                                            double phi_a, double phi_b) {
  using cd = std::complex<double>;
  const cd i_unit(0.0, 1.0);

  // rho = p |phi+><phi+| + (1-p) I/4 on the basis {00, 01, 10, 11}.
  cd rho[4][4] = {};
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  cd phi_plus[4] = {inv_sqrt2, 0.0, 0.0, inv_sqrt2};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      rho[r][c] = w.p * phi_plus[r] * std::conj(phi_plus[c]);
  for (int r = 0; r < 4; ++r) rho[r][r] += (1.0 - w.p) / 4.0;

  std::array<double, 4> probs{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      // Measurement kets (|0> + (-1)^a e^{i phi_a} |1>)/sqrt(2) for Alice
      // and the conjugated-phase counterpart for Bob.
      cd ua[2] = {inv_sqrt2,
                  (a == 0 ? 1.0 : -1.0) * std::exp(i_unit * phi_a) * inv_sqrt2};
      cd vb[2] = {inv_sqrt2,
                  (b == 0 ? 1.0 : -1.0) * std::exp(-i_unit * phi_b) * inv_sqrt2};
      cd ket[4];
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) ket[r * 2 + c] = ua[r] * vb[c];

      // Tr[rho |ket><ket|] = <ket| rho |ket>.
      cd acc = 0.0;
      for (int r = 0; r < 4; ++r) {
        cd row = 0.0;
        for (int c = 0; c < 4; ++c) row += rho[r][c] * ket[c];
        acc += std::conj(ket[r]) * row;
      }
      probs[a * 2 + b] = acc.real();
    }
  return probs;
}

double quantum_chain_value(int n, double p) {
  if (n < 2) throw std::invalid_argument("quantum_chain_value: need n >= 2");
  return n * (1.0 - p * std::cos(kPi / (2.0 * n)));
}

}  // namespace nskd
