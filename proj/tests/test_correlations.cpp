#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdint>
#include <numbers>

#include "doctest.h"
#include "nskd/correlations.hpp"

using namespace nskd;

namespace {

constexpr double kPi = std::numbers::pi;

struct Xorshift {
  std::uint64_t s;
  double unit() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return (s >> 11) * 0x1.0p-53;
  }
};

}  // namespace

TEST_CASE("werner parameter domain") {
  CHECK(WernerParameter(0.0).p == 0.0);
  CHECK(WernerParameter(1.0).p == 1.0);
  CHECK_THROWS_AS(WernerParameter(1.2), std::domain_error);
  CHECK_THROWS_AS(WernerParameter(-0.1), std::domain_error);
}

TEST_CASE("scheme phases") {
  for (int n : {2, 3, 7}) {
    MeasurementScheme s = MeasurementScheme::chained(n);
    CHECK(s.alice_phase(0) == doctest::Approx(kPi / (2 * n)).epsilon(1e-15));
    for (int x = 1; x <= n; ++x)
      CHECK(s.alice_phase(x) == doctest::Approx(kPi * x / n).epsilon(1e-15));
    for (int y = 0; y < n; ++y)
      CHECK(s.bob_phase(y) == doctest::Approx(kPi * (y + 0.5) / n).epsilon(1e-15));
    CHECK(s.num_alice_settings() == n + 1);
    CHECK(s.num_bob_settings() == n);
  }
  CHECK_THROWS_AS(MeasurementScheme::chained(1), std::invalid_argument);
  CHECK_THROWS_AS(MeasurementScheme::chained(2).alice_phase(3), std::out_of_range);
}

TEST_CASE("correlator basics") {
  CHECK(correlator(WernerParameter(1.0), 0.7, 0.7) == doctest::Approx(1.0));
  CHECK(correlator(WernerParameter(0.0), 0.3, 1.9) == doctest::Approx(0.0));
  // Aligned key settings give the full weight for any chain length.
  for (int n : {2, 5}) {
    double phase = kPi / (2 * n);
    CHECK(correlator(WernerParameter(0.73), phase, phase) ==
          doctest::Approx(0.73).epsilon(1e-15));
  }
}

TEST_CASE("correlator symmetry and shift invariance") {
  Xorshift rng{424242ULL};
  WernerParameter w(0.81);
  for (int trial = 0; trial < 25; ++trial) {
    double pa = rng.unit() * 2 * kPi, pb = rng.unit() * 2 * kPi;
    double delta = rng.unit() * 2 * kPi;
    CHECK(correlator(w, pa, pb) == doctest::Approx(correlator(w, pb, pa)).epsilon(1e-14));
    CHECK(correlator(w, pa + delta, pb + delta) ==
          doctest::Approx(correlator(w, pa, pb)).epsilon(1e-12));
  }
}

TEST_CASE("quantum box at p=0 is uniform") {
  ConditionalBox box = quantum_box(WernerParameter(0.0), MeasurementScheme::chained(2));
  for (double v : box.table) CHECK(v == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("quantum boxes are valid and carry the expected key correlation") {
  for (int n : {2, 3, 5}) {
    for (double p : {0.0, 0.5, 0.85, 1.0}) {
      ConditionalBox box =
          quantum_box(WernerParameter(p), MeasurementScheme::chained(n));
      CHECK(validate(box, 1e-12).ok);
      CHECK(corr_value(box) == doctest::Approx(p).epsilon(1e-12));
    }
  }
}

TEST_CASE("chain identity across the full grid") {
  for (int n = 2; n <= 10; ++n) {
    MeasurementScheme s = MeasurementScheme::chained(n);
    for (int i = 0; i <= 20; ++i) {
      double p = i * 0.05;
      ConditionalBox box = quantum_box(WernerParameter(p), s);
      CHECK(std::fabs(chain_value(box, n) - quantum_chain_value(n, p)) <= 1e-9);
    }
  }
}

TEST_CASE("noise-free chain value closed form") {
  for (int n : {2, 3, 10}) {
    double expected = 2.0 * n * std::pow(std::sin(kPi / (4 * n)), 2);
    CHECK(quantum_chain_value(n, 1.0) == doctest::Approx(expected).epsilon(1e-13));
  }
  // n=2 reduces to 2 - sqrt(2) p.
  CHECK(quantum_chain_value(2, 0.9) ==
        doctest::Approx(2.0 - std::sqrt(2.0) * 0.9).epsilon(1e-14));
}

TEST_CASE("density-matrix oracle special values") {
  auto same_basis = density_matrix_oracle(WernerParameter(1.0), 0.0, 0.0);
  CHECK(same_basis[0] + same_basis[3] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(same_basis[1] == doctest::Approx(0.0));
  CHECK(same_basis[2] == doctest::Approx(0.0));

  // Clause cell (x=1, y=0) of the n=2 scheme.
  MeasurementScheme s = MeasurementScheme::chained(2);
  auto probs = density_matrix_oracle(WernerParameter(1.0), s.alice_phase(1),
                                     s.bob_phase(0));
  double p_diff = probs[1] + probs[2];
  CHECK(p_diff == doctest::Approx((1.0 - std::cos(kPi / 4)) / 2.0).epsilon(1e-13));

  auto mixed = density_matrix_oracle(WernerParameter(0.5), 1.234, -0.321);
  for (double v : mixed) {
    CHECK(v >= 1.0 / 8 - 1e-12);
    CHECK(v <= 3.0 / 8 + 1e-12);
  }
}

TEST_CASE("density-matrix oracle agrees with the analytic box") {
  for (int n = 2; n <= 6; ++n) {
    MeasurementScheme s = MeasurementScheme::chained(n);
    for (double p : {0.0, 0.3, 0.7, 1.0}) {
      WernerParameter w(p);
      ConditionalBox box = quantum_box(w, s);
      for (int x = 0; x <= n; ++x)
        for (int y = 0; y < n; ++y) {
          auto probs = density_matrix_oracle(w, s.alice_phase(x), s.bob_phase(y));
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              CHECK(std::fabs(probs[a * 2 + b] - box.at(a, b, x, y)) <= 1e-12);
        }
    }
  }
}
