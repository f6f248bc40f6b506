#include "nskd/nsbox.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nskd/lp.hpp"

namespace nskd {

ConditionalBox::ConditionalBox(int num_alice_settings, int num_bob_settings)
    : na(num_alice_settings), nb(num_bob_settings) {
  if (na < 1 || nb < 1)
    throw std::invalid_argument("ConditionalBox: settings counts must be >= 1");
  table.assign(static_cast<std::size_t>(4) * na * nb, 0.0);
}

double ConditionalBox::alice_marginal(int a, int x, int y) const {
  return at(a, 0, x, y) + at(a, 1, x, y);
}

double ConditionalBox::bob_marginal(int b, int x, int y) const {
  return at(0, b, x, y) + at(1, b, x, y);
}

ValidationReport validate(const ConditionalBox& box, double tol) {
  ValidationReport report;
  auto flag = [&report](ConstraintViolation v) {
    report.ok = false;
    report.violations.push_back(v);
  };

  for (int x = 0; x < box.na; ++x)
    for (int y = 0; y < box.nb; ++y) {
      double sum = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          double v = box.at(a, b, x, y);
          sum += v;
          if (v < -tol)
            flag({ConstraintKind::NegativeEntry, a, b, x, y, -v});
        }
      if (std::fabs(sum - 1.0) > tol)
        flag({ConstraintKind::Normalization, -1, -1, x, y, std::fabs(sum - 1.0)});
    }

  // Alice's marginal may not depend on y; compare every y to y = 0.
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < box.na; ++x) {
      double ref = box.alice_marginal(a, x, 0);
      for (int y = 1; y < box.nb; ++y) {
        double diff = std::fabs(box.alice_marginal(a, x, y) - ref);
        if (diff > tol) flag({ConstraintKind::AliceMarginal, a, -1, x, y, diff});
      }
    }
  for (int b = 0; b < 2; ++b)
    for (int y = 0; y < box.nb; ++y) {
      double ref = box.bob_marginal(b, 0, y);
      for (int x = 1; x < box.na; ++x) {
        double diff = std::fabs(box.bob_marginal(b, x, y) - ref);
        if (diff > tol) flag({ConstraintKind::BobMarginal, -1, b, x, y, diff});
      }
    }
  return report;
}

ConditionalBox DeterministicBox::to_box() const {
  ConditionalBox box(static_cast<int>(alice_out.size()),
                     static_cast<int>(bob_out.size()));
  for (int x = 0; x < box.na; ++x)
    for (int y = 0; y < box.nb; ++y)
      box.at(alice_out[x], bob_out[y], x, y) = 1.0;
  return box;
}

std::vector<DeterministicBox> enumerate_deterministic(int na, int nb) {
  if (na < 1 || nb < 1 || na > 6 || nb > 6)
    throw std::invalid_argument("enumerate_deterministic: need 1 <= na, nb <= 6");
  std::vector<DeterministicBox> out;
  out.reserve(static_cast<std::size_t>(1) << (na + nb));
  for (int ia = 0; ia < (1 << na); ++ia)
    for (int ib = 0; ib < (1 << nb); ++ib) {
      DeterministicBox d;
      d.alice_out.resize(na);
      d.bob_out.resize(nb);
      for (int x = 0; x < na; ++x) d.alice_out[x] = (ia >> x) & 1;
      for (int y = 0; y < nb; ++y) d.bob_out[y] = (ib >> y) & 1;
      out.push_back(std::move(d));
    }
  return out;
}

ConditionalBox xor_box(int na, int nb, const std::vector<int>& parity) {
  if (parity.size() != static_cast<std::size_t>(na) * nb)
    throw std::invalid_argument("xor_box: parity table has wrong size");
  ConditionalBox box(na, nb);
  for (int x = 0; x < na; ++x)
    for (int y = 0; y < nb; ++y) {
      int t = parity[static_cast<std::size_t>(x) * nb + y] & 1;
      box.at(0, t, x, y) = 0.5;
      box.at(1, 1 - t, x, y) = 0.5;
    }
  return box;
}

std::vector<ConditionalBox> enumerate_xor_boxes(int na, int nb) {
  if (na < 1 || nb < 1 || na * nb > 12)
    throw std::invalid_argument("enumerate_xor_boxes: need na*nb <= 12");
  const int cells = na * nb;
  std::vector<ConditionalBox> out;
  out.reserve(static_cast<std::size_t>(1) << cells);
  std::vector<int> parity(cells);
  for (int mask = 0; mask < (1 << cells); ++mask) {
    for (int c = 0; c < cells; ++c) parity[c] = (mask >> c) & 1;
    out.push_back(xor_box(na, nb, parity));
  }
  return out;
}

ConditionalBox chain_perfect_box(int n) {
  if (n < 2) throw std::invalid_argument("chain_perfect_box: need n >= 2");
  const int na = n + 1, nb = n;
  std::vector<int> parity(static_cast<std::size_t>(na) * nb, 0);
  // a == b on the aligned clause cells, a != b on the wrapped one.
  parity[static_cast<std::size_t>(n) * nb + 0] = 1;
  return xor_box(na, nb, parity);
}

ConditionalBox pr_box() { return xor_box(2, 2, {0, 0, 0, 1}); }

ConditionalBox uniform_box(int na, int nb) {
  ConditionalBox box(na, nb);
  for (double& v : box.table) v = 0.25;
  return box;
}

namespace {

double clause_sum(const ConditionalBox& box, int x, int y, bool count_equal) {
  if (count_equal) return box.at(0, 0, x, y) + box.at(1, 1, x, y);
  return box.at(0, 1, x, y) + box.at(1, 0, x, y);
}

void require_chained_layout(const ConditionalBox& box, int n, const char* who) {
  if (n < 2 || box.na < n + 1 || box.nb < n)
    throw std::invalid_argument(std::string(who) +
                                ": box does not cover the chained layout");
}

}  // namespace

double chain_value(const ConditionalBox& box, int n) {
  require_chained_layout(box, n, "chain_value");
  double total = 0.0;
  for (int i = 1; i <= n; ++i) {
    total += clause_sum(box, i, i - 1, false);
    if (i < n)
      total += clause_sum(box, i, i, false);
    else
      total += clause_sum(box, n, 0, true);  // b_n stands for b_0 + 1
  }
  return total;
}

double chsh_value(const ConditionalBox& box) { return chain_value(box, 2); }

double corr_value(const ConditionalBox& box) {
  return box.at(0, 0, 0, 0) + box.at(1, 1, 0, 0) - box.at(0, 1, 0, 0) -
         box.at(1, 0, 0, 0);
}

BellValue evaluate(BellFunctional functional, const ConditionalBox& box, int n) {
  switch (functional) {
    case BellFunctional::Chsh:
      return {functional, 2, chsh_value(box)};
    case BellFunctional::Chain:
      return {functional, n, chain_value(box, n)};
    case BellFunctional::Corr:
    default:
      return {functional, n, corr_value(box)};
  }
}

double min_chain_given_marginal(int n, double beta) {
  if (n < 2 || n > 5)
    throw std::invalid_argument("min_chain_given_marginal: need n in {2..5}");
  if (beta < 0.0 || beta > 1.0)
    throw std::invalid_argument("min_chain_given_marginal: need beta in [0,1]");

  const int na = n + 1, nb = n;
  const std::size_t nvar = static_cast<std::size_t>(4) * na * nb;
  auto var = [na, nb](int a, int b, int x, int y) {
    return ((static_cast<std::size_t>(a) * 2 + b) * na + x) * nb + y;
  };

  LinearProgram lp;
  lp.c.assign(nvar, 0.0);
  for (int i = 1; i <= n; ++i)
    for (int k = 0; k < 2; ++k) {
      int y = (k == 0) ? i - 1 : (i < n ? i : 0);
      bool count_equal = (k == 1 && i == n);
      for (int a = 0; a < 2; ++a) {
        int b = count_equal ? a : 1 - a;
        lp.c[var(a, b, i, y)] += 1.0;
      }
    }

  auto add_row = [&lp, nvar](double rhs) -> std::vector<double>& {
    lp.a.emplace_back(nvar, 0.0);
    lp.b.push_back(rhs);
    return lp.a.back();
  };

  for (int x = 0; x < na; ++x)
    for (int y = 0; y < nb; ++y) {
      auto& row = add_row(1.0);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) row[var(a, b, x, y)] = 1.0;
    }
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < na; ++x)
      for (int y = 1; y < nb; ++y) {
        auto& row = add_row(0.0);
        for (int b = 0; b < 2; ++b) {
          row[var(a, b, x, y)] += 1.0;
          row[var(a, b, x, 0)] -= 1.0;
        }
      }
  for (int b = 0; b < 2; ++b)
    for (int y = 0; y < nb; ++y)
      for (int x = 1; x < na; ++x) {
        auto& row = add_row(0.0);
        for (int a = 0; a < 2; ++a) {
          row[var(a, b, x, y)] += 1.0;
          row[var(a, b, 0, y)] -= 1.0;
        }
      }
  {
    auto& row = add_row(beta);
    row[var(0, 0, 0, 0)] = 1.0;
    row[var(1, 0, 0, 0)] = 1.0;
  }

  LpResult result = solve_lp(lp);
  if (result.status != LpStatus::Optimal)
    throw std::runtime_error("min_chain_given_marginal: LP did not reach optimality");
  if (result.duality_gap > 1e-8)
    throw std::runtime_error("min_chain_given_marginal: duality gap check failed");
  return result.objective;
}

}  // namespace nskd
