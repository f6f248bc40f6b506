#include "nskd/attack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nskd/keyrate.hpp"
#include "nskd/lp.hpp"

namespace nskd {

const char* strategy_name(StrategyId id) {
  switch (id) {
    case StrategyId::DD: return "DD";
    case StrategyId::DR: return "DR";
    case StrategyId::RR: return "RR";
  }
  return "??";
}

const std::array<StrategyClass, 3>& strategy_table() {
  static const std::array<StrategyClass, 3> table = {{
      {StrategyId::DD, 1.0, 1.0, false, 0.0, 0.0, 0.0},
      {StrategyId::DR, 0.0, 0.0, true, 0.0, 1.0, 0.0},
      {StrategyId::RR, 0.0, 1.0, false, 1.0, 1.0, 1.0},
  }};
  return table;
}

double AttackDecomposition::deterministic_y0_weight() const {
  double total = 0.0;
  for (const auto& c : components)
    if (deterministic_bob_key_bit(c.box)) total += c.weight;
  return total;
}

AttackDecomposition optimal_weights(double chain_obs, double corr_obs) {
  if (chain_obs < 0.0)
    throw std::invalid_argument("optimal_weights: chain value must be >= 0");
  if (corr_obs < -1.0 || corr_obs > 1.0)
    throw std::invalid_argument("optimal_weights: correlation must lie in [-1,1]");
  AttackDecomposition d;
  double p1 = std::min(chain_obs, 1.0);
  double p3 = std::max(0.0, corr_obs - p1);
  d.weights = {p1, 1.0 - p1 - p3, p3};
  return d;
}

double eve_info_bound(double chain_obs, double flip_r) {
  if (flip_r < 0.0 || flip_r > 0.5)
    throw std::invalid_argument("eve_info_bound: flip probability must lie in [0,1/2]");
  return std::min(chain_obs, 1.0) * (1.0 - binary_entropy(flip_r));
}

double intrinsic_info_upper(double chain_obs, double corr_obs) {
  return std::max(0.0, corr_obs - chain_obs);
}

namespace {

constexpr double kClassifyTol = 1e-9;

bool entry_deterministic(double v) {
  return v <= kClassifyTol || v >= 1.0 - kClassifyTol;
}

bool box_deterministic(const ConditionalBox& box) {
  for (double v : box.table)
    if (!entry_deterministic(v)) return false;
  return true;
}

bool alice_deterministic(const ConditionalBox& box) {
  for (int x = 0; x < box.na; ++x)
    if (!entry_deterministic(box.alice_marginal(0, x, 0))) return false;
  return true;
}

}  // namespace

StrategyId classify_strategy(const ConditionalBox& box) {
  if (box_deterministic(box)) return StrategyId::DD;
  if (alice_deterministic(box) && std::fabs(corr_value(box)) <= kClassifyTol)
    return StrategyId::DR;
  return StrategyId::RR;
}

std::optional<int> deterministic_bob_key_bit(const ConditionalBox& box) {
  double p1 = box.bob_marginal(1, 0, 0);
  if (p1 >= 1.0 - kClassifyTol) return 1;
  if (p1 <= kClassifyTol) return 0;
  return std::nullopt;
}

AttackDecomposition build_attack_mixture(const ConditionalBox& target) {
  const int n = target.nb;
  if (target.na != n + 1 || n < 2 || n > 3)
    throw std::invalid_argument(
        "build_attack_mixture: supports chained layouts n = 2 and n = 3");
  ValidationReport vr = validate(target);
  if (!vr.ok)
    throw std::invalid_argument("build_attack_mixture: target is not a valid box");

  const int na = target.na, nb = target.nb;
  std::vector<ConditionalBox> vertices;
  std::size_t num_det = 0;
  for (const auto& d : enumerate_deterministic(na, nb)) {
    vertices.push_back(d.to_box());
    ++num_det;
  }
  for (auto& x : enumerate_xor_boxes(na, nb)) vertices.push_back(std::move(x));

  // One weight per vertex; rows pin every table entry of the mixture to
  // the target plus an explicit total-weight row. Objective favors
  // deterministic components.
  const std::size_t nvar = vertices.size();
  const std::size_t cells = target.table.size();
  LinearProgram lp;
  lp.c.assign(nvar, 0.0);
  for (std::size_t j = 0; j < num_det; ++j) lp.c[j] = -1.0;
  lp.a.assign(cells + 1, std::vector<double>(nvar, 0.0));
  lp.b.assign(cells + 1, 0.0);
  for (std::size_t e = 0; e < cells; ++e) {
    for (std::size_t j = 0; j < nvar; ++j) lp.a[e][j] = vertices[j].table[e];
    lp.b[e] = target.table[e];
  }
  for (std::size_t j = 0; j < nvar; ++j) lp.a[cells][j] = 1.0;
  lp.b[cells] = 1.0;

  LpResult result = solve_lp(lp);
  if (result.status != LpStatus::Optimal)
    throw std::runtime_error("build_attack_mixture: decomposition LP failed");
  if (result.duality_gap > 1e-8)
    throw std::runtime_error("build_attack_mixture: duality gap check failed");

  AttackDecomposition d;
  for (std::size_t j = 0; j < nvar; ++j) {
    if (result.x[j] > 1e-12) {
      AttackComponent c{result.x[j], vertices[j],
                        classify_strategy(vertices[j])};
      d.components.push_back(std::move(c));
    }
  }

  double max_residual = 0.0;
  std::vector<double> mix(cells, 0.0);
  for (const auto& c : d.components)
    for (std::size_t e = 0; e < cells; ++e) mix[e] += c.weight * c.box.table[e];
  for (std::size_t e = 0; e < cells; ++e)
    max_residual = std::max(max_residual, std::fabs(mix[e] - target.table[e]));
  if (max_residual > 1e-7)
    throw std::runtime_error("build_attack_mixture: reconstruction residual too large");

  d.weights = optimal_weights(chain_value(target, n), corr_value(target)).weights;
  return d;
}

}  // namespace nskd
