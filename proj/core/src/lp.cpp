#include "nskd/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace nskd {
namespace {

// LU factorization with partial pivoting of the current basis matrix.
// The basis is refactorized from scratch every iteration; problem sizes
// here are small (hundreds of rows at most) so stability wins over speed.
class BasisLu {
 public:
  explicit BasisLu(std::size_t m) : m_(m), lu_(m * m), perm_(m) {}

  bool factor(const std::vector<std::vector<double>>& a,
              const std::vector<std::size_t>& basis) {
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < m_; ++j) lu_[i * m_ + j] = a[i][basis[j]];
      perm_[i] = i;
    }
    for (std::size_t k = 0; k < m_; ++k) {
      std::size_t piv = k;
      double best = std::fabs(lu_[k * m_ + k]);
      for (std::size_t i = k + 1; i < m_; ++i) {
        double v = std::fabs(lu_[i * m_ + k]);
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (best < 1e-13) return false;
      if (piv != k) {
        for (std::size_t j = 0; j < m_; ++j)
          std::swap(lu_[k * m_ + j], lu_[piv * m_ + j]);
        std::swap(perm_[k], perm_[piv]);
      }
      double d = lu_[k * m_ + k];
      for (std::size_t i = k + 1; i < m_; ++i) {
        double f = lu_[i * m_ + k] / d;
        lu_[i * m_ + k] = f;
        for (std::size_t j = k + 1; j < m_; ++j)
          lu_[i * m_ + j] -= f * lu_[k * m_ + j];
      }
    }
    return true;
  }

  // Solve B z = rhs.
  void solve(const std::vector<double>& rhs, std::vector<double>& z) const {
    z.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) z[i] = rhs[perm_[i]];
    for (std::size_t i = 1; i < m_; ++i)
      for (std::size_t j = 0; j < i; ++j) z[i] -= lu_[i * m_ + j] * z[j];
    for (std::size_t ii = m_; ii-- > 0;) {
      for (std::size_t j = ii + 1; j < m_; ++j) z[ii] -= lu_[ii * m_ + j] * z[j];
      z[ii] /= lu_[ii * m_ + ii];
    }
  }

  // Solve B' y = rhs.
  void solve_transposed(const std::vector<double>& rhs,
                        std::vector<double>& y) const {
    std::vector<double> z(m_);
    for (std::size_t i = 0; i < m_; ++i) z[i] = rhs[i];
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < i; ++j) z[i] -= lu_[j * m_ + i] * z[j];
      z[i] /= lu_[i * m_ + i];
    }
    for (std::size_t ii = m_; ii-- > 0;)
      for (std::size_t j = ii + 1; j < m_; ++j) z[ii] -= lu_[j * m_ + ii] * z[j];
    y.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) y[perm_[i]] = z[i];
  }

 private:
  std::size_t m_;
  std::vector<double> lu_;
  std::vector<std::size_t> perm_;
};

struct SimplexState {
  std::vector<std::size_t> basis;
  std::vector<double> xb;
  std::size_t iterations = 0;
};

enum class PhaseOutcome { Optimal, Unbounded, IterationLimit };

// Runs simplex iterations on (a, b, cost) starting from the basis held in
// `state`. Only columns with index < num_usable may enter the basis.
// Pricing is Dantzig (most negative reduced cost) for speed, switching to
// Bland's rule after `bland_after` iterations so degenerate problems
// cannot cycle.
PhaseOutcome run_simplex(const std::vector<std::vector<double>>& a,
                         const std::vector<double>& b,
                         const std::vector<double>& cost,
                         std::size_t num_usable, std::size_t max_iterations,
                         double tol, SimplexState& state) {
  const std::size_t m = a.size();
  const std::size_t bland_after = 2000 + 4 * (m + num_usable);
  BasisLu lu(m);
  std::vector<double> y, col, direction;
  std::vector<double> cb(m);
  std::vector<char> in_basis(a.empty() ? 0 : a[0].size(), 0);
  for (std::size_t i = 0; i < m; ++i) in_basis[state.basis[i]] = 1;

  while (state.iterations < max_iterations) {
    if (!lu.factor(a, state.basis))
      throw std::runtime_error("simplex: singular basis matrix");
    lu.solve(b, state.xb);

    for (std::size_t i = 0; i < m; ++i) cb[i] = cost[state.basis[i]];
    lu.solve_transposed(cb, y);

    const bool bland = state.iterations >= bland_after;
    std::size_t entering = num_usable;
    double most_negative = -tol;
    for (std::size_t j = 0; j < num_usable; ++j) {
      if (in_basis[j]) continue;
      double reduced = cost[j];
      for (std::size_t i = 0; i < m; ++i) reduced -= y[i] * a[i][j];
      if (reduced < most_negative) {
        entering = j;
        if (bland) break;
        most_negative = reduced;
      }
    }
    if (entering == num_usable) return PhaseOutcome::Optimal;

    col.resize(m);
    for (std::size_t i = 0; i < m; ++i) col[i] = a[i][entering];
    lu.solve(col, direction);

    // Ratio test. Entries below kPivotTol are treated as zero: pivoting
    // on roundoff noise of a structurally zero entry destroys the basis.
    // Near-ties go to the largest pivot for stability, or to the lowest
    // basis index once Bland's rule is active.
    constexpr double kPivotTol = 1e-7;
    std::size_t leaving = m;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (direction[i] <= kPivotTol) continue;
      double ratio = std::max(state.xb[i], 0.0) / direction[i];
      if (leaving == m || ratio < best_ratio - tol) {
        best_ratio = ratio;
        leaving = i;
      } else if (ratio < best_ratio + tol) {
        bool take = bland ? state.basis[i] < state.basis[leaving]
                          : direction[i] > direction[leaving];
        if (take) {
          best_ratio = std::min(best_ratio, ratio);
          leaving = i;
        }
      }
    }
    if (leaving == m) return PhaseOutcome::Unbounded;

    in_basis[state.basis[leaving]] = 0;
    in_basis[entering] = 1;
    state.basis[leaving] = entering;
    ++state.iterations;
  }
  return PhaseOutcome::IterationLimit;
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp, std::size_t max_iterations,
                  double tol) {
  const std::size_t m0 = lp.num_rows();
  const std::size_t n = lp.num_cols();
  if (lp.b.size() != m0 || lp.c.size() != n)
    throw std::invalid_argument("solve_lp: inconsistent dimensions");
  for (const auto& row : lp.a)
    if (row.size() != n)
      throw std::invalid_argument("solve_lp: ragged constraint matrix");

  // Phase 1 tableau: original columns plus one artificial per row.
  // Rows with negative b are flipped so artificials start feasible.
  std::vector<std::vector<double>> a(m0, std::vector<double>(n + m0, 0.0));
  std::vector<double> b(m0);
  for (std::size_t i = 0; i < m0; ++i) {
    double sign = lp.b[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) a[i][j] = sign * lp.a[i][j];
    a[i][n + i] = 1.0;
    b[i] = sign * lp.b[i];
  }

  std::vector<double> phase1_cost(n + m0, 0.0);
  for (std::size_t i = 0; i < m0; ++i) phase1_cost[n + i] = 1.0;

  SimplexState state;
  state.basis.resize(m0);
  for (std::size_t i = 0; i < m0; ++i) state.basis[i] = n + i;

  // Artificials may leave but never re-enter: a departed artificial is a
  // nonbasic zero column, and the feasible optimum keeps every artificial
  // at zero anyway. This pins artificial n+i to basis position i, which
  // the redundant-row deletion below depends on.
  LpResult result;
  PhaseOutcome out =
      run_simplex(a, b, phase1_cost, n, max_iterations, tol, state);
  result.iterations = state.iterations;
  if (out == PhaseOutcome::IterationLimit) {
    result.status = LpStatus::IterationLimit;
    return result;
  }

  double artificial_sum = 0.0;
  for (std::size_t i = 0; i < m0; ++i)
    if (state.basis[i] >= n) artificial_sum += state.xb[i];
  if (artificial_sum > 1e-7) {
    result.status = LpStatus::Infeasible;
    return result;
  }

  // Drive basic artificials out; rows where no original column can pivot
  // in are redundant and get deleted.
  std::vector<std::size_t> keep_rows;
  {
    BasisLu lu(m0);
    std::vector<double> col, direction;
    for (std::size_t i = 0; i < m0; ++i) {
      if (state.basis[i] < n) continue;
      if (!lu.factor(a, state.basis))
        throw std::runtime_error("simplex: singular basis during cleanup");
      std::size_t replacement = n;
      double best_pivot = 1e-7;
      for (std::size_t j = 0; j < n; ++j) {
        bool basic = false;
        for (std::size_t k = 0; k < m0; ++k)
          if (state.basis[k] == j) {
            basic = true;
            break;
          }
        if (basic) continue;
        col.resize(m0);
        for (std::size_t k = 0; k < m0; ++k) col[k] = a[k][j];
        lu.solve(col, direction);
        if (std::fabs(direction[i]) > best_pivot) {
          best_pivot = std::fabs(direction[i]);
          replacement = j;
        }
      }
      if (replacement < n) state.basis[i] = replacement;
    }
    for (std::size_t i = 0; i < m0; ++i)
      if (state.basis[i] < n) keep_rows.push_back(i);
  }

  std::size_t m = keep_rows.size();
  std::vector<std::vector<double>> a2(m);
  std::vector<double> b2(m);
  std::vector<std::size_t> basis2(m);
  for (std::size_t i = 0; i < m; ++i) {
    a2[i].assign(a[keep_rows[i]].begin(), a[keep_rows[i]].begin() + n);
    b2[i] = b[keep_rows[i]];
    basis2[i] = state.basis[keep_rows[i]];
  }

  SimplexState state2;
  state2.basis = std::move(basis2);
  state2.iterations = state.iterations;
  out = run_simplex(a2, b2, lp.c, n, max_iterations, tol, state2);
  result.iterations = state2.iterations;
  if (out == PhaseOutcome::IterationLimit) {
    result.status = LpStatus::IterationLimit;
    return result;
  }
  if (out == PhaseOutcome::Unbounded) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  result.status = LpStatus::Optimal;
  result.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) result.x[state2.basis[i]] = state2.xb[i];
  result.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) result.objective += lp.c[j] * result.x[j];

  // Dual certificate: recover y on the reduced rows, map back, and report
  // the primal-dual gap as a numerical soundness check.
  {
    BasisLu lu(m);
    if (!lu.factor(a2, state2.basis))
      throw std::runtime_error("simplex: singular optimal basis");
    std::vector<double> cb(m), y_red;
    for (std::size_t i = 0; i < m; ++i) cb[i] = lp.c[state2.basis[i]];
    lu.solve_transposed(cb, y_red);
    result.dual.assign(m0, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      double sign = lp.b[keep_rows[i]] < 0.0 ? -1.0 : 1.0;
      result.dual[keep_rows[i]] = sign * y_red[i];
    }
    double dual_obj = 0.0;
    for (std::size_t i = 0; i < m0; ++i) dual_obj += result.dual[i] * lp.b[i];
    result.duality_gap = std::fabs(result.objective - dual_obj);
  }
  return result;
}

}  // namespace nskd
