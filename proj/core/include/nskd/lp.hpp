#pragma once

#include <cstddef>
#include <vector>

namespace nskd {

// Dense linear program in standard form:
//   minimize    c'x
//   subject to  A x = b,  x >= 0
// with A stored row-major as `rows` vectors of equal length.
struct LinearProgram {
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<double> c;

  std::size_t num_rows() const { return a.size(); }
  std::size_t num_cols() const { return a.empty() ? 0 : a.front().size(); }
};

enum class LpStatus {
  Optimal,
  Infeasible,
  Unbounded,
  IterationLimit,
};

struct LpResult {
  LpStatus status = LpStatus::IterationLimit;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> dual;    // one multiplier per equality row
  double duality_gap = 0.0;    // |c'x - b'y| at the reported solution
  std::size_t iterations = 0;
};

// Two-phase revised simplex with Bland's rule. Deterministic: identical
// inputs give identical pivots, hence identical vertex solutions.
LpResult solve_lp(const LinearProgram& lp,
                  std::size_t max_iterations = 50000,
                  double tol = 1e-9);

}  // namespace nskd
