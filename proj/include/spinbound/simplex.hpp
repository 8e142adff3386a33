#pragma once

#include <vector>

namespace spinbound {

enum class LpStatus { optimal, infeasible, unbounded };

/// min c.x subject to A_eq x = b_eq, A_le x <= b_le, x >= 0.
/// Rows are stored densely, one vector per constraint, each of length c.size().
struct LinearProgram {
  std::vector<double> cost;
  std::vector<std::vector<double>> eq_rows;
  std::vector<double> eq_rhs;
  std::vector<std::vector<double>> le_rows;
  std::vector<double> le_rhs;
};

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
  /// Largest constraint residual of the returned point.
  double residual = 0.0;
};

/// Dense two-phase primal simplex. Entering column by most negative reduced
/// cost (lowest index on ties), switching to Bland's rule after a run of
/// degenerate pivots; leaving row by minimum ratio, lowest basic index on
/// ties. Deterministic for a given input.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace spinbound
