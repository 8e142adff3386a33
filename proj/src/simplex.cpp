#include "spinbound/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spinbound/types.hpp"

namespace spinbound {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-12;
constexpr int kMaxIterations = 200000;
constexpr int kDegenerateRunBeforeBland = 64;

class Tableau {
 public:
  Tableau(int rows, int cols) : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0) {}

  double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * (cols_ + 1) + c]; }
  double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * (cols_ + 1) + c]; }
  double& rhs(int r) { return at(r, cols_); }
  // Row `rows_` is the objective row: reduced costs and minus the objective value.
  double& cost(int c) { return at(rows_, c); }

  void pivot(int pr, int pc) {
    const double inv = 1.0 / at(pr, pc);
    for (int c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (int r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (int c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

 private:
  int rows_;
  int cols_;
  std::vector<double> data_;
};

// Runs simplex iterations on columns [0, allowed_cols). Returns false when unbounded.
bool iterate(Tableau& t, std::vector<int>& basis, int allowed_cols, int& iterations) {
  int degenerate_run = 0;
  while (iterations < kMaxIterations) {
    const bool bland = degenerate_run >= kDegenerateRunBeforeBland;
    int enter = -1;
    double best = -kCostTol;
    for (int c = 0; c < allowed_cols; ++c) {
      const double d = t.cost(c);
      if (d < best) {
        enter = c;
        if (bland) break;
        best = d;
      }
    }
    if (enter < 0) return true;

    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a <= kPivotTol) continue;
      const double ratio = std::max(t.rhs(r), 0.0) / a;
      if (leave < 0) {
        leave = r;
        best_ratio = ratio;
        continue;
      }
      const double slack = 1e-12 * std::max(1.0, best_ratio);
      if (ratio < best_ratio - slack || (ratio <= best_ratio + slack && basis[r] < basis[leave])) {
        best_ratio = std::min(best_ratio, ratio);
        leave = r;
      }
    }
    if (leave < 0) return false;
    degenerate_run = best_ratio <= 1e-14 ? degenerate_run + 1 : 0;
    t.pivot(leave, enter);
    basis[leave] = enter;
    ++iterations;
  }
  throw DomainError("solve_lp: iteration limit reached");
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  const int n = static_cast<int>(lp.cost.size());
  const int n_eq = static_cast<int>(lp.eq_rows.size());
  const int n_le = static_cast<int>(lp.le_rows.size());
  if (lp.eq_rhs.size() != lp.eq_rows.size() || lp.le_rhs.size() != lp.le_rows.size()) {
    throw DomainError("solve_lp: row and right-hand-side counts differ");
  }
  const int m = n_eq + n_le;
  const int slack0 = n;
  const int art0 = n + n_le;
  const int cols = art0 + m;

  Tableau t(m, cols);
  std::vector<int> basis(m);
  for (int r = 0; r < m; ++r) {
    const bool is_eq = r < n_eq;
    const std::vector<double>& row = is_eq ? lp.eq_rows[r] : lp.le_rows[r - n_eq];
    double b = is_eq ? lp.eq_rhs[r] : lp.le_rhs[r - n_eq];
    if (static_cast<int>(row.size()) != n) throw DomainError("solve_lp: row length mismatch");
    double sign = b < 0.0 ? -1.0 : 1.0;
    for (int c = 0; c < n; ++c) t.at(r, c) = sign * row[c];
    if (!is_eq) t.at(r, slack0 + (r - n_eq)) = sign;
    t.rhs(r) = sign * b;
    t.at(r, art0 + r) = 1.0;
    basis[r] = art0 + r;
  }

  // Phase 1: minimise the artificial mass.
  for (int c = 0; c <= cols; ++c) {
    if (c >= art0 && c < cols) continue;
    double s = 0.0;
    for (int r = 0; r < m; ++r) s += t.at(r, c);
    t.cost(c) = -s;
  }
  LpSolution out;
  iterate(t, basis, art0, out.iterations);

  double b_scale = 1.0;
  for (double b : lp.eq_rhs) b_scale = std::max(b_scale, std::abs(b));
  for (double b : lp.le_rhs) b_scale = std::max(b_scale, std::abs(b));
  if (-t.cost(cols) > 1e-9 * b_scale) {
    out.status = LpStatus::infeasible;
    return out;
  }

  // Drive remaining zero-level artificials out; rows that cannot pivot are redundant.
  for (int r = 0; r < m; ++r) {
    if (basis[r] < art0) continue;
    int pc = -1;
    double best = 1e-9;
    for (int c = 0; c < art0; ++c) {
      if (std::abs(t.at(r, c)) > best) {
        best = std::abs(t.at(r, c));
        pc = c;
      }
    }
    if (pc >= 0) {
      t.pivot(r, pc);
      basis[r] = pc;
    }
  }

  // Phase 2.
  auto column_cost = [&](int c) { return c < n ? lp.cost[c] : 0.0; };
  for (int c = 0; c <= cols; ++c) {
    double s = c < cols ? column_cost(c) : 0.0;
    for (int r = 0; r < m; ++r) s -= column_cost(basis[r]) * t.at(r, c);
    t.cost(c) = s;
  }
  if (!iterate(t, basis, art0, out.iterations)) {
    out.status = LpStatus::unbounded;
    return out;
  }

  out.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r) {
    if (basis[r] < n) out.x[basis[r]] = std::max(t.rhs(r), 0.0);
  }
  out.objective = 0.0;
  for (int c = 0; c < n; ++c) out.objective += lp.cost[c] * out.x[c];

  for (int r = 0; r < n_eq; ++r) {
    double s = -lp.eq_rhs[r];
    for (int c = 0; c < n; ++c) s += lp.eq_rows[r][c] * out.x[c];
    out.residual = std::max(out.residual, std::abs(s));
  }
  for (int r = 0; r < n_le; ++r) {
    double s = -lp.le_rhs[r];
    for (int c = 0; c < n; ++c) s += lp.le_rows[r][c] * out.x[c];
    out.residual = std::max(out.residual, s);
  }
  out.status = LpStatus::optimal;
  return out;
}

}  // namespace spinbound
