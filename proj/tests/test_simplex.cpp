#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "spinbound/rng.hpp"
#include "spinbound/simplex.hpp"

using namespace spinbound;

namespace {

// Optimum by enumerating every basis of the standard form (slacks appended).
double vertex_enumeration(const LinearProgram& lp) {
  const int n = static_cast<int>(lp.cost.size());
  const int m_eq = static_cast<int>(lp.eq_rows.size());
  const int m_le = static_cast<int>(lp.le_rows.size());
  const int m = m_eq + m_le;
  const int cols = n + m_le;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, cols);
  Eigen::VectorXd b(m);
  for (int r = 0; r < m_eq; ++r) {
    for (int c = 0; c < n; ++c) a(r, c) = lp.eq_rows[r][c];
    b[r] = lp.eq_rhs[r];
  }
  for (int r = 0; r < m_le; ++r) {
    for (int c = 0; c < n; ++c) a(m_eq + r, c) = lp.le_rows[r][c];
    a(m_eq + r, n + r) = 1.0;
    b[m_eq + r] = lp.le_rhs[r];
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(m);
  // Iterate over m-subsets of columns in lexicographic order.
  for (int i = 0; i < m; ++i) pick[i] = i;
  while (true) {
    Eigen::MatrixXd basis(m, m);
    for (int i = 0; i < m; ++i) basis.col(i) = a.col(pick[i]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
    if (lu.rank() == m) {
      const Eigen::VectorXd xb = lu.solve(b);
      if (xb.minCoeff() >= -1e-12) {
        double obj = 0.0;
        for (int i = 0; i < m; ++i) {
          if (pick[i] < n) obj += lp.cost[pick[i]] * xb[i];
        }
        best = std::min(best, obj);
      }
    }
    int k = m - 1;
    while (k >= 0 && pick[k] == cols - m + k) --k;
    if (k < 0) break;
    ++pick[k];
    for (int i = k + 1; i < m; ++i) pick[i] = pick[i - 1] + 1;
  }
  return best;
}

}  // namespace

TEST_CASE("textbook optimum") {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18.
  LinearProgram lp;
  lp.cost = {-3, -5};
  lp.le_rows = {{1, 0}, {0, 2}, {3, 2}};
  lp.le_rhs = {4, 12, 18};
  const LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.objective == doctest::Approx(-36));
  CHECK(s.x[0] == doctest::Approx(2));
  CHECK(s.x[1] == doctest::Approx(6));
  CHECK(s.residual < 1e-12);
}

TEST_CASE("infeasible and unbounded programs") {
  LinearProgram inf;
  inf.cost = {1, 1};
  inf.eq_rows = {{1, 1}};
  inf.eq_rhs = {1};
  inf.le_rows = {{1, 1}};
  inf.le_rhs = {0.5};
  CHECK(solve_lp(inf).status == LpStatus::infeasible);

  LinearProgram neg;
  neg.cost = {1};
  neg.eq_rows = {{1}};
  neg.eq_rhs = {-1};
  CHECK(solve_lp(neg).status == LpStatus::infeasible);

  LinearProgram unb;
  unb.cost = {-1, 0};
  unb.eq_rows = {{1, -1}};
  unb.eq_rhs = {1};
  CHECK(solve_lp(unb).status == LpStatus::unbounded);
}

TEST_CASE("degenerate cycling example terminates") {
  // Beale's example cycles under naive Dantzig pricing.
  LinearProgram lp;
  lp.cost = {-0.75, 150, -0.02, 6};
  lp.le_rows = {{0.25, -60, -0.04, 9}, {0.5, -90, -0.02, 3}, {0, 0, 1, 0}};
  lp.le_rhs = {0, 0, 1};
  const LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.objective == doctest::Approx(-0.05));
}

TEST_CASE("redundant equality rows") {
  LinearProgram lp;
  lp.cost = {1, 2, 3};
  lp.eq_rows = {{1, 1, 1}, {2, 2, 2}, {1, 0, -1}};
  lp.eq_rhs = {1, 2, 0};
  const LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.objective == doctest::Approx(2));
  CHECK(s.residual < 1e-12);
}

TEST_CASE("random bounded programs match vertex enumeration") {
  Rng rng(41);
  int optimal = 0;
  for (int t = 0; t < 300; ++t) {
    const int n = 3 + static_cast<int>(rng.below(5));
    LinearProgram lp;
    for (int c = 0; c < n; ++c) lp.cost.push_back(rng.normal());
    lp.eq_rows.push_back(std::vector<double>(n, 1.0));
    lp.eq_rhs.push_back(1.0);
    std::vector<double> row(n);
    for (double& v : row) v = rng.normal();
    lp.eq_rows.push_back(row);
    lp.eq_rhs.push_back(rng.normal() * 0.3);
    for (double& v : row) v = rng.normal();
    lp.le_rows.push_back(row);
    lp.le_rhs.push_back(rng.normal() * 0.3);

    const double ref = vertex_enumeration(lp);
    const LpSolution s = solve_lp(lp);
    if (std::isinf(ref)) {
      CHECK(s.status == LpStatus::infeasible);
      continue;
    }
    ++optimal;
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.objective == doctest::Approx(ref).epsilon(1e-9));
    CHECK(s.residual < 1e-9);
    for (double x : s.x) CHECK(x >= 0.0);
  }
  CHECK(optimal > 50);
}

TEST_CASE("solutions are deterministic") {
  LinearProgram lp;
  lp.cost = {1, 1, 1, 1};
  lp.eq_rows = {{1, 1, 1, 1}};
  lp.eq_rhs = {1};
  const LpSolution a = solve_lp(lp);
  const LpSolution b = solve_lp(lp);
  CHECK(a.x == b.x);
  CHECK(a.iterations == b.iterations);
}
