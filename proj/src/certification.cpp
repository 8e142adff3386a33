#include "spinbound/certification.hpp"

#include <algorithm>
#include <cmath>

#include "spinbound/core_sets.hpp"
#include "spinbound/simplex.hpp"

namespace spinbound {

namespace {

constexpr double kArccosTol = 2e-15;
constexpr double kTargetTol = 1e-12;
constexpr Correlation kCorners[4] = {{1.0, 1.0}, {-1.0, -1.0}, {1.0, -1.0}, {-1.0, 1.0}};

struct Candidate {
  Correlation point;
  bool free = false;
};

std::vector<Candidate> relaxed_candidates(const Correlation& e, const ScenarioParams& params,
                                          const ErrorBudget& budget, int grid,
                                          bool& target_added) {
  std::vector<Candidate> out;
  const double w = budget.omega;
  for (const Correlation& q : quantum_extreme_points(params, grid)) {
    if (w == 0.0) {
      out.push_back({q, false});
      continue;
    }
    for (const Correlation& s : kCorners) {
      out.push_back({{(1.0 - w) * q.e1 + w * s.e1, (1.0 - w) * q.e2 + w * s.e2}, false});
    }
  }
  // The polygon through the samples lies inside the relaxed set; adding the
  // target keeps members feasible when they sit between samples. The slack
  // absorbs rounding of points computed on the boundary.
  target_added = in_relaxed_quantum_set(e, params, w, kTargetTol);
  if (target_added) out.push_back({e, false});
  if (budget.epsilon > 0.0) {
    for (const Correlation& s : kCorners) out.push_back({s, true});
  }
  return out;
}

}  // namespace

double Ensemble::total_weight() const {
  double s = 0.0;
  for (const auto& en : entries) s += en.weight;
  return s;
}

Correlation Ensemble::mean() const {
  Correlation m{0.0, 0.0};
  for (const auto& en : entries) {
    m.e1 += en.weight * en.point.e1;
    m.e2 += en.weight * en.point.e2;
  }
  return m;
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binary_entropy: p must lie in [0,1]");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double entropy_H(const Correlation& e) {
  require_in_square(e, "entropy_H");
  return 0.5 * (binary_entropy(std::clamp(e.p_plus_first(), 0.0, 1.0)) +
                binary_entropy(std::clamp(e.p_plus_second(), 0.0, 1.0)));
}

CertificationResult certify_hstar(const Correlation& e, const ScenarioParams& params,
                                  const ErrorBudget& budget, int grid) {
  require_in_square(e, "certify_hstar");
  if (grid < 16) throw DomainError("certify_hstar: grid must be at least 16");

  bool target_added = false;
  const std::vector<Candidate> cand = relaxed_candidates(e, params, budget, grid, target_added);
  const std::size_t n = cand.size();

  LinearProgram lp;
  lp.cost.resize(n);
  lp.eq_rows.assign(3, std::vector<double>(n));
  lp.eq_rhs = {1.0, e.e1, e.e2};
  for (std::size_t i = 0; i < n; ++i) {
    lp.cost[i] = entropy_H(cand[i].point);
    lp.eq_rows[0][i] = 1.0;
    lp.eq_rows[1][i] = cand[i].point.e1;
    lp.eq_rows[2][i] = cand[i].point.e2;
  }
  if (budget.epsilon > 0.0) {
    std::vector<double> row(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) row[i] = cand[i].free ? 1.0 : 0.0;
    lp.le_rows.push_back(std::move(row));
    lp.le_rhs.push_back(budget.epsilon);
  }

  const LpSolution sol = solve_lp(lp);

  CertificationResult out;
  out.grid_resolution = grid;
  out.diagnostics.candidates = static_cast<int>(n);
  out.diagnostics.iterations = sol.iterations;
  out.diagnostics.target_is_candidate = target_added;
  if (sol.status != LpStatus::optimal) {
    out.status = CertificationStatus::infeasible;
    return out;
  }
  out.status = CertificationStatus::optimal;
  out.h_star = std::max(sol.objective, 0.0);
  out.diagnostics.residual = sol.residual;
  for (std::size_t i = 0; i < n; ++i) {
    if (sol.x[i] <= 0.0) continue;
    out.ensemble.entries.push_back({sol.x[i], cand[i].point, cand[i].free});
    if (cand[i].free) out.diagnostics.free_mass += sol.x[i];
  }
  return out;
}

double robust_shifted_alpha(const ScenarioParams& params, const ErrorBudget& budget) {
  const double j = params.j.value();
  const double ja = j * params.alpha.radians;
  return params.alpha.radians + 2.0 * (budget.epsilon + budget.omega) / (std::tan(ja) * j);
}

RobustBound hstar_robust_lower_bound(const ScenarioParams& params, const ErrorBudget& budget,
                                     const std::function<double(Angle)>& hstar_at) {
  RobustBound out;
  const double ja = params.j.value() * params.alpha.radians;
  if (!(ja > 0.0 && ja < kHalfPi)) {
    out.vacuous = true;
    out.shifted_alpha = params.alpha.radians;
    return out;
  }
  const double eps = budget.epsilon;
  out.shifted_alpha = robust_shifted_alpha(params, budget);
  double penalty = 0.0;
  if (eps > 0.0) penalty = std::log2(1.0 - eps) - eps * std::log2(2.0 / eps) / (1.0 - eps);
  out.value = std::max(0.0, hstar_at(Angle(out.shifted_alpha)) + penalty);
  return out;
}

double cos_star(double t) { return (t >= 0.0 && t <= kHalfPi) ? std::cos(t) : 0.0; }

double arccos_shift_margin(double omega, double x) {
  if (!(omega >= 0.0 && omega <= 1.0)) throw DomainError("arccos_shift_margin: omega outside [0,1]");
  if (!(x >= 0.0 && x <= kHalfPi)) throw DomainError("arccos_shift_margin: x outside [0,pi/2]");
  const double lhs = (1.0 - omega) * (1.0 - omega) * std::cos(x);
  double rhs = 0.0;
  if (omega == 0.0) {
    rhs = std::cos(x);
  } else if (x > 0.0) {
    const double shift = 2.0 * omega / std::tan(x);
    rhs = x + shift <= kHalfPi ? std::cos(x) * std::cos(shift) - std::sin(x) * std::sin(shift) : 0.0;
  }
  return lhs - rhs;
}

bool arccos_shift_check(double omega, double x) { return arccos_shift_margin(omega, x) >= -kArccosTol; }

double concavity_bound_margin(double t, const Correlation& e, const Correlation& e_prime) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("concavity_bound_margin: t outside [0,1]");
  const Correlation mix{t * e.e1 + (1.0 - t) * e_prime.e1, t * e.e2 + (1.0 - t) * e_prime.e2};
  return t * entropy_H(e) + (1.0 - t) * entropy_H(e_prime) + binary_entropy(t) -
         entropy_H({std::clamp(mix.e1, -1.0, 1.0), std::clamp(mix.e2, -1.0, 1.0)});
}

ScenarioParams relaxed_inclusion_params(const ScenarioParams& params, double omega) {
  const double ja = params.j.value() * params.alpha.radians;
  if (!(ja > 0.0 && ja < kHalfPi)) {
    throw DomainError("relaxed_inclusion_params: requires 0 < J*alpha < pi/2");
  }
  if (!(omega >= 0.0 && omega < 1.0)) throw DomainError("relaxed_inclusion_params: omega outside [0,1)");
  const double a = params.alpha.radians + 2.0 * omega / (std::tan(ja) * params.j.value());
  return {params.j, Angle(a)};
}

double max_peak_equivalent(const ScenarioParams& params) { return 0.5 * (1.0 - overlap_gamma(params)); }

}  // namespace spinbound
