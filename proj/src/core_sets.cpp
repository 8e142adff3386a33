#include "spinbound/core_sets.hpp"

#include <algorithm>
#include <cmath>

namespace spinbound {

namespace {

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

void require_open_regime(const ScenarioParams& params, const char* what) {
  const double ja = params.j.two_j() * params.alpha.radians / 2.0;
  if (!(ja > 0.0 && ja < kHalfPi)) {
    throw DomainError(std::string(what) + ": requires 0 < J*alpha < pi/2");
  }
}

// Endpoint slack for tau, relative to the interval scale.
constexpr double kTauSlack = 1e-12;

double checked_tau(const TauInterval& iv, double tau, const char* what) {
  const double slack = kTauSlack * std::max(1.0, std::abs(iv.hi));
  if (!(tau >= iv.lo - slack && tau <= iv.hi + slack)) {
    throw DomainError(std::string(what) + ": tau outside its parameter interval");
  }
  return std::clamp(tau, iv.lo, iv.hi);
}

}  // namespace

double overlap_gamma(const ScenarioParams& params) {
  const double ja = params.abs_j_alpha();
  return ja < kHalfPi ? std::cos(ja) : 0.0;
}

double overlap_g(const Correlation& e) {
  require_in_square(e, "overlap_g");
  const double up = std::sqrt(1.0 + e.e1) * std::sqrt(1.0 + e.e2);
  const double down = std::sqrt(1.0 - e.e1) * std::sqrt(1.0 - e.e2);
  return 0.5 * (up + down);
}

bool in_quantum_set(const Correlation& e, const ScenarioParams& params, double tol) {
  const double g = overlap_g(e);
  if (params.all_correlations()) return true;
  return g >= overlap_gamma(params) - tol;
}

bool in_classical_set(const Correlation& e, const ScenarioParams& params, double tol) {
  require_in_square(e, "in_classical_set");
  if (params.all_correlations()) return true;
  return std::abs(e.e1 - e.e2) <= tol;
}

double relaxed_quantum_margin(const Correlation& e, const ScenarioParams& params, double omega) {
  require_in_square(e, "relaxed_quantum_margin");
  if (!(omega >= 0.0 && omega < 1.0)) {
    throw DomainError("relaxed_quantum_margin: omega must lie in [0,1)");
  }
  const double gamma = overlap_gamma(params);
  // The spin-respecting part F ranges over a box of half-width
  // omega/(1-omega) around E/(1-omega). g is concave with its maximum 1 on the
  // diagonal, so either the box meets the diagonal or the best F is the box
  // corner closest to it.
  if (std::abs(e.e1 - e.e2) <= 2.0 * omega) return 1.0 - gamma;
  const double s = 1.0 - omega;
  Correlation f;
  if (e.e1 < e.e2) {
    f = {(e.e1 + omega) / s, (e.e2 - omega) / s};
  } else {
    f = {(e.e1 - omega) / s, (e.e2 + omega) / s};
  }
  // Off the diagonal the corner is inside the square up to rounding.
  f = {clamp_unit(f.e1), clamp_unit(f.e2)};
  return overlap_g(f) - gamma;
}

bool in_relaxed_quantum_set(const Correlation& e, const ScenarioParams& params, double omega,
                            double tol) {
  const double margin = relaxed_quantum_margin(e, params, omega);
  if (params.all_correlations()) return true;
  return margin >= -tol;
}

bool in_relaxed_classical_set(const Correlation& e, const ScenarioParams& params, double epsilon,
                              double tol) {
  require_in_square(e, "in_relaxed_classical_set");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw DomainError("in_relaxed_classical_set: epsilon must lie in [0,1)");
  }
  if (params.all_correlations()) return true;
  return std::abs(e.e1 - e.e2) <= 2.0 * epsilon + tol;
}

TauInterval lower_curve_interval(const ScenarioParams& params) {
  const double j = params.j.value();
  return {0.0, kPi / (2.0 * j) - params.alpha.radians};
}

TauInterval upper_curve_interval(const ScenarioParams& params) {
  const double j = params.j.value();
  return {params.alpha.radians, kPi / (2.0 * j)};
}

Correlation boundary_curve_c1(const ScenarioParams& params, double tau) {
  require_open_regime(params, "boundary_curve_c1");
  tau = checked_tau(lower_curve_interval(params), tau, "boundary_curve_c1");
  const double j = params.j.value();
  const double c0 = std::cos(j * tau);
  const double ca = std::cos(j * (tau + params.alpha.radians));
  return Correlation::from_probabilities(c0 * c0, ca * ca);
}

Correlation boundary_curve_c2(const ScenarioParams& params, double tau) {
  require_open_regime(params, "boundary_curve_c2");
  tau = checked_tau(upper_curve_interval(params), tau, "boundary_curve_c2");
  const double j = params.j.value();
  const double c0 = std::cos(j * tau);
  const double ca = std::cos(j * (tau - params.alpha.radians));
  return Correlation::from_probabilities(c0 * c0, ca * ca);
}

double rotation_box_half_gap(const Correlation& e) {
  require_in_square(e, "rotation_box_half_gap");
  return 0.5 * std::abs(std::asin(e.e2) - std::asin(e.e1));
}

bool in_rotation_box_set(const Correlation& e, const ScenarioParams& params, double tol) {
  const double gap = rotation_box_half_gap(e);
  if (params.all_correlations()) return true;
  return gap <= params.abs_j_alpha() + tol;
}

std::vector<Correlation> quantum_extreme_points(const ScenarioParams& params,
                                                int points_per_curve) {
  std::vector<Correlation> pts{{1.0, 1.0}, {-1.0, -1.0}};
  if (params.all_correlations()) {
    pts.push_back({1.0, -1.0});
    pts.push_back({-1.0, 1.0});
    return pts;
  }
  if (params.abs_j_alpha() == 0.0) return pts;

  // Q is symmetric under alpha -> -alpha, so the curves use |alpha|.
  const ScenarioParams pos{params.j, Angle(std::abs(params.alpha.radians))};
  const int n = std::max(points_per_curve, 2);
  pts.reserve(2 + 2 * static_cast<std::size_t>(n));
  const TauInterval lower = lower_curve_interval(pos);
  const TauInterval upper = upper_curve_interval(pos);
  for (int k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / (n - 1);
    pts.push_back(boundary_curve_c1(pos, lower.lo + t * lower.length()));
  }
  for (int k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / (n - 1);
    pts.push_back(boundary_curve_c2(pos, upper.lo + t * upper.length()));
  }
  return pts;
}

}  // namespace spinbound
