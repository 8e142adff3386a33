#pragma once

#include "spinbound/types.hpp"

namespace spinbound {

/// Coherent state |beta> truncated at photon number n_cut.
struct CoherentParams {
  double beta_abs_sq = 0.0;
  int n_cut = 0;

  CoherentParams() = default;
  CoherentParams(double b, int n) : beta_abs_sq(b), n_cut(n) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw DomainError("CoherentParams: |beta|^2 must be >= 0");
    if (n < 0) throw DomainError("CoherentParams: n_cut must be >= 0");
  }
};

/// Poisson mass above n_cut. Summed from the dominant end so both tiny tails
/// and tails close to 1 keep full relative precision.
double truncation_eta(const CoherentParams& p);

/// sqrt(eta); trace distance between the state and its normalised truncation.
double kappa_from_eta(double eta);

/// 2 (kappa + sqrt(kappa (1 - kappa)) tan(J alpha)). Requires 0 <= kappa < 1
/// and 0 < |J alpha| < pi/2.
double delta_inflation(double kappa, const ScenarioParams& params);

/// 2 kappa: largest change of either bias between states at trace distance kappa.
double perturbed_correlation_bound(double kappa);

struct InclusionReport {
  double delta = 0.0;
  /// Smallest relaxed-set margin over all tested points; +inf when delta >= 1.
  double worst_margin = 0.0;
  Correlation worst_point;
  int points_tested = 0;
  /// Tested points lying outside Q itself.
  int outer_points = 0;
  bool included = false;
  /// delta >= 1 makes the relaxed set the whole square.
  bool trivial = false;
};

/// Every corner (E1 +- 2 kappa, E2 +- 2 kappa), clipped to the square, of the
/// error boxes around `grid` samples of each boundary curve must lie in the
/// relaxed set with omega = delta_inflation(kappa). Requires 0 < J alpha < pi/2
/// and grid >= 2.
InclusionReport error_set_inclusion_check(const ScenarioParams& params, double kappa, int grid,
                                          double tol = 1e-12);

}  // namespace spinbound
