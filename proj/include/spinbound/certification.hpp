#pragma once

#include <functional>
#include <vector>

#include "spinbound/types.hpp"

namespace spinbound {

struct EnsembleEntry {
  double weight = 0.0;
  Correlation point;
  /// True for the unconstrained corners that may carry at most epsilon mass.
  bool free = false;
};

struct Ensemble {
  std::vector<EnsembleEntry> entries;

  double total_weight() const;
  Correlation mean() const;
};

enum class CertificationStatus { optimal, infeasible };

struct CertificationDiagnostics {
  int candidates = 0;
  int iterations = 0;
  double residual = 0.0;
  double free_mass = 0.0;
  bool target_is_candidate = false;
};

struct CertificationResult {
  double h_star = 0.0;
  Ensemble ensemble;
  int grid_resolution = 0;
  CertificationStatus status = CertificationStatus::infeasible;
  CertificationDiagnostics diagnostics;
};

/// Binary entropy in bits, 0 log 0 = 0.
double binary_entropy(double p);

/// Average of the binary entropies of (1 + E_x)/2 over both inputs, in bits.
double entropy_H(const Correlation& e);

/// Smallest average entropy over decompositions of `e` into points of
/// (1-omega) Q + omega [-1,1]^2 plus at most `epsilon` mass on the free
/// corners (+-1, +-1). Discretised: the relaxed set is represented by the
/// corners and `grid` tau-samples per boundary curve of Q, each mixed with
/// the four square corners, together with `e` itself when it is a member
/// within 1e-12.
/// Throws DomainError for grid < 16 or e outside the square.
CertificationResult certify_hstar(const Correlation& e, const ScenarioParams& params,
                                  const ErrorBudget& budget, int grid);

/// alpha + 2 (epsilon + omega) cot(J alpha) / J.
double robust_shifted_alpha(const ScenarioParams& params, const ErrorBudget& budget);

struct RobustBound {
  double value = 0.0;
  /// Set when J alpha lies outside (0, pi/2); value is then 0.
  bool vacuous = false;
  double shifted_alpha = 0.0;
};

/// hstar_at(shifted alpha) + log2(1 - eps) - eps log2(2/eps) / (1 - eps),
/// clamped below at 0.
RobustBound hstar_robust_lower_bound(const ScenarioParams& params, const ErrorBudget& budget,
                                     const std::function<double(Angle)>& hstar_at);

/// cos t on [0, pi/2], 0 beyond.
double cos_star(double t);

/// (1 - omega)^2 cos x - cos_*(x + 2 omega cot x). At x = 0 the shift is
/// infinite for omega > 0.
double arccos_shift_margin(double omega, double x);

/// arccos_shift_margin >= -2e-15 (rounding of two O(1) cosines).
/// Requires 0 <= omega <= 1 and 0 <= x <= pi/2.
bool arccos_shift_check(double omega, double x);

/// t H(E) + (1-t) H(E') + h(t) - H(t E + (1-t) E'), non-negative.
double concavity_bound_margin(double t, const Correlation& e, const Correlation& e_prime);

/// The ontic relaxation stays inside the spin-bounded set at the enlarged
/// angle alpha + 2 omega cot(J alpha) / J. Requires 0 < J alpha < pi/2.
ScenarioParams relaxed_inclusion_params(const ScenarioParams& params, double omega);

/// Peak-probability parameter (1 - gamma) / 2 of the equivalent max-peak
/// formulation.
double max_peak_equivalent(const ScenarioParams& params);

}  // namespace spinbound
