#pragma once

#include <vector>

#include "spinbound/types.hpp"

namespace spinbound {

/// Smallest overlap |<phi|U_alpha|phi>| over states whose labels are bounded
/// by J: cos(J alpha) while |J alpha| < pi/2, and 0 from there on.
double overlap_gamma(const ScenarioParams& params);

/// g(E1,E2) = (sqrt(1+E1)sqrt(1+E2) + sqrt(1-E1)sqrt(1-E2)) / 2.
/// Throws DomainError outside [-1,1]^2.
double overlap_g(const Correlation& e);

/// Quantum set: g(E) >= gamma - tol. Always true once |J alpha| >= pi/2.
bool in_quantum_set(const Correlation& e, const ScenarioParams& params,
                    double tol = kMembershipTol);

/// Classical set: the diagonal E1 = E2 while |J alpha| < pi/2, otherwise the
/// full square.
bool in_classical_set(const Correlation& e, const ScenarioParams& params,
                      double tol = kMembershipTol);

/// Signed membership margin for (1-omega) Q + omega [-1,1]^2: the largest
/// value of g(F) - gamma over the admissible "spin-respecting part"
/// F = (E - omega E') / (1 - omega), E' in the square. Non-negative iff E is
/// a member.
double relaxed_quantum_margin(const Correlation& e, const ScenarioParams& params, double omega);

bool in_relaxed_quantum_set(const Correlation& e, const ScenarioParams& params, double omega,
                            double tol = kMembershipTol);

/// |E1 - E2| <= 2 epsilon while |J alpha| < pi/2. `tol` absorbs the rounding
/// of the subtraction.
bool in_relaxed_classical_set(const Correlation& e, const ScenarioParams& params, double epsilon,
                              double tol = 1e-12);

struct TauInterval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// I1 = [0, pi/(2J) - alpha] for the lower curve.
TauInterval lower_curve_interval(const ScenarioParams& params);
/// I2 = [alpha, pi/(2J)] for the upper curve.
TauInterval upper_curve_interval(const ScenarioParams& params);

/// Lower boundary of Q: P+ = (cos^2(J tau), cos^2(J(tau + alpha))).
/// Requires 0 < J alpha < pi/2 and tau in I1.
Correlation boundary_curve_c1(const ScenarioParams& params, double tau);

/// Upper boundary of Q: P+ = (cos^2(J tau), cos^2(J(tau - alpha))), tau in I2.
Correlation boundary_curve_c2(const ScenarioParams& params, double tau);

/// Half the arcsine gap, |asin E2 - asin E1| / 2.
double rotation_box_half_gap(const Correlation& e);

/// Two-input projection of the degree-2J rotation boxes:
/// |asin E2 - asin E1| / 2 <= J alpha + tol, or everything once J alpha >= pi/2.
bool in_rotation_box_set(const Correlation& e, const ScenarioParams& params,
                         double tol = kMembershipTol);

/// Candidate extreme points of Q_{J,alpha}: the diagonal corners plus
/// `points_per_curve` equally spaced tau-samples on each of c1 and c2
/// (endpoints included). Degenerate regimes return the corners only.
std::vector<Correlation> quantum_extreme_points(const ScenarioParams& params,
                                                int points_per_curve);

}  // namespace spinbound
