#pragma once

#include <cstdint>
#include <vector>

#include "spinbound/quantum_models.hpp"
#include "spinbound/rng.hpp"
#include "spinbound/types.hpp"

namespace spinbound {

/// Truncated Fourier series P(+1|alpha) = sum_k c_k cos(k alpha) + s_k sin(k alpha),
/// k = 0..n. Validity (0 <= P <= 1) is checked separately by validate_box.
class RotationBoxCoeffs {
 public:
  RotationBoxCoeffs() : cos_(1, 0.0), sin_(1, 0.0) {}
  /// `cos_coeffs` holds c_0..c_n and `sin_coeffs` holds s_1..s_m; the shorter
  /// list is zero-padded to degree max(n, m).
  RotationBoxCoeffs(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);

  static RotationBoxCoeffs constant(double value) { return RotationBoxCoeffs({value}, {}); }

  int degree() const { return static_cast<int>(cos_.size()) - 1; }
  double c(int k) const { return cos_.at(static_cast<std::size_t>(k)); }
  /// s_k for k >= 1; s(0) is 0.
  double s(int k) const { return sin_.at(static_cast<std::size_t>(k)); }
  /// Highest k with a nonzero coefficient.
  int effective_degree() const;

 private:
  std::vector<double> cos_;
  std::vector<double> sin_;  // index 0 unused (always 0)
};

/// Raw series value; may leave [0,1] for invalid coefficients.
double eval_box(const RotationBoxCoeffs& box, Angle alpha);

/// d/dalpha of the series.
double eval_box_derivative(const RotationBoxCoeffs& box, Angle alpha);

struct BoxRange {
  double min_value = 0.0;
  double max_value = 0.0;
  double argmin = 0.0;
  double argmax = 0.0;
  bool valid = false;
};

/// Global extrema over [0, 2pi) from the critical points of the series: the
/// derivative times e^{i n alpha} is a degree-2n polynomial in e^{i alpha}
/// whose unit-modulus roots (companion-matrix eigenvalues, Newton-polished)
/// are the critical angles. Valid iff min >= -1e-10 and max <= 1 + 1e-10.
BoxRange validate_box(const RotationBoxCoeffs& box);

/// Largest value of T'^2 + n^2 T^2 - n^2 on `grid` equally spaced angles,
/// with T = 2P - 1 and n the box degree. Throws DomainError for invalid boxes.
double bernstein_check(const RotationBoxCoeffs& box, int grid);

/// Fourier coefficients a_l = sum_{j'-j=l} conj(phi_j) M_{jj'} phi_{j'} of a
/// quantum model, returned as a box of degree equal to the label spread of the
/// representation. Throws std::logic_error if a_l and conj(a_{-l}) disagree
/// beyond 1e-12.
RotationBoxCoeffs coefficients_from_quantum(const QuantumModel& model);

/// Coefficients of P1 * P2 (joint outcome (+,+) of two boxes side by side).
RotationBoxCoeffs compose_boxes(const RotationBoxCoeffs& b1, const RotationBoxCoeffs& b2);

/// Degree-one box c0 + c1 cos(alpha) + s1 sin(alpha).
struct HalfSpinBoxParams {
  double c0 = 0.0;
  double c1 = 0.0;
  double s1 = 0.0;

  RotationBoxCoeffs box() const { return RotationBoxCoeffs({c0, c1}, {s1}); }
};

/// 0 <= c0 <= 1 and c1^2 + s1^2 <= min(c0, 1 - c0)^2, with `tol` slack on
/// every comparison.
bool in_R_half(const HalfSpinBoxParams& p, double tol = 1e-12);

/// Spin-1/2 models for the extreme points of the degree-one boxes.
QuantumModel half_box_constant_model(bool always_plus);
/// P(+1|alpha) = (1 + cos(alpha - tau)) / 2.
QuantumModel half_box_circle_model(double tau);

/// Decomposition of a degree-one box into at most three extreme-point models
/// (the constants 0 and 1 and circle points) whose mixture reproduces the box
/// for every angle. Constant boxes use the two constants only. Throws DomainError when p is not a valid box.
std::vector<WeightedModel> quantum_model_for_half_box(const HalfSpinBoxParams& p);

/// Random valid box of the given degree: Gaussian coefficients rescaled
/// affinely onto a random sub-interval of [0,1] using the certified range.
RotationBoxCoeffs sample_valid_box(int degree, Rng& rng);
RotationBoxCoeffs sample_valid_box(int degree, std::uint64_t seed);

}  // namespace spinbound
