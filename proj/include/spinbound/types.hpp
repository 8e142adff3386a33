#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spinbound {

/// Raised when an argument lies outside the domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when the parts of a quantum model do not have matching dimensions.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

/// Default membership tolerance for set tests.
inline constexpr double kMembershipTol = 1e-9;

/// Upper bound J on the absolute SO(2) label carried by the transmitted
/// system. Stored as the integer 2J so half-integers are exact.
class SpinBound {
 public:
  constexpr SpinBound() = default;
  explicit SpinBound(int two_j) : two_j_(two_j) {
    if (two_j < 0) throw DomainError("SpinBound: two_j must be non-negative");
  }

  static SpinBound from_two_j(int two_j) { return SpinBound(two_j); }

  constexpr int two_j() const { return two_j_; }
  constexpr double value() const { return 0.5 * two_j_; }
  /// Integer spins carry integer labels; half-odd spins carry half-odd labels.
  constexpr bool is_integer() const { return two_j_ % 2 == 0; }

  friend constexpr bool operator==(SpinBound, SpinBound) = default;

 private:
  int two_j_ = 0;
};

/// Rotation angle in radians.
struct Angle {
  double radians = 0.0;

  constexpr Angle() = default;
  constexpr explicit Angle(double r) : radians(r) {}

  static Angle from_degrees(double deg) { return Angle(deg * kPi / 180.0); }

  /// Representative in [0, 2*pi).
  Angle canonical() const {
    double r = std::fmod(radians, 2.0 * kPi);
    if (r < 0.0) r += 2.0 * kPi;
    return Angle(r);
  }
};

/// Outcome biases (E1, E2) for the unrotated and rotated settings.
/// E_x = P(+1|x) - P(-1|x).
struct Correlation {
  double e1 = 0.0;
  double e2 = 0.0;

  /// Inverse of E = 2P - 1.
  static Correlation from_probabilities(double p_plus_0, double p_plus_alpha) {
    return {2.0 * p_plus_0 - 1.0, 2.0 * p_plus_alpha - 1.0};
  }
  double p_plus_first() const { return 0.5 * (1.0 + e1); }
  double p_plus_second() const { return 0.5 * (1.0 + e2); }

  bool in_square(double tol = 0.0) const {
    return std::abs(e1) <= 1.0 + tol && std::abs(e2) <= 1.0 + tol;
  }

  friend bool operator==(const Correlation&, const Correlation&) = default;
};

/// Throws DomainError unless both components lie in [-1, 1].
inline void require_in_square(const Correlation& e, const char* what) {
  if (!(e.in_square()) || std::isnan(e.e1) || std::isnan(e.e2)) {
    throw DomainError(std::string(what) + ": correlation outside [-1,1]^2 (" +
                      std::to_string(e.e1) + ", " + std::to_string(e.e2) + ")");
  }
}

struct ScenarioParams {
  SpinBound j;
  Angle alpha;

  /// |J alpha|, computed as |two_j * alpha| / 2. Every case split uses this.
  double abs_j_alpha() const { return std::abs(j.two_j() * alpha.radians) / 2.0; }
  /// The regime where the two prepared states can be perfectly distinguished.
  bool all_correlations() const { return abs_j_alpha() >= kHalfPi; }
};

/// Failure probabilities of the spin assumption: epsilon is epistemic
/// (possibly known to the adversary), omega is ontic.
struct ErrorBudget {
  double epsilon = 0.0;
  double omega = 0.0;

  ErrorBudget() = default;
  ErrorBudget(double eps, double om) : epsilon(eps), omega(om) {
    if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("ErrorBudget: epsilon must lie in [0,1)");
    if (!(om >= 0.0 && om < 1.0)) throw DomainError("ErrorBudget: omega must lie in [0,1)");
  }
};

}  // namespace spinbound
