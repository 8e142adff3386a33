#include "spinbound/error_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spinbound/core_sets.hpp"

namespace spinbound {

namespace {

// e^{-x} x^n / n! evaluated in log space.
double poisson_term(double x, int n) {
  return std::exp(-x + n * std::log(x) - std::lgamma(n + 1.0));
}

}  // namespace

double truncation_eta(const CoherentParams& p) {
  const double x = p.beta_abs_sq;
  const int n_cut = p.n_cut;
  if (x == 0.0) return 0.0;

  if (n_cut + 1 > x) {
    // Terms decrease from n_cut + 1 on: sum the tail directly.
    double t = poisson_term(x, n_cut + 1);
    double sum = 0.0;
    for (int n = n_cut + 1; t > 0.0; ++n) {
      sum += t;
      if (t < 1e-18 * sum) break;
      t *= x / (n + 1);
    }
    return std::min(sum, 1.0);
  }
  // Terms increase up to n_cut: sum the head downwards and complement.
  double t = poisson_term(x, n_cut);
  double head = 0.0;
  for (int n = n_cut; n >= 0 && t > 0.0; --n) {
    head += t;
    if (t < 1e-18 * head) break;
    t *= n / x;
  }
  return std::clamp(1.0 - head, 0.0, 1.0);
}

double kappa_from_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("kappa_from_eta: eta must lie in [0,1]");
  return std::sqrt(eta);
}

double delta_inflation(double kappa, const ScenarioParams& params) {
  if (!(kappa >= 0.0 && kappa < 1.0)) throw DomainError("delta_inflation: kappa must lie in [0,1)");
  const double ja = params.abs_j_alpha();
  if (!(ja > 0.0 && ja < kHalfPi)) throw DomainError("delta_inflation: requires 0 < |J*alpha| < pi/2");
  return 2.0 * (kappa + std::sqrt(kappa * (1.0 - kappa)) * std::tan(ja));
}

double perturbed_correlation_bound(double kappa) {
  if (!(kappa >= 0.0)) throw DomainError("perturbed_correlation_bound: kappa must be >= 0");
  return 2.0 * kappa;
}

InclusionReport error_set_inclusion_check(const ScenarioParams& params, double kappa, int grid,
                                          double tol) {
  if (grid < 2) throw DomainError("error_set_inclusion_check: grid must be >= 2");
  InclusionReport out;
  out.delta = delta_inflation(kappa, params);
  if (out.delta >= 1.0) {
    out.trivial = true;
    out.included = true;
    out.worst_margin = std::numeric_limits<double>::infinity();
    return out;
  }

  const ScenarioParams p{params.j, Angle(std::abs(params.alpha.radians))};
  const double r = perturbed_correlation_bound(kappa);
  const TauInterval i1 = lower_curve_interval(p);
  const TauInterval i2 = upper_curve_interval(p);

  out.worst_margin = std::numeric_limits<double>::infinity();
  auto test_box = [&](const Correlation& b) {
    for (double d1 : {-r, r}) {
      for (double d2 : {-r, r}) {
        const Correlation c{std::clamp(b.e1 + d1, -1.0, 1.0), std::clamp(b.e2 + d2, -1.0, 1.0)};
        ++out.points_tested;
        if (!in_quantum_set(c, p, 0.0)) ++out.outer_points;
        const double m = relaxed_quantum_margin(c, p, out.delta);
        if (m < out.worst_margin) {
          out.worst_margin = m;
          out.worst_point = c;
        }
      }
    }
  };
  for (int i = 0; i < grid; ++i) {
    const double f = static_cast<double>(i) / (grid - 1);
    test_box(boundary_curve_c1(p, i1.lo + f * i1.length()));
    test_box(boundary_curve_c2(p, i2.lo + f * i2.length()));
  }
  out.included = out.worst_margin >= -tol;
  return out;
}

}  // namespace spinbound
