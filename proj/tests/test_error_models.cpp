#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spinbound/core_sets.hpp"
#include "spinbound/error_models.hpp"
#include "spinbound/quantum_models.hpp"

using namespace spinbound;

namespace {

const ScenarioParams kCanonical{SpinBound(2), Angle(0.66)};

}  // namespace

TEST_CASE("truncation_eta examples") {
  CHECK(truncation_eta({0.0, 5}) == 0.0);
  CHECK(truncation_eta({1.0, 0}) == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-15));
  CHECK(truncation_eta({1.0, 3}) == doctest::Approx(1 - std::exp(-1.0) * (1 + 1 + 0.5 + 1.0 / 6)).epsilon(1e-13));
  CHECK(truncation_eta({1.0, 3}) == doctest::Approx(0.018988).epsilon(1e-5));
  CHECK_THROWS_AS(CoherentParams(-1.0, 3), DomainError);
  CHECK_THROWS_AS(CoherentParams(1.0, -1), DomainError);
}

TEST_CASE("truncation_eta matches the incomplete gamma oracle") {
  for (double x : {0.01, 0.5, 1.0, 4.0, 20.0, 60.0, 200.0}) {
    for (int n : {0, 1, 2, 5, 10, 30, 80, 250, 400}) {
      const double ref = oracle::poisson_tail(x, n);
      if (ref < 1e-290) continue;
      CHECK(truncation_eta({x, n}) == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("truncation_eta decreases in the cutoff and obeys the factorial bound") {
  double prev = 1.0;
  double fact = 1.0;
  for (int n = 0; n <= 20; ++n) {
    const double eta = truncation_eta({1.0, n});
    fact *= n + 1;
    CHECK(eta < prev);
    // For |beta|^2 = 1 the tail is at most e / (n+1)!.
    CHECK(eta <= std::exp(1.0) / fact);
    prev = eta;
  }
}

TEST_CASE("kappa_from_eta") {
  CHECK(kappa_from_eta(0.0) == 0.0);
  CHECK(kappa_from_eta(1.0) == 1.0);
  CHECK(kappa_from_eta(0.018988) == doctest::Approx(0.137797).epsilon(1e-5));
  CHECK_THROWS_AS(kappa_from_eta(-0.1), DomainError);
  CHECK_THROWS_AS(kappa_from_eta(1.1), DomainError);
}

TEST_CASE("delta_inflation") {
  CHECK(delta_inflation(0.0, kCanonical) == 0.0);
  // Frozen from direct evaluation of 2 (k + sqrt(k (1 - k)) tan(J alpha)).
  CHECK(delta_inflation(0.01, kCanonical) == doctest::Approx(0.1744429276312347).epsilon(1e-14));
  const double k = 1e-6;
  CHECK(std::abs(delta_inflation(k, kCanonical) / std::sqrt(k) / (2 * std::tan(0.66)) - 1) < 1e-2);
  CHECK_THROWS_AS(delta_inflation(1.0, kCanonical), DomainError);
  CHECK_THROWS_AS(delta_inflation(0.1, ScenarioParams{SpinBound(2), Angle(0.0)}), DomainError);
  CHECK_THROWS_AS(delta_inflation(0.1, ScenarioParams{SpinBound(2), Angle(2.0)}), DomainError);
}

TEST_CASE("perturbed correlation bound") {
  CHECK(perturbed_correlation_bound(0.0) == 0.0);
  CHECK(perturbed_correlation_bound(0.1) == doctest::Approx(0.2));
  Rng rng(61);
  for (int t = 0; t < 10000; ++t) {
    const int d = 2 + static_cast<int>(rng.below(5));
    const StateVector psi = random_state(d, rng);
    Eigen::VectorXcd v = psi.amplitudes();
    const double step = rng.uniform(0.0, 0.5);
    for (int k = 0; k < d; ++k) v[k] += step * std::complex<double>(rng.normal(), rng.normal());
    const StateVector phi = StateVector::normalized(v);
    const TwoOutcomePovm m = random_effect(d, rng);
    const double ov = std::abs(psi.amplitudes().dot(phi.amplitudes()));
    const double dist = std::sqrt(std::max(0.0, 1 - ov * ov));
    const double ep = psi.amplitudes().dot(m.m_plus() * psi.amplitudes()).real();
    const double eq = phi.amplitudes().dot(m.m_plus() * phi.amplitudes()).real();
    CHECK(2 * std::abs(ep - eq) <= perturbed_correlation_bound(dist) + 1e-12);
  }
}

TEST_CASE("error_set_inclusion_check") {
  const InclusionReport zero = error_set_inclusion_check(kCanonical, 0.0, 200);
  CHECK(zero.included);
  CHECK(std::abs(zero.worst_margin) < 1e-12);

  const InclusionReport canonical = error_set_inclusion_check(kCanonical, 0.01, 1000);
  CHECK(canonical.included);
  CHECK(canonical.delta == doctest::Approx(0.1744429276312347).epsilon(1e-14));
  CHECK(canonical.worst_margin == doctest::Approx(0.000605584).epsilon(1e-5));
  CHECK(canonical.outer_points > 0);
  CHECK(canonical.points_tested == 8000);

  const InclusionReport big = error_set_inclusion_check(ScenarioParams{SpinBound(2), Angle(1.5)}, 0.3, 50);
  CHECK(big.trivial);
  CHECK(big.included);
  CHECK(std::isinf(big.worst_margin));

  CHECK_THROWS_AS(error_set_inclusion_check(kCanonical, 0.01, 1), DomainError);
  CHECK_THROWS_AS(error_set_inclusion_check(ScenarioParams{SpinBound(2), Angle(0.0)}, 0.01, 10), DomainError);
}

TEST_CASE("inclusion holds across spins, angles and truncation errors") {
  for (int two_j = 1; two_j <= 6; ++two_j) {
    for (int a = 1; a <= 9; ++a) {
      const ScenarioParams p{SpinBound(two_j), Angle(0.1 * a * kPi / two_j)};
      for (double k : {1e-4, 1e-3, 1e-2, 0.05}) {
        const InclusionReport r = error_set_inclusion_check(p, k, 200);
        CHECK(r.included);
        CHECK(r.worst_margin >= -1e-12);
      }
    }
  }
}
