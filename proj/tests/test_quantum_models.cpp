#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "spinbound/core_sets.hpp"
#include "spinbound/quantum_models.hpp"

using namespace spinbound;

namespace {

ScenarioParams params(int two_j, double alpha) { return {SpinBound(two_j), Angle(alpha)}; }

// Born rule written out without the library's work buffers.
double born_direct(const QuantumModel& m, double alpha) {
  const int d = m.rep.dimension();
  Eigen::VectorXcd v(d);
  for (int k = 0; k < d; ++k) {
    v[k] = m.state.amplitudes()[k] * std::polar(1.0, 0.5 * m.rep.slot_two_labels()[k] * alpha);
  }
  return v.dot(m.povm.m_plus() * v).real();
}

}  // namespace

TEST_CASE("Representation validation") {
  CHECK_THROWS_AS(Representation({{0, 1}, {0, 2}}), DomainError);
  CHECK_THROWS_AS(Representation({{0, 0}}), DomainError);
  CHECK_THROWS_AS(Representation({{0, 1}, {1, 1}}), DomainError);
  const Representation r({{-2, 2}, {0, 1}, {2, 3}});
  CHECK(r.dimension() == 6);
  CHECK(r.label_spread() == 2);
  CHECK(r.max_abs_two_label() == 2);
  CHECK(r.slot(2, 1) == 4);
  CHECK(r.find_level(0).value() == 1);
  CHECK_FALSE(r.find_level(4).has_value());
  CHECK(Representation::full(SpinBound(3)).dimension() == 4);
  CHECK(r.shifted(2).slot_two_labels().front() == 0);
}

TEST_CASE("state and effect validation") {
  Eigen::VectorXcd v(2);
  v << 1.0, 1.0;
  CHECK_THROWS_AS(StateVector{v}, DomainError);
  CHECK(StateVector::normalized(v).amplitudes().norm() == doctest::Approx(1.0));

  Eigen::MatrixXcd m(2, 2);
  m << 1.0, 0.0, 0.0, 1.5;
  CHECK_THROWS_AS(TwoOutcomePovm{m}, DomainError);
  m << 0.5, std::complex<double>(0, 0.1), 0.0, 0.5;
  CHECK_THROWS_AS(TwoOutcomePovm{m}, DomainError);
  m << 0.5, 0.0, 0.0, 0.2;
  const TwoOutcomePovm ok(m);
  CHECK((ok.m_plus() + ok.m_minus() - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-15);

  const Representation r({{-1, 1}, {1, 1}});
  v << 1.0, 0.0;
  Eigen::MatrixXcd m3 = Eigen::MatrixXcd::Identity(3, 3) * 0.5;
  CHECK_THROWS_AS(QuantumModel(r, StateVector(v), TwoOutcomePovm(m3)), DimensionError);
}

TEST_CASE("extremal model traces the boundary curves") {
  for (int two_j : {1, 2, 3, 4, 8}) {
    const ScenarioParams p = params(two_j, 0.35 * kPi / two_j);
    for (CurveBranch b : {CurveBranch::lower, CurveBranch::upper}) {
      const TauInterval iv = b == CurveBranch::lower ? lower_curve_interval(p) : upper_curve_interval(p);
      for (int i = 0; i <= 40; ++i) {
        const double tau = iv.lo + iv.length() * i / 40.0;
        const QuantumModel m = extremal_model(p, tau, b);
        const Correlation e = correlation_of(m, p);
        const Correlation ref = b == CurveBranch::lower ? boundary_curve_c1(p, tau) : boundary_curve_c2(p, tau);
        CHECK(std::abs(e.e1 - ref.e1) < 1e-12);
        CHECK(std::abs(e.e2 - ref.e2) < 1e-12);
        CHECK(std::abs(overlap_modulus(m.rep, m.state, p.alpha) - overlap_gamma(p)) < 1e-14);
      }
    }
  }
  CHECK_THROWS_AS(extremal_model(params(2, 0.66), 1.0, CurveBranch::lower), DomainError);
}

TEST_CASE("born_probability matches the direct expression") {
  Rng rng(21);
  for (int i = 0; i < 50; ++i) {
    const Representation rep = random_representation(SpinBound(1 + static_cast<int>(rng.below(4))), 2, rng);
    const QuantumModel m = random_model(rep, rng);
    std::vector<double> angles;
    for (int k = 0; k < 10; ++k) angles.push_back(rng.uniform(0.0, 2 * kPi));
    const std::vector<double> batch = born_probabilities(m, angles);
    for (int k = 0; k < 10; ++k) {
      CHECK(std::abs(born_probability(m, Angle(angles[k])) - born_direct(m, angles[k])) < 1e-13);
      CHECK(batch[k] == born_probability(m, Angle(angles[k])));
    }
  }
}

TEST_CASE("brute-force minimum overlap approaches gamma from above") {
  const ScenarioParams canonical = params(2, 0.66);
  const double bf = brute_force_min_overlap(canonical, 100000, 7);
  CHECK(bf >= overlap_gamma(canonical) - 1e-14);
  CHECK(bf - overlap_gamma(canonical) < 1e-3);
  // Larger spaces converge more slowly; only the one-sided bound is sharp.
  for (int two_j : {1, 3, 4}) {
    const ScenarioParams p = params(two_j, 0.6 / (0.5 * two_j));
    const double v = brute_force_min_overlap(p, 20000, 8);
    CHECK(v >= overlap_gamma(p) - 1e-14);
    CHECK(v - overlap_gamma(p) < 2e-2);
  }
  CHECK(brute_force_min_overlap(params(2, 0.0), 100, 1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("random models produce correlations in Q") {
  Rng rng(22);
  for (int two_j = 0; two_j <= 6; ++two_j) {
    for (int i = 0; i < 100; ++i) {
      const Representation rep = random_representation(SpinBound(two_j), 3, rng);
      const QuantumModel m = random_model(rep, rng);
      const ScenarioParams p = params(two_j, rng.uniform(0.0, 2 * kPi));
      CHECK(relaxed_quantum_margin(correlation_of(m, p), p, 0.0) >= -1e-12);
      CHECK(overlap_modulus(m.rep, m.state, p.alpha) >= overlap_gamma(p) - 1e-12);
    }
  }
}

TEST_CASE("mix_models equals the direct-sum model") {
  Rng rng(23);
  const Representation rep = Representation::full(SpinBound(2), 2);
  std::vector<WeightedModel> parts;
  const std::vector<double> w{0.2, 0.5, 0.3};
  for (double wi : w) parts.push_back({wi, random_model(rep, rng)});
  const QuantumModel sum = direct_sum_model(parts);
  for (int k = 0; k < 20; ++k) {
    const ScenarioParams p = params(2, rng.uniform(0.0, 2 * kPi));
    const Correlation a = mix_models(parts, p);
    const Correlation b = correlation_of(sum, p);
    CHECK(std::abs(a.e1 - b.e1) < 1e-12);
    CHECK(std::abs(a.e2 - b.e2) < 1e-12);
  }
  parts[0].weight = 0.3;
  CHECK_THROWS_AS(mix_models(parts, params(2, 0.5)), DomainError);
  parts[0].weight = 0.2;
  parts.push_back({0.0, random_model(Representation::full(SpinBound(1)), rng)});
  CHECK_THROWS_AS(direct_sum_model(parts), DimensionError);
}

TEST_CASE("sample_outcomes is deterministic and unbiased") {
  const ScenarioParams p = params(2, 0.66);
  const QuantumModel m = extremal_model(p, 0.3, CurveBranch::lower);
  const OutcomeCounts a = sample_outcomes(m, p.alpha, 200000, 99);
  const OutcomeCounts b = sample_outcomes(m, p.alpha, 200000, 99);
  CHECK(a.plus == b.plus);
  CHECK(a.plus + a.minus == 200000);
  const double prob = born_probability(m, p.alpha);
  const double sd = std::sqrt(prob * (1 - prob) / 200000);
  CHECK(std::abs(static_cast<double>(a.plus) / 200000 - prob) < 5 * sd);
  CHECK_THROWS_AS(sample_outcomes(m, p.alpha, 0, 1), DomainError);
}

TEST_CASE("validate_labels") {
  const std::vector<double> ok{-1, 0, 1};
  CHECK(validate_labels(ok, 1.0).ok);

  const std::vector<double> shifted{0.3, 1.3};
  const RepresentationCheck c = validate_labels(shifted, 0.5);
  CHECK_FALSE(c.ok);
  REQUIRE(c.hint.has_value());
  CHECK(c.hint->shift == doctest::Approx(0.8));
  CHECK(c.hint->j.two_j() == 1);
  CHECK(c.hint->labels[0] == doctest::Approx(-0.5));

  const std::vector<double> mixed{0.0, 0.5};
  CHECK_FALSE(validate_labels(mixed, 2.0).ok);
  CHECK_FALSE(validate_labels(mixed, 2.0).hint.has_value());

  const std::vector<double> too_big{1, 2, 3};
  const RepresentationCheck big = validate_labels(too_big, 1.0);
  CHECK_FALSE(big.ok);
  REQUIRE(big.hint.has_value());
  CHECK(big.hint->shift == doctest::Approx(2.0));

  const std::vector<double> repeated{1, 1};
  CHECK_FALSE(validate_labels(repeated, 2.0).ok);
  CHECK(validate_representation(Representation::full(SpinBound(3)), SpinBound(3)).ok);
  CHECK_FALSE(validate_representation(Representation::full(SpinBound(3)), SpinBound(1)).ok);
}

TEST_CASE("mixed states are covered by their purifications") {
  Rng rng(24);
  for (int two_j : {1, 2, 4}) {
    const Representation rep = Representation::full(SpinBound(two_j));
    for (int i = 0; i < 20; ++i) {
      const Eigen::MatrixXcd rho = oracle::random_density(rep.dimension(), 2, rng);
      const TwoOutcomePovm eff = random_effect(rep.dimension(), rng);
      const QuantumModel pure = oracle::purify(rep, rho, eff.m_plus());
      for (int k = 0; k < 5; ++k) {
        const ScenarioParams p = params(two_j, rng.uniform(0.0, 2 * kPi));
        const Correlation a = oracle::mixed_correlation(rep, rho, eff.m_plus(), p.alpha.radians);
        const Correlation b = correlation_of(pure, p);
        CHECK(std::abs(a.e1 - b.e1) < 1e-10);
        CHECK(std::abs(a.e2 - b.e2) < 1e-10);
        CHECK(in_quantum_set(a, p, 1e-10));
      }
    }
  }
}
