#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinbound/types.hpp"

namespace spinbound {

struct VerifyConfig {
  std::uint64_t seed = 1;
  unsigned threads = 0;
  /// Random valid boxes per degree n = 1..max_two_j.
  int boxes_per_degree = 2000;
  int max_two_j = 8;
  /// Interior angles of (0, pi/(2J)) per box.
  int alpha_grid = 50;
  /// Uniform correlations compared between the overlap and arcsine tests.
  int equivalence_samples = 20000;
  /// Random quantum models per J = 0, 1/2, ..., max_two_j/2.
  int models_per_j = 200;
  int angles_per_model = 100;
  int max_multiplicity = 2;
  /// Side of the (omega, x) grid for the arccos shift lemma.
  int lemma_grid = 300;
  /// Random triples / memberships for the concavity and inclusion lemmas.
  int lemma_samples = 20000;
  /// Boundary samples per curve in the coherent inclusion sweep.
  int coherent_grid = 200;
  /// Extra correlation checked for membership in Q at inject_params.
  std::optional<Correlation> inject;
  ScenarioParams inject_params{SpinBound(2), Angle(0.66)};
};

struct Violation {
  std::string where;
  Correlation point;
  double value = 0.0;
};

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
  /// Smallest slack seen; negative values are violations.
  double worst_margin = 0.0;
  std::optional<Violation> first_violation;
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool all_passed() const;
};

/// Random valid boxes of degree n mapped through (P(0), P(alpha)) must land
/// in Q_{n/2, alpha}; random correlations must get the same verdict from the
/// overlap and arcsine tests. The injected correlation, if any, is checked
/// here as well.
SuiteResult verify_box_equivalence(const VerifyConfig& cfg);

/// T'^2 + n^2 T^2 <= n^2 on random valid boxes.
SuiteResult verify_bernstein(const VerifyConfig& cfg);

/// Random models on labels -J..J have Fourier degree <= 2J and their
/// coefficient series reproduces the Born probabilities.
SuiteResult verify_fourier_degree(const VerifyConfig& cfg);

/// arccos shift lemma grid, entropy concavity bound, and the inclusion of the
/// ontic relaxation in the set at the shifted angle.
SuiteResult verify_lemmas(const VerifyConfig& cfg);

/// Error-box inclusion over J in {1/2..3}, nine angles per J and
/// kappa in {1e-4, 1e-3, 1e-2, 0.05}.
SuiteResult verify_coherent(const VerifyConfig& cfg);

/// All suites in the order above.
VerifyReport run_verification(const VerifyConfig& cfg);

}  // namespace spinbound
