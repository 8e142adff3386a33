#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spinbound/rng.hpp"
#include "spinbound/types.hpp"

namespace spinbound {

using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// One irrep label j (stored as 2j) together with its multiplicity n_j.
struct Level {
  int two_label = 0;
  int multiplicity = 1;

  double label() const { return 0.5 * two_label; }
};

/// U_alpha = (+)_j n_j e^{i j alpha}. Basis slots are ordered level by level,
/// copies of a level contiguous.
class Representation {
 public:
  /// Throws DomainError on repeated labels, multiplicities < 1, or a mix of
  /// integer and half-odd labels.
  explicit Representation(std::vector<Level> levels);

  /// Labels -J, -J+1, ..., J, each with the given multiplicity.
  static Representation full(SpinBound j, int multiplicity = 1);

  const std::vector<Level>& levels() const { return levels_; }
  int dimension() const { return static_cast<int>(slot_two_labels_.size()); }
  /// 2j for each basis slot.
  const std::vector<int>& slot_two_labels() const { return slot_two_labels_; }
  /// Basis index of copy `copy` of level `level_index`.
  int slot(std::size_t level_index, int copy) const { return offsets_[level_index] + copy; }
  /// Index of the level carrying label 2j, if present.
  std::optional<std::size_t> find_level(int two_label) const;
  int max_abs_two_label() const;
  /// Largest label difference, the Fourier degree this representation can produce.
  int label_spread() const;

  /// Same labels shifted by delta/2 (delta = 2 * shift).
  Representation shifted(int two_delta) const;

  friend bool operator==(const Representation& a, const Representation& b) {
    return a.slot_two_labels_ == b.slot_two_labels_;
  }

 private:
  std::vector<Level> levels_;
  std::vector<int> offsets_;
  std::vector<int> slot_two_labels_;
};

/// A normalised pure state in the slot basis of some representation.
class StateVector {
 public:
  /// Throws DomainError unless the norm is 1 within 1e-12.
  explicit StateVector(ComplexVector amplitudes);
  static StateVector normalized(ComplexVector amplitudes);

  const ComplexVector& amplitudes() const { return amplitudes_; }
  int dimension() const { return static_cast<int>(amplitudes_.size()); }

 private:
  ComplexVector amplitudes_;
};

/// Two-outcome measurement given by its "+1" effect 0 <= M+ <= 1.
class TwoOutcomePovm {
 public:
  /// Throws DomainError if M+ is not Hermitian or has eigenvalues outside
  /// [-1e-10, 1 + 1e-10].
  explicit TwoOutcomePovm(ComplexMatrix m_plus);
  /// M+ = |v><v| for a unit vector v.
  static TwoOutcomePovm projector(const ComplexVector& v);

  const ComplexMatrix& m_plus() const { return m_plus_; }
  ComplexMatrix m_minus() const;
  int dimension() const { return static_cast<int>(m_plus_.rows()); }

 private:
  ComplexMatrix m_plus_;
};

struct QuantumModel {
  Representation rep;
  StateVector state;
  TwoOutcomePovm povm;

  /// Throws DimensionError unless all three parts act on the same space.
  QuantumModel(Representation r, StateVector s, TwoOutcomePovm m);
};

struct WeightedModel {
  double weight = 0.0;
  QuantumModel model;
};

enum class CurveBranch { lower, upper };

/// Multiplies the amplitudes of level j by e^{i j alpha}.
StateVector rotate(const Representation& rep, const StateVector& state, Angle alpha);

/// P(+1|alpha) = <phi| U_alpha^dag M+ U_alpha |phi>, clamped to [0,1].
double born_probability(const QuantumModel& model, Angle alpha);

/// P(+1|alpha) for every angle in `angles`, reusing one work buffer.
std::vector<double> born_probabilities(const QuantumModel& model, std::span<const double> angles);

/// |<phi|U_alpha|phi>|.
double overlap_modulus(const Representation& rep, const StateVector& state, Angle alpha);

/// Boundary-attaining model on the full spin-J representation: the state
/// (|-J> + |J>)/sqrt(2) measured with a rotated copy of its own projector.
/// Lower branch: tau in [0, pi/(2J) - alpha]; upper: tau in [alpha, pi/(2J)].
QuantumModel extremal_model(const ScenarioParams& params, double tau, CurveBranch branch);

/// (2 P(+1|0) - 1, 2 P(+1|alpha) - 1).
Correlation correlation_of(const QuantumModel& model, const ScenarioParams& params);

/// Weighted average of the component correlations. Weights must be
/// non-negative and sum to 1 within 1e-12.
Correlation mix_models(std::span<const WeightedModel> entries, const ScenarioParams& params);

/// Single model realising the mixture: each component is tagged by an
/// ancilla carrying the trivial representation, the state is
/// sum_i sqrt(w_i) |phi_i>|i> and the effect is sum_i M_i (x) |i><i|.
/// All components must share one representation.
QuantumModel direct_sum_model(std::span<const WeightedModel> entries);

struct OutcomeCounts {
  std::uint64_t plus = 0;
  std::uint64_t minus = 0;
};

/// n independent measurements at angle alpha; deterministic given the seed.
OutcomeCounts sample_outcomes(const QuantumModel& model, Angle alpha, std::uint64_t n,
                              std::uint64_t seed);

struct LabelShiftHint {
  double shift = 0.0;          ///< subtract this from every label
  std::vector<double> labels;  ///< shifted labels
  SpinBound j;                 ///< bound satisfied after the shift
};

struct RepresentationCheck {
  bool ok = false;
  std::string message;
  std::optional<LabelShiftHint> hint;
};

/// Checks raw (possibly projective) labels against a real bound J: labels
/// must differ by integers, be all integer or all half-odd, be distinct, and
/// satisfy |j| <= J. Labels sharing a fractional offset are reported with the
/// global shift that brings them to the canonical form.
RepresentationCheck validate_labels(std::span<const double> labels, double j_bound);

RepresentationCheck validate_representation(const Representation& rep, SpinBound j);

/// Haar-random pure state of the given dimension.
StateVector random_state(int dimension, Rng& rng);

/// Random effect M+ = G^dag G / lambda_max(G^dag G + H^dag H) for complex
/// Gaussian G, H.
TwoOutcomePovm random_effect(int dimension, Rng& rng);

/// Random multiplicities in [1, max_multiplicity] on labels -J..J.
Representation random_representation(SpinBound j, int max_multiplicity, Rng& rng);

QuantumModel random_model(const Representation& rep, Rng& rng);

/// Monte-Carlo minimum of |<phi|U_alpha|phi>| over Haar-random states of the
/// full spin-J representation. Approaches overlap_gamma from above.
double brute_force_min_overlap(const ScenarioParams& params, std::uint64_t n_samples,
                               std::uint64_t seed);

}  // namespace spinbound
