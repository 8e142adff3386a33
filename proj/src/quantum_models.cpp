#include "spinbound/quantum_models.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <sstream>

#include "spinbound/core_sets.hpp"

namespace spinbound {

using cd = std::complex<double>;

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kEffectTol = 1e-10;

// Phase e^{i j alpha} for a label stored as 2j.
cd level_phase(int two_label, double alpha) {
  const double arg = 0.5 * two_label * alpha;
  return {std::cos(arg), std::sin(arg)};
}

ComplexVector rotated_amplitudes(const Representation& rep, const ComplexVector& amps,
                                 double alpha) {
  ComplexVector out(amps.size());
  int slot = 0;
  for (const Level& level : rep.levels()) {
    const cd phase = level_phase(level.two_label, alpha);
    for (int c = 0; c < level.multiplicity; ++c, ++slot) out[slot] = phase * amps[slot];
  }
  return out;
}

void check_weights(std::span<const WeightedModel> entries, const char* what) {
  if (entries.empty()) throw DomainError(std::string(what) + ": no entries");
  double total = 0.0;
  for (const auto& e : entries) {
    if (!(e.weight >= 0.0)) throw DomainError(std::string(what) + ": negative weight");
    total += e.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError(std::string(what) + ": weights must sum to 1");
  }
}

std::string format_label(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Representation

Representation::Representation(std::vector<Level> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw DomainError("Representation: no levels");
  std::set<int> seen;
  const int parity = std::abs(levels_.front().two_label) % 2;
  for (const Level& l : levels_) {
    if (l.multiplicity < 1) throw DomainError("Representation: multiplicity must be >= 1");
    if (!seen.insert(l.two_label).second) throw DomainError("Representation: repeated label");
    if (std::abs(l.two_label) % 2 != parity) {
      throw DomainError("Representation: mixed integer and half-integer labels");
    }
  }
  offsets_.reserve(levels_.size());
  for (const Level& l : levels_) {
    offsets_.push_back(static_cast<int>(slot_two_labels_.size()));
    slot_two_labels_.insert(slot_two_labels_.end(), l.multiplicity, l.two_label);
  }
}

Representation Representation::full(SpinBound j, int multiplicity) {
  std::vector<Level> levels;
  for (int two = -j.two_j(); two <= j.two_j(); two += 2) levels.push_back({two, multiplicity});
  return Representation(std::move(levels));
}

std::optional<std::size_t> Representation::find_level(int two_label) const {
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (levels_[i].two_label == two_label) return i;
  }
  return std::nullopt;
}

int Representation::max_abs_two_label() const {
  int m = 0;
  for (const Level& l : levels_) m = std::max(m, std::abs(l.two_label));
  return m;
}

int Representation::label_spread() const {
  const auto [lo, hi] = std::minmax_element(
      levels_.begin(), levels_.end(),
      [](const Level& a, const Level& b) { return a.two_label < b.two_label; });
  return (hi->two_label - lo->two_label) / 2;
}

Representation Representation::shifted(int two_delta) const {
  std::vector<Level> out = levels_;
  for (Level& l : out) l.two_label += two_delta;
  return Representation(std::move(out));
}

// ---------------------------------------------------------------------------
// States and effects

StateVector::StateVector(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw DomainError("StateVector: empty");
  const double n2 = amplitudes_.squaredNorm();
  if (std::abs(n2 - 1.0) > kNormTol) throw DomainError("StateVector: not normalised");
}

StateVector StateVector::normalized(ComplexVector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0)) throw DomainError("StateVector: zero vector");
  return StateVector(amplitudes / n);
}

TwoOutcomePovm::TwoOutcomePovm(ComplexMatrix m_plus) : m_plus_(std::move(m_plus)) {
  if (m_plus_.rows() != m_plus_.cols() || m_plus_.rows() == 0) {
    throw DimensionError("TwoOutcomePovm: effect must be square");
  }
  const double scale = std::max(1.0, m_plus_.cwiseAbs().maxCoeff());
  if ((m_plus_ - m_plus_.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("TwoOutcomePovm: effect is not Hermitian");
  }
  // Symmetrise away the rounding before the spectral check.
  m_plus_ = 0.5 * (m_plus_ + m_plus_.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_plus_, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  if (ev.minCoeff() < -kEffectTol || ev.maxCoeff() > 1.0 + kEffectTol) {
    throw DomainError("TwoOutcomePovm: effect eigenvalues outside [0,1]");
  }
}

TwoOutcomePovm TwoOutcomePovm::projector(const ComplexVector& v) {
  return TwoOutcomePovm(v * v.adjoint());
}

ComplexMatrix TwoOutcomePovm::m_minus() const {
  return ComplexMatrix::Identity(m_plus_.rows(), m_plus_.cols()) - m_plus_;
}

QuantumModel::QuantumModel(Representation r, StateVector s, TwoOutcomePovm m)
    : rep(std::move(r)), state(std::move(s)), povm(std::move(m)) {
  if (rep.dimension() != state.dimension() || rep.dimension() != povm.dimension()) {
    throw DimensionError("QuantumModel: representation, state and effect dimensions differ");
  }
}

// ---------------------------------------------------------------------------
// Probabilities

StateVector rotate(const Representation& rep, const StateVector& state, Angle alpha) {
  if (rep.dimension() != state.dimension()) throw DimensionError("rotate: dimension mismatch");
  ComplexVector out = rotated_amplitudes(rep, state.amplitudes(), alpha.radians);
  // The phases are unit modulus; renormalising only strips accumulated rounding.
  return StateVector::normalized(std::move(out));
}

double born_probability(const QuantumModel& model, Angle alpha) {
  const ComplexVector psi = rotated_amplitudes(model.rep, model.state.amplitudes(), alpha.radians);
  const double p = psi.dot(model.povm.m_plus() * psi).real();
  return std::clamp(p, 0.0, 1.0);
}

std::vector<double> born_probabilities(const QuantumModel& model, std::span<const double> angles) {
  const int d = model.rep.dimension();
  const ComplexVector& phi = model.state.amplitudes();
  const ComplexMatrix& m = model.povm.m_plus();
  const auto& labels = model.rep.slot_two_labels();
  ComplexVector psi(d);
  ComplexVector mpsi(d);
  std::vector<double> out;
  out.reserve(angles.size());
  for (double a : angles) {
    for (int k = 0; k < d; ++k) psi[k] = level_phase(labels[k], a) * phi[k];
    mpsi.noalias() = m * psi;
    out.push_back(std::clamp(psi.dot(mpsi).real(), 0.0, 1.0));
  }
  return out;
}

double overlap_modulus(const Representation& rep, const StateVector& state, Angle alpha) {
  if (rep.dimension() != state.dimension()) {
    throw DimensionError("overlap_modulus: dimension mismatch");
  }
  const ComplexVector& phi = state.amplitudes();
  cd acc = 0.0;
  const auto& labels = rep.slot_two_labels();
  for (int k = 0; k < phi.size(); ++k) acc += std::norm(phi[k]) * level_phase(labels[k], alpha.radians);
  return std::abs(acc);
}

QuantumModel extremal_model(const ScenarioParams& params, double tau, CurveBranch branch) {
  const double ja = params.j.two_j() * params.alpha.radians / 2.0;
  if (!(ja > 0.0 && ja < kHalfPi)) {
    throw DomainError("extremal_model: requires 0 < J*alpha < pi/2");
  }
  const TauInterval iv = branch == CurveBranch::lower ? lower_curve_interval(params)
                                                      : upper_curve_interval(params);
  const double slack = 1e-12 * std::max(1.0, std::abs(iv.hi));
  if (!(tau >= iv.lo - slack && tau <= iv.hi + slack)) {
    throw DomainError("extremal_model: tau outside the branch interval");
  }

  Representation rep = Representation::full(params.j);
  ComplexVector phi = ComplexVector::Zero(rep.dimension());
  phi[0] = 1.0 / std::sqrt(2.0);
  phi[rep.dimension() - 1] = 1.0 / std::sqrt(2.0);
  // Lower: M+ = U_tau^dag |phi><phi| U_tau, the projector onto U_{-tau}|phi>.
  // Upper: M+ = U_{-tau}^dag |phi><phi| U_{-tau}, onto U_{tau}|phi>.
  const double shift = branch == CurveBranch::lower ? -tau : tau;
  ComplexVector chi = rotated_amplitudes(rep, phi, shift);
  TwoOutcomePovm povm = TwoOutcomePovm::projector(chi);
  return QuantumModel(std::move(rep), StateVector(phi), std::move(povm));
}

Correlation correlation_of(const QuantumModel& model, const ScenarioParams& params) {
  const double angles[2] = {0.0, params.alpha.radians};
  const auto p = born_probabilities(model, angles);
  return Correlation::from_probabilities(p[0], p[1]);
}

Correlation mix_models(std::span<const WeightedModel> entries, const ScenarioParams& params) {
  check_weights(entries, "mix_models");
  Correlation acc{0.0, 0.0};
  for (const auto& e : entries) {
    const Correlation c = correlation_of(e.model, params);
    acc.e1 += e.weight * c.e1;
    acc.e2 += e.weight * c.e2;
  }
  return acc;
}

QuantumModel direct_sum_model(std::span<const WeightedModel> entries) {
  check_weights(entries, "direct_sum_model");
  const Representation& base = entries.front().model.rep;
  for (const auto& e : entries) {
    if (!(e.model.rep == base)) {
      throw DimensionError("direct_sum_model: components use different representations");
    }
  }
  const int k = static_cast<int>(entries.size());
  std::vector<Level> levels = base.levels();
  for (Level& l : levels) l.multiplicity *= k;
  Representation rep(std::move(levels));

  // Component i, base slot (level, copy) -> combined slot (level, copy + n_level * i).
  std::vector<std::vector<int>> slot_map(k, std::vector<int>(base.dimension()));
  for (int i = 0; i < k; ++i) {
    for (std::size_t li = 0; li < base.levels().size(); ++li) {
      const int n = base.levels()[li].multiplicity;
      for (int c = 0; c < n; ++c) slot_map[i][base.slot(li, c)] = rep.slot(li, c + n * i);
    }
  }

  ComplexVector psi = ComplexVector::Zero(rep.dimension());
  ComplexMatrix m = ComplexMatrix::Zero(rep.dimension(), rep.dimension());
  for (int i = 0; i < k; ++i) {
    const double amp = std::sqrt(entries[i].weight);
    const ComplexVector& phi = entries[i].model.state.amplitudes();
    const ComplexMatrix& mi = entries[i].model.povm.m_plus();
    for (int a = 0; a < base.dimension(); ++a) {
      psi[slot_map[i][a]] = amp * phi[a];
      for (int b = 0; b < base.dimension(); ++b) m(slot_map[i][a], slot_map[i][b]) = mi(a, b);
    }
  }
  return QuantumModel(std::move(rep), StateVector::normalized(psi), TwoOutcomePovm(m));
}

OutcomeCounts sample_outcomes(const QuantumModel& model, Angle alpha, std::uint64_t n,
                              std::uint64_t seed) {
  if (n == 0) throw DomainError("sample_outcomes: n must be >= 1");
  const double p = born_probability(model, alpha);
  Rng rng(seed);
  OutcomeCounts counts;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (rng.uniform() < p) ++counts.plus;
  }
  counts.minus = n - counts.plus;
  return counts;
}

// ---------------------------------------------------------------------------
// Representation checks

RepresentationCheck validate_labels(std::span<const double> labels, double j_bound) {
  constexpr double kLabelTol = 1e-9;
  RepresentationCheck out;
  if (labels.empty()) {
    out.message = "no labels";
    return out;
  }
  const auto [lo_it, hi_it] = std::minmax_element(labels.begin(), labels.end());
  const double lo = *lo_it;
  const double hi = *hi_it;

  // Projective representations of SO(2) share one fractional offset.
  for (double x : labels) {
    const double d = x - lo;
    if (std::abs(d - std::round(d)) > kLabelTol) {
      out.message = "labels do not differ by integers (mixed parity)";
      return out;
    }
  }
  std::vector<double> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] - sorted[i - 1] < 0.5) {
      out.message = "repeated label";
      return out;
    }
  }

  // A global phase e^{-i c alpha} with c the centre maps the labels to
  // -spread/2 .. spread/2 without changing any observable probability.
  const double centre = 0.5 * (hi + lo);
  const int spread = static_cast<int>(std::lround(hi - lo));
  auto make_hint = [&] {
    LabelShiftHint h;
    h.shift = centre;
    for (double x : labels) h.labels.push_back(x - centre);
    h.j = SpinBound(spread);
    return h;
  };

  const double twice = 2.0 * lo;
  const bool half_integral = std::abs(twice - std::round(twice)) <= kLabelTol;
  if (!half_integral) {
    out.hint = make_hint();
    out.message = "labels are not integers or half-integers; shift every label by " +
                  format_label(-centre) + " to obtain J = " +
                  format_label(out.hint->j.value());
    return out;
  }
  const double max_abs = std::max(std::abs(lo), std::abs(hi));
  if (max_abs > j_bound + kLabelTol) {
    out.message = "label " + format_label(max_abs) + " exceeds the bound J = " +
                  format_label(j_bound);
    if (0.5 * spread <= j_bound + kLabelTol && std::abs(centre) > kLabelTol) {
      out.hint = make_hint();
      out.message += "; shifting every label by " + format_label(-centre) + " gives J = " +
                     format_label(out.hint->j.value());
    }
    return out;
  }
  out.ok = true;
  out.message = "ok";
  return out;
}

RepresentationCheck validate_representation(const Representation& rep, SpinBound j) {
  std::vector<double> labels;
  for (const Level& l : rep.levels()) labels.push_back(l.label());
  return validate_labels(labels, j.value());
}

// ---------------------------------------------------------------------------
// Random models

StateVector random_state(int dimension, Rng& rng) {
  ComplexVector v(dimension);
  for (int k = 0; k < dimension; ++k) v[k] = cd(rng.normal(), rng.normal());
  return StateVector::normalized(std::move(v));
}

TwoOutcomePovm random_effect(int dimension, Rng& rng) {
  ComplexMatrix g(dimension, dimension);
  ComplexMatrix h(dimension, dimension);
  for (int r = 0; r < dimension; ++r) {
    for (int c = 0; c < dimension; ++c) {
      g(r, c) = cd(rng.normal(), rng.normal());
      h(r, c) = cd(rng.normal(), rng.normal());
    }
  }
  const ComplexMatrix a = g.adjoint() * g;
  const ComplexMatrix sum = a + h.adjoint() * h;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sum, Eigen::EigenvaluesOnly);
  return TwoOutcomePovm(a / es.eigenvalues().maxCoeff());
}

Representation random_representation(SpinBound j, int max_multiplicity, Rng& rng) {
  std::vector<Level> levels;
  for (int two = -j.two_j(); two <= j.two_j(); two += 2) {
    const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_multiplicity)));
    levels.push_back({two, n});
  }
  return Representation(std::move(levels));
}

QuantumModel random_model(const Representation& rep, Rng& rng) {
  StateVector s = random_state(rep.dimension(), rng);
  TwoOutcomePovm m = random_effect(rep.dimension(), rng);
  return QuantumModel(rep, std::move(s), std::move(m));
}

double brute_force_min_overlap(const ScenarioParams& params, std::uint64_t n_samples,
                               std::uint64_t seed) {
  const Representation rep = Representation::full(params.j);
  Rng rng(seed);
  double best = 1.0;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    const StateVector s = random_state(rep.dimension(), rng);
    best = std::min(best, overlap_modulus(rep, s, params.alpha));
  }
  return best;
}

}  // namespace spinbound
