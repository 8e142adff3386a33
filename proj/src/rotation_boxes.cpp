#include "spinbound/rotation_boxes.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace spinbound {

using cd = std::complex<double>;

namespace {

constexpr double kValidityTol = 1e-10;

// sum_k w(k) (c_k cos k a + s_k sin k a) with w(k) = (k)^order * sign pattern
// of the order-th derivative.
double eval_series(const RotationBoxCoeffs& box, double a, int order) {
  const cd z(std::cos(a), std::sin(a));
  cd zk(1.0, 0.0);
  double acc = order == 0 ? box.c(0) : 0.0;
  for (int k = 1; k <= box.degree(); ++k) {
    zk *= z;
    // Periodic re-anchoring keeps the power recurrence accurate.
    if (k % 8 == 0) zk = cd(std::cos(k * a), std::sin(k * a));
    const double ck = box.c(k);
    const double sk = box.s(k);
    const double kk = static_cast<double>(k);
    switch (order) {
      case 0: acc += ck * zk.real() + sk * zk.imag(); break;
      case 1: acc += kk * (-ck * zk.imag() + sk * zk.real()); break;
      default: acc += -kk * kk * (ck * zk.real() + sk * zk.imag()); break;
    }
  }
  return acc;
}

std::vector<cd> to_exponential(const RotationBoxCoeffs& b) {
  const int n = b.degree();
  std::vector<cd> a(static_cast<std::size_t>(2 * n + 1));
  a[n] = b.c(0);
  for (int k = 1; k <= n; ++k) {
    a[n + k] = cd(b.c(k), -b.s(k)) * 0.5;
    a[n - k] = cd(b.c(k), b.s(k)) * 0.5;
  }
  return a;
}

RotationBoxCoeffs from_exponential(const std::vector<cd>& a) {
  const int n = static_cast<int>(a.size() - 1) / 2;
  std::vector<double> c(static_cast<std::size_t>(n + 1));
  std::vector<double> s(static_cast<std::size_t>(n));
  c[0] = a[n].real();
  for (int k = 1; k <= n; ++k) {
    const cd sym = 0.5 * (a[n + k] + std::conj(a[n - k]));
    c[k] = 2.0 * sym.real();
    s[k - 1] = -2.0 * sym.imag();
  }
  return RotationBoxCoeffs(std::move(c), std::move(s));
}

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  return a < 0.0 ? a + 2.0 * kPi : a;
}

}  // namespace

RotationBoxCoeffs::RotationBoxCoeffs(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs) {
  if (cos_coeffs.empty()) cos_coeffs.push_back(0.0);
  const std::size_t n = std::max(cos_coeffs.size() - 1, sin_coeffs.size());
  cos_coeffs.resize(n + 1, 0.0);
  sin_ = std::vector<double>(n + 1, 0.0);
  std::copy(sin_coeffs.begin(), sin_coeffs.end(), sin_.begin() + 1);
  cos_ = std::move(cos_coeffs);
}

int RotationBoxCoeffs::effective_degree() const {
  for (int k = degree(); k > 0; --k) {
    if (cos_[k] != 0.0 || sin_[k] != 0.0) return k;
  }
  return 0;
}

double eval_box(const RotationBoxCoeffs& box, Angle alpha) { return eval_series(box, alpha.radians, 0); }

double eval_box_derivative(const RotationBoxCoeffs& box, Angle alpha) {
  return eval_series(box, alpha.radians, 1);
}

BoxRange validate_box(const RotationBoxCoeffs& box) {
  std::vector<double> candidates{0.0};

  double scale = 0.0;
  for (int k = 1; k <= box.degree(); ++k) scale = std::max({scale, std::abs(box.c(k)), std::abs(box.s(k))});
  int n = box.degree();
  while (n > 0 && std::max(std::abs(box.c(n)), std::abs(box.s(n))) <= 1e-14 * scale) --n;

  if (n > 0) {
    candidates.push_back(kPi);
    // With t = tan(alpha/2), e^{ik alpha} = (1+it)^{2k} / (1+t^2)^k, so
    // (1+t^2)^n P'(alpha) = sum_k k Re[(s_k + i c_k)(1+it)^{2k}] (1+t^2)^{n-k}
    // is a real polynomial of degree <= 2n. alpha = pi (t = inf) is added
    // above because a vanishing leading coefficient hides it.
    const int m = 2 * n;
    std::vector<double> q(static_cast<std::size_t>(m + 1), 0.0);
    std::vector<cd> rise{cd(1.0, 0.0)};                // (1+it)^{2k}
    std::vector<std::vector<double>> lift(n + 1);  // (1+t^2)^j
    lift[0] = {1.0};
    for (int j = 1; j <= n; ++j) {
      lift[j].assign(static_cast<std::size_t>(2 * j + 1), 0.0);
      for (std::size_t i = 0; i < lift[j - 1].size(); ++i) {
        lift[j][i] += lift[j - 1][i];
        lift[j][i + 2] += lift[j - 1][i];
      }
    }
    for (int k = 1; k <= n; ++k) {
      std::vector<cd> next(rise.size() + 2, cd(0.0, 0.0));
      for (std::size_t i = 0; i < rise.size(); ++i) {
        next[i] += rise[i];
        next[i + 1] += rise[i] * cd(0.0, 2.0);
        next[i + 2] -= rise[i];
      }
      rise = std::move(next);
      const cd w = static_cast<double>(k) * cd(box.s(k), box.c(k));
      const std::vector<double>& l = lift[n - k];
      for (std::size_t i = 0; i < rise.size(); ++i) {
        const double re = (w * rise[i]).real();
        if (re == 0.0) continue;
        for (std::size_t j = 0; j < l.size(); ++j) q[i + j] += re * l[j];
      }
    }
    double qscale = 0.0;
    for (double x : q) qscale = std::max(qscale, std::abs(x));
    int deg = m;
    while (deg > 0 && std::abs(q[deg]) <= 1e-13 * qscale) --deg;

    if (deg > 0) {
      Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
      for (int j = 0; j < deg; ++j) companion(0, j) = -q[deg - 1 - j] / q[deg];
      for (int r = 1; r < deg; ++r) companion(r, r - 1) = 1.0;
      Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);

      // Every root yields a legitimate evaluation angle, so complex roots
      // cannot spoil the extrema; the angles are Newton-polished on P'.
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double theta = wrap_angle(2.0 * std::atan(es.eigenvalues()[i].real()));
        candidates.push_back(theta);
        double a = theta;
        double d1 = eval_series(box, a, 1);
        for (int it = 0; it < 8 && d1 != 0.0; ++it) {
          const double d2 = eval_series(box, a, 2);
          if (d2 == 0.0) break;
          const double step = d1 / d2;
          if (!std::isfinite(step) || std::abs(step) > 1e-3) break;
          const double d1n = eval_series(box, a - step, 1);
          if (std::abs(d1n) >= std::abs(d1)) break;
          a -= step;
          d1 = d1n;
        }
        if (a != theta) candidates.push_back(wrap_angle(a));
      }
    }
  }

  BoxRange out;
  out.min_value = out.max_value = eval_series(box, candidates.front(), 0);
  out.argmin = out.argmax = candidates.front();
  for (double a : candidates) {
    const double v = eval_series(box, a, 0);
    if (v < out.min_value) {
      out.min_value = v;
      out.argmin = a;
    }
    if (v > out.max_value) {
      out.max_value = v;
      out.argmax = a;
    }
  }
  out.valid = out.min_value >= -kValidityTol && out.max_value <= 1.0 + kValidityTol;
  return out;
}

double bernstein_check(const RotationBoxCoeffs& box, int grid) {
  if (grid < 1) throw DomainError("bernstein_check: grid must be positive");
  if (!validate_box(box).valid) throw DomainError("bernstein_check: box is not valid");
  const double n = box.degree();
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double a = 2.0 * kPi * i / grid;
    const double t = 2.0 * eval_series(box, a, 0) - 1.0;
    const double dt = 2.0 * eval_series(box, a, 1);
    worst = std::max(worst, dt * dt + n * n * t * t - n * n);
  }
  return worst;
}

RotationBoxCoeffs coefficients_from_quantum(const QuantumModel& model) {
  const auto& labels = model.rep.slot_two_labels();
  const ComplexVector& phi = model.state.amplitudes();
  const ComplexMatrix& m = model.povm.m_plus();
  const int spread = model.rep.label_spread();
  const int d = model.rep.dimension();

  // a[l + spread] accumulates sum over j' - j = l; labels share a parity so
  // the difference of the doubled labels is even.
  std::vector<cd> a(static_cast<std::size_t>(2 * spread + 1), cd(0.0, 0.0));
  for (int r = 0; r < d; ++r) {
    if (phi[r] == cd(0.0, 0.0)) continue;
    const cd bra = std::conj(phi[r]);
    for (int c = 0; c < d; ++c) {
      if (phi[c] == cd(0.0, 0.0)) continue;
      const int l = (labels[c] - labels[r]) / 2;
      a[l + spread] += bra * m(r, c) * phi[c];
    }
  }
  for (int l = 0; l <= spread; ++l) {
    if (std::abs(a[spread + l] - std::conj(a[spread - l])) > 1e-12) {
      throw std::logic_error("coefficients_from_quantum: a_l != conj(a_-l)");
    }
  }
  return from_exponential(a);
}

RotationBoxCoeffs compose_boxes(const RotationBoxCoeffs& b1, const RotationBoxCoeffs& b2) {
  const std::vector<cd> a1 = to_exponential(b1);
  const std::vector<cd> a2 = to_exponential(b2);
  std::vector<cd> prod(a1.size() + a2.size() - 1, cd(0.0, 0.0));
  for (std::size_t i = 0; i < a1.size(); ++i) {
    for (std::size_t j = 0; j < a2.size(); ++j) prod[i + j] += a1[i] * a2[j];
  }
  return from_exponential(prod);
}

bool in_R_half(const HalfSpinBoxParams& p, double tol) {
  if (p.c0 < -tol || p.c0 > 1.0 + tol) return false;
  const double r2 = p.c1 * p.c1 + p.s1 * p.s1;
  const double bound = p.c0 <= 0.5 ? p.c0 : 1.0 - p.c0;
  return r2 <= bound * bound + tol;
}

QuantumModel half_box_constant_model(bool always_plus) {
  // Labels -1/2 (slot 0) and +1/2 (slot 1); the state sits in +1/2.
  Representation rep = Representation::full(SpinBound(1));
  ComplexVector up = ComplexVector::Zero(2);
  up[1] = 1.0;
  ComplexVector effect_vec = ComplexVector::Zero(2);
  effect_vec[always_plus ? 1 : 0] = 1.0;
  return QuantumModel(std::move(rep), StateVector(up), TwoOutcomePovm::projector(effect_vec));
}

QuantumModel half_box_circle_model(double tau) {
  Representation rep = Representation::full(SpinBound(1));
  ComplexVector phi(2);
  phi[0] = phi[1] = 1.0 / std::sqrt(2.0);
  StateVector base(phi);
  StateVector shifted = rotate(rep, base, Angle(-tau));
  return QuantumModel(std::move(rep), std::move(shifted), TwoOutcomePovm::projector(phi));
}

std::vector<WeightedModel> quantum_model_for_half_box(const HalfSpinBoxParams& p) {
  if (!in_R_half(p)) throw DomainError("quantum_model_for_half_box: not a valid degree-one box");
  const double c0 = std::clamp(p.c0, 0.0, 1.0);
  const double r = std::hypot(p.c1, p.s1);
  const double theta = std::atan2(p.s1, p.c1);

  // Below c0 = 1/2 the box is a mixture of the constant 0 and the disc at
  // c0 = 1/2; above, of the constant 1 and that disc. A disc point of radius
  // rho <= 1/2 is the even mixture of the circle points theta +- acos(2 rho).
  const bool low = c0 <= 0.5;
  const double disc_weight = low ? 2.0 * c0 : 2.0 * (1.0 - c0);
  const double constant_weight = 1.0 - disc_weight;

  std::vector<WeightedModel> out;
  if (r == 0.0) {
    // Constant boxes split between the two constant models.
    if (c0 < 1.0) out.push_back({1.0 - c0, half_box_constant_model(false)});
    if (c0 > 0.0) out.push_back({c0, half_box_constant_model(true)});
    return out;
  }
  if (constant_weight > 0.0) out.push_back({constant_weight, half_box_constant_model(!low)});
  if (disc_weight > 0.0) {
    const double cos_delta = std::clamp(r / (0.5 * disc_weight), -1.0, 1.0);
    const double delta = std::acos(cos_delta);
    if (delta == 0.0) {
      out.push_back({disc_weight, half_box_circle_model(theta)});
    } else {
      out.push_back({0.5 * disc_weight, half_box_circle_model(theta + delta)});
      out.push_back({0.5 * disc_weight, half_box_circle_model(theta - delta)});
    }
  }
  return out;
}

RotationBoxCoeffs sample_valid_box(int degree, Rng& rng) {
  if (degree < 0) throw DomainError("sample_valid_box: negative degree");
  if (degree == 0) return RotationBoxCoeffs::constant(rng.uniform());

  std::vector<double> c(static_cast<std::size_t>(degree + 1));
  std::vector<double> s(static_cast<std::size_t>(degree));
  for (double& x : c) x = rng.normal();
  for (double& x : s) x = rng.normal();
  RotationBoxCoeffs raw(c, s);
  const BoxRange range = validate_box(raw);
  const double width = range.max_value - range.min_value;
  if (!(width > 0.0)) return RotationBoxCoeffs::constant(rng.uniform());

  // Skewed towards wide ranges so extreme boxes are well represented.
  const double span = std::pow(rng.uniform(), 0.25) * (1.0 - 1e-12);
  const double lo = rng.uniform() * (1.0 - span);
  const double scale = span / width;
  c[0] = lo + (c[0] - range.min_value) * scale;
  for (std::size_t k = 1; k < c.size(); ++k) c[k] *= scale;
  for (double& x : s) x *= scale;
  return RotationBoxCoeffs(std::move(c), std::move(s));
}

RotationBoxCoeffs sample_valid_box(int degree, std::uint64_t seed) {
  Rng rng(seed);
  return sample_valid_box(degree, rng);
}

}  // namespace spinbound
