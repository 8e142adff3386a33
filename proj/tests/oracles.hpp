#pragma once

// Independent reference computations used only by the tests. None of these
// call the library routine they are compared against.

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "spinbound/quantum_models.hpp"
#include "spinbound/rng.hpp"
#include "spinbound/types.hpp"

namespace oracle {

using spinbound::Correlation;

inline double g_direct(double e1, double e2) {
  return 0.5 * (std::sqrt((1 + e1) * (1 + e2)) + std::sqrt((1 - e1) * (1 - e2)));
}

inline double gamma_direct(int two_j, double alpha) {
  const double ja = 0.5 * two_j * std::abs(alpha);
  return ja < spinbound::kHalfPi ? std::cos(ja) : 0.0;
}

// Largest g(F) - gamma over an n x n grid of the admissible spin-respecting
// parts F, the box [(E - w)/(1 - w), (E + w)/(1 - w)] cut to the square.
// A lower bound on the exact relaxed margin that tightens as n grows.
inline double relaxed_margin_grid(const Correlation& e, int two_j, double alpha, double omega, int n) {
  const double s = 1.0 - omega;
  const double lo1 = std::max(-1.0, (e.e1 - omega) / s);
  const double hi1 = std::min(1.0, (e.e1 + omega) / s);
  const double lo2 = std::max(-1.0, (e.e2 - omega) / s);
  const double hi2 = std::min(1.0, (e.e2 + omega) / s);
  double best = -std::numeric_limits<double>::infinity();
  if (lo1 > hi1 || lo2 > hi2) return best;
  for (int i = 0; i < n; ++i) {
    const double f1 = n == 1 ? lo1 : lo1 + (hi1 - lo1) * i / (n - 1);
    for (int k = 0; k < n; ++k) {
      const double f2 = n == 1 ? lo2 : lo2 + (hi2 - lo2) * k / (n - 1);
      best = std::max(best, g_direct(f1, f2));
    }
  }
  return best - gamma_direct(two_j, alpha);
}

// Boundary of Q from the closed-form P+ parametrisation, n samples per curve,
// plus the diagonal corners.
inline std::vector<Correlation> boundary_points(int two_j, double alpha, int n) {
  const double j = 0.5 * two_j;
  std::vector<Correlation> pts{{1.0, 1.0}, {-1.0, -1.0}};
  const double end = spinbound::kPi / (2.0 * j);
  for (int i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / (n - 1);
    const double t1 = f * (end - alpha);
    const double t2 = alpha + f * (end - alpha);
    pts.push_back({2 * std::pow(std::cos(j * t1), 2) - 1, 2 * std::pow(std::cos(j * (t1 + alpha)), 2) - 1});
    pts.push_back({2 * std::pow(std::cos(j * t2), 2) - 1, 2 * std::pow(std::cos(j * (t2 - alpha)), 2) - 1});
  }
  return pts;
}

inline double h2(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

inline double entropy(const Correlation& e) {
  return 0.5 * (h2(0.5 * (1 + e.e1)) + h2(0.5 * (1 + e.e2)));
}

// Exhaustive Caratheodory search: the cheapest mixture of at most three of
// `pts` (plus the target itself) averaging to e.
inline double caratheodory_min(const Correlation& e, const std::vector<Correlation>& pts,
                               bool target_is_member) {
  const int n = static_cast<int>(pts.size());
  std::vector<double> h(n);
  for (int i = 0; i < n; ++i) h[i] = entropy(pts[i]);
  double best = target_is_member ? entropy(e) : std::numeric_limits<double>::infinity();
  constexpr double kTol = 1e-12;
  for (int i = 0; i < n; ++i) {
    const double ax = pts[i].e1 - e.e1;
    const double ay = pts[i].e2 - e.e2;
    if (std::abs(ax) < kTol && std::abs(ay) < kTol) best = std::min(best, h[i]);
    for (int k = i + 1; k < n; ++k) {
      const double bx = pts[k].e1 - e.e1;
      const double by = pts[k].e2 - e.e2;
      // Segment through e: a and b antiparallel.
      const double cross_ab = ax * by - ay * bx;
      if (std::abs(cross_ab) < kTol && ax * bx + ay * by < 0) {
        const double la = std::hypot(ax, ay);
        const double lb = std::hypot(bx, by);
        const double wa = lb / (la + lb);
        best = std::min(best, wa * h[i] + (1 - wa) * h[k]);
      }
      for (int m = k + 1; m < n; ++m) {
        const double cx = pts[m].e1 - e.e1;
        const double cy = pts[m].e2 - e.e2;
        // Barycentric weights from signed areas.
        const double wa = bx * cy - by * cx;
        const double wb = cx * ay - cy * ax;
        const double wc = cross_ab;
        const double total = wa + wb + wc;
        if (std::abs(total) < 1e-14) continue;
        const double la = wa / total;
        const double lb = wb / total;
        const double lc = wc / total;
        if (la < -kTol || lb < -kTol || lc < -kTol) continue;
        best = std::min(best, la * h[i] + lb * h[k] + lc * h[m]);
      }
    }
  }
  return best;
}

// Upper Poisson tail P(X > n) for X ~ Poisson(x).
inline double poisson_tail(double x, int n) { return boost::math::gamma_p(n + 1.0, x); }

// Correlation of a mixed-state model: tr(rho U^dag M U) at 0 and alpha.
inline Correlation mixed_correlation(const spinbound::Representation& rep, const Eigen::MatrixXcd& rho,
                                     const Eigen::MatrixXcd& m_plus, double alpha) {
  auto prob = [&](double a) {
    Eigen::VectorXcd phase(rep.dimension());
    for (int k = 0; k < rep.dimension(); ++k) {
      const double arg = 0.5 * rep.slot_two_labels()[k] * a;
      phase[k] = {std::cos(arg), std::sin(arg)};
    }
    const Eigen::MatrixXcd u = phase.asDiagonal();
    return (rho * u.adjoint() * m_plus * u).trace().real();
  };
  return Correlation::from_probabilities(prob(0.0), prob(alpha));
}

// Purification of rho on rep (x) C^r via its eigendecomposition.
inline spinbound::QuantumModel purify(const spinbound::Representation& rep, const Eigen::MatrixXcd& rho,
                                      const Eigen::MatrixXcd& m_plus) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  const int d = rep.dimension();
  std::vector<spinbound::Level> levels = rep.levels();
  for (auto& l : levels) l.multiplicity *= d;
  spinbound::Representation big(levels);
  // Slot (level, copy) of rep with ancilla index a maps to (level, copy + n_level * a).
  std::vector<std::vector<int>> map(d, std::vector<int>(d));
  for (std::size_t li = 0; li < rep.levels().size(); ++li) {
    const int n = rep.levels()[li].multiplicity;
    for (int c = 0; c < n; ++c) {
      for (int a = 0; a < d; ++a) map[rep.slot(li, c)][a] = big.slot(li, c + n * a);
    }
  }
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(big.dimension());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(big.dimension(), big.dimension());
  for (int a = 0; a < d; ++a) {
    const double lam = std::max(0.0, es.eigenvalues()[a]);
    for (int s = 0; s < d; ++s) psi[map[s][a]] = std::sqrt(lam) * es.eigenvectors()(s, a);
    for (int s = 0; s < d; ++s) {
      for (int t = 0; t < d; ++t) m(map[s][a], map[t][a]) = m_plus(s, t);
    }
  }
  return spinbound::QuantumModel(big, spinbound::StateVector::normalized(psi), spinbound::TwoOutcomePovm(m));
}

inline Eigen::MatrixXcd random_density(int d, int rank, spinbound::Rng& rng) {
  Eigen::MatrixXcd g(d, rank);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < rank; ++c) g(r, c) = {rng.normal(), rng.normal()};
  }
  Eigen::MatrixXcd rho = g * g.adjoint();
  return rho / rho.trace().real();
}

// Fourier coefficient magnitudes |a_l| of P(alpha) from n equally spaced samples.
template <typename Fn>
std::vector<double> dft_magnitudes(Fn&& p, int n) {
  std::vector<double> out(n / 2);
  for (int l = 0; l < n / 2; ++l) {
    std::complex<double> acc = 0.0;
    for (int k = 0; k < n; ++k) {
      const double a = 2.0 * spinbound::kPi * k / n;
      acc += p(a) * std::polar(1.0, -l * a);
    }
    out[l] = std::abs(acc) / n;
  }
  return out;
}

}  // namespace oracle
