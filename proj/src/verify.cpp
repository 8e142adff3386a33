#include "spinbound/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spinbound/certification.hpp"
#include "spinbound/core_sets.hpp"
#include "spinbound/error_models.hpp"
#include "spinbound/parallel.hpp"
#include "spinbound/quantum_models.hpp"
#include "spinbound/rng.hpp"
#include "spinbound/rotation_boxes.hpp"

namespace spinbound {

namespace {

constexpr int kChunk = 500;
// Margin recorded for pass/fail checks so they do not mask the numeric slacks.
constexpr double kAgree = std::numeric_limits<double>::infinity();

// Stream ids keep the suites' random sequences independent of each other.
enum Stream : std::uint64_t {
  kBoxEquivalence = 1,
  kEquivalence = 2,
  kBernstein = 3,
  kFourier = 4,
  kConcavity = 5,
  kInclusion = 6,
};

Rng task_rng(std::uint64_t seed, Stream stream, std::uint64_t task) {
  return Rng::derived(seed, (static_cast<std::uint64_t>(stream) << 40) + task);
}

struct Tally {
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  std::optional<Violation> first;

  // `margin` < -tol is a violation.
  void record(double margin, double tol, const std::string& where, const Correlation& e) {
    ++checks;
    worst = std::min(worst, margin);
    if (margin < -tol) {
      ++violations;
      if (!first) first = Violation{where, e, margin};
    }
  }

  void merge(const Tally& o) {
    checks += o.checks;
    violations += o.violations;
    worst = std::min(worst, o.worst);
    if (!first && o.first) first = o.first;
  }
};

SuiteResult finish(std::string name, const Tally& t) {
  SuiteResult r;
  r.name = std::move(name);
  r.checks = t.checks;
  r.violations = t.violations;
  r.worst_margin = t.checks == 0 ? 0.0 : t.worst;
  r.first_violation = t.first;
  r.passed = t.violations == 0;
  return r;
}

std::string describe(const char* what, int two_j, double alpha) {
  std::ostringstream os;
  os.precision(17);
  os << what << " two_j=" << two_j << " alpha=" << alpha;
  return os.str();
}

template <typename Fn>
Tally run_chunks(int n_groups, int per_group, unsigned threads, Fn&& fn) {
  const int chunks_per_group = (per_group + kChunk - 1) / kChunk;
  const std::size_t n_tasks = static_cast<std::size_t>(n_groups) * chunks_per_group;
  const auto parts = parallel_map<Tally>(n_tasks, threads, [&](std::size_t task) {
    const int group = static_cast<int>(task) / chunks_per_group;
    const int chunk = static_cast<int>(task) % chunks_per_group;
    const int count = std::min(kChunk, per_group - chunk * kChunk);
    return fn(group, task, count);
  });
  Tally total;
  for (const Tally& p : parts) total.merge(p);
  return total;
}

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed; });
}

SuiteResult verify_box_equivalence(const VerifyConfig& cfg) {
  // Boxes of degree n = 2J pushed through the two settings.
  Tally total = run_chunks(cfg.max_two_j, cfg.boxes_per_degree, cfg.threads,
                           [&](int group, std::size_t task, int count) {
    const int n = group + 1;
    const ScenarioParams base{SpinBound(n), Angle(0.0)};
    const double alpha_max = kPi / n;
    Rng rng = task_rng(cfg.seed, kBoxEquivalence, task);
    Tally t;
    for (int b = 0; b < count; ++b) {
      const RotationBoxCoeffs box = sample_valid_box(n, rng);
      const double p0 = std::clamp(eval_box(box, Angle(0.0)), 0.0, 1.0);
      for (int k = 1; k <= cfg.alpha_grid; ++k) {
        const double alpha = alpha_max * k / (cfg.alpha_grid + 1);
        const ScenarioParams params{base.j, Angle(alpha)};
        const double pa = std::clamp(eval_box(box, Angle(alpha)), 0.0, 1.0);
        const Correlation e = Correlation::from_probabilities(p0, pa);
        t.record(overlap_g(e) - overlap_gamma(params), kMembershipTol,
                 describe("box outside Q", n, alpha), e);
      }
    }
    return t;
  });

  // Uniform correlations: overlap and arcsine verdicts agree.
  total.merge(run_chunks(1, cfg.equivalence_samples, cfg.threads,
                         [&](int, std::size_t task, int count) {
    Rng rng = task_rng(cfg.seed, kEquivalence, task);
    Tally t;
    for (int i = 0; i < count; ++i) {
      const int two_j = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.max_two_j)));
      const double alpha = rng.uniform(0.0, kPi / two_j);
      const ScenarioParams params{SpinBound(two_j), Angle(alpha)};
      const Correlation e{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      const bool q = in_quantum_set(e, params, kMembershipTol);
      const bool r = in_rotation_box_set(e, params, kMembershipTol);
      t.record(q == r ? kAgree : -1.0, 0.0, describe("overlap/arcsine disagreement", two_j, alpha), e);
    }
    return t;
  }));

  if (cfg.inject) {
    const ScenarioParams& p = cfg.inject_params;
    const Correlation& e = *cfg.inject;
    Tally t;
    require_in_square(e, "inject");
    t.record(overlap_g(e) - overlap_gamma(p), kMembershipTol,
             describe("injected correlation outside Q", p.j.two_j(), p.alpha.radians), e);
    total.merge(t);
  }
  return finish("box_equivalence", total);
}

SuiteResult verify_bernstein(const VerifyConfig& cfg) {
  const Tally total = run_chunks(cfg.max_two_j, cfg.boxes_per_degree, cfg.threads,
                                 [&](int group, std::size_t task, int count) {
    const int n = group + 1;
    Rng rng = task_rng(cfg.seed, kBernstein, task);
    Tally t;
    for (int b = 0; b < count; ++b) {
      const RotationBoxCoeffs box = sample_valid_box(n, rng);
      const double excess = bernstein_check(box, 64 * n);
      t.record(-excess / (n * n), 1e-9, describe("Bernstein excess", n, 0.0), {});
    }
    return t;
  });
  return finish("bernstein_sweep", total);
}

SuiteResult verify_fourier_degree(const VerifyConfig& cfg) {
  const Tally total = run_chunks(cfg.max_two_j + 1, cfg.models_per_j, cfg.threads,
                                 [&](int two_j, std::size_t task, int count) {
    Rng rng = task_rng(cfg.seed, kFourier, task);
    std::vector<double> angles(static_cast<std::size_t>(cfg.angles_per_model));
    for (int k = 0; k < cfg.angles_per_model; ++k) angles[k] = 2.0 * kPi * k / cfg.angles_per_model;
    Tally t;
    for (int m = 0; m < count; ++m) {
      const Representation rep = random_representation(SpinBound(two_j), cfg.max_multiplicity, rng);
      const QuantumModel model = random_model(rep, rng);
      const RotationBoxCoeffs box = coefficients_from_quantum(model);
      const bool degree_ok = box.effective_degree() <= two_j;
      t.record(degree_ok ? kAgree : -1.0, 0.0, describe("Fourier degree above 2J", two_j, 0.0), {});
      const std::vector<double> born = born_probabilities(model, angles);
      double dev = 0.0;
      Correlation at{};
      for (std::size_t k = 0; k < angles.size(); ++k) {
        const double d = std::abs(eval_box(box, Angle(angles[k])) - born[k]);
        if (d > dev) {
          dev = d;
          at = {angles[k], born[k]};
        }
      }
      t.record(1e-10 - dev, 0.0, describe("series/Born mismatch (angle, P)", two_j, at.e1), at);
    }
    return t;
  });
  return finish("quantum_fourier_degree", total);
}

SuiteResult verify_lemmas(const VerifyConfig& cfg) {
  const int g = cfg.lemma_grid;
  Tally total = run_chunks(1, g, cfg.threads, [&](int, std::size_t task, int count) {
    Tally t;
    const int first = static_cast<int>(task) * kChunk;
    for (int i = first; i < first + count; ++i) {
      const double omega = static_cast<double>(i) / (g - 1);
      for (int k = 0; k < g; ++k) {
        const double x = kHalfPi * k / (g - 1);
        t.record(arccos_shift_margin(omega, x), 2e-15, "arccos shift lemma (omega, x)", {omega, x});
      }
    }
    return t;
  });

  total.merge(run_chunks(1, cfg.lemma_samples, cfg.threads, [&](int, std::size_t task, int count) {
    Rng rng = task_rng(cfg.seed, kConcavity, task);
    Tally t;
    for (int i = 0; i < count; ++i) {
      const double s = rng.uniform();
      const Correlation a{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      const Correlation b{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      t.record(concavity_bound_margin(s, a, b), 1e-12, "entropy concavity bound (t, _)", {s, 0.0});
    }
    return t;
  }));

  total.merge(run_chunks(1, cfg.lemma_samples, cfg.threads, [&](int, std::size_t task, int count) {
    Rng rng = task_rng(cfg.seed, kInclusion, task);
    Tally t;
    for (int i = 0; i < count; ++i) {
      const int two_j = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.max_two_j)));
      const double alpha = rng.uniform(0.02, 0.98) * kPi / two_j;
      const ScenarioParams params{SpinBound(two_j), Angle(alpha)};
      const double omega = rng.uniform(0.0, 0.2);
      Correlation e;
      if (i % 2 == 0) {
        e = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        if (!in_relaxed_quantum_set(e, params, omega, 0.0)) continue;
      } else {
        // Extreme points of the relaxed set: boundary point mixed with a corner.
        const bool lower = rng.uniform() < 0.5;
        const TauInterval iv = lower ? lower_curve_interval(params) : upper_curve_interval(params);
        const double tau = iv.lo + rng.uniform() * iv.length();
        const Correlation q = lower ? boundary_curve_c1(params, tau) : boundary_curve_c2(params, tau);
        const double s1 = rng.uniform() < 0.5 ? -1.0 : 1.0;
        const double s2 = rng.uniform() < 0.5 ? -1.0 : 1.0;
        e = {(1.0 - omega) * q.e1 + omega * s1, (1.0 - omega) * q.e2 + omega * s2};
      }
      const ScenarioParams shifted = relaxed_inclusion_params(params, omega);
      const double margin = shifted.all_correlations()
                                ? 1.0
                                : overlap_g(e) - overlap_gamma(shifted);
      t.record(margin, kMembershipTol, describe("relaxed inclusion lemma", two_j, alpha), e);
    }
    return t;
  }));
  return finish("lemma_grid", total);
}

SuiteResult verify_coherent(const VerifyConfig& cfg) {
  const std::vector<double> kappas{1e-4, 1e-3, 1e-2, 0.05};
  constexpr int kAngles = 9;
  const int n_j = 6;
  const std::size_t n_tasks = static_cast<std::size_t>(n_j) * kAngles * kappas.size();
  const auto parts = parallel_map<Tally>(n_tasks, cfg.threads, [&](std::size_t task) {
    const int two_j = 1 + static_cast<int>(task / (kAngles * kappas.size()));
    const int a = static_cast<int>(task / kappas.size()) % kAngles;
    const double kappa = kappas[task % kappas.size()];
    const double alpha = (a + 1) / 10.0 * kPi / two_j;
    const ScenarioParams params{SpinBound(two_j), Angle(alpha)};
    const InclusionReport rep = error_set_inclusion_check(params, kappa, cfg.coherent_grid);
    Tally t;
    t.record(rep.trivial ? 1.0 : rep.worst_margin, 1e-12,
             describe("error box outside relaxed set", two_j, alpha), rep.worst_point);
    return t;
  });
  Tally total;
  for (const Tally& p : parts) total.merge(p);
  return finish("coherent_inclusion", total);
}

VerifyReport run_verification(const VerifyConfig& cfg) {
  VerifyReport r;
  r.suites.push_back(verify_box_equivalence(cfg));
  r.suites.push_back(verify_bernstein(cfg));
  r.suites.push_back(verify_fourier_degree(cfg));
  r.suites.push_back(verify_lemmas(cfg));
  r.suites.push_back(verify_coherent(cfg));
  return r;
}

}  // namespace spinbound
