#include "spinbound/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>

#include "spinbound/certification.hpp"
#include "spinbound/core_sets.hpp"
#include "spinbound/error_models.hpp"
#include "spinbound/parallel.hpp"
#include "spinbound/quantum_models.hpp"
#include "spinbound/verify.hpp"

namespace spinbound::cli {

namespace {

using json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  int two_j = 2;
  double alpha = 0.66;
  bool degrees = false;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string out;
  std::string config;
  int threads = 0;
  bool timing = false;

  double epsilon = 0.0;
  double omega = 0.0;
  int grid = 0;
  std::uint64_t samples = 0;

  std::vector<double> deltas{0.15, 0.3};
  std::optional<double> e1;
  std::optional<double> e2;
  std::optional<double> tau;
  std::string branch = "lower";

  int models = 200;
  int angles = 100;
  int lemma_grid = 300;
  std::uint64_t lemma_samples = 20000;
  int max_two_j = 8;
  std::optional<double> inject_e1;
  std::optional<double> inject_e2;

  double beta_sq = 1.0;
  int n_max = 10;

  ScenarioParams params() const { return {SpinBound(two_j), Angle(alpha)}; }
};

// One configurable key: registered with CLI11 and settable from the JSON
// config file under the same name. Keys absent from the schema are rejected.
struct Field {
  std::string name;
  std::function<void(const json&)> set;
  std::function<json()> get;
  bool echo = true;
};

class Schema {
 public:
  explicit Schema(CLI::App* app) : app_(app) {}

  void number(const std::string& name, double& ref, const std::string& desc) {
    app_->add_option("--" + name, ref, desc)->capture_default_str();
    add(name, [&ref, name](const json& v) { ref = as_number(v, name); }, [&ref] { return json(ref); });
  }

  void integer(const std::string& name, int& ref, const std::string& desc, bool echo = true) {
    app_->add_option("--" + name, ref, desc)->capture_default_str();
    add(
        name,
        [&ref, name](const json& v) {
          if (!v.is_number_integer()) throw ConfigError("config key '" + name + "': expected integer");
          ref = v.get<int>();
        },
        [&ref] { return json(ref); }, echo);
  }

  void count(const std::string& name, std::uint64_t& ref, const std::string& desc) {
    app_->add_option("--" + name, ref, desc)->capture_default_str();
    add(
        name,
        [&ref, name](const json& v) {
          if (!v.is_number_integer() || v.get<long long>() < 0) {
            throw ConfigError("config key '" + name + "': expected non-negative integer");
          }
          ref = v.get<std::uint64_t>();
        },
        [&ref] { return json(ref); });
  }

  void text(const std::string& name, std::string& ref, const std::string& desc, bool echo = true) {
    app_->add_option("--" + name, ref, desc)->capture_default_str();
    add(
        name,
        [&ref, name](const json& v) {
          if (!v.is_string()) throw ConfigError("config key '" + name + "': expected string");
          ref = v.get<std::string>();
        },
        [&ref] { return json(ref); }, echo);
  }

  void flag(const std::string& name, bool& ref, const std::string& desc, bool echo = true) {
    app_->add_flag("--" + name, ref, desc);
    add(
        name,
        [&ref, name](const json& v) {
          if (!v.is_boolean()) throw ConfigError("config key '" + name + "': expected boolean");
          ref = v.get<bool>();
        },
        [&ref] { return json(ref); }, echo);
  }

  void optional_number(const std::string& name, std::optional<double>& ref, const std::string& desc) {
    app_->add_option_function<double>("--" + name, [&ref](double v) { ref = v; }, desc);
    add(name, [&ref, name](const json& v) { ref = as_number(v, name); },
        [&ref] { return ref ? json(*ref) : json(nullptr); });
  }

  void number_list(const std::string& name, std::vector<double>& ref, const std::string& desc) {
    app_->add_option("--" + name, ref, desc)->delimiter(',')->capture_default_str();
    add(
        name,
        [&ref, name](const json& v) {
          if (!v.is_array()) throw ConfigError("config key '" + name + "': expected array");
          std::vector<double> out;
          for (const json& x : v) out.push_back(as_number(x, name));
          ref = std::move(out);
        },
        [&ref] { return json(ref); });
  }

  /// Values given on the command line take precedence over the file.
  void apply(const json& cfg) const {
    if (!cfg.is_object()) throw ConfigError("config file must hold a JSON object");
    for (const auto& [key, value] : cfg.items()) {
      const auto it = std::find_if(fields_.begin(), fields_.end(),
                                   [&](const Field& f) { return f.name == key; });
      if (it == fields_.end()) throw ConfigError("unknown config key '" + key + "'");
      if (app_->count("--" + key) > 0) continue;
      it->set(value);
    }
  }

  json echo() const {
    json j = json::object();
    for (const Field& f : fields_) {
      if (f.echo) j[f.name] = f.get();
    }
    return j;
  }

 private:
  static double as_number(const json& v, const std::string& name) {
    if (!v.is_number()) throw ConfigError("config key '" + name + "': expected number");
    return v.get<double>();
  }

  void add(const std::string& name, std::function<void(const json&)> set, std::function<json()> get,
           bool echo = true) {
    fields_.push_back({name, std::move(set), std::move(get), echo});
  }

  CLI::App* app_;
  std::vector<Field> fields_;
};

struct Output {
  std::string body;
  int code = kExitOk;
};

enum class Command { boundary, certify, verify, coherent, simulate };

struct CommandSpec {
  Command kind;
  std::string name;
  CLI::App* app = nullptr;
  Options opts;
  std::unique_ptr<Schema> schema;
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void validate_common(const Options& o, std::initializer_list<const char*> formats) {
  require(o.two_j >= 0 && o.two_j <= 200, "two-j must lie in [0, 200]");
  require(std::isfinite(o.alpha), "alpha must be finite");
  require(o.threads >= 0, "threads must be >= 0");
  require(std::any_of(formats.begin(), formats.end(), [&](const char* f) { return o.format == f; }),
          "unsupported format '" + o.format + "' for this command");
}

void validate_branch(const Options& o) {
  require(o.branch == "lower" || o.branch == "upper", "branch must be 'lower' or 'upper'");
}

CurveBranch branch_of(const Options& o) {
  return o.branch == "lower" ? CurveBranch::lower : CurveBranch::upper;
}

double default_tau(const ScenarioParams& p, CurveBranch b) {
  const TauInterval iv = b == CurveBranch::lower ? lower_curve_interval(p) : upper_curve_interval(p);
  return 0.5 * (iv.lo + iv.hi);
}

struct Estimate {
  Correlation exact;
  Correlation estimate;
  OutcomeCounts at_zero;
  OutcomeCounts at_alpha;
};

Estimate estimate_correlation(const QuantumModel& model, const ScenarioParams& p, std::uint64_t n,
                              std::uint64_t seed) {
  Estimate e;
  e.exact = correlation_of(model, p);
  e.at_zero = sample_outcomes(model, Angle(0.0), n, Rng::derived(seed, 0).next_u64());
  e.at_alpha = sample_outcomes(model, p.alpha, n, Rng::derived(seed, 1).next_u64());
  const double dn = static_cast<double>(n);
  e.estimate = Correlation::from_probabilities(e.at_zero.plus / dn, e.at_alpha.plus / dn);
  return e;
}

json counts_json(const OutcomeCounts& c) { return json{{"plus", c.plus}, {"minus", c.minus}}; }

json point_json(const Correlation& e) { return json{{"e1", e.e1}, {"e2", e.e2}}; }

// ---------------------------------------------------------------------------
// boundary

struct Row {
  double e1;
  double e2;
  std::string label;
};

Output cmd_boundary(const CommandSpec& cmd, json& report, std::vector<std::string>& notices) {
  const Options& o = cmd.opts;
  validate_common(o, {"csv", "json"});
  require(o.grid >= 2, "grid must be >= 2");
  for (double d : o.deltas) require(d >= 0.0 && d < 1.0, "every delta must lie in [0,1)");

  const ScenarioParams p{SpinBound(o.two_j), Angle(std::abs(o.alpha))};
  std::vector<Row> rows;
  const double ja = p.abs_j_alpha();
  if (ja >= kHalfPi) {
    notices.push_back("J*alpha >= pi/2: every correlation is attainable; emitting the full square");
    for (const Correlation& c : std::vector<Correlation>{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}, {-1, -1}}) {
      rows.push_back({c.e1, c.e2, "square"});
    }
  } else if (ja == 0.0) {
    notices.push_back("J*alpha = 0: the quantum and classical sets are the diagonal");
    rows.push_back({-1.0, -1.0, "classical"});
    rows.push_back({1.0, 1.0, "classical"});
  } else {
    const TauInterval i1 = lower_curve_interval(p);
    const TauInterval i2 = upper_curve_interval(p);
    std::vector<Correlation> c1;
    std::vector<Correlation> c2;
    for (int i = 0; i < o.grid; ++i) {
      const double f = static_cast<double>(i) / (o.grid - 1);
      c1.push_back(boundary_curve_c1(p, i1.lo + f * i1.length()));
      c2.push_back(boundary_curve_c2(p, i2.lo + f * i2.length()));
    }
    for (const auto& c : c1) rows.push_back({c.e1, c.e2, "c1"});
    for (const auto& c : c2) rows.push_back({c.e1, c.e2, "c2"});
    rows.push_back({-1.0, -1.0, "classical"});
    rows.push_back({1.0, 1.0, "classical"});
    for (double d : o.deltas) {
      const std::string tag = short_fmt(d);
      for (const auto& c : c1) {
        rows.push_back({(1.0 - d) * c.e1 + d, (1.0 - d) * c.e2 - d, "relaxed_quantum_lower_" + tag});
      }
      for (const auto& c : c2) {
        rows.push_back({(1.0 - d) * c.e1 - d, (1.0 - d) * c.e2 + d, "relaxed_quantum_upper_" + tag});
      }
      rows.push_back({-1.0 + 2.0 * d, -1.0, "relaxed_classical_lower_" + tag});
      rows.push_back({1.0, 1.0 - 2.0 * d, "relaxed_classical_lower_" + tag});
      rows.push_back({-1.0, -1.0 + 2.0 * d, "relaxed_classical_upper_" + tag});
      rows.push_back({1.0 - 2.0 * d, 1.0, "relaxed_classical_upper_" + tag});
    }
  }

  Output out;
  if (o.format == "csv") {
    std::string body = "e1,e2,label\n";
    for (const Row& r : rows) body += fmt(r.e1) + "," + fmt(r.e2) + "," + r.label + "\n";
    out.body = body;
    return out;
  }
  json polylines = json::array();
  for (const Row& r : rows) {
    if (polylines.empty() || polylines.back()["label"] != r.label) {
      polylines.push_back(json{{"label", r.label}, {"points", json::array()}});
    }
    polylines.back()["points"].push_back(json::array({r.e1, r.e2}));
  }
  report["results"] = json{{"polylines", std::move(polylines)}};
  return out;
}

// ---------------------------------------------------------------------------
// certify

Output cmd_certify(const CommandSpec& cmd, json& report, std::ostream& err) {
  const Options& o = cmd.opts;
  validate_common(o, {"json"});
  validate_branch(o);
  require(o.grid >= 16, "grid must be >= 16");
  require(o.epsilon >= 0.0 && o.epsilon < 1.0, "epsilon must lie in [0,1)");
  require(o.omega >= 0.0 && o.omega < 1.0, "omega must lie in [0,1)");
  require(o.e1.has_value() == o.e2.has_value(), "give both e1 and e2");
  require(o.e1.has_value() != o.tau.has_value(), "give either a target (e1, e2) or a model (tau)");

  const ScenarioParams p = o.params();
  const ErrorBudget budget(o.epsilon, o.omega);
  json target;
  Correlation e;
  if (o.e1) {
    e = {*o.e1, *o.e2};
    require(e.in_square(), "target must lie in [-1,1]^2");
    target = json{{"source", "direct"}, {"e1", e.e1}, {"e2", e.e2}};
  } else {
    const QuantumModel model = extremal_model(p, *o.tau, branch_of(o));
    if (o.samples > 0) {
      const Estimate est = estimate_correlation(model, p, o.samples, o.seed);
      e = est.estimate;
      target = json{{"source", "sampled"},       {"e1", e.e1},
                    {"e2", e.e2},                {"exact", point_json(est.exact)},
                    {"samples", o.samples},      {"counts_zero", counts_json(est.at_zero)},
                    {"counts_alpha", counts_json(est.at_alpha)}};
    } else {
      e = correlation_of(model, p);
      target = json{{"source", "model"}, {"e1", e.e1}, {"e2", e.e2}};
    }
  }

  const CertificationResult res = certify_hstar(e, p, budget, o.grid);
  json results;
  results["target"] = target;
  Output out;
  if (res.status == CertificationStatus::infeasible) {
    results["status"] = "infeasible";
    results["error"] = "target lies outside the relaxed quantum set and epsilon = 0";
    err << "certify: target (" << fmt(e.e1) << ", " << fmt(e.e2)
        << ") lies outside the relaxed quantum set and epsilon = 0\n";
    report["results"] = std::move(results);
    out.code = kExitInfeasible;
    return out;
  }
  results["status"] = "optimal";
  results["h_star"] = res.h_star;
  results["entropy_of_target"] = entropy_H(e);
  results["grid"] = res.grid_resolution;
  json ensemble = json::array();
  for (const auto& en : res.ensemble.entries) {
    ensemble.push_back(json{{"weight", en.weight}, {"e1", en.point.e1}, {"e2", en.point.e2}, {"free", en.free}});
  }
  results["ensemble"] = std::move(ensemble);

  const RobustBound rb = hstar_robust_lower_bound(p, budget, [&](Angle a) {
    const CertificationResult r = certify_hstar(e, {p.j, a}, ErrorBudget(0.0, 0.0), o.grid);
    return r.status == CertificationStatus::optimal ? r.h_star : 0.0;
  });
  results["robust_lower_bound"] =
      json{{"value", rb.value}, {"vacuous", rb.vacuous}, {"shifted_alpha", rb.shifted_alpha}};
  results["diagnostics"] = json{{"candidates", res.diagnostics.candidates},
                                {"iterations", res.diagnostics.iterations},
                                {"residual", res.diagnostics.residual},
                                {"free_mass", res.diagnostics.free_mass},
                                {"target_is_candidate", res.diagnostics.target_is_candidate}};
  report["results"] = std::move(results);
  return out;
}

// ---------------------------------------------------------------------------
// verify

Output cmd_verify(const CommandSpec& cmd, json& report) {
  const Options& o = cmd.opts;
  validate_common(o, {"json"});
  require(o.samples >= 1 && o.samples <= 100000000, "samples must lie in [1, 1e8]");
  require(o.models >= 1 && o.angles >= 1, "models and angles must be >= 1");
  require(o.lemma_grid >= 2 && o.lemma_samples >= 1, "lemma-grid must be >= 2, lemma-samples >= 1");
  require(o.grid >= 2, "grid must be >= 2");
  require(o.max_two_j >= 1 && o.max_two_j <= 16, "max-two-j must lie in [1, 16]");
  require(o.inject_e1.has_value() == o.inject_e2.has_value(), "give both inject-e1 and inject-e2");

  VerifyConfig cfg;
  cfg.seed = o.seed;
  cfg.threads = static_cast<unsigned>(o.threads);
  cfg.boxes_per_degree = static_cast<int>(o.samples);
  cfg.max_two_j = o.max_two_j;
  cfg.models_per_j = o.models;
  cfg.angles_per_model = o.angles;
  cfg.lemma_grid = o.lemma_grid;
  cfg.lemma_samples = static_cast<int>(o.lemma_samples);
  cfg.coherent_grid = o.grid;
  cfg.equivalence_samples = 10 * static_cast<int>(o.samples);
  if (o.inject_e1) {
    const Correlation inj{*o.inject_e1, *o.inject_e2};
    require(inj.in_square(), "injected correlation must lie in [-1,1]^2");
    cfg.inject = inj;
    cfg.inject_params = o.params();
  }

  const VerifyReport rep = run_verification(cfg);
  json suites = json::array();
  for (const SuiteResult& s : rep.suites) {
    json js{{"name", s.name},
            {"passed", s.passed},
            {"checks", s.checks},
            {"violations", s.violations},
            {"worst_margin", s.worst_margin}};
    if (s.first_violation) {
      js["first_violation"] = json{{"where", s.first_violation->where},
                                   {"e1", s.first_violation->point.e1},
                                   {"e2", s.first_violation->point.e2},
                                   {"value", s.first_violation->value}};
    }
    suites.push_back(std::move(js));
  }
  report["results"] = json{{"all_passed", rep.all_passed()}, {"suites", std::move(suites)}};
  Output out;
  out.code = rep.all_passed() ? kExitOk : kExitVerifyFailed;
  return out;
}

// ---------------------------------------------------------------------------
// coherent

struct CoherentRow {
  int n_cut = 0;
  double eta = 0.0;
  double kappa = 0.0;
  std::optional<double> delta;
  std::optional<InclusionReport> inclusion;
};

Output cmd_coherent(const CommandSpec& cmd, json& report) {
  const Options& o = cmd.opts;
  validate_common(o, {"csv", "json"});
  require(o.beta_sq >= 0.0 && std::isfinite(o.beta_sq), "beta-sq must be >= 0");
  require(o.n_max >= 0 && o.n_max <= 10000, "n-max must lie in [0, 10000]");
  require(o.grid >= 2, "grid must be >= 2");
  const ScenarioParams p = o.params();
  require(p.abs_j_alpha() > 0.0 && p.abs_j_alpha() < kHalfPi, "coherent requires 0 < |J*alpha| < pi/2");

  const auto rows = parallel_map<CoherentRow>(static_cast<std::size_t>(o.n_max + 1),
                                              static_cast<unsigned>(o.threads), [&](std::size_t n) {
    CoherentRow r;
    r.n_cut = static_cast<int>(n);
    r.eta = truncation_eta(CoherentParams(o.beta_sq, r.n_cut));
    r.kappa = kappa_from_eta(r.eta);
    if (r.kappa < 1.0) {
      r.delta = delta_inflation(r.kappa, p);
      r.inclusion = error_set_inclusion_check(p, r.kappa, o.grid);
    }
    return r;
  });

  Output out;
  if (o.format == "csv") {
    std::string body = "n_cut,eta,kappa,delta,worst_margin,included\n";
    for (const CoherentRow& r : rows) {
      body += std::to_string(r.n_cut) + "," + fmt(r.eta) + "," + fmt(r.kappa) + ",";
      body += (r.delta ? fmt(*r.delta) : "") + ",";
      if (r.inclusion && !r.inclusion->trivial) {
        body += fmt(r.inclusion->worst_margin) + "," + (r.inclusion->included ? "true" : "false");
      } else {
        body += ",true";
      }
      body += "\n";
    }
    out.body = body;
    return out;
  }
  json table = json::array();
  for (const CoherentRow& r : rows) {
    json jr{{"n_cut", r.n_cut}, {"eta", r.eta}, {"kappa", r.kappa}};
    jr["delta"] = r.delta ? json(*r.delta) : json(nullptr);
    if (r.inclusion) {
      jr["worst_margin"] = r.inclusion->trivial ? json(nullptr) : json(r.inclusion->worst_margin);
      jr["included"] = r.inclusion->included;
      jr["trivial"] = r.inclusion->trivial;
      jr["outer_points"] = r.inclusion->outer_points;
    } else {
      jr["worst_margin"] = nullptr;
      jr["included"] = true;
      jr["trivial"] = true;
      jr["outer_points"] = 0;
    }
    table.push_back(std::move(jr));
  }
  report["results"] = json{{"rows", std::move(table)}};
  return out;
}

// ---------------------------------------------------------------------------
// simulate

Output cmd_simulate(const CommandSpec& cmd, json& report) {
  const Options& o = cmd.opts;
  validate_common(o, {"json"});
  validate_branch(o);
  require(o.samples >= 1, "samples must be >= 1");
  const ScenarioParams p = o.params();
  const CurveBranch b = branch_of(o);
  const double tau = o.tau ? *o.tau : default_tau(p, b);
  const QuantumModel model = extremal_model(p, tau, b);
  const Estimate est = estimate_correlation(model, p, o.samples, o.seed);
  const double n = static_cast<double>(o.samples);
  auto stderr_of = [n](double e) { return std::sqrt(std::max(0.0, 1.0 - e * e) / n); };

  report["results"] = json{
      {"model", json{{"branch", o.branch}, {"tau", tau}, {"dimension", model.rep.dimension()}}},
      {"exact", point_json(est.exact)},
      {"counts_zero", counts_json(est.at_zero)},
      {"counts_alpha", counts_json(est.at_alpha)},
      {"estimate", point_json(est.estimate)},
      {"standard_error", json{{"e1", stderr_of(est.exact.e1)}, {"e2", stderr_of(est.exact.e2)}}},
      {"estimate_in_quantum_set", in_quantum_set(est.estimate, p)},
  };
  return {};
}

// ---------------------------------------------------------------------------

void register_common(Schema& s, Options& o) {
  s.integer("two-j", o.two_j, "twice the spin bound J");
  s.number("alpha", o.alpha, "rotation angle (radians unless --degrees)");
  s.flag("degrees", o.degrees, "read --alpha in degrees");
  s.count("seed", o.seed, "random seed");
  s.text("format", o.format, "output format: json or csv");
  s.text("out", o.out, "output file (default: standard output)", false);
  s.integer("threads", o.threads, "worker threads (0 = hardware concurrency)", false);
  s.flag("timing", o.timing, "record wall time in the report (breaks byte identity)", false);
}

std::unique_ptr<CommandSpec> make_command(CLI::App& app, Command kind, const std::string& name,
                                          const std::string& desc) {
  auto c = std::make_unique<CommandSpec>();
  c->kind = kind;
  c->name = name;
  c->app = app.add_subcommand(name, desc);
  c->app->add_option("--config", c->opts.config, "JSON file with option values");
  c->schema = std::make_unique<Schema>(c->app);
  Options& o = c->opts;
  Schema& s = *c->schema;
  register_common(s, o);
  switch (kind) {
    case Command::boundary:
      o.format = "csv";
      o.grid = 200;
      s.number_list("delta", o.deltas, "relaxation parameters for the relaxed boundaries");
      s.integer("grid", o.grid, "points per boundary curve");
      break;
    case Command::certify:
      o.grid = 512;
      s.optional_number("e1", o.e1, "target E1");
      s.optional_number("e2", o.e2, "target E2");
      s.optional_number("tau", o.tau, "use the boundary model at this tau as the target");
      s.text("branch", o.branch, "boundary branch of the model: lower or upper");
      s.count("samples", o.samples, "estimate the model target from this many shots per setting");
      s.number("epsilon", o.epsilon, "epistemic failure probability");
      s.number("omega", o.omega, "ontic failure probability");
      s.integer("grid", o.grid, "tau samples per boundary curve");
      break;
    case Command::verify:
      o.samples = 2000;
      o.grid = 200;
      s.count("samples", o.samples, "random boxes per degree");
      s.integer("models", o.models, "random quantum models per J");
      s.integer("angles", o.angles, "angles per quantum model");
      s.integer("lemma-grid", o.lemma_grid, "side of the arccos lemma grid");
      s.count("lemma-samples", o.lemma_samples, "samples for the concavity and inclusion lemmas");
      s.integer("grid", o.grid, "boundary samples per curve in the coherent sweep");
      s.integer("max-two-j", o.max_two_j, "largest 2J in the box and model suites");
      s.optional_number("inject-e1", o.inject_e1, "extra correlation to test against Q (E1)");
      s.optional_number("inject-e2", o.inject_e2, "extra correlation to test against Q (E2)");
      break;
    case Command::coherent:
      o.format = "csv";
      o.grid = 200;
      s.number("beta-sq", o.beta_sq, "mean photon number |beta|^2");
      s.integer("n-max", o.n_max, "largest truncation N");
      s.integer("grid", o.grid, "boundary samples per curve in the inclusion check");
      break;
    case Command::simulate:
      o.samples = 1000000;
      s.optional_number("tau", o.tau, "boundary model parameter (default: branch midpoint)");
      s.text("branch", o.branch, "boundary branch: lower or upper");
      s.count("samples", o.samples, "shots per setting");
      break;
  }
  return c;
}

json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomness certification under a spin bound", kToolName};
  app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
  app.require_subcommand(1, 1);

  std::vector<std::unique_ptr<CommandSpec>> commands;
  commands.push_back(make_command(app, Command::boundary, "boundary", "boundary polylines of the correlation sets"));
  commands.push_back(make_command(app, Command::certify, "certify", "certified entropy of a target correlation"));
  commands.push_back(make_command(app, Command::verify, "verify", "Monte-Carlo verification suites"));
  commands.push_back(make_command(app, Command::coherent, "coherent", "coherent-state truncation table"));
  commands.push_back(make_command(app, Command::simulate, "simulate", "sample a boundary model"));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  CommandSpec* cmd = nullptr;
  for (auto& c : commands) {
    if (c->app->parsed()) cmd = c.get();
  }
  if (cmd == nullptr) {
    err << "error: no command given\n";
    return kExitConfigError;
  }

  const auto start = std::chrono::steady_clock::now();
  json report;
  report["tool"] = kToolName;
  report["version"] = kVersion;
  report["command"] = cmd->name;
  std::vector<std::string> notices;
  Output result;
  try {
    if (!cmd->opts.config.empty()) cmd->schema->apply(read_config(cmd->opts.config));
    report["seed"] = cmd->opts.seed;
    report["config"] = cmd->schema->echo();
    if (cmd->opts.degrees) cmd->opts.alpha *= kPi / 180.0;
    switch (cmd->kind) {
      case Command::boundary: result = cmd_boundary(*cmd, report, notices); break;
      case Command::certify: result = cmd_certify(*cmd, report, err); break;
      case Command::verify: result = cmd_verify(*cmd, report); break;
      case Command::coherent: result = cmd_coherent(*cmd, report); break;
      case Command::simulate: result = cmd_simulate(*cmd, report); break;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::string body;
  if (cmd->opts.format == "csv") {
    body = "# tool " + std::string(kToolName) + " " + kVersion + "\n";
    body += "# command " + cmd->name + "\n";
    body += "# seed " + std::to_string(cmd->opts.seed) + "\n";
    body += "# config " + report["config"].dump() + "\n";
    for (const auto& n : notices) body += "# notice " + n + "\n";
    if (cmd->opts.timing) body += "# wall_time_s " + fmt(wall) + "\n";
    body += result.body;
  } else {
    if (!notices.empty()) report["notices"] = notices;
    if (cmd->opts.timing) report["wall_time_s"] = wall;
    body = report.dump(2) + "\n";
  }
  for (const auto& n : notices) err << "notice: " << n << "\n";

  if (cmd->opts.out.empty()) {
    out << body;
  } else {
    std::ofstream f(cmd->opts.out, std::ios::binary);
    if (!(f << body) || !f.flush()) {
      err << "error: cannot write '" << cmd->opts.out << "'\n";
      return kExitConfigError;
    }
  }
  return result.code;
}

}  // namespace spinbound::cli
