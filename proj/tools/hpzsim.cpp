// Command-line scenario runner for the Markovian dynamics of two coupled
// oscillators in a common Ohmic bath: coefficient reports, covariance
// evolution with Gaussian information quantities, entanglement transition
// detection, parameter sweeps, and an independent numerical validation pass.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "hpz/scenario.hpp"
#include "hpz/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitStabilityRejection = 3;
constexpr int kExitNumericFailure = 4;

struct CommonOpts {
  std::string scenario_path;
  std::string regime;
  std::string format = "csv";
  std::string out_path;
  double tol = -1.0;  // negative: keep scenario value
  bool allow_unstable = false;
  bool reproducible = false;
};

void add_common(CLI::App* cmd, CommonOpts* opts, bool scenario_required) {
  auto* sc = cmd->add_option("--scenario", opts->scenario_path,
                             "scenario file (flat key=value text)");
  if (scenario_required) sc->required();
  cmd->add_option("--regime", opts->regime,
                  "coefficient regime tag (overrides the scenario)");
  cmd->add_option("--format", opts->format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", opts->out_path, "output path (default: stdout)");
  cmd->add_option("--tol", opts->tol,
                  "positivity/separability verdict tolerance");
  cmd->add_flag("--allow-unstable", opts->allow_unstable,
                "run even when the stability report fails");
  cmd->add_flag("--reproducible", opts->reproducible,
                "emit a version string instead of a timestamp header");
}

hpz::Scenario load_scenario(const CommonOpts& opts) {
  hpz::Scenario sc;
  if (!opts.scenario_path.empty()) {
    sc = hpz::parse_scenario_file(opts.scenario_path);
  }
  if (!opts.regime.empty()) {
    const auto tag = hpz::regime_from_string(opts.regime);
    if (!tag) throw hpz::ParseError("unknown regime: " + opts.regime);
    sc.regime = *tag;
  }
  if (opts.tol >= 0.0) sc.tol = opts.tol;
  return sc;
}

class OutputStream {
 public:
  explicit OutputStream(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw hpz::ParseError("cannot open output file: " + path);
    }
  }
  std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void print_coeffs_record(std::ostream& out, const hpz::PhysicalParams& params,
                         hpz::RegimeTag regime) {
  const hpz::CubicRoots roots =
      hpz::solve_cubic(params.omega, params.omega_c, params.gamma);
  const hpz::MarkovCoefficients c = hpz::coefficients(params, regime);
  const hpz::StabilityReport rep = hpz::check_stability(c, roots);
  char buf[64];
  auto kv = [&](const char* key, double v) {
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    out << key << "=" << buf << "\n";
  };
  out << "regime=" << hpz::to_string(regime) << "\n";
  kv("z1_re", roots.z1.real());
  kv("z1_im", roots.z1.imag());
  kv("z2_re", roots.z2.real());
  kv("z2_im", roots.z2.imag());
  kv("z3_re", roots.z3.real());
  kv("z3_im", roots.z3.imag());
  kv("A", c.A);
  kv("B", c.B);
  kv("C", c.C);
  kv("D", c.D);
  kv("lambda", c.lambda);
  kv("omega_c_eff", c.omega_c_eff);
  kv("omega_d", c.omega_d);
  kv("D_px", c.d_px);
  kv("D_pp", c.d_pp);
  kv("gamma_crit", params.gamma_crit());
  kv("kappa_crit", params.kappa_crit());
  out << "roots_stable=" << (rep.roots_stable ? 1 : 0) << "\n";
  out << "drift_stable=" << (rep.drift_stable ? 1 : 0) << "\n";
  out << "diffusion_stable=" << (rep.diffusion_stable ? 1 : 0) << "\n";
  out << "stable=" << (rep.overall() ? 1 : 0) << "\n";
  for (const auto& [name, margin] : rep.margins) {
    kv(("margin_" + name).c_str(), margin);
  }
  if (c.warning) out << "warning=" << *c.warning << "\n";
}

int cmd_coeffs(const CommonOpts& opts, bool all_regimes) {
  const hpz::Scenario sc = load_scenario(opts);
  OutputStream out(opts.out_path);
  std::vector<hpz::RegimeTag> tags;
  if (all_regimes) {
    tags = {hpz::RegimeTag::ExactFiniteT, hpz::RegimeTag::ExactZeroT,
            hpz::RegimeTag::ExactClassical, hpz::RegimeTag::WeakFiniteT,
            hpz::RegimeTag::WeakZeroT, hpz::RegimeTag::WeakClassical};
  } else {
    tags = {sc.regime};
  }
  bool first = true;
  for (hpz::RegimeTag tag : tags) {
    if (!first) out.get() << "\n";
    first = false;
    print_coeffs_record(out.get(), sc.params, tag);
  }
  return kExitOk;
}

void write_result(const hpz::ScenarioResult& result, const CommonOpts& opts,
                  const std::optional<std::pair<std::string, double>>& sweep = {}) {
  OutputStream out(opts.out_path);
  hpz::WriterOptions wopts;
  wopts.reproducible = opts.reproducible;
  wopts.sweep = sweep;
  if (opts.format == "json") {
    hpz::write_json(out.get(), result, wopts);
  } else {
    hpz::write_csv(out.get(), result, wopts);
  }
  if (result.coeffs.warning) {
    std::cerr << "warning: " << *result.coeffs.warning << "\n";
  }
}

int cmd_evolve(const CommonOpts& opts) {
  const hpz::Scenario sc = load_scenario(opts);
  write_result(hpz::run_scenario(sc, opts.allow_unstable), opts);
  return kExitOk;
}

int cmd_entangle(const CommonOpts& opts) {
  const hpz::Scenario sc = load_scenario(opts);
  const hpz::ScenarioResult result = hpz::run_scenario(sc, opts.allow_unstable);
  const hpz::Propagator prop(result.coeffs);
  const hpz::Covariance4 sigma0 = hpz::epr_initial(sc.p, sc.r_s);

  const auto sep = hpz::detect_transitions(
      result.rows, hpz::TransitionChannel::Separability,
      hpz::channel_evaluator(prop, sigma0, hpz::TransitionChannel::Separability),
      sc.params.omega);
  const auto pos = hpz::detect_transitions(
      result.rows, hpz::TransitionChannel::Positivity,
      hpz::channel_evaluator(prop, sigma0, hpz::TransitionChannel::Positivity),
      sc.params.omega);

  OutputStream out(opts.out_path);
  if (opts.format == "json") {
    std::ostringstream events;
    events << "{\n  \"window\": [" << sc.grid.t_start << ", " << sc.grid.t_end
           << "],\n  \"events\": [\n";
    bool first = true;
    for (const auto* scan : {&sep, &pos}) {
      for (const auto& ev : scan->events) {
        if (!first) events << ",\n";
        first = false;
        events << "    {\"kind\": \"" << hpz::to_string(ev.kind)
               << "\", \"t\": " << ev.t << "}";
      }
    }
    events << "\n  ],\n";
    const auto onset = hpz::separability_onset(sep);
    events << "  \"t_s\": " << (onset ? std::to_string(*onset) : "null") << "\n}\n";
    out.get() << events.str();
  } else {
    out.get() << "# " << hpz::kVersionString << "\n";
    out.get() << "# window: [" << sc.grid.t_start << ", " << sc.grid.t_end << "]\n";
    out.get() << "# columns: channel,kind,t\n";
    char buf[64];
    for (const auto& ev : sep.events) {
      std::snprintf(buf, sizeof(buf), "%.9g", ev.t);
      out.get() << "separability," << hpz::to_string(ev.kind) << "," << buf << "\n";
    }
    for (const auto& ev : pos.events) {
      std::snprintf(buf, sizeof(buf), "%.9g", ev.t);
      out.get() << "positivity," << hpz::to_string(ev.kind) << "," << buf << "\n";
    }
    const auto onset = hpz::separability_onset(sep);
    if (onset) {
      out.get() << "# t_s=" << *onset << " (no re-entanglement up to t="
                << sc.grid.t_end << ")\n";
    } else {
      out.get() << "# t_s=none (entangled at the end of the window or never "
                   "disentangled)\n";
    }
  }
  for (const std::string& w : sep.warnings) std::cerr << "warning: " << w << "\n";
  for (const std::string& w : pos.warnings) std::cerr << "warning: " << w << "\n";
  return kExitOk;
}

int cmd_sweep(const CommonOpts& opts, const std::string& param,
              const std::string& values_csv) {
  const hpz::Scenario base = load_scenario(opts);
  std::vector<double> values;
  {
    std::stringstream ss(values_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      values.push_back(std::stod(item));
    }
  }
  if (values.empty()) throw hpz::ParseError("sweep needs at least one value");

  OutputStream out(opts.out_path);
  bool first = true;
  for (double v : values) {
    hpz::Scenario sc = base;
    if (param == "gamma") sc.params.gamma = v;
    else if (param == "temperature") sc.params.temperature = v;
    else if (param == "kappa") sc.params.kappa = v;
    else if (param == "omega_c") sc.params.omega_c = v;
    else if (param == "p") sc.p = v;
    else if (param == "r_s") sc.r_s = v;
    else throw hpz::ParseError("unknown sweep parameter: " + param);
    const hpz::ScenarioResult result = hpz::run_scenario(sc, opts.allow_unstable);
    hpz::WriterOptions wopts;
    wopts.reproducible = opts.reproducible;
    wopts.sweep = std::make_pair(param, v);
    if (!first) out.get() << "\n";
    first = false;
    if (opts.format == "json") hpz::write_json(out.get(), result, wopts);
    else hpz::write_csv(out.get(), result, wopts);
  }
  return kExitOk;
}

int cmd_validate(const CommonOpts& opts) {
  const hpz::Scenario sc = load_scenario(opts);
  sc.params.validate();
  const hpz::MarkovCoefficients coeffs = hpz::coefficients(sc.params, sc.regime);
  const hpz::CubicRoots roots =
      hpz::solve_cubic(sc.params.omega, sc.params.omega_c, sc.params.gamma);
  const hpz::StabilityReport stability = hpz::check_stability(coeffs, roots);
  if (!stability.overall() && !opts.allow_unstable) {
    throw hpz::StabilityError("validation requires stable parameters");
  }
  const hpz::Propagator prop(coeffs);
  const hpz::Covariance4 sigma0 = hpz::epr_initial(sc.p, sc.r_s);

  // Closed form vs fixed-step integration of the moment equation.
  const double dt = 0.5 * hpz::max_moment_step(coeffs);
  double worst_rk4 = 0.0;
  for (double t = 2.5; t <= 50.0; t += 2.5) {
    const hpz::Covariance4 numeric = hpz::integrate_moments(sigma0, coeffs, t, dt);
    const hpz::Covariance4 closed = prop.evolve_covariance(sigma0, t);
    worst_rk4 = std::max(
        worst_rk4, (numeric.sigma - closed.sigma).cwiseAbs().maxCoeff());
  }

  // Analytic substitution of the evolved Gaussian into the master equation.
  std::mt19937 rng(12345);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform_t(0.0, 20.0);
  const Eigen::Matrix4d q0 = hpz::sigma_to_quadratic(sigma0.sigma);
  double worst_residual = 0.0;
  for (int i = 0; i < 100; ++i) {
    Eigen::Vector4d w;
    for (int k = 0; k < 4; ++k) w(k) = normal(rng);
    worst_residual = std::max(
        worst_residual,
        hpz::master_equation_residual(prop, q0, w, uniform_t(rng)));
  }

  OutputStream out(opts.out_path);
  const bool rk4_ok = worst_rk4 < 1e-8;
  const bool residual_ok = worst_residual < 1e-8;
  out.get() << "rk4_max_abs_diff=" << worst_rk4 << " ("
            << (rk4_ok ? "pass" : "FAIL") << ", bound 1e-8)\n";
  out.get() << "master_equation_max_residual=" << worst_residual << " ("
            << (residual_ok ? "pass" : "FAIL") << ", bound 1e-8)\n";
  if (!rk4_ok || !residual_ok) {
    throw hpz::NumericError("validation failed");
  }
  out.get() << "validation passed\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Markovian dynamics of two coupled oscillators in a common "
               "Ohmic bath: Gaussian-state information quantities over time"};
  app.require_subcommand(1);

  CommonOpts coeffs_opts, evolve_opts, entangle_opts, sweep_opts, validate_opts;
  bool coeffs_all = false;
  std::string sweep_param, sweep_values;

  auto* coeffs_cmd = app.add_subcommand(
      "coeffs", "report roots, master-equation constants and stability");
  add_common(coeffs_cmd, &coeffs_opts, /*scenario_required=*/true);
  coeffs_cmd->add_flag("--all-regimes", coeffs_all,
                       "print all six regimes side by side");

  auto* evolve_cmd = app.add_subcommand(
      "evolve", "evolve the scenario and emit per-time information quantities");
  add_common(evolve_cmd, &evolve_opts, /*scenario_required=*/true);

  auto* entangle_cmd = app.add_subcommand(
      "entangle", "detect entanglement and positivity transitions");
  add_common(entangle_cmd, &entangle_opts, /*scenario_required=*/true);

  auto* sweep_cmd = app.add_subcommand(
      "sweep", "run the scenario over a list of values of one parameter");
  add_common(sweep_cmd, &sweep_opts, /*scenario_required=*/true);
  sweep_cmd->add_option("--param", sweep_param, "parameter key to sweep")
      ->required();
  sweep_cmd->add_option("--values", sweep_values, "comma-separated values")
      ->required();

  auto* validate_cmd = app.add_subcommand(
      "validate", "check the closed form against the numerical oracle");
  add_common(validate_cmd, &validate_opts, /*scenario_required=*/true);

  try {
    app.parse(argc, argv);
    if (coeffs_cmd->parsed()) {
      // --regime=all is accepted as a synonym for --all-regimes.
      if (coeffs_opts.regime == "all") {
        coeffs_all = true;
        coeffs_opts.regime.clear();
      }
      return cmd_coeffs(coeffs_opts, coeffs_all);
    }
    if (evolve_cmd->parsed()) return cmd_evolve(evolve_opts);
    if (entangle_cmd->parsed()) return cmd_entangle(entangle_opts);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts, sweep_param, sweep_values);
    if (validate_cmd->parsed()) return cmd_validate(validate_opts);
    return kExitInvalidInput;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInvalidInput;
  } catch (const hpz::StabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStabilityRejection;
  } catch (const hpz::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const hpz::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericFailure;
  }
}
