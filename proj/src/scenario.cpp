#include "hpz/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace hpz {

const char* const kVersionString = "hpzsim 1.0.0";

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParseError("invalid numeric value for '" + key + "': " + value);
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParseError("invalid integer value for '" + key + "': " + value);
  }
}

std::vector<std::string> split_csv_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Deterministic indexed parallel map; rows land in their own slots.
void parallel_for(int n, const std::function<void(int)>& body) {
  const unsigned hw = std::thread::hardware_concurrency();
  if (n < 256 || hw < 2) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  const int n_threads = static_cast<int>(std::min<unsigned>(hw, 8));
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (int w = 0; w < n_threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < n; i += n_threads) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_header_comments(std::ostream& out, const ScenarioResult& result,
                           const WriterOptions& options) {
  const Scenario& sc = result.scenario;
  const MarkovCoefficients& c = result.coeffs;
  out << "# " << kVersionString << "\n";
  if (!options.reproducible) {
    const std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out << "# generated: " << buf << "\n";
  }
  out << "# omega=" << format_double(sc.params.omega)
      << " omega_c=" << format_double(sc.params.omega_c)
      << " gamma=" << format_double(sc.params.gamma)
      << " temperature=" << format_double(sc.params.temperature)
      << " kappa=" << format_double(sc.params.kappa)
      << " m=" << format_double(sc.params.m) << "\n";
  out << "# p=" << format_double(sc.p) << " r_s=" << format_double(sc.r_s)
      << " regime=" << to_string(sc.regime) << " tol=" << format_double(sc.tol)
      << "\n";
  out << "# roots: z1=(" << format_double(result.roots.z1.real()) << ","
      << format_double(result.roots.z1.imag()) << ") z2=("
      << format_double(result.roots.z2.real()) << ","
      << format_double(result.roots.z2.imag()) << ") z3=("
      << format_double(result.roots.z3.real()) << ","
      << format_double(result.roots.z3.imag()) << ")\n";
  out << "# A=" << format_double(c.A) << " B=" << format_double(c.B)
      << " C=" << format_double(c.C) << " D=" << format_double(c.D) << "\n";
  out << "# lambda=" << format_double(c.lambda)
      << " omega_c_eff=" << format_double(c.omega_c_eff)
      << " omega_d=" << format_double(c.omega_d)
      << " D_px=" << format_double(c.d_px) << " D_pp=" << format_double(c.d_pp)
      << "\n";
  out << "# gamma_crit=" << format_double(sc.params.gamma_crit())
      << " kappa_crit=" << format_double(sc.params.kappa_crit()) << "\n";
  out << "# stability: roots=" << (result.stability.roots_stable ? 1 : 0)
      << " drift=" << (result.stability.drift_stable ? 1 : 0)
      << " diffusion=" << (result.stability.diffusion_stable ? 1 : 0) << "\n";
  if (c.warning) out << "# warning: " << *c.warning << "\n";
}

std::vector<std::string> selected_columns(const Scenario& sc) {
  if (sc.outputs.empty()) return info_report_columns();
  std::vector<std::string> cols = {"t"};
  for (const std::string& name : sc.outputs) {
    if (name != "t") cols.push_back(name);
  }
  return cols;
}

}  // namespace

std::vector<double> make_time_grid(const TimeGrid& grid) {
  if (grid.n_points < 2) throw DomainError("time grid needs n_points >= 2");
  if (!(grid.t_start >= 0.0)) throw DomainError("time grid needs t_start >= 0");
  if (!(grid.t_end > grid.t_start)) throw DomainError("time grid needs t_end > t_start");
  std::vector<double> ts(static_cast<std::size_t>(grid.n_points));
  const int n = grid.n_points;
  if (grid.spacing == Spacing::Linear) {
    const double dt = (grid.t_end - grid.t_start) / (n - 1);
    for (int i = 0; i < n; ++i) ts[i] = grid.t_start + dt * i;
  } else {
    if (!(grid.t_start > 0.0)) {
      throw DomainError("log-spaced time grid needs t_start > 0");
    }
    const double ratio = std::log(grid.t_end / grid.t_start) / (n - 1);
    for (int i = 0; i < n; ++i) ts[i] = grid.t_start * std::exp(ratio * i);
  }
  ts.back() = grid.t_end;
  return ts;
}

const std::vector<std::string>& info_report_columns() {
  static const std::vector<std::string> cols = {
      "t",      "nu1",     "nu2", "nuA", "nuB",      "nu1_pt",   "purity",
      "S_total", "S_A",    "S_B", "C_xi", "E_N",     "positive", "separable"};
  return cols;
}

double info_report_value(const InfoReport& r, const std::string& column) {
  if (column == "t") return r.t;
  if (column == "nu1") return r.nu1;
  if (column == "nu2") return r.nu2;
  if (column == "nuA") return r.nu_a;
  if (column == "nuB") return r.nu_b;
  if (column == "nu1_pt") return r.nu1_pt;
  if (column == "purity") return r.purity;
  if (column == "S_total") return r.s_total;
  if (column == "S_A") return r.s_a;
  if (column == "S_B") return r.s_b;
  if (column == "C_xi") return r.c_xi;
  if (column == "E_N") return r.e_n;
  if (column == "positive") return r.positive ? 1.0 : 0.0;
  if (column == "separable") return r.separable ? 1.0 : 0.0;
  throw ParseError("unknown quantity name: " + column);
}

Scenario parse_scenario(std::istream& in) {
  Scenario sc;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "omega") sc.params.omega = parse_double(key, value);
    else if (key == "omega_c") sc.params.omega_c = parse_double(key, value);
    else if (key == "gamma") sc.params.gamma = parse_double(key, value);
    else if (key == "temperature") sc.params.temperature = parse_double(key, value);
    else if (key == "kappa") sc.params.kappa = parse_double(key, value);
    else if (key == "m") sc.params.m = parse_double(key, value);
    else if (key == "p") sc.p = parse_double(key, value);
    else if (key == "r_s") sc.r_s = parse_double(key, value);
    else if (key == "t_start") sc.grid.t_start = parse_double(key, value);
    else if (key == "t_end") sc.grid.t_end = parse_double(key, value);
    else if (key == "n_points") sc.grid.n_points = parse_int(key, value);
    else if (key == "spacing") {
      if (value == "linear") sc.grid.spacing = Spacing::Linear;
      else if (value == "log") sc.grid.spacing = Spacing::Log;
      else throw ParseError("spacing must be 'linear' or 'log', got: " + value);
    } else if (key == "regime") {
      const auto tag = regime_from_string(value);
      if (!tag) throw ParseError("unknown regime: " + value);
      sc.regime = *tag;
    } else if (key == "outputs") {
      sc.outputs = split_csv_list(value);
      for (const std::string& name : sc.outputs) {
        (void)info_report_value(InfoReport{}, name);  // validates the name
      }
    } else if (key == "tol") {
      sc.tol = parse_double(key, value);
    } else {
      throw ParseError("unknown scenario key: " + key);
    }
  }
  return sc;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  return parse_scenario(in);
}

ScenarioResult run_scenario(const Scenario& scenario, bool allow_unstable) {
  ScenarioResult result;
  result.scenario = scenario;
  scenario.params.validate();
  if (!(scenario.p >= 1.0)) throw DomainError("scenario requires p >= 1");

  result.roots = solve_cubic(scenario.params.omega, scenario.params.omega_c,
                             scenario.params.gamma);
  result.coeffs = coefficients(scenario.params, scenario.regime);
  result.stability = check_stability(result.coeffs, result.roots);
  if (!result.stability.overall() && !allow_unstable) {
    std::ostringstream msg;
    msg << "scenario rejected by the stability check (";
    for (const auto& [name, margin] : result.stability.margins) {
      if (margin < 0.0) msg << name << "=" << margin << " ";
    }
    msg << "); rerun with --allow-unstable to proceed anyway";
    throw StabilityError(msg.str());
  }

  const Propagator prop(result.coeffs);
  const Covariance4 sigma0 = epr_initial(scenario.p, scenario.r_s);
  const std::vector<double> times = make_time_grid(scenario.grid);
  result.rows.resize(times.size());
  parallel_for(static_cast<int>(times.size()), [&](int i) {
    try {
      const Covariance4 sigma = prop.evolve_covariance(sigma0, times[i]);
      result.rows[i] = info_report(sigma, times[i], scenario.tol);
    } catch (const Error& err) {
      std::ostringstream msg;
      msg << err.what() << " (at t = " << times[i] << ")";
      throw NumericError(msg.str());
    }
  });
  return result;
}

const char* to_string(TransitionKind kind) {
  switch (kind) {
    case TransitionKind::Entangle: return "entangle";
    case TransitionKind::Disentangle: return "disentangle";
    case TransitionKind::PositivityGain: return "positivity_gain";
    case TransitionKind::PositivityLoss: return "positivity_loss";
  }
  return "?";
}

TransitionScan detect_transitions(const std::vector<InfoReport>& rows,
                                  TransitionChannel channel,
                                  const std::function<double(double)>& value_at,
                                  double omega) {
  TransitionScan scan;
  if (rows.size() < 2) return scan;
  const double refine_tol = 1e-6 / omega;
  auto channel_value = [&](const InfoReport& r) {
    return channel == TransitionChannel::Separability ? r.nu1_pt : r.nu1;
  };
  double grid_step = rows[1].t - rows[0].t;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double g0 = channel_value(rows[i]) - 1.0;
    const double g1 = channel_value(rows[i + 1]) - 1.0;
    if (std::isnan(g0) || std::isnan(g1)) continue;
    if ((g0 >= 0.0) == (g1 >= 0.0)) continue;
    double lo = rows[i].t, hi = rows[i + 1].t;
    double flo = g0;
    while (hi - lo > refine_tol) {
      const double mid = 0.5 * (lo + hi);
      const double fmid = value_at(mid) - 1.0;
      if ((fmid >= 0.0) == (flo >= 0.0)) {
        lo = mid;
        flo = fmid;
      } else {
        hi = mid;
      }
    }
    TransitionEvent ev;
    ev.t = 0.5 * (lo + hi);
    if (channel == TransitionChannel::Separability) {
      ev.kind = (g0 >= 0.0) ? TransitionKind::Entangle : TransitionKind::Disentangle;
    } else {
      ev.kind = (g0 >= 0.0) ? TransitionKind::PositivityLoss
                            : TransitionKind::PositivityGain;
    }
    if (!scan.events.empty() &&
        ev.t - scan.events.back().t < 3.0 * grid_step) {
      std::ostringstream msg;
      msg << "grid too coarse: events at t = " << scan.events.back().t << " and "
          << ev.t << " are closer than 3 grid steps";
      scan.warnings.push_back(msg.str());
    }
    scan.events.push_back(ev);
  }
  return scan;
}

std::optional<double> separability_onset(const TransitionScan& scan) {
  std::optional<double> onset;
  for (const TransitionEvent& ev : scan.events) {
    if (ev.kind == TransitionKind::Disentangle) onset = ev.t;
    else if (ev.kind == TransitionKind::Entangle) onset.reset();
  }
  return onset;
}

std::function<double(double)> channel_evaluator(const Propagator& prop,
                                                const Covariance4& sigma0,
                                                TransitionChannel channel) {
  return [&prop, sigma0, channel](double t) {
    const Covariance4 sigma = prop.evolve_covariance(sigma0, t);
    if (channel == TransitionChannel::Positivity) {
      return symplectic_eigenvalues(sigma).nu1;
    }
    const Covariance4 lab = cmr_to_lab(sigma);
    return symplectic_eigenvalues(partial_transpose(lab)).nu1;
  };
}

void write_csv(std::ostream& out, const ScenarioResult& result,
               const WriterOptions& options) {
  write_header_comments(out, result, options);
  const std::vector<std::string> cols = selected_columns(result.scenario);
  out << "# columns: ";
  if (options.sweep) out << options.sweep->first << ",";
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out << cols[i] << (i + 1 < cols.size() ? "," : "");
  }
  out << "\n";
  for (const InfoReport& row : result.rows) {
    std::string line;
    if (options.sweep) {
      line += format_double(options.sweep->second);
      line += ",";
    }
    for (std::size_t i = 0; i < cols.size(); ++i) {
      line += format_double(info_report_value(row, cols[i]));
      if (i + 1 < cols.size()) line += ",";
    }
    out << line << "\n";
  }
}

void write_json(std::ostream& out, const ScenarioResult& result,
                const WriterOptions& options) {
  nlohmann::json j;
  j["version"] = kVersionString;
  const Scenario& sc = result.scenario;
  j["params"] = {{"omega", sc.params.omega},       {"omega_c", sc.params.omega_c},
                 {"gamma", sc.params.gamma},       {"temperature", sc.params.temperature},
                 {"kappa", sc.params.kappa},       {"m", sc.params.m},
                 {"p", sc.p},                      {"r_s", sc.r_s},
                 {"regime", to_string(sc.regime)}, {"tol", sc.tol}};
  j["derived"] = {{"A", result.coeffs.A},
                  {"B", result.coeffs.B},
                  {"C", result.coeffs.C},
                  {"D", result.coeffs.D},
                  {"lambda", result.coeffs.lambda},
                  {"omega_c_eff", result.coeffs.omega_c_eff},
                  {"omega_d", result.coeffs.omega_d},
                  {"D_px", result.coeffs.d_px},
                  {"D_pp", result.coeffs.d_pp},
                  {"gamma_crit", sc.params.gamma_crit()},
                  {"kappa_crit", sc.params.kappa_crit()}};
  j["stability"] = {{"roots", result.stability.roots_stable},
                    {"drift", result.stability.drift_stable},
                    {"diffusion", result.stability.diffusion_stable}};
  if (result.coeffs.warning) j["warning"] = *result.coeffs.warning;
  if (options.sweep) j["sweep"] = {{options.sweep->first, options.sweep->second}};
  const std::vector<std::string> cols = selected_columns(result.scenario);
  nlohmann::json rows = nlohmann::json::array();
  for (const InfoReport& row : result.rows) {
    nlohmann::json r;
    for (const std::string& col : cols) {
      const double v = info_report_value(row, col);
      if (std::isnan(v)) r[col] = nullptr;
      else r[col] = v;
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  out << j.dump(2) << "\n";
}

}  // namespace hpz
