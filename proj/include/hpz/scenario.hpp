#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hpz/gaussian_info.hpp"
#include "hpz/oracle.hpp"

namespace hpz {

enum class Spacing { Linear, Log };

struct TimeGrid {
  double t_start = 0.0;
  double t_end = 50.0;
  int n_points = 2001;  // resolves the fastest oscillation of the stock scenarios
  Spacing spacing = Spacing::Linear;
};

std::vector<double> make_time_grid(const TimeGrid& grid);

// One complete run description: physics, regime, initial state, grid, outputs.
struct Scenario {
  PhysicalParams params;
  RegimeTag regime = RegimeTag::ExactFiniteT;
  double p = 1.0;
  double r_s = 0.0;
  TimeGrid grid;
  std::vector<std::string> outputs;  // empty means every InfoReport column
  double tol = kDefaultVerdictTol;
};

// Column names of InfoReport, in emission order.
const std::vector<std::string>& info_report_columns();
double info_report_value(const InfoReport& row, const std::string& column);

// Flat key=value text, '#' comments, unknown keys are errors.
Scenario parse_scenario(std::istream& in);
Scenario parse_scenario_file(const std::string& path);

struct ScenarioResult {
  Scenario scenario;
  CubicRoots roots;
  MarkovCoefficients coeffs;
  StabilityReport stability;
  std::vector<InfoReport> rows;
};

// Evolves the scenario over its grid and computes every information
// quantity per time point. Throws StabilityError when the stability report
// fails and allow_unstable is not set; numeric failures are annotated with
// the time at which they occurred.
ScenarioResult run_scenario(const Scenario& scenario, bool allow_unstable = false);

enum class TransitionChannel { Separability, Positivity };
enum class TransitionKind { Entangle, Disentangle, PositivityGain, PositivityLoss };

const char* to_string(TransitionKind kind);

struct TransitionEvent {
  TransitionKind kind;
  double t;  // bisection-refined to 1e-6 / Omega
};

struct TransitionScan {
  std::vector<TransitionEvent> events;
  std::vector<std::string> warnings;  // grid-too-coarse notices
};

// Brackets sign changes of (nu1_pt - 1) or (nu1 - 1) on the grid rows and
// refines each crossing by bisection on the closed-form pipeline.
// value_at(t) must return the same channel quantity at arbitrary t.
TransitionScan detect_transitions(const std::vector<InfoReport>& rows,
                                  TransitionChannel channel,
                                  const std::function<double(double)>& value_at,
                                  double omega);

// Last disentangle event not followed by an entangle event, if any.
std::optional<double> separability_onset(const TransitionScan& scan);

// Channel evaluator over the closed-form pipeline, for bisection refinement.
std::function<double(double)> channel_evaluator(const Propagator& prop,
                                                const Covariance4& sigma0,
                                                TransitionChannel channel);

struct WriterOptions {
  bool reproducible = false;  // version string instead of a timestamp header
  // Optional leading sweep column prepended to every data row.
  std::optional<std::pair<std::string, double>> sweep;
};

void write_csv(std::ostream& out, const ScenarioResult& result,
               const WriterOptions& options = {});
void write_json(std::ostream& out, const ScenarioResult& result,
                const WriterOptions& options = {});

extern const char* const kVersionString;

}  // namespace hpz
