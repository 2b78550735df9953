#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qbsim/model.hpp"

namespace qbsim {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SolverKind { analytic, oracle, both };
enum class TimeUnit { kappa_t, gamma_t };

const char* to_string(SolverKind s);
const char* to_string(TimeUnit u);

struct GridSpec {
  double t_max = 4.0 * M_PI;
  int n_points = 2000;
};

struct RunConfig {
  SystemParams params;
  InitialAmplitudes init;
  GridSpec grid;
  SolverKind solver = SolverKind::analytic;
  TimeUnit time_unit = TimeUnit::kappa_t;
  std::vector<std::string> outputs;  // subset of the known observable columns
};

struct SweepConfig {
  RunConfig base;
  // Cartesian product, first axis outermost; axis names are physical
  // parameters (omega0, kappa, gamma, lambda, delta) or R for gamma/lambda.
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  std::string out_dir = "sweep_out";
  long max_grid = 10000;
};

using ParsedConfig = std::variant<RunConfig, SweepConfig>;

// Parses the line-oriented `key = value` format ('#' starts a comment).
// Unknown keys, duplicates, malformed lines, and out-of-range values are
// errors carrying the line number. Presence of any `sweep.<param>` key makes
// the result a SweepConfig.
ParsedConfig parse_config(const std::string& text);

// Deterministic serialization; parsing it yields an identical config.
// lambda is always emitted (never R), floats as %.17g.
std::string canonical_echo(const RunConfig& cfg);

// Materializes one sweep point: applies axis values onto the base config.
RunConfig apply_axes(const SweepConfig& sweep, const std::vector<double>& values);

const std::vector<std::string>& known_output_columns();

}  // namespace qbsim
