#pragma once

#include <string>
#include <vector>

#include "qbsim/config.hpp"

namespace qbsim {

inline constexpr const char* k_version = "qbsim 1.0.0";

struct OutputTable {
  std::vector<std::string> metadata;  // emitted with a leading "# "
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const OutputTable& table);

// Extracts the canonical config echo embedded between the "config begin" and
// "config end" metadata markers (empty string if absent).
std::string config_echo_from_metadata(const OutputTable& table);

OutputTable run_single(const RunConfig& cfg);

struct SweepOutcome {
  std::vector<std::string> files;     // written CSV paths, one per grid point
  std::string index_file;
  std::vector<std::string> failures;  // "param tuple: error" per failed point
};

// Executes every grid point with a bounded worker pool (workers = 0 picks the
// hardware count). Output bytes are independent of the worker count; the
// index is written once after all workers finish. Failed points are reported
// and do not disturb successful outputs.
SweepOutcome run_sweep(const SweepConfig& cfg, int workers = 0);

// Emits the reference dataset families: charging ergotropy curves ("fig2"),
// charging energy curves ("fig3"), self-discharge ergotropy curves ("fig4"),
// and the charging-performance table at tau_ch ("table-p").
std::vector<std::string> reproduce_figure(const std::string& id, const std::string& out_dir);

// Entry point behind the CLI binary. args excludes argv[0].
// Exit codes: 0 success, 1 config/usage error, 2 solver error, 3 partial
// sweep failure.
int cli_main(const std::vector<std::string>& args);

}  // namespace qbsim
