#pragma once

#include <string>

#include <json.hpp>

#include "malab/config.hpp"

namespace malab {

inline constexpr const char* kEngineVersion = "1.0.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitAcceptanceFailure = 1,
  kExitSchemaError = 2,
  kExitBudgetExhausted = 3,
};

/// 17 significant digits.
std::string format_double(double v);

/// Header nu,j_1..j_r,value,quad_error,converged,oracle,abs_dev; with_nu = false leaves nu empty.
std::string table_csv(const ConvergenceTable& t, bool with_nu);

struct RunOutcome {
  int exit_code = kExitOk;
  std::string text;  // human-readable summary for stdout
  std::string csv;
  nlohmann::json report;
};

/// Executes a validated config; writes the configured output files.
RunOutcome run(const RunConfig& config);

/// Writes via a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace malab
