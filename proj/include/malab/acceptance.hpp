#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace malab {

struct CriterionResult {
  std::string id;
  std::string title;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string detail;
};

struct AcceptanceOptions {
  int workers = 0;
  std::uint64_t seed = 20240611;
  std::function<void(const CriterionResult&)> on_result;  // called as each criterion finishes
};

/// A1 .. A10 in order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

/// "A3 PASS ..." one line per criterion.
std::string format_result_line(const CriterionResult& r);

/// Seeded property suites behind A9; each entry is "name: ok" or "name: FAILED (...)".
std::vector<std::string> run_property_suites(std::uint64_t seed, int workers, int* failures);

}  // namespace malab
