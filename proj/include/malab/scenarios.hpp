#pragma once

// Named scenarios with oracle values derived independently of the engine.

#include <optional>
#include <string>
#include <vector>

#include "malab/pairing.hpp"
#include "malab/schedule.hpp"

namespace malab {

struct OracleValue {
  double value = 0.0;
  double imag = 0.0;
  std::string derivation;
};

enum class ScenarioKind { product, residue, p1 };

/// Knobs exposed by a few scenarios.
struct ScenarioOptions {
  int a = 1;  // cauchy_a: order of the pole
  bool operator==(const ScenarioOptions&) const = default;
};

struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::product;
  ProductSpec product;
  std::vector<ResidueFactorSpec> residue;
  BidegreeForm residue_theta;
  P1Model p1;
  Smoother p1_smoother;
  TestFunction psi;
  Domain domain;
  PathSchedule schedule;
  std::vector<double> nus;
  OracleValue oracle;

  int dim() const;
  int arity() const;
};

std::vector<std::string> scenario_names();

/// Throws LookupError for unknown names.
Scenario make_scenario(const std::string& name, const ScenarioOptions& options = {});

OracleValue oracle_value(const std::string& name, const ScenarioOptions& options = {});

/// Pairing of the scenario's regularized object at the given js (eps = exp(-j) for residues).
Estimate evaluate_scenario(const Scenario& s, const std::vector<double>& js, const QuadratureSettings& settings);

struct ConvergenceRow {
  double nu = 0.0;
  std::vector<double> js;
  Estimate estimate;
  double abs_dev = 0.0;
};

struct ConvergenceTable {
  std::string scenario;
  Admissibility verdict = Admissibility::undetermined;
  OracleValue oracle;
  std::vector<ConvergenceRow> rows;
  double final_deviation = 0.0;
  bool all_converged = true;
};

ConvergenceTable run_scenario(const Scenario& s, const PathSchedule& schedule, const std::vector<double>& nus,
                              const QuadratureSettings& settings);
ConvergenceTable run_scenario(const std::string& name, const PathSchedule& schedule, const std::vector<double>& nus,
                              const QuadratureSettings& settings);

/// pi * int_0^1 B(s) ds by adaptive Gauss-Kronrod: int_C B(|z|^2 / R^2) dA for R = 1.
double reference_bump_area();

}  // namespace malab
