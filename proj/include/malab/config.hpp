#pragma once

// Run configuration: JSON schema version 1.
//
//   {
//     "schema_version": 1,
//     "mode": "pair" | "converge" | "verify" | "oracle" | "residue",
//     "scenario": "<name>"            or "product": {...} / "residue": {...},
//     "scenario_options": {"a": 2},
//     "schedule": {"kind": "polynomial", "exponents": [2, 1], "scales": [1, 1]}
//               | {"kind": "table", "nus": [...], "rows": [[...], ...]},
//     "nu": [2, 3, 4]                 or {"start": 4, "stop": 14, "step": 1},
//     "js": [16, 4],
//     "quadrature": {"order": 8, "max_depth": 14, "rel_tol": 1e-7, "abs_tol": 1e-12,
//                    "shell_refine": true, "max_evals": 100000000, "workers": 0},
//     "output": {"csv": "run.csv", "json": "run.json"},
//     "seed": 0
//   }

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "malab/scenarios.hpp"

namespace malab {

enum class Mode { pair, converge, verify, oracle, residue };

const char* to_string(Mode m);

struct InlineProduct {
  ProductSpec spec;
  TestFunction psi;
  Domain domain;
  std::optional<double> oracle;
  bool operator==(const InlineProduct&) const = default;
};

struct InlineResidue {
  std::vector<ResidueFactorSpec> factors;
  BidegreeForm theta;
  TestFunction psi;
  Domain domain;
  std::optional<double> oracle;
  bool operator==(const InlineResidue& other) const;
};

struct RunConfig {
  int schema_version = 1;
  Mode mode = Mode::converge;
  std::optional<std::string> scenario;
  ScenarioOptions scenario_options;
  std::optional<InlineProduct> product;
  std::optional<InlineResidue> residue;
  std::optional<PathSchedule> schedule;
  std::vector<double> nus;
  std::vector<double> js;
  QuadratureSettings quadrature;
  std::string csv_path;
  std::string json_path;
  std::uint64_t seed = 0;

  bool operator==(const RunConfig&) const = default;
};

/// Throws SchemaError naming the offending field.
RunConfig parse_config(const std::string& text);
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);
std::string serialize_config(const RunConfig& c);

/// Scenario named or described inline by the config (not for verify mode).
Scenario resolve_scenario(const RunConfig& c);

// Component encoders, shared with the report writer.
nlohmann::json to_json(const HoloPolynomial& p);
nlohmann::json to_json(const SmoothPotential& v);
nlohmann::json to_json(const QpshFunction& phi);
nlohmann::json to_json(const ClosedOneOneForm& f);
nlohmann::json to_json(const Cutoff& c);
nlohmann::json to_json(const TestFunction& t);
nlohmann::json to_json(const Domain& d);
nlohmann::json to_json(const PathSchedule& s);
nlohmann::json to_json(const QuadratureSettings& s);
nlohmann::json to_json(const BidegreeForm& f);

}  // namespace malab
