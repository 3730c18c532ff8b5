#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "malab/config.hpp"
#include "malab/errors.hpp"
#include "malab/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"malab: regularized mixed Monge-Ampere products"};
  app.set_version_flag("--version", std::string(malab::kEngineVersion));
  std::string mode;
  std::string path;
  app.add_option("mode", mode, "pair | converge | verify | oracle | residue")
      ->required()
      ->check(CLI::IsMember({"pair", "converge", "verify", "oracle", "residue"}));
  app.add_option("config", path, "JSON config file")->required()->check(CLI::ExistingFile);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : malab::kExitSchemaError;
  }

  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();

  try {
    const malab::RunConfig config = malab::parse_config(buf.str());
    if (mode != malab::to_string(config.mode)) {
      throw malab::SchemaError("mode", "command line requests '" + mode + "' but the config declares '" +
                                           malab::to_string(config.mode) + "'");
    }
    const malab::RunOutcome out = malab::run(config);
    std::cout << out.text;
    if (config.csv_path.empty() && !out.csv.empty() && config.mode != malab::Mode::verify) std::cout << out.csv;
    return out.exit_code;
  } catch (const malab::SchemaError& e) {
    std::fprintf(stderr, "schema error at '%s': %s\n", e.path().c_str(), e.what());
    return malab::kExitSchemaError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return malab::kExitSchemaError;
  }
}
