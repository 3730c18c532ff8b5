#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "malab/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"malab acceptance criteria A1-A10"};
  malab::AcceptanceOptions opts;
  app.add_option("--workers", opts.workers, "worker threads (0: environment or all cores)");
  app.add_option("--seed", opts.seed, "seed of the property suites");
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  opts.on_result = [&](const malab::CriterionResult& r) {
    std::printf("%s\n", malab::format_result_line(r).c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  };
  malab::run_acceptance(opts);
  std::printf("%s: %d criteria failed\n", failed == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED", failed);
  return failed == 0 ? 0 : 1;
}
