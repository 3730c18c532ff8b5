#include "malab/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "malab/acceptance.hpp"
#include "malab/errors.hpp"

namespace malab {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string table_csv(const ConvergenceTable& t, bool with_nu) {
  std::size_t r = t.rows.empty() ? 0 : t.rows.front().js.size();
  std::string out = "nu";
  for (std::size_t k = 1; k <= r; ++k) out += ",j_" + std::to_string(k);
  out += ",value,quad_error,converged,oracle,abs_dev\n";
  const bool has_oracle = std::isfinite(t.oracle.value);
  for (const auto& row : t.rows) {
    if (with_nu) out += format_double(row.nu);
    for (double j : row.js) out += "," + format_double(j);
    out += "," + format_double(row.estimate.value);
    out += "," + format_double(row.estimate.error);
    out += row.estimate.converged ? ",1" : ",0";
    out += "," + (has_oracle ? format_double(t.oracle.value) : std::string());
    out += "," + (has_oracle ? format_double(row.abs_dev) : std::string());
    out += "\n";
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp);
    f << content;
    if (!f) throw std::runtime_error("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

namespace {

json oracle_json(const OracleValue& o) {
  json j = {{"derivation", o.derivation}};
  j["value"] = std::isfinite(o.value) ? json(o.value) : json(nullptr);
  if (o.imag != 0.0) j["imag"] = o.imag;
  return j;
}

json rows_json(const ConvergenceTable& t, bool with_nu) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = {{"js", row.js},
              {"value", row.estimate.value},
              {"imag", row.estimate.imag},
              {"quad_error", row.estimate.error},
              {"converged", row.estimate.converged},
              {"cells", row.estimate.cells},
              {"evals", row.estimate.evals}};
    r["nu"] = with_nu ? json(row.nu) : json(nullptr);
    r["abs_dev"] = std::isfinite(row.abs_dev) ? json(row.abs_dev) : json(nullptr);
    rows.push_back(r);
  }
  return rows;
}

std::string table_text(const ConvergenceTable& t, bool with_nu) {
  std::string s = "scenario " + t.scenario + " (schedule " + to_string(t.verdict) + ")\n";
  char buf[256];
  for (const auto& row : t.rows) {
    std::string js;
    for (double j : row.js) js += (js.empty() ? "" : ", ") + format_double(j);
    if (with_nu) {
      std::snprintf(buf, sizeof buf, "  nu=%-6g ", row.nu);
      s += buf;
    } else {
      s += "  ";
    }
    std::snprintf(buf, sizeof buf, "j=(%s) value=%.12g err=%.3g %s", js.c_str(), row.estimate.value,
                  row.estimate.error, row.estimate.converged ? "converged" : "NOT CONVERGED");
    s += buf;
    if (std::isfinite(row.abs_dev)) {
      std::snprintf(buf, sizeof buf, " |dev|=%.3g", row.abs_dev);
      s += buf;
    }
    s += "\n";
  }
  if (std::isfinite(t.oracle.value)) {
    std::snprintf(buf, sizeof buf, "oracle %.15g (%s), final deviation %.3g\n", t.oracle.value,
                  t.oracle.derivation.c_str(), t.final_deviation);
    s += buf;
  }
  if (t.verdict != Admissibility::admissible) s += "note: schedule is not known to be admissible; no limit is asserted\n";
  return s;
}

ConvergenceTable single_row(const Scenario& s, const std::vector<double>& js, double nu,
                            const QuadratureSettings& q) {
  ConvergenceTable t;
  t.scenario = s.name;
  t.oracle = s.oracle;
  t.verdict = Admissibility::undetermined;
  ConvergenceRow row;
  row.nu = nu;
  row.js = js;
  row.estimate = evaluate_scenario(s, js, q);
  row.abs_dev = std::abs(cplx(row.estimate.value - s.oracle.value, row.estimate.imag - s.oracle.imag));
  t.all_converged = row.estimate.converged;
  t.final_deviation = row.abs_dev;
  t.rows.push_back(row);
  return t;
}

}  // namespace

RunOutcome run(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  RunOutcome out;
  json report;
  report["config"] = config_to_json(config);
  report["engine_version"] = kEngineVersion;
  report["seed"] = config.seed;
  report["mode"] = to_string(config.mode);

  if (config.mode == Mode::verify) {
    AcceptanceOptions opts;
    opts.workers = config.quadrature.workers;
    opts.seed = config.seed == 0 ? AcceptanceOptions{}.seed : config.seed;
    const auto results = run_acceptance(opts);
    json crit = json::array();
    bool ok = true;
    for (const auto& r : results) {
      out.text += format_result_line(r) + "\n";
      crit.push_back({{"id", r.id},
                      {"title", r.title},
                      {"passed", r.passed},
                      {"measured", r.measured},
                      {"tolerance", r.tolerance},
                      {"seconds", r.seconds},
                      {"detail", r.detail}});
      ok = ok && r.passed;
    }
    report["criteria"] = crit;
    report["passed"] = ok;
    out.exit_code = ok ? kExitOk : kExitAcceptanceFailure;
  } else {
    const Scenario s = resolve_scenario(config);
    if (config.mode == Mode::oracle) {
      report["oracle"] = oracle_json(s.oracle);
      char buf[200];
      std::snprintf(buf, sizeof buf, "%s oracle = %.17g", s.name.c_str(), s.oracle.value);
      out.text = buf;
      if (s.oracle.imag != 0.0) {
        std::snprintf(buf, sizeof buf, " + %.17gi", s.oracle.imag);
        out.text += buf;
      }
      out.text += " (" + s.oracle.derivation + ")\n";
    } else {
      ConvergenceTable t;
      bool with_nu = true;
      const bool single =
          config.mode == Mode::pair || (config.mode == Mode::residue && (!config.js.empty() || config.nus.size() == 1));
      if (single) {
        const PathSchedule schedule = config.schedule.value_or(s.schedule);
        std::vector<double> js = config.js;
        double nu = std::nan("");
        if (js.empty()) {
          nu = config.nus.front();
          js = schedule.js(nu);
        }
        with_nu = config.js.empty();
        t = single_row(s, js, nu, config.quadrature);
        if (with_nu) t.verdict = check_admissible(schedule);
      } else {
        const PathSchedule schedule = config.schedule.value_or(s.schedule);
        const std::vector<double> nus = config.nus.empty() ? s.nus : config.nus;
        t = run_scenario(s, schedule, nus, config.quadrature);
      }
      out.csv = table_csv(t, with_nu);
      out.text = table_text(t, with_nu);
      report["scenario"] = t.scenario;
      report["verdict"] = to_string(t.verdict);
      report["oracle"] = oracle_json(t.oracle);
      report["rows"] = rows_json(t, with_nu);
      report["deviation"] = std::isfinite(t.final_deviation) ? json(t.final_deviation) : json(nullptr);
      report["all_converged"] = t.all_converged;
      if (!t.all_converged) {
        out.exit_code = kExitBudgetExhausted;
        out.text += "quadrature did not converge within its budget\n";
      }
    }
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report["wall_time_s"] = wall;
  out.report = report;
  if (!config.csv_path.empty() && !out.csv.empty()) write_file_atomic(config.csv_path, out.csv);
  if (!config.json_path.empty()) write_file_atomic(config.json_path, report.dump(2) + "\n");
  return out;
}

}  // namespace malab
