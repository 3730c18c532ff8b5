#include "malab/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "malab/errors.hpp"

namespace malab {

const char* to_string(Admissibility a) {
  switch (a) {
    case Admissibility::admissible:
      return "admissible";
    case Admissibility::inadmissible:
      return "inadmissible";
    case Admissibility::undetermined:
      return "undetermined";
  }
  return "undetermined";
}

PathSchedule PathSchedule::polynomial(std::vector<int> exponents, std::vector<double> scales) {
  if (scales.empty()) scales.assign(exponents.size(), 1.0);
  if (scales.size() != exponents.size()) throw InputError("schedule scales must match exponents");
  for (double s : scales) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InputError("schedule scales must be positive");
  }
  PathSchedule p;
  p.kind_ = Kind::polynomial;
  p.exponents_ = std::move(exponents);
  p.scales_ = std::move(scales);
  return p;
}

PathSchedule PathSchedule::table(std::vector<double> nus, std::vector<std::vector<double>> rows) {
  if (nus.size() != rows.size()) throw InputError("schedule table needs one row per nu");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw InputError("schedule table rows must share the arity");
    if (i > 0 && !(nus[i] > nus[i - 1])) throw InputError("schedule table nu values must increase");
  }
  PathSchedule p;
  p.kind_ = Kind::table;
  p.nus_ = std::move(nus);
  p.rows_ = std::move(rows);
  return p;
}

int PathSchedule::rank() const {
  if (kind_ == Kind::polynomial) return static_cast<int>(exponents_.size());
  return rows_.empty() ? 0 : static_cast<int>(rows_.front().size());
}

std::vector<double> PathSchedule::js(double nu) const {
  if (kind_ == Kind::polynomial) {
    std::vector<double> out(exponents_.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = scales_[k] * std::pow(nu, exponents_[k]);
    return out;
  }
  const auto it = std::find(nus_.begin(), nus_.end(), nu);
  if (it == nus_.end()) throw LookupError("nu is not a row of the schedule table");
  return rows_[static_cast<std::size_t>(it - nus_.begin())];
}

namespace {

Admissibility check_table(const PathSchedule& s) {
  const auto& rows = s.table_rows();
  const std::size_t count = rows.size();
  if (count < 4) return Admissibility::undetermined;
  const int r = s.rank();
  static constexpr double kQs[] = {0.0, 1.0, 2.0, 4.0, 8.0};
  // Sequences whose limit must be +inf: j_k - q j_{k+1} for k < r, and j_r.
  std::vector<std::vector<double>> seqs;
  for (int k = 0; k + 1 < r; ++k) {
    for (double q : kQs) {
      std::vector<double> d(count);
      for (std::size_t i = 0; i < count; ++i) d[i] = rows[i][k] - q * rows[i][k + 1];
      seqs.push_back(std::move(d));
    }
  }
  std::vector<double> last(count);
  for (std::size_t i = 0; i < count; ++i) last[i] = rows[i][r - 1];
  seqs.push_back(std::move(last));

  // Only the last half of the table is read as the trend.
  bool all_increasing = true;
  for (const auto& d : seqs) {
    bool decreasing_tail = true;
    bool increasing_tail = true;
    for (std::size_t i = count / 2 + 1; i < count; ++i) {
      decreasing_tail = decreasing_tail && d[i] < d[i - 1];
      increasing_tail = increasing_tail && d[i] > d[i - 1];
    }
    if (decreasing_tail) return Admissibility::inadmissible;
    all_increasing = all_increasing && increasing_tail;
  }
  return all_increasing ? Admissibility::admissible : Admissibility::undetermined;
}

}  // namespace

Admissibility check_admissible(const PathSchedule& s) {
  if (s.rank() < 1) throw InputError("empty schedule");
  if (s.kind() == PathSchedule::Kind::table) return check_table(s);
  const auto& d = s.exponents();
  for (std::size_t k = 0; k + 1 < d.size(); ++k) {
    if (d[k] <= d[k + 1]) return Admissibility::inadmissible;
  }
  return d.back() >= 1 ? Admissibility::admissible : Admissibility::inadmissible;
}

std::vector<double> eps_of_j(const std::vector<double>& js) {
  std::vector<double> out(js.size());
  for (std::size_t k = 0; k < js.size(); ++k) {
    if (!std::isfinite(js[k]) || js[k] < -700.0) throw RangeError("eps = exp(-j) overflows for j < -700");
    out[k] = std::exp(-js[k]);
  }
  return out;
}

}  // namespace malab
