#pragma once

#include <vector>

namespace malab {

enum class Admissibility { admissible, inadmissible, undetermined };

const char* to_string(Admissibility a);

/// nu -> (j_1(nu), ..., j_r(nu)).
class PathSchedule {
 public:
  enum class Kind { polynomial, table };

  PathSchedule() = default;

  /// j_k(nu) = scales[k] * nu^exponents[k]; scales default to 1.
  static PathSchedule polynomial(std::vector<int> exponents, std::vector<double> scales = {});
  /// Explicit rows (nu, j_1..j_r).
  static PathSchedule table(std::vector<double> nus, std::vector<std::vector<double>> rows);

  Kind kind() const noexcept { return kind_; }
  int rank() const;
  const std::vector<int>& exponents() const noexcept { return exponents_; }
  const std::vector<double>& scales() const noexcept { return scales_; }
  const std::vector<double>& table_nus() const noexcept { return nus_; }
  const std::vector<std::vector<double>>& table_rows() const noexcept { return rows_; }

  std::vector<double> js(double nu) const;

  bool operator==(const PathSchedule&) const = default;

 private:
  Kind kind_ = Kind::polynomial;
  std::vector<int> exponents_;
  std::vector<double> scales_;
  std::vector<double> nus_;
  std::vector<std::vector<double>> rows_;
};

Admissibility check_admissible(const PathSchedule& s);

/// eps_k = exp(-j_k).
std::vector<double> eps_of_j(const std::vector<double>& js);

}  // namespace malab
