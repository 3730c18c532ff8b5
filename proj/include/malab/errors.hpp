#pragma once

#include <stdexcept>
#include <string>

namespace malab {

/// Malformed arguments: dimension mismatch, wrong bidegree, bad parameters.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation requested on the unbounded locus {f = 0}.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A top-degree form whose density is not real within tolerance.
class ConjugateSymmetryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Unknown scenario or oracle name.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Config validation failure; `path` names the offending field.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace malab
