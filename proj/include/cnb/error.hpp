#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace cnb {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input data or arguments (CLI exit code 2).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Input file problem that can be pinned to a location.
class DataError : public InputError {
 public:
  DataError(const std::string& what, std::optional<std::size_t> row,
            std::optional<std::string> column)
      : InputError(format(what, row, column)), row_(row), column_(std::move(column)) {}

  /// 1-based data row (header excluded), if known.
  const std::optional<std::size_t>& row() const { return row_; }
  const std::optional<std::string>& column() const { return column_; }

 private:
  static std::string format(const std::string& what, std::optional<std::size_t> row,
                            const std::optional<std::string>& column) {
    std::string out = what;
    if (row) out += " (row " + std::to_string(*row);
    if (column) out += std::string(row ? ", " : " (") + "column '" + *column + "'";
    if (row || column) out += ")";
    return out;
  }

  std::optional<std::size_t> row_;
  std::optional<std::string> column_;
};

/// Numerical failure: divergence, non-convergence, singularity (CLI exit code 3).
class NumericError : public Error {
 public:
  using Error::Error;
};

enum class Endpoint { kZero, kOne };

inline const char* to_string(Endpoint e) { return e == Endpoint::kZero ? "t=0" : "t=1"; }

/// A threshold integral that does not converge at one of the endpoints.
class DivergenceError : public NumericError {
 public:
  DivergenceError(Endpoint endpoint, const std::string& what)
      : NumericError(what), endpoint_(endpoint) {}

  Endpoint endpoint() const { return endpoint_; }

 private:
  Endpoint endpoint_;
};

}  // namespace cnb
