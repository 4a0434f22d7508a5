#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace runtrim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Manifest/CSV header problems, or two datasets that do not share a manifest.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A data row violates a record invariant. `row()` is the 1-based data row.
class RowError : public Error {
 public:
  RowError(std::size_t row, const std::string& what)
      : Error("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Invalid algorithm parameter (k out of range, eps <= 0, empty grid, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A model cannot be fitted on the given training data.
class ModelUnavailable : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Malformed config, manifest, or serialized model text.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace runtrim
