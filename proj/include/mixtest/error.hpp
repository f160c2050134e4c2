#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace mixtest {

// Base of every error raised by the library. The CLI maps the three
// families (usage, data, numerical) onto distinct exit statuses.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function (non-finite
// input, level outside (0,1), negative statistic, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

// Inputs whose shapes disagree, e.g. values and weight rows of different
// lengths.
class ContractError : public Error {
public:
  using Error::Error;
};

// --- numerical failures -----------------------------------------------------

class NumericalError : public Error {
public:
  using Error::Error;
};

class SingularDesignError : public NumericalError {
public:
  SingularDesignError(double determinant, std::size_t n);
  double determinant() const noexcept { return determinant_; }
  std::size_t size() const noexcept { return n_; }

private:
  double determinant_;
  std::size_t n_;
};

class DegenerateVarianceError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

// A test that cannot be computed on the given data because a required
// subsample is empty. Distinct from a non-rejection.
class NotAvailableError : public Error {
public:
  using Error::Error;
};

// --- configuration and data -------------------------------------------------

class ConfigError : public Error {
public:
  using Error::Error;
};

class DataError : public Error {
public:
  using Error::Error;
};

class SchemaError : public DataError {
public:
  using DataError::DataError;
};

class EmptyInputError : public DataError {
public:
  using DataError::DataError;
};

// One or more unparseable rows. line() is the first offending line
// (1-based, header is line 1); what() lists all of them.
class RowError : public DataError {
public:
  RowError(std::size_t first_line, const std::string& message)
      : DataError(message), line_(first_line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class LookupError : public DataError {
public:
  LookupError(std::string key, const std::string& message)
      : DataError(message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

} // namespace mixtest
