#pragma once

#include <stdexcept>
#include <string>

namespace flatflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a constitutive function or operator.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Time step larger than the stability bound of an explicit update.
class CflViolation : public Error {
 public:
  CflViolation(double dt, double limit);
  double dt() const noexcept { return dt_; }
  double limit() const noexcept { return limit_; }

 private:
  double dt_;
  double limit_;
};

/// Iterative solver failed to reach its tolerance.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, int iterations, double residual);
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// Malformed configuration document; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Well-formed configuration with an invalid or missing field.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace flatflow
