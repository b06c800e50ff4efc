#include "flatflow/error.hpp"

#include <cstdio>

namespace flatflow {

namespace {

std::string describe_cfl(double dt, double limit) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "time step %.6e exceeds stability limit %.6e", dt, limit);
  return buf;
}

std::string describe_solver(const std::string& what, int iterations, double residual) {
  char buf[64];
  std::snprintf(buf, sizeof buf, " (%d iterations, residual %.3e)", iterations, residual);
  return what + buf;
}

}  // namespace

CflViolation::CflViolation(double dt, double limit)
    : Error(describe_cfl(dt, limit)), dt_(dt), limit_(limit) {}

SolverError::SolverError(const std::string& what, int iterations, double residual)
    : Error(describe_solver(what, iterations, residual)),
      iterations_(iterations),
      residual_(residual) {}

ParseError::ParseError(int line, const std::string& message)
    : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

ValidationError::ValidationError(std::string field, const std::string& message)
    : Error(message), field_(std::move(field)) {}

}  // namespace flatflow
