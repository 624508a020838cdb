#pragma once

#include <stdexcept>
#include <string>

namespace poincare {

// Base of all library errors. code() is the stable identifier written into
// JSON reports.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what) : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message, bool semantic = false)
      : Error("ParseError", std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        semantic_(semantic) {}
  int line() const { return line_; }
  int column() const { return column_; }
  // Semantic errors (non-strict relation, degree limit) are final; syntax
  // errors may be retried by the parser on another alternative.
  bool semantic() const { return semantic_; }

 private:
  int line_;
  int column_;
  bool semantic_;
};

class ParameterOutOfRange : public Error {
 public:
  explicit ParameterOutOfRange(const std::string& what) : Error("ParameterOutOfRange", what) {}
};

class Unbounded : public Error {
 public:
  explicit Unbounded(const std::string& what) : Error("Unbounded", what) {}
};

class EmptyFiber : public Error {
 public:
  explicit EmptyFiber(const std::string& what) : Error("EmptyFiber", what) {}
};

class EmptySamples : public Error {
 public:
  explicit EmptySamples(const std::string& what) : Error("EmptySamples", what) {}
};

class DegenerateGeometry : public Error {
 public:
  DegenerateGeometry(double x_lo, double x_hi, const std::string& what)
      : Error("DegenerateGeometry", what + " on x-interval [" + std::to_string(x_lo) + ", " + std::to_string(x_hi) + "]"),
        x_lo_(x_lo),
        x_hi_(x_hi) {}
  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }

 private:
  double x_lo_;
  double x_hi_;
};

class DegenerateBoundary : public Error {
 public:
  explicit DegenerateBoundary(const std::string& what) : Error("DegenerateBoundary", what) {}
};

class RasterMismatch : public Error {
 public:
  explicit RasterMismatch(const std::string& what) : Error("RasterMismatch", what) {}
};

class NotApplicable : public Error {
 public:
  explicit NotApplicable(const std::string& what) : Error("NotApplicable", what) {}
};

class SolverDiverged : public Error {
 public:
  SolverDiverged(const std::string& what, double best_constant, int iterations)
      : Error("SolverDiverged", what), best_constant_(best_constant), iterations_(iterations) {}
  double best_constant() const { return best_constant_; }
  int iterations() const { return iterations_; }

 private:
  double best_constant_;
  int iterations_;
};

}  // namespace poincare
