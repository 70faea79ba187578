#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ccp {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised by the expression parser. Carries the byte offset of the offending
/// token and a hint describing what was expected there.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& expected, const std::string& msg)
      : Error(msg), offset_(offset), expected_(expected) {}
  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

/// Missing variable binding or an evaluation outside the function domain
/// (division by zero, log of a nonpositive number, sqrt of a negative number,
/// overflow). Expression evaluation never returns a silent NaN/Inf.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// A pointwise degeneracy: non-hyperbolic point, vanishing Jacobian, or
/// vanishing canonical weight beta.
class DegeneracyError : public Error {
 public:
  DegeneracyError(const std::string& msg, double x1, double x2)
      : Error(msg), x1_(x1), x2_(x2) {}
  double x1() const { return x1_; }
  double x2() const { return x2_; }

 private:
  double x1_, x2_;
};

/// Newton iteration failed to reach the requested residual. Carries the last
/// iterate and its residual norm.
class NewtonError : public Error {
 public:
  NewtonError(const std::string& msg, double x1, double x2, double residual)
      : Error(msg), x1_(x1), x2_(x2), residual_(residual) {}
  double x1() const { return x1_; }
  double x2() const { return x2_; }
  double residual() const { return residual_; }

 private:
  double x1_, x2_;
  double residual_;
};

/// Fixed-point iteration exhausted its budget. Carries the sup-norm history
/// of successive differences.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& msg, std::vector<double> history)
      : Error(msg), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

/// Malformed problem-spec file. Carries the 1-based line number.
class SpecError : public Error {
 public:
  SpecError(int line, const std::string& msg) : Error(msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace ccp
