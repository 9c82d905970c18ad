#ifndef RICIAN_ERROR_HPP
#define RICIAN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace rician {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A quadrature or iteration could not certify its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The prior/sample combination is not known to yield a proper posterior.
class ProprietyError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be inverted is singular or badly conditioned.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

}  // namespace rician

#endif
