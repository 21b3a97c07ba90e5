#ifndef LCFRS_ERROR_HPP
#define LCFRS_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lcfrs {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arity or fanout mismatch between a composition and its arguments.
class SortError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A derivation or tree does not have the shape an operation requires.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Annotations or flags of a (predicted) derivation contradict each other.
class CorruptDerivation : public Error {
 public:
  using Error::Error;
};

// Malformed input file; carries the 1-based line number when known.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace lcfrs

#endif  // LCFRS_ERROR_HPP
