#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace aft {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class KindMismatch : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NoInverse : public Error {
 public:
  using Error::Error;
};

class DegenerateSamples : public Error {
 public:
  using Error::Error;
};

class NonNumeric : public Error {
 public:
  using Error::Error;
};

class EmptyCondition : public Error {
 public:
  using Error::Error;
};

class NotMatched : public Error {
 public:
  using Error::Error;
};

class NonNumericPolicy : public Error {
 public:
  using Error::Error;
};

class TooManyNodes : public Error {
 public:
  using Error::Error;
};

class PastEvent : public Error {
 public:
  using Error::Error;
};

class ModelMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidAxis : public Error {
 public:
  using Error::Error;
};

/// Collects every violated invariant instead of stopping at the first one.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace aft
