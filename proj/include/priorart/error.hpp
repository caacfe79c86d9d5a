#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace priorart {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed record or data file. `offset` is a byte offset within the
// offending line, `line` is 1-based when known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset = 0, std::size_t line = 0)
      : Error(what), offset_(offset), line_(line) {}
  std::size_t offset() const { return offset_; }
  std::size_t line() const { return line_; }

 private:
  std::size_t offset_;
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class EmptyQueryError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

}  // namespace priorart
