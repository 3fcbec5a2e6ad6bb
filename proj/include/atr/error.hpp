#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace atr {

/// Base for all data-level failures (bad input files, degenerate corpora).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A malformed line in one of the text formats. `line()` is 1-based, 0 if unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class EmptyCorpusError : public Error {
 public:
  EmptyCorpusError() : Error("corpus contains no tokens") {}
};

/// Configuration file problems: unknown fields, wrong types, invalid values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace atr
