#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace boolkill {

// Base of every error raised by the library. `kind()` separates bad
// configuration (caller's flags or parameters) from bad data (files,
// records, corrupted chains) so the CLI can map them to exit codes.
class Error : public std::runtime_error {
 public:
  enum class Kind { Config, Data };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(Kind::Config, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(Kind::Data, what) {}
};

// A chain whose statements reference themselves, later statements or
// nonexistent ones.
class StructureError : public DataError {
 public:
  explicit StructureError(const std::string& what) : DataError("malformed chain: " + what) {}
};

// Text that does not follow the statement grammar. `line()` is 1-based.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace boolkill
