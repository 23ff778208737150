#pragma once

#include <stdexcept>
#include <string>

namespace infocontent {

// Base of every error the library raises. The category maps onto the C API
// status codes.
class Error : public std::runtime_error {
 public:
  enum class Kind { kInvalidArgument, kIo, kParse, kConfig, kDependency, kNumeric };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(Kind::kInvalidArgument, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(Kind::kIo, what) {}
};

// Malformed input data. Carries the 1-based data row (header excluded) and
// field name when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t row, const std::string& field,
             const std::string& detail)
      : Error(Kind::kParse, source + ": row " + std::to_string(row) + ", field '" + field +
                                "': " + detail),
        row_(row),
        field_(field) {}
  explicit ParseError(const std::string& what) : Error(Kind::kParse, what) {}

  std::size_t row() const noexcept { return row_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t row_ = 0;
  std::string field_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(Kind::kConfig, what) {}
};

class DependencyError : public Error {
 public:
  explicit DependencyError(const std::string& what) : Error(Kind::kDependency, what) {}
};

// Rank deficiency, separation, non-convergence and similar fitting failures.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(Kind::kNumeric, what) {}
};

}  // namespace infocontent
