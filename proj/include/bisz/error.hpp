#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bisz {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Byte range [begin, end) into an expression source string.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::string expected, const std::string& msg)
      : Error(msg), offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

class UnknownIdentifier : public ParseError {
 public:
  UnknownIdentifier(std::size_t offset, std::string name)
      : ParseError(offset, "identifier",
                   "unknown identifier '" + name + "' at offset " + std::to_string(offset)),
        name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class EvaluationError : public Error {
 public:
  EvaluationError(SourceSpan span, const std::string& msg) : Error(msg), span_(span) {}
  explicit EvaluationError(const std::string& msg) : Error(msg) {}

  SourceSpan span() const noexcept { return span_; }

 private:
  SourceSpan span_{};
};

class UnknownBuiltin : public Error {
 public:
  using Error::Error;
};

class TruncationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace bisz
