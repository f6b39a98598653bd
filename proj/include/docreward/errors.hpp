#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace docreward {

// Root of every error this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A violated precondition (wrong sizes, out-of-range arguments).
class ContractError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class SchemaError : public ParseError {
 public:
  SchemaError(std::size_t line, std::string field, const std::string& what)
      : ParseError(line, what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class DomainError : public ParseError {
 public:
  using ParseError::ParseError;
};

class DatasetError : public Error {
 public:
  using Error::Error;
};

class SegmentationError : public Error {
 public:
  SegmentationError(std::size_t offset, const std::string& what)
      : Error("byte " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

class ImageError : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  TransportError(const std::string& what, int attempts)
      : Error(what + " (after " + std::to_string(attempts) + " attempt" +
              (attempts == 1 ? "" : "s") + ")"),
        attempts_(attempts) {}
  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

class DimensionError : public TransportError {
 public:
  DimensionError(std::size_t expected, std::size_t actual, int attempts)
      : TransportError("embedding dimension mismatch: expected " +
                           std::to_string(expected) + ", got " +
                           std::to_string(actual),
                       attempts),
        expected_(expected),
        actual_(actual) {}
  std::size_t expected() const { return expected_; }
  std::size_t actual() const { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ReportError : public Error {
 public:
  using Error::Error;
};

}  // namespace docreward
