#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lexplain {

// Bad invocation: unknown attribute, unknown relation, bad option value.
// The CLI maps it to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input data. The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed vertical input; carries the 1-based line number.
class IngestError : public DataError {
 public:
  IngestError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// CQL syntax or semantic error; carries the byte offset into the query text.
class QueryError : public DataError {
 public:
  QueryError(std::size_t offset, const std::string& what)
      : DataError("query error at offset " + std::to_string(offset) + ": " + what),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Sketch grammar error; carries the 1-based line and the relation involved.
class GrammarError : public DataError {
 public:
  GrammarError(std::size_t line, std::string relation, const std::string& what)
      : DataError("grammar line " + std::to_string(line) +
                  (relation.empty() ? std::string() : " (relation '" + relation + "')") +
                  ": " + what),
        line_(line),
        relation_(std::move(relation)) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& relation() const noexcept { return relation_; }

 private:
  std::size_t line_;
  std::string relation_;
};

// Frequencies that cannot come from one consistent count (f_xy above a marginal).
class CountingError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace lexplain
