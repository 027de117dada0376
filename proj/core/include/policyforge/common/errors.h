// Copyright 2026 The PolicyForge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POLICYFORGE_COMMON_ERRORS_H_
#define POLICYFORGE_COMMON_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace policyforge {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Syntax violation in policy source. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  int line_;
  int column_;
  std::string message_;
};

// Source uses a feature outside the policy grammar (loops, imports, ...).
class UnsupportedConstruct : public Error {
 public:
  UnsupportedConstruct(const std::string& construct, int line = 0,
                       int column = 0)
      : Error("unsupported construct '" + construct + "'"),
        construct_(construct),
        line_(line),
        column_(column) {}

  const std::string& construct() const { return construct_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string construct_;
  int line_;
  int column_;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(const std::string& what, std::size_t expected,
                    std::size_t actual)
      : Error(what + ": expected dimension " + std::to_string(expected) +
              ", got " + std::to_string(actual)),
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

class IoError : public Error {
 public:
  using Error::Error;
};

class ProtocolError : public Error {
 public:
  ProtocolError(const std::string& field, const std::string& message)
      : Error("protocol error in field '" + field + "': " + message),
        field_(field) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class TimeoutError : public Error {
 public:
  using Error::Error;
};

class EmptyDatabase : public Error {
 public:
  EmptyDatabase() : Error("the program database has no entries") {}
};

class SchemaVersionMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace policyforge

#endif  // POLICYFORGE_COMMON_ERRORS_H_
