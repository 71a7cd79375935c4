// Copyright 2026 The Stackrel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STACKREL_ERRORS_H_
#define STACKREL_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stackrel {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document. Line and column are 1-based; zero when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A domain invariant or precondition does not hold. `check()` names it.
class ValidationError : public Error {
 public:
  ValidationError(std::string check, const std::string& detail);

  const std::string& check() const { return check_; }

 private:
  std::string check_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Geometry that admits no answer, e.g. two clouds whose every point pair
// coincides.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Singular or non-finite arithmetic (antipodal means, collapsed components).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ComponentCollapseError : public NumericalError {
 public:
  ComponentCollapseError(std::size_t component, double total_responsibility);

  std::size_t component() const { return component_; }

 private:
  std::size_t component_;
};

}  // namespace stackrel

#endif  // STACKREL_ERRORS_H_
