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

#include "stackrel/errors.h"

#include <sstream>
#include <utility>

namespace stackrel {

namespace {

std::string FormatParseMessage(const std::string& message, std::size_t line,
                               std::size_t column) {
  std::ostringstream out;
  out << "parse error";
  if (line > 0) out << " at line " << line << ", column " << column;
  out << ": " << message;
  return out.str();
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t line,
                       std::size_t column)
    : Error(FormatParseMessage(message, line, column)),
      line_(line),
      column_(column) {}

ValidationError::ValidationError(std::string check, const std::string& detail)
    : Error("validation failed [" + check + "]: " + detail),
      check_(std::move(check)) {}

ComponentCollapseError::ComponentCollapseError(std::size_t component,
                                               double total_responsibility)
    : NumericalError("mixture component " + std::to_string(component) +
                     " collapsed (total responsibility " +
                     std::to_string(total_responsibility) + ")"),
      component_(component) {}

}  // namespace stackrel
