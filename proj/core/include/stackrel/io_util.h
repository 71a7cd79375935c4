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

#ifndef STACKREL_IO_UTIL_H_
#define STACKREL_IO_UTIL_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace stackrel {

// Reads a whole file as bytes. Throws IoError.
std::string ReadFile(const std::filesystem::path& path);

// Writes to a sibling temp file and renames it over `path`, so concurrent
// readers never observe a partial file. Creates parent directories.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace stackrel

#endif  // STACKREL_IO_UTIL_H_
