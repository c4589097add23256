// Copyright 2025 lidkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LIDKIT_IO_HPP_
#define LIDKIT_IO_HPP_

#include <map>
#include <string>
#include <vector>

namespace lidkit {

// Reads a text file line by line; trailing '\r' is stripped, a trailing
// empty line from a final '\n' is not returned. Throws DataError if the
// file cannot be opened.
std::vector<std::string> read_lines(const std::string& path);

std::string read_file(const std::string& path);

// Writes via a temp file in the same directory followed by a rename, so a
// failed run never leaves a truncated output behind.
void atomic_write_file(const std::string& path, const std::string& content);

void ensure_dir(const std::string& path);
bool file_exists(const std::string& path);

// key=value text, one pair per line, '#' comments allowed.
std::map<std::string, std::string> read_kv_file(const std::string& path);
void write_kv_file(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& kv);
void write_kv_file(const std::string& path,
                   const std::map<std::string, std::string>& kv);

void warn(const std::string& message);

}  // namespace lidkit

#endif  // LIDKIT_IO_HPP_
