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

#include "lidkit/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lidkit/error.hpp"

namespace fs = std::filesystem;

namespace lidkit {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(msg("cannot open file: ", path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(msg("cannot open file: ", path));
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void atomic_write_file(const std::string& path, const std::string& content) {
  fs::path target(path);
  fs::path dir = target.parent_path();
  if (dir.empty()) dir = ".";
  if (!fs::exists(dir)) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError(msg("cannot create directory: ", dir.string()));
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(msg("cannot open for writing: ", tmp.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw DataError(msg("write failed: ", tmp.string()));
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw DataError(msg("rename failed: ", tmp.string(), " -> ", path));
  }
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) throw DataError(msg("cannot create directory: ", path));
}

bool file_exists(const std::string& path) { return fs::exists(path); }

std::map<std::string, std::string> read_kv_file(const std::string& path) {
  std::map<std::string, std::string> out;
  for (const std::string& line : read_lines(path)) {
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError(msg(path, ": expected key=value, got '", line, "'"));
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

void write_kv_file(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& kv) {
  std::string content;
  for (const auto& [k, v] : kv) content += k + "=" + v + "\n";
  atomic_write_file(path, content);
}

void write_kv_file(const std::string& path,
                   const std::map<std::string, std::string>& kv) {
  write_kv_file(path,
                std::vector<std::pair<std::string, std::string>>(kv.begin(),
                                                                 kv.end()));
}

void warn(const std::string& message) {
  std::cerr << "warning: " << message << "\n";
}

}  // namespace lidkit
