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

#ifndef LIDKIT_ERROR_HPP_
#define LIDKIT_ERROR_HPP_

#include <sstream>
#include <stdexcept>
#include <string>

namespace lidkit {

// Error categories map 1:1 onto CLI exit codes: usage=2, data=3, internal=4.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& m) : std::runtime_error(m) {}
};

class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& m) : std::runtime_error(m) {}
};

class InternalError : public std::runtime_error {
 public:
  explicit InternalError(const std::string& m) : std::runtime_error(m) {}
};

namespace detail {
inline void msg_append(std::ostringstream&) {}
template <typename T, typename... Rest>
void msg_append(std::ostringstream& os, const T& v, const Rest&... rest) {
  os << v;
  msg_append(os, rest...);
}
}  // namespace detail

template <typename... Args>
std::string msg(const Args&... args) {
  std::ostringstream os;
  detail::msg_append(os, args...);
  return os.str();
}

}  // namespace lidkit

#endif  // LIDKIT_ERROR_HPP_
