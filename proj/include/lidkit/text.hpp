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

#ifndef LIDKIT_TEXT_HPP_
#define LIDKIT_TEXT_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace lidkit {

// UTF-8 decoding. Returns false and sets *bad_offset (byte offset of the
// first offending byte) on malformed input. Overlong encodings and
// surrogate code points are rejected.
bool utf8_decode(const std::string& s, std::vector<char32_t>* out,
                 size_t* bad_offset);

// Throwing variant; reports the byte offset of the first bad byte.
std::vector<char32_t> to_codepoints(const std::string& s);

std::string to_utf8(char32_t c);
std::string to_utf8(const std::vector<char32_t>& cps);

char32_t to_lower_cp(char32_t c);
bool is_space_cp(char32_t c);

std::vector<std::string> split(const std::string& s, char delim);
std::string join(const std::vector<std::string>& parts, const std::string& sep);

// Locale-independent numeric parsing/formatting. Parse errors name the
// offending text; the context overloads prefix where it came from.
double parse_double(const std::string& s);
long long parse_int(const std::string& s);
double parse_double(const std::string& s, const std::string& context);
long long parse_int(const std::string& s, const std::string& context);
// 17 significant digits: round-trips any double exactly.
std::string format_double(double v, int significant_digits = 17);

}  // namespace lidkit

#endif  // LIDKIT_TEXT_HPP_
