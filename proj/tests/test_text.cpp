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

#include <cmath>
#include <limits>

#include "doctest.h"
#include "lidkit/error.hpp"
#include "lidkit/rng.hpp"
#include "lidkit/text.hpp"

using namespace lidkit;

TEST_CASE("utf8 round trip") {
  const std::string samples[] = {"", "abc", "\xc3\xa9t\xc3\xa9", "\xe6\x97\xa5",
                                 "\xf0\x9f\x98\x80", "a\xcc\x80"};
  for (const std::string& s : samples) {
    CHECK_EQ(to_utf8(to_codepoints(s)), s);
  }
}

TEST_CASE("utf8 rejects malformed input with the byte offset") {
  std::vector<char32_t> cps;
  size_t off = 99;
  CHECK_FALSE(utf8_decode(std::string("ab\xff"), &cps, &off));
  CHECK_EQ(off, 2);
  // Overlong encoding of '/'.
  CHECK_FALSE(utf8_decode(std::string("\xc0\xaf"), &cps, &off));
  CHECK_EQ(off, 0);
  // Truncated sequence.
  CHECK_FALSE(utf8_decode(std::string("\xe6\x97"), &cps, &off));
  // CESU-style surrogate.
  CHECK_FALSE(utf8_decode(std::string("\xed\xa0\x80"), &cps, &off));
  CHECK_THROWS_AS(to_codepoints("\xff"), DataError);
}

TEST_CASE("to_lower_cp covers ascii and common accents") {
  CHECK_EQ(to_lower_cp(U'A'), U'a');
  CHECK_EQ(to_lower_cp(U'Z'), U'z');
  CHECK_EQ(to_lower_cp(U'a'), U'a');
  CHECK_EQ(to_lower_cp(0xC9), 0xE9);    // E acute
  CHECK_EQ(to_lower_cp(0x416), 0x436);  // Cyrillic Zhe
  CHECK_EQ(to_lower_cp(U'3'), U'3');
}

TEST_CASE("split keeps empty fields") {
  CHECK_EQ(split("a\tb\tc", '\t'), std::vector<std::string>({"a", "b", "c"}));
  CHECK_EQ(split("a\t", '\t'), std::vector<std::string>({"a", ""}));
  CHECK_EQ(split("", '\t'), std::vector<std::string>({""}));
  CHECK_EQ(split("\t\t", '\t'), std::vector<std::string>({"", "", ""}));
}

TEST_CASE("join is split's inverse for delimiter-free parts") {
  const std::vector<std::string> parts = {"x", "yy", "z"};
  CHECK_EQ(split(join(parts, ","), ','), parts);
  CHECK_EQ(join({}, ","), "");
}

TEST_CASE("format_double round trips doubles exactly at 17 digits") {
  Rng rng(17);
  for (int i = 0; i < 1000; ++i) {
    double v = std::exp(40.0 * rng.uniform() - 20.0);
    if (rng.uniform() < 0.5) v = -v;
    CHECK_EQ(parse_double(format_double(v)), v);
  }
  CHECK_EQ(parse_double(format_double(0.1)), 0.1);
  CHECK_EQ(parse_double("-99"), -99.0);
}

TEST_CASE("numeric parsing rejects junk and adds context") {
  CHECK_THROWS_AS(parse_double("1.2.3"), DataError);
  CHECK_THROWS_AS(parse_double(""), DataError);
  CHECK_THROWS_AS(parse_int("12x"), DataError);
  try {
    parse_double("zig", "file.tsv line 3");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("file.tsv line 3") != std::string::npos);
    CHECK(std::string(e.what()).find("zig") != std::string::npos);
  }
}

TEST_CASE("rng is deterministic and in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    CHECK_EQ(a.next_u64(), b.next_u64());
  }
  Rng r(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.uniform_index(10) < 10);
  }
  // Box-Muller output has roughly the right first two moments.
  Rng n(5);
  double sum = 0.0, sq = 0.0;
  const int kN = 20000;
  for (int i = 0; i < kN; ++i) {
    const double x = n.normal();
    sum += x;
    sq += x * x;
  }
  CHECK(std::abs(sum / kN) < 0.05);
  CHECK(std::abs(sq / kN - 1.0) < 0.05);
}
