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

#include "lidkit/corpus.hpp"

#include <algorithm>
#include <unordered_set>

#include "lidkit/error.hpp"
#include "lidkit/io.hpp"
#include "lidkit/rng.hpp"
#include "lidkit/text.hpp"

namespace lidkit {

std::string normalize_line(const std::string& line,
                           const NormalizationConfig& config) {
  std::vector<char32_t> cps = to_codepoints(line);
  std::unordered_set<char32_t> punct(config.punctuation.begin(),
                                     config.punctuation.end());
  std::vector<char32_t> out;
  out.reserve(cps.size());
  for (char32_t c : cps) {
    if (config.lowercase) c = to_lower_cp(c);
    if (config.strip_punctuation && punct.count(c)) continue;
    if (config.collapse_whitespace && is_space_cp(c)) {
      if (!out.empty() && out.back() == U' ') continue;
      out.push_back(U' ');
      continue;
    }
    out.push_back(c);
  }
  // Trim
  size_t b = 0, e = out.size();
  while (b < e && is_space_cp(out[b])) ++b;
  while (e > b && is_space_cp(out[e - 1])) --e;
  out.assign(out.begin() + static_cast<ptrdiff_t>(b),
             out.begin() + static_cast<ptrdiff_t>(e));
  if (out.size() > config.max_line_chars) {
    size_t cut = config.max_line_chars;
    size_t ws = cut;
    while (ws > 0 && !is_space_cp(out[ws - 1])) --ws;
    if (ws > 0) cut = ws - 1;  // drop the whitespace itself
    out.resize(cut);
    while (!out.empty() && is_space_cp(out.back())) out.pop_back();
  }
  return to_utf8(out);
}

TextCorpus make_corpus(const std::string& language,
                       std::vector<std::string> raw_lines,
                       const NormalizationConfig& config) {
  if (language.empty()) throw UsageError("language code must be non-empty");
  if (config.max_line_chars < 1)
    throw UsageError("max_line_chars must be >= 1");
  TextCorpus corpus;
  corpus.language = language;
  for (size_t i = 0; i < raw_lines.size(); ++i) {
    std::string norm;
    try {
      norm = normalize_line(raw_lines[i], config);
    } catch (const DataError& e) {
      throw DataError(msg("line ", i + 1, ": ", e.what()));
    }
    if (!norm.empty()) corpus.lines.push_back(std::move(norm));
  }
  return corpus;
}

TextCorpus load_corpus(const std::string& path, const std::string& language,
                       const NormalizationConfig& config) {
  return make_corpus(language, read_lines(path), config);
}

TextCorpus sample_lines(const TextCorpus& corpus, size_t max_n,
                        uint64_t seed) {
  if (max_n < 1) throw UsageError("sample size must be >= 1");
  if (corpus.lines.size() <= max_n) return corpus;
  std::vector<std::string> pool = corpus.lines;
  Rng rng(seed);
  // Partial Fisher-Yates: after i steps the prefix [0, i) is a uniform
  // draw without replacement.
  for (size_t i = 0; i < max_n; ++i) {
    size_t j = i + static_cast<size_t>(rng.uniform_index(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  TextCorpus out;
  out.language = corpus.language;
  out.lines.assign(pool.begin(), pool.begin() + static_cast<ptrdiff_t>(max_n));
  return out;
}

}  // namespace lidkit
