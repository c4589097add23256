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

#ifndef LIDKIT_CORPUS_HPP_
#define LIDKIT_CORPUS_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace lidkit {

struct NormalizationConfig {
  bool lowercase = true;
  bool strip_punctuation = true;
  bool collapse_whitespace = true;
  // Lines longer than this are cut at the last whitespace before the limit
  // (hard cut if there is none). Measured in code points.
  size_t max_line_chars = 2000;
  // Code points removed when strip_punctuation is set.
  std::u32string punctuation = U"!\"#$%&()*+,-./:;<=>?@[\\]^_`{|}~"
                               U"¡¿‘’“”"
                               U"…。、，！？"
                               U"«»–—";
};

// One language's text corpus, one sentence per line, already normalized.
struct TextCorpus {
  std::string language;
  std::vector<std::string> lines;
};

std::string normalize_line(const std::string& line,
                           const NormalizationConfig& config);

// Loads a UTF-8, one-sentence-per-line file. Empty-after-normalization
// lines are dropped. Invalid UTF-8 is rejected naming the 1-based line.
TextCorpus load_corpus(const std::string& path, const std::string& language,
                       const NormalizationConfig& config = {});

TextCorpus make_corpus(const std::string& language,
                       std::vector<std::string> raw_lines,
                       const NormalizationConfig& config = {});

// Uniform sample without replacement (seeded shuffle prefix); identity when
// the corpus already fits the budget.
TextCorpus sample_lines(const TextCorpus& corpus, size_t max_n, uint64_t seed);

}  // namespace lidkit

#endif  // LIDKIT_CORPUS_HPP_
