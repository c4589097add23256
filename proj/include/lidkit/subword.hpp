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

#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "lidkit/corpus.hpp"

namespace lidkit {

// Unigram subword vocabulary. Log-probabilities are natural log.
struct SubwordVocab {
  std::map<std::string, double> entries;
  size_t target_size = 0;
  std::set<std::string> coverage_alphabet;  // single-codepoint tokens
};

struct Segmentation {
  std::vector<std::string> tokens;
  double score = 0.0;  // natural log
};

// Viterbi corpus log-likelihood after each E step, grouped by prune round.
// Within one round the sequence is non-decreasing; pruning between rounds
// may drop it.
struct SubwordTrainTrace {
  std::vector<std::vector<double>> round_lls;
};

// Seeds with the seed_size most frequent substrings of length <= 8 (plus
// all single characters), then alternates hard-EM refinement with loss-based
// pruning of 20% of the multi-character tokens per round until target_size
// is reached. Single-character tokens are never pruned.
SubwordVocab train_unigram_vocab(const TextCorpus& corpus, size_t target_size,
                                 size_t seed_size,
                                 SubwordTrainTrace* trace = nullptr);

// Prebuilt index for repeated segmentation with one vocab.
class SubwordSegmenter {
 public:
  explicit SubwordSegmenter(const SubwordVocab& vocab);

  // Maximum-log-probability segmentation; ties broken by fewest tokens,
  // then lexicographically smallest token sequence.
  Segmentation segment(const std::string& text) const;

 private:
  std::unordered_map<std::u32string, double> index_;
  std::set<char32_t> alphabet_;
  size_t max_len_ = 0;
};

Segmentation segment_viterbi(const std::string& text,
                             const SubwordVocab& vocab);

// UTF-8 TSV `token<TAB>logprob`, sorted by token; round-trips bit-exactly.
void write_vocab_tsv(const SubwordVocab& vocab, const std::string& path);
SubwordVocab read_vocab_tsv(const std::string& path);

}  // namespace lidkit
