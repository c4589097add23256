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

#include <string>
#include <vector>

#include "lidkit/ctc.hpp"
#include "lidkit/ngram.hpp"
#include "lidkit/roman.hpp"

namespace lidkit {

struct DecoderConfig {
  int beam_width = 64;
  double lm_weight = 1.0;
  double word_insertion_bonus = 0.0;
  double blank_bias = 0.0;  // log10 additive on blank frames
};

struct DecodeResult {
  std::vector<std::string> tokens;
  std::string text;               // join of tokens
  double acoustic_logscore = 0.0;  // log10, best single alignment
  double lm_logscore = 0.0;        // log10, includes </s>
  double total_logscore = 0.0;
};

// Lexicon spellings compiled against a fixed symbol inventory, with LM token
// ids resolved up front. Immutable once built; shareable across decodes.
class LexiconTrie {
 public:
  struct Node {
    std::vector<std::pair<uint16_t, int>> children;  // symbol id -> node
    std::vector<int> labels;                         // completed token ids
  };
  struct TokenInfo {
    std::string text;
    uint16_t lm_id;
  };

  LexiconTrie(const Lexicon& lexicon, const std::vector<std::string>& symbols,
              const NgramModel& lm);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<TokenInfo>& tokens() const { return tokens_; }
  const std::vector<std::string>& symbols() const { return symbols_; }

 private:
  std::vector<Node> nodes_;
  std::vector<TokenInfo> tokens_;
  std::vector<std::string> symbols_;
};

// Token-passing beam search with LM fusion at token boundaries. The
// acoustic score is the Viterbi CTC score of the emitted spelling; the empty
// hypothesis is always a candidate.
DecodeResult beam_decode(const PosteriorMatrix& post, const LexiconTrie& trie,
                         const NgramModel& lm, const DecoderConfig& config);
DecodeResult beam_decode(const PosteriorMatrix& post, const Lexicon& lexicon,
                         const NgramModel& lm, const DecoderConfig& config);

}  // namespace lidkit
