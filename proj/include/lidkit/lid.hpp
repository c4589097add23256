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

#include <map>
#include <string>
#include <vector>

#include "lidkit/corpus.hpp"
#include "lidkit/decoder.hpp"
#include "lidkit/ngram.hpp"
#include "lidkit/roman.hpp"
#include "lidkit/subword.hpp"

namespace lidkit {

// Per-language decoder bundle: subword vocab, spelled lexicon, n-gram LM.
struct LanguagePack {
  std::string language;
  std::string version = "1";
  SubwordVocab vocab;
  Lexicon lexicon;
  NgramModel lm;
};

struct PackBuildOptions {
  size_t vocab_size = 10000;
  size_t seed_size = 0;  // 0 means 4 * vocab_size
  int lm_order = 2;
  size_t max_corpus_lines = 100000;
  uint64_t sample_seed = 1;
};

// Corpus -> sampled lines -> unigram subword vocab (per word) -> lexicon
// via romanization -> Kneser-Ney LM over per-line token streams.
LanguagePack build_language_pack(const TextCorpus& corpus, const RomanMap& map,
                                 const PackBuildOptions& options);

// Pack directory: vocab.tsv, lexicon.tsv, lm.arpa, meta.txt (key=value).
void save_language_pack(const LanguagePack& pack, const std::string& dir);
LanguagePack load_language_pack(const std::string& dir);
// Loads every subdirectory of root as a pack, sorted by language code.
std::vector<LanguagePack> load_pack_set(const std::string& root);

struct LidScores {
  std::map<std::string, double> per_language;  // total_logscore, log10
  std::map<std::string, DecodeResult> hypotheses;
};

struct LidDistribution {
  std::map<std::string, double> probs;
};

// Decodes the same posteriors under every pack; order-independent result.
LidScores score_all_languages(const PosteriorMatrix& post,
                              const std::vector<LanguagePack>& packs,
                              const DecoderConfig& config);

// Softmax over the log10 total scores (converted to natural log), computed
// with max-subtraction.
LidDistribution normalize_scores(const LidScores& scores);

// Argmax language; ties broken toward the lexicographically smallest code.
std::string classify(const LidDistribution& dist);

}  // namespace lidkit
