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

#include <cstdint>
#include <string>
#include <vector>

#include "lidkit/corpus.hpp"
#include "lidkit/ctc.hpp"

namespace lidkit {

// Order-2 character Markov source over a small slice of the roman
// inventory. Stands in for a real language's phonotactics.
struct ToyLanguage {
  std::string code;
  std::string alphabet;  // distinct inventory characters; [0] is the marker
  // K*K rows (prev2-major), each a distribution over the alphabet.
  std::vector<std::vector<double>> transitions;

  size_t alphabet_size() const { return alphabet.size(); }
  size_t char_index(char c) const;
};

// Markers are unique across the first kToyMarkerPool indices, which keeps
// those languages trivially separable; higher indices reuse markers.
constexpr int kToyMarkerPool = 20;

ToyLanguage make_toy_language(const std::string& code, int index,
                              uint64_t seed);

// Lines start deterministically (marker, then a sample from the marker's
// self-transition row), so one-hot transition tables give identical lines.
TextCorpus gen_toy_corpus(const ToyLanguage& lang, size_t n_lines,
                          size_t line_len, uint64_t seed);

// frames_per_char frames per character with mass 1-eps on the true symbol
// and eps spread uniformly over the rest. A blank frame always separates
// equal adjacent characters; further blank frames appear at blank_rate.
PosteriorMatrix synth_posteriors(const std::string& text, double noise_eps,
                                 double blank_rate, int frames_per_char,
                                 uint64_t seed);

struct FixtureSpec {
  int n_languages = 20;
  int corpus_lines = 400;
  int line_len = 24;
  int utts_per_language = 10;
  int utt_len = 24;
  int frames_per_char = 2;
  double noise_eps = 0.1;
  double blank_rate = 0.2;
  int train_embeddings_per_language = 8;
  uint64_t seed = 7;
};

// Writes corpora/<code>.txt, posteriors_noisy/ + manifest_noisy.tsv,
// posteriors_clean/ (eps 0) + manifest_clean.tsv, synthetic Gaussian
// embeddings under embeddings/, and meta.txt. Packs are built from the
// corpora by the normal pipeline, not here.
void write_fixture(const FixtureSpec& spec, const std::string& out_dir);

}  // namespace lidkit
