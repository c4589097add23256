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
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "lidkit/ctc.hpp"
#include "lidkit/decoder.hpp"
#include "lidkit/error.hpp"
#include "lidkit/ngram.hpp"
#include "lidkit/rng.hpp"
#include "lidkit/roman.hpp"
#include "lidkit/text.hpp"

using namespace lidkit;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

PosteriorMatrix random_posteriors(Rng* rng,
                                  const std::vector<std::string>& symbols,
                                  size_t T) {
  PosteriorMatrix post;
  post.symbols = symbols;
  post.T = T;
  post.S = symbols.size();
  post.data.resize(T * post.S);
  for (size_t t = 0; t < T; ++t) {
    double sum = 0.0;
    for (size_t s = 0; s < post.S; ++s) {
      post.at(t, s) = 0.05 + rng->uniform();
      sum += post.at(t, s);
    }
    for (size_t s = 0; s < post.S; ++s) post.at(t, s) /= sum;
  }
  return post;
}

std::vector<uint16_t> spelling_ids(const Lexicon& lex,
                                   const std::vector<std::string>& symbols,
                                   const std::vector<std::string>& tokens) {
  std::map<std::string, uint16_t> sym_id;
  for (size_t i = 0; i < symbols.size(); ++i)
    sym_id[symbols[i]] = static_cast<uint16_t>(i);
  std::vector<uint16_t> ids;
  for (const std::string& tok : tokens)
    for (const std::string& sym : lex.entries.at(tok))
      ids.push_back(sym_id.at(sym));
  return ids;
}

struct OracleBest {
  double total = kNegInf;
  std::vector<std::string> tokens;
  bool unique = true;  // no other sequence within 1e-9 of the best
};

// Enumerates every token sequence that could fit in T frames (each token
// emits at least one frame) and scores it the way the decoder contract
// says: Viterbi acoustic score of the concatenated spelling, plus
// lm_weight times the sentence LM score, plus the insertion bonus.
OracleBest brute_force_decode(const PosteriorMatrix& post, const Lexicon& lex,
                              const NgramModel& lm,
                              const DecoderConfig& config) {
  std::vector<std::string> token_names;
  for (const auto& [tok, sp] : lex.entries) token_names.push_back(tok);

  OracleBest best;
  std::vector<std::string> seq;
  auto consider = [&](const std::vector<std::string>& tokens) {
    const double ac = ctc_viterbi_log10(
        post, spelling_ids(lex, post.symbols, tokens), config.blank_bias);
    if (ac == kNegInf) return;
    const double total = ac + config.lm_weight * lm.score_sequence(tokens) +
                         config.word_insertion_bonus * tokens.size();
    if (total > best.total + 1e-9) {
      best.total = total;
      best.tokens = tokens;
      best.unique = true;
    } else if (total > best.total - 1e-9) {
      best.unique = false;
      if (total > best.total) best.total = total;
    }
  };
  // Depth-first over sequences of length 0..T.
  auto rec = [&](auto&& self, size_t depth) -> void {
    consider(seq);
    if (depth == post.T) return;
    for (const std::string& tok : token_names) {
      seq.push_back(tok);
      self(self, depth + 1);
      seq.pop_back();
    }
  };
  rec(rec, 0);
  return best;
}

Lexicon random_lexicon(Rng* rng, const std::vector<std::string>& symbols,
                       size_t n_tokens) {
  Lexicon lex;
  lex.language = "tst";
  int suffix = 0;
  while (lex.entries.size() < n_tokens) {
    const size_t len = 1 + rng->uniform_index(3);
    std::string tok;
    std::vector<std::string> spelling;
    for (size_t i = 0; i < len; ++i) {
      const std::string& sym = symbols[1 + rng->uniform_index(symbols.size() - 1)];
      tok += sym;
      spelling.push_back(sym);
    }
    // Avoid accidental duplicates; suffix does not change the spelling.
    if (lex.entries.count(tok)) tok += std::to_string(suffix++);
    lex.entries[tok] = spelling;
  }
  return lex;
}

NgramModel toy_lm(Rng* rng, const Lexicon& lex) {
  std::vector<std::vector<std::string>> sentences;
  std::vector<std::string> names;
  for (const auto& [tok, sp] : lex.entries) names.push_back(tok);
  for (int s = 0; s < 6; ++s) {
    std::vector<std::string> sent;
    const size_t len = 1 + rng->uniform_index(4);
    for (size_t i = 0; i < len; ++i)
      sent.push_back(names[rng->uniform_index(names.size())]);
    sentences.push_back(std::move(sent));
  }
  return train_kneser_ney(sentences, 2);
}

}  // namespace

TEST_CASE("beam decode matches brute force on random small instances") {
  Rng rng(404);
  const std::vector<std::string> symbols = {"<blank>", "a", "b"};
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const Lexicon lex = random_lexicon(&rng, symbols, 1 + rng.uniform_index(3));
    const NgramModel lm = toy_lm(&rng, lex);
    const PosteriorMatrix post =
        random_posteriors(&rng, symbols, 1 + rng.uniform_index(4));
    DecoderConfig config;
    config.beam_width = 64;
    config.lm_weight = (trial % 4 == 0) ? 0.0 : 0.3 + 0.4 * (trial % 3);
    config.word_insertion_bonus = (trial % 5 == 0) ? 0.4 : 0.0;
    config.blank_bias = (trial % 7 == 0) ? -0.2 : 0.0;

    const OracleBest want = brute_force_decode(post, lex, lm, config);
    const DecodeResult got = beam_decode(post, lex, lm, config);
    REQUIRE(want.total > kNegInf);  // empty sequence always alignable
    CHECK_EQ(got.total_logscore, doctest::Approx(want.total).epsilon(1e-9));
    if (want.unique) {
      CHECK_EQ(got.tokens, want.tokens);
      ++checked;
    }
  }
  // Most random instances should have a unique winner; make sure the token
  // comparison actually ran.
  CHECK(checked > 60);
}

TEST_CASE("decode result is internally consistent") {
  Rng rng(405);
  const std::vector<std::string> symbols = {"<blank>", "a", "b", "c"};
  const Lexicon lex = random_lexicon(&rng, symbols, 4);
  const NgramModel lm = toy_lm(&rng, lex);
  const PosteriorMatrix post = random_posteriors(&rng, symbols, 6);
  DecoderConfig config;
  config.lm_weight = 0.7;
  config.word_insertion_bonus = 0.1;
  const DecodeResult r = beam_decode(post, lex, lm, config);
  CHECK_EQ(r.text, join(r.tokens, ""));
  CHECK_EQ(r.total_logscore,
           doctest::Approx(r.acoustic_logscore + config.lm_weight * r.lm_logscore +
                           config.word_insertion_bonus * r.tokens.size())
               .epsilon(1e-12));
  CHECK_EQ(r.lm_logscore, doctest::Approx(lm.score_sequence(r.tokens)));
  // The reported acoustic score is the Viterbi score of the spelling.
  CHECK_EQ(r.acoustic_logscore,
           doctest::Approx(ctc_viterbi_log10(
               post, spelling_ids(lex, symbols, r.tokens), config.blank_bias)));
}

TEST_CASE("empty hypothesis wins on blank-dominated posteriors") {
  const std::vector<std::string> symbols = {"<blank>", "a"};
  Lexicon lex;
  lex.language = "tst";
  lex.entries["a"] = {"a"};
  const NgramModel lm = train_kneser_ney({{"a"}, {"a", "a"}}, 2);
  PosteriorMatrix post;
  post.symbols = symbols;
  post.T = 3;
  post.S = 2;
  post.data = {0.99, 0.01, 0.99, 0.01, 0.99, 0.01};
  DecoderConfig config;
  const DecodeResult r = beam_decode(post, lex, lm, config);
  CHECK(r.tokens.empty());
  CHECK_EQ(r.text, "");
  CHECK_EQ(r.acoustic_logscore, doctest::Approx(3 * std::log10(0.99)));
}

TEST_CASE("widening the beam never lowers the best score") {
  Rng rng(406);
  const std::vector<std::string> symbols = {"<blank>", "a", "b"};
  for (int trial = 0; trial < 30; ++trial) {
    const Lexicon lex = random_lexicon(&rng, symbols, 3);
    const NgramModel lm = toy_lm(&rng, lex);
    const PosteriorMatrix post = random_posteriors(&rng, symbols, 5);
    DecoderConfig config;
    config.lm_weight = 0.5;
    double prev = kNegInf;
    for (int width : {1, 4, 64}) {
      config.beam_width = width;
      const double total = beam_decode(post, lex, lm, config).total_logscore;
      CHECK(total >= prev - 1e-12);
      prev = total;
    }
  }
}

TEST_CASE("decode is deterministic") {
  Rng rng(407);
  const std::vector<std::string> symbols = {"<blank>", "a", "b", "c"};
  const Lexicon lex = random_lexicon(&rng, symbols, 4);
  const NgramModel lm = toy_lm(&rng, lex);
  const PosteriorMatrix post = random_posteriors(&rng, symbols, 6);
  DecoderConfig config;
  config.lm_weight = 0.6;
  const DecodeResult a = beam_decode(post, lex, lm, config);
  const DecodeResult b = beam_decode(post, lex, lm, config);
  CHECK_EQ(a.tokens, b.tokens);
  CHECK_EQ(a.total_logscore, b.total_logscore);
  CHECK_EQ(a.acoustic_logscore, b.acoustic_logscore);
  CHECK_EQ(a.lm_logscore, b.lm_logscore);
}

TEST_CASE("homophones resolve by language model score") {
  // Two tokens spell identically; the LM has seen only one of them.
  const std::vector<std::string> symbols = {"<blank>", "a", "b"};
  Lexicon lex;
  lex.language = "tst";
  lex.entries["ab"] = {"a", "b"};
  lex.entries["ab2"] = {"a", "b"};  // never in LM training text
  const NgramModel lm =
      train_kneser_ney({{"ab"}, {"ab"}, {"ab", "ab"}}, 2);
  PosteriorMatrix post;
  post.symbols = symbols;
  post.T = 2;
  post.S = 3;
  post.data = {0.02, 0.96, 0.02, 0.02, 0.02, 0.96};
  DecoderConfig config;
  config.lm_weight = 1.0;
  const DecodeResult r = beam_decode(post, lex, lm, config);
  CHECK_EQ(r.tokens, std::vector<std::string>({"ab"}));
}

TEST_CASE("trie rejects spellings outside the posterior inventory") {
  Lexicon lex;
  lex.language = "tst";
  lex.entries["q"] = {"q"};
  const NgramModel lm = train_kneser_ney({{"q"}}, 2);
  const std::vector<std::string> symbols = {"<blank>", "a", "b"};
  CHECK_THROWS_AS(LexiconTrie(lex, symbols, lm), DataError);
}

TEST_CASE("decode validates config and inventory agreement") {
  Rng rng(408);
  const std::vector<std::string> symbols = {"<blank>", "a"};
  Lexicon lex;
  lex.language = "tst";
  lex.entries["a"] = {"a"};
  const NgramModel lm = train_kneser_ney({{"a"}}, 2);
  const PosteriorMatrix post = random_posteriors(&rng, symbols, 2);
  DecoderConfig config;
  config.beam_width = 0;
  CHECK_THROWS_AS(beam_decode(post, lex, lm, config), UsageError);
  config.beam_width = 8;
  config.lm_weight = -1.0;
  CHECK_THROWS_AS(beam_decode(post, lex, lm, config), UsageError);
  config.lm_weight = 1.0;
  PosteriorMatrix other = post;
  other.symbols = {"<blank>", "b"};
  CHECK_THROWS_AS(beam_decode(other, lex, lm, config), DataError);
}
