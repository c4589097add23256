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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "lidkit/error.hpp"
#include "lidkit/ngram.hpp"
#include "lidkit/rng.hpp"

using namespace lidkit;

namespace {

using Sentences = std::vector<std::vector<std::string>>;

// log10 p(w | h) straight from the public query interface.
double cond(const NgramModel& m, const std::vector<std::string>& history,
            const std::string& token) {
  NgramModel::State s = m.begin_state();
  for (const std::string& h : history) s = m.advance(s, m.id_or_unk(h));
  return m.logp_cond(s, m.id_or_unk(token));
}

double cond_from_empty(const NgramModel& m, const std::string& token) {
  return m.logp_cond(NgramModel::State{}, m.id_or_unk(token));
}

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

Sentences random_sentences(Rng* rng, size_t vocab, size_t max_tokens) {
  Sentences out;
  size_t total = 0;
  const size_t n_sent = 1 + rng->uniform_index(8);
  for (size_t s = 0; s < n_sent; ++s) {
    std::vector<std::string> sent;
    const size_t len = 1 + rng->uniform_index(12);
    for (size_t i = 0; i < len && total < max_tokens; ++i, ++total) {
      sent.push_back("w" + std::to_string(rng->uniform_index(vocab)));
    }
    if (!sent.empty()) out.push_back(std::move(sent));
  }
  if (out.empty()) out.push_back({"w0"});
  return out;
}

}  // namespace

// Hand-worked interpolated KN on the corpus [[a,b],[a,b],[a,c]], order 2.
// Padded bigrams: (<s>,a) x3, (a,b) x2, (a,c) x1, (b,</s>) x2, (c,</s>) x1.
// Bigram counts-of-counts n1=2, n2=2 give D2 = 2/(2+4) = 1/3. Continuation
// counts: N1+(.a)=N1+(.b)=N1+(.c)=1, N1+(.</s>)=2, five distinct bigram
// types total; unigram counts-of-counts over those (n1=3, n2=1) give
// D1 = 3/5. Unigram level: p(a)=p(b)=p(c)=(1-3/5)/5 = 2/25,
// p(</s>)=(2-3/5)/5 = 7/25, leftover 4(3/5)/5 = 12/25 to <unk>.
// Bigram level with gamma(h) = D2 N1+(h.)/c(h):
//   p(b|a)    = (2-1/3)/3 + (2/9)(2/25)   = 43/75
//   p(c|a)    = (1-1/3)/3 + (2/9)(2/25)   = 6/25
//   p(a|<s>)  = (3-1/3)/3 + (1/9)(2/25)   = 202/225
//   p(</s>|b) = (2-1/3)/2 + (1/6)(7/25)   = 22/25
//   p(</s>|c) = (1-1/3)/1 + (1/3)(7/25)   = 19/25
// These fractions were frozen before the trainer was written.
TEST_CASE("kneser-ney matches the hand oracle on the 6-token corpus") {
  const Sentences corpus = {{"a", "b"}, {"a", "b"}, {"a", "c"}};
  const NgramModel m = train_kneser_ney(corpus, 2);

  const double tol = 1e-9;
  // Unigram (continuation) level.
  CHECK(std::abs(std::pow(10.0, cond_from_empty(m, "a")) - 2.0 / 25.0) < tol);
  CHECK(std::abs(std::pow(10.0, cond_from_empty(m, "b")) - 2.0 / 25.0) < tol);
  CHECK(std::abs(std::pow(10.0, cond_from_empty(m, "c")) - 2.0 / 25.0) < tol);
  CHECK(std::abs(std::pow(10.0, m.end_logp(NgramModel::State{})) -
                 7.0 / 25.0) < tol);
  CHECK(std::abs(std::pow(10.0, cond_from_empty(m, "zzz")) - 12.0 / 25.0) <
        tol);

  // Bigram level, fully interpolated.
  CHECK(std::abs(std::pow(10.0, cond(m, {"a"}, "b")) - 43.0 / 75.0) < tol);
  CHECK(std::abs(std::pow(10.0, cond(m, {"a"}, "c")) - 6.0 / 25.0) < tol);

  NgramModel::State bos = m.begin_state();
  CHECK(std::abs(std::pow(10.0, m.logp_cond(bos, m.id_or_unk("a"))) -
                 202.0 / 225.0) < tol);

  NgramModel::State after_b = m.advance(m.begin_state(), m.id_or_unk("b"));
  NgramModel::State after_c = m.advance(m.begin_state(), m.id_or_unk("c"));
  CHECK(std::abs(std::pow(10.0, m.end_logp(after_b)) - 22.0 / 25.0) < tol);
  CHECK(std::abs(std::pow(10.0, m.end_logp(after_c)) - 19.0 / 25.0) < tol);

  // Backed-off mass through unseen history: p(w | c) interpolates the
  // unigram with gamma(c) = D2 * 1 / 1 = 1/3.
  CHECK(std::abs(std::pow(10.0, cond(m, {"c"}, "a")) -
                 (1.0 / 3.0) * (2.0 / 25.0)) < tol);
}

TEST_CASE("single-token unigram model is normalized") {
  const NgramModel m = train_kneser_ney({{"a"}}, 1);
  const double pa = std::pow(10.0, cond_from_empty(m, "a"));
  const double pe = std::pow(10.0, m.end_logp(NgramModel::State{}));
  const double pu = std::pow(10.0, cond_from_empty(m, "never-seen"));
  CHECK_EQ(pa + pe + pu, doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("every history's successor distribution sums to one") {
  Rng rng(101);
  for (int trial = 0; trial < 12; ++trial) {
    const size_t vocab = 2 + rng.uniform_index(10);
    const Sentences corpus = random_sentences(&rng, vocab, 120);
    for (int order = 1; order <= 4; ++order) {
      const NgramModel m = train_kneser_ney(corpus, order);
      for (const NgramModel::State& h : all_histories(m)) {
        CHECK_EQ(history_prob_sum(m, h), doctest::Approx(1.0).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("bos is never predicted") {
  const NgramModel m = train_kneser_ney({{"a", "b"}, {"b", "a"}}, 2);
  for (const NgramModel::State& h : all_histories(m)) {
    CHECK(m.logp_cond(h, NgramModel::kBosId) <= NgramModel::kLogFloor);
  }
}

TEST_CASE("score_sequence decomposes into conditionals") {
  const Sentences corpus = {{"a", "b"}, {"a", "b"}, {"a", "c"}, {"b", "a"}};
  const NgramModel m = train_kneser_ney(corpus, 2);
  NgramModel::State s = m.begin_state();
  double total = 0.0;
  for (const std::string& tok : {"a", "b"}) {
    const uint16_t id = m.id_or_unk(tok);
    total += m.logp_cond(s, id);
    s = m.advance(s, id);
  }
  total += m.end_logp(s);
  CHECK_EQ(m.score_sequence({"a", "b"}), doctest::Approx(total).epsilon(1e-12));
  // Unknown tokens route through <unk> rather than blowing up.
  CHECK(std::isfinite(m.score_sequence({"a", "xyz", "b"})));
  CHECK(m.score_sequence({"a", "xyz", "b"}) < m.score_sequence({"a", "b"}));
}

TEST_CASE("higher order degrades to lower on shallow contexts") {
  // With order 4 but only bigram-length sentences, deep histories must
  // still give normalized, finite scores.
  const Sentences corpus = {{"x", "y"}, {"y", "x"}, {"x", "x"}};
  const NgramModel m = train_kneser_ney(corpus, 4);
  NgramModel::State s = m.begin_state();
  for (const std::string& t : {"x", "y", "x", "y", "x"}) {
    const double lp = m.logp_cond(s, m.id_or_unk(t));
    CHECK(std::isfinite(lp));
    CHECK(lp <= 0.0);
    s = m.advance(s, m.id_or_unk(t));
  }
}

TEST_CASE("state advance keeps at most order-1 tokens") {
  const Sentences corpus = {{"a", "b", "c", "a", "b"}, {"c", "b", "a"}};
  const NgramModel m = train_kneser_ney(corpus, 3);
  NgramModel::State s = m.begin_state();
  for (int i = 0; i < 10; ++i) s = m.advance(s, m.id_or_unk("a"));
  CHECK(s.len <= 2);
  // Scoring is a function of the state, not the path that built it. Both
  // paths canonicalize to the same state, so the scores are bit-equal.
  NgramModel::State direct{};
  direct = m.advance(direct, m.id_or_unk("a"));
  direct = m.advance(direct, m.id_or_unk("a"));
  CHECK_EQ(s.key, direct.key);
  CHECK_EQ(s.len, direct.len);
  CHECK_EQ(m.logp_cond(s, m.id_or_unk("b")),
           m.logp_cond(direct, m.id_or_unk("b")));
}

TEST_CASE("train rejects bad input") {
  CHECK_THROWS_AS(train_kneser_ney({}, 2), DataError);
  CHECK_THROWS_AS(train_kneser_ney({{}}, 2), DataError);
  CHECK_THROWS_AS(train_kneser_ney({{"a"}}, 0), UsageError);
  CHECK_THROWS_AS(train_kneser_ney({{"a"}}, 5), UsageError);
  CHECK_THROWS_AS(train_kneser_ney({{"a", "<s>"}}, 2), DataError);
  CHECK_THROWS_AS(train_kneser_ney({{"</s>"}}, 2), DataError);
  CHECK_THROWS_AS(train_kneser_ney({{"<unk>"}}, 2), DataError);
}

TEST_CASE("arpa round trip preserves every score") {
  Rng rng(202);
  for (int trial = 0; trial < 4; ++trial) {
    const Sentences corpus = random_sentences(&rng, 6, 80);
    for (int order : {1, 2, 4}) {
      const NgramModel m = train_kneser_ney(corpus, order);
      const std::string path = tmp_path("lidkit_model.arpa");
      write_arpa(m, path);
      const NgramModel back = read_arpa(path);
      CHECK_EQ(back.order, m.order);
      // Compare conditionals over histories x vocab, not raw tables, so the
      // check exercises backoff resolution in both models.
      for (const NgramModel::State& h : all_histories(m)) {
        for (uint16_t id = 0; id < m.id_to_token.size(); ++id) {
          if (id == NgramModel::kBosId) continue;
          const std::string& tok = m.id_to_token[id];
          NgramModel::State hb{};
          // Rebuild the same history in the reloaded model by token string.
          NgramModel::State cur = h;
          std::vector<uint16_t> ids;
          for (uint64_t k = h.key; ids.size() < h.len; k >>= 16)
            ids.push_back(static_cast<uint16_t>(k & 0xFFFF));
          for (uint16_t hid : ids)
            hb = back.advance(hb, back.id_or_unk(m.id_to_token[hid]));
          CHECK_EQ(m.logp_cond(h, id),
                   doctest::Approx(back.logp_cond(hb, back.id_or_unk(tok)))
                       .epsilon(1e-12));
        }
      }
      std::remove(path.c_str());
    }
  }
}

TEST_CASE("score_sequence survives the arpa round trip bit-exactly") {
  const Sentences corpus = {{"a", "b", "a"}, {"b", "a"}, {"a", "c", "c"}};
  const NgramModel m = train_kneser_ney(corpus, 3);
  const std::string path = tmp_path("lidkit_model3.arpa");
  write_arpa(m, path);
  const NgramModel back = read_arpa(path);
  const std::vector<std::vector<std::string>> probes = {
      {"a"}, {"a", "b"}, {"c", "c", "c"}, {"zzz"}, {"b", "a", "b", "a"}};
  for (const auto& p : probes) {
    CHECK_EQ(m.score_sequence(p), back.score_sequence(p));
  }
  std::remove(path.c_str());
}

TEST_CASE("read_arpa validates structure") {
  const std::string path = tmp_path("lidkit_bad.arpa");
  auto write_raw = [&path](const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
  };
  write_raw("not an arpa file\n");
  CHECK_THROWS_AS(read_arpa(path), DataError);
  write_raw("\\data\\\nngram 1=1\n\n\\1-grams:\n-0.5\ta\n");
  // Missing \end\ marker.
  CHECK_THROWS_AS(read_arpa(path), DataError);
  write_raw(
      "\\data\\\nngram 1=2\n\n\\1-grams:\n-0.5\ta\n\n\\end\\\n");
  // Declared two entries, provided one.
  CHECK_THROWS_AS(read_arpa(path), DataError);
  CHECK_THROWS_AS(read_arpa("/nonexistent/x.arpa"), DataError);
  std::remove(path.c_str());
}

TEST_CASE("more frequent unigrams score at least as high") {
  // With continuation counts this holds for unigrams seen after distinct
  // predecessors: "b" follows 3 distinct tokens, "c" follows 1.
  const Sentences corpus = {{"a", "b"}, {"c", "b"}, {"b", "b"}, {"a", "c"}};
  const NgramModel m = train_kneser_ney(corpus, 2);
  CHECK(cond_from_empty(m, "b") > cond_from_empty(m, "c"));
}
