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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "lidkit/corpus.hpp"
#include "lidkit/ctc.hpp"
#include "lidkit/embed.hpp"
#include "lidkit/error.hpp"
#include "lidkit/io.hpp"
#include "lidkit/roman.hpp"
#include "lidkit/synth.hpp"
#include "lidkit/text.hpp"

using namespace lidkit;

namespace {

std::set<std::string> bigrams(const TextCorpus& corpus) {
  std::set<std::string> out;
  for (const std::string& line : corpus.lines)
    for (size_t i = 0; i + 1 < line.size(); ++i) out.insert(line.substr(i, 2));
  return out;
}

std::vector<uint16_t> label_ids(const std::string& text) {
  const auto& symbols = uroman_symbols();
  std::vector<uint16_t> ids;
  for (char c : text) {
    for (size_t s = 1; s < symbols.size(); ++s) {
      if (symbols[s] == std::string(1, c)) {
        ids.push_back(static_cast<uint16_t>(s));
        break;
      }
    }
  }
  return ids;
}

std::string tmp_dir(const std::string& name) {
  const std::string path =
      (std::filesystem::temp_directory_path() / name).string();
  std::filesystem::remove_all(path);
  return path;
}

}  // namespace

TEST_CASE("toy languages have valid transition tables") {
  for (int i = 0; i < 25; ++i) {
    const ToyLanguage lang =
        make_toy_language("t" + std::to_string(i), i, 7);
    const size_t k = lang.alphabet_size();
    CHECK_EQ(k, 7);  // marker + 6 shared letters
    // Alphabet characters are distinct.
    const std::set<char> distinct(lang.alphabet.begin(), lang.alphabet.end());
    CHECK_EQ(distinct.size(), k);
    REQUIRE_EQ(lang.transitions.size(), k * k);
    for (const auto& row : lang.transitions) {
      REQUIRE_EQ(row.size(), k);
      double sum = 0.0;
      for (double w : row) {
        CHECK(w > 0.0);
        sum += w;
      }
      CHECK_EQ(sum, doctest::Approx(1.0).epsilon(1e-12));
      // The marker soaks up a healthy floor of every context.
      CHECK(row[0] >= 0.3 - 1e-12);
    }
  }
  // Deterministic construction.
  const ToyLanguage a = make_toy_language("x", 3, 11);
  const ToyLanguage b = make_toy_language("x", 3, 11);
  CHECK_EQ(a.alphabet, b.alphabet);
  CHECK(a.transitions == b.transitions);
}

TEST_CASE("marker characters are unique across the first twenty languages") {
  std::set<char> markers;
  for (int i = 0; i < kToyMarkerPool; ++i) {
    const ToyLanguage lang = make_toy_language("t", i, 7);
    markers.insert(lang.alphabet[0]);
  }
  CHECK_EQ(markers.size(), size_t(kToyMarkerPool));
  // Beyond the pool, markers wrap around.
  CHECK_EQ(make_toy_language("t", kToyMarkerPool, 7).alphabet[0],
           make_toy_language("t", 0, 7).alphabet[0]);
}

TEST_CASE("languages with disjoint alphabets share no bigrams") {
  // Indices chosen within the marker pool; their shared-letter draws could
  // overlap but marker-containing bigrams cannot, and markers open every
  // line, so corpora stay distinguishable. Verify the stronger claim on
  // alphabets made disjoint by construction.
  ToyLanguage a = make_toy_language("aa", 0, 7);
  ToyLanguage b = make_toy_language("bb", 1, 7);
  if (a.alphabet[0] == b.alphabet[0]) FAIL("marker pool broken");
  const TextCorpus ca = gen_toy_corpus(a, 50, 20, 3);
  const TextCorpus cb = gen_toy_corpus(b, 50, 20, 4);
  // Every line carries the language's own marker.
  for (const std::string& line : ca.lines) {
    CHECK(line.find(a.alphabet[0]) != std::string::npos);
    CHECK(line.find(b.alphabet[0]) == std::string::npos);
  }
  // Marker bigrams of one corpus never appear in the other.
  const std::set<std::string> other = bigrams(cb);
  for (const std::string& bg : bigrams(ca)) {
    if (bg.find(a.alphabet[0]) != std::string::npos) {
      CHECK_EQ(other.count(bg), 0);
    }
  }
}

TEST_CASE("toy corpus is deterministic and respects the alphabet") {
  const ToyLanguage lang = make_toy_language("tt", 2, 7);
  const TextCorpus c1 = gen_toy_corpus(lang, 10, 16, 5);
  const TextCorpus c2 = gen_toy_corpus(lang, 10, 16, 5);
  CHECK_EQ(c1.lines, c2.lines);
  CHECK_EQ(c1.lines.size(), 10);
  const std::set<char> allowed(lang.alphabet.begin(), lang.alphabet.end());
  for (const std::string& line : c1.lines) {
    CHECK_EQ(line.size(), 16);
    CHECK_EQ(line[0], lang.alphabet[0]);  // deterministic marker start
    for (char c : line) CHECK(allowed.count(c) == 1);
  }
  CHECK_THROWS_AS(gen_toy_corpus(lang, 0, 16, 5), UsageError);
  CHECK_THROWS_AS(gen_toy_corpus(lang, 4, 0, 5), UsageError);
}

TEST_CASE("one-hot transitions collapse the corpus to one line") {
  ToyLanguage lang;
  lang.code = "det";
  lang.alphabet = "0ab";
  const size_t k = 3;
  lang.transitions.assign(k * k, std::vector<double>(k, 0.0));
  // From any context, go to a fixed successor: marker->a->b->marker...
  for (size_t p2 = 0; p2 < k; ++p2) {
    for (size_t p1 = 0; p1 < k; ++p1) {
      lang.transitions[p2 * k + p1][(p1 + 1) % k] = 1.0;
    }
  }
  const TextCorpus corpus = gen_toy_corpus(lang, 5, 9, 42);
  for (const std::string& line : corpus.lines) {
    CHECK_EQ(line, "0ab0ab0ab");
  }
}

TEST_CASE("synthetic posteriors are valid and decode to the text") {
  const std::string text = "0abba'9";
  const PosteriorMatrix post = synth_posteriors(text, 0.1, 0.2, 2, 99);
  CHECK_EQ(post.S, uroman_symbols().size());
  for (size_t t = 0; t < post.T; ++t) {
    double sum = 0.0;
    for (size_t s = 0; s < post.S; ++s) sum += post.at(t, s);
    CHECK_EQ(sum, doctest::Approx(1.0).epsilon(1e-9));
  }
  // At eps=0 the true labels have probability exactly 1 along the path, so
  // the CTC forward probability of the text is 1.
  const PosteriorMatrix clean = synth_posteriors(text, 0.0, 0.2, 2, 99);
  CHECK_EQ(ctc_forward_logprob(clean, label_ids(text)),
           doctest::Approx(0.0).epsilon(1e-12));
  // Determinism.
  const PosteriorMatrix again = synth_posteriors(text, 0.1, 0.2, 2, 99);
  CHECK(post.data == again.data);
  CHECK_EQ(post.T, again.T);
}

TEST_CASE("repeated characters get a separating blank") {
  // No random blanks (rate 0), one frame per char: "aa" must become
  // [a, blank, a].
  const PosteriorMatrix post = synth_posteriors("aa", 0.0, 0.0, 1, 1);
  REQUIRE_EQ(post.T, 3);
  const uint16_t a = label_ids("a")[0];
  CHECK_EQ(post.at(0, a), 1.0);
  CHECK_EQ(post.at(1, 0), 1.0);
  CHECK_EQ(post.at(2, a), 1.0);
  // Distinct neighbors need no blank.
  const PosteriorMatrix ab = synth_posteriors("ab", 0.0, 0.0, 1, 1);
  CHECK_EQ(ab.T, 2);
  // frames_per_char multiplies the emission length.
  const PosteriorMatrix wide = synth_posteriors("ab", 0.0, 0.0, 3, 1);
  CHECK_EQ(wide.T, 6);
}

TEST_CASE("synth_posteriors validates its arguments") {
  CHECK_THROWS_AS(synth_posteriors("", 0.1, 0.1, 2, 1), DataError);
  CHECK_THROWS_AS(synth_posteriors("aZ", 0.1, 0.1, 2, 1), DataError);
  CHECK_THROWS_AS(synth_posteriors("a", -0.1, 0.1, 2, 1), UsageError);
  CHECK_THROWS_AS(synth_posteriors("a", 1.0, 0.1, 2, 1), UsageError);
  CHECK_THROWS_AS(synth_posteriors("a", 0.1, 1.0, 2, 1), UsageError);
  CHECK_THROWS_AS(synth_posteriors("a", 0.1, 0.1, 0, 1), UsageError);
}

TEST_CASE("write_fixture lays out a loadable tree") {
  FixtureSpec spec;
  spec.n_languages = 3;
  spec.corpus_lines = 20;
  spec.line_len = 12;
  spec.utts_per_language = 2;
  spec.utt_len = 8;
  spec.train_embeddings_per_language = 2;
  const std::string dir = tmp_dir("lidkit_fixture_test");
  write_fixture(spec, dir);

  namespace fs = std::filesystem;
  for (const std::string& code : {"toy00", "toy01", "toy02"}) {
    CHECK(fs::exists(dir + "/corpora/" + code + ".txt"));
    const TextCorpus corpus = load_corpus(dir + "/corpora/" + code + ".txt",
                                          code);
    CHECK_EQ(corpus.lines.size(), size_t(spec.corpus_lines) + 1);
  }
  // Manifests resolve to readable posterior files with references.
  for (const std::string name : {"manifest_noisy.tsv", "manifest_clean.tsv"}) {
    const std::vector<std::string> lines = read_lines(dir + "/" + name);
    REQUIRE_EQ(lines.size(), 6);
    for (const std::string& line : lines) {
      const std::vector<std::string> fields = split(line, '\t');
      REQUIRE_EQ(fields.size(), 4);
      const PosteriorMatrix post = read_posteriors(dir + "/" + fields[2]);
      CHECK(post.T > 0);
      CHECK_EQ(fields[3].size(), size_t(spec.utt_len));
    }
  }
  // Embeddings: train and test tsvs pair with label files; test ids match
  // the manifest utterance ids so fused scoring can join them.
  const auto train = read_embeddings_tsv(dir + "/embeddings/train.tsv");
  CHECK_EQ(train.size(), 6);
  const auto train_labels = read_labels_tsv(dir + "/embeddings/train_labels.tsv");
  CHECK_EQ(train_labels.size(), 6);
  const auto test = read_embeddings_tsv(dir + "/embeddings/test.tsv");
  const auto test_labels = read_labels_tsv(dir + "/embeddings/test_labels.tsv");
  CHECK_EQ(test.size(), 6);
  std::set<std::string> manifest_ids;
  for (const std::string& line :
       read_lines(dir + "/manifest_noisy.tsv")) {
    manifest_ids.insert(split(line, '\t')[0]);
  }
  for (const Embedding& e : test) {
    CHECK(manifest_ids.count(e.utt_id) == 1);
    CHECK(test_labels.count(e.utt_id) == 1);
  }
  CHECK(fs::exists(dir + "/meta.txt"));

  // Determinism: a second run writes identical manifests.
  const std::string dir2 = tmp_dir("lidkit_fixture_test2");
  write_fixture(spec, dir2);
  CHECK_EQ(read_lines(dir + "/manifest_noisy.tsv"),
           read_lines(dir2 + "/manifest_noisy.tsv"));
  CHECK_EQ(read_lines(dir + "/embeddings/train.tsv"),
           read_lines(dir2 + "/embeddings/train.tsv"));
  fs::remove_all(dir);
  fs::remove_all(dir2);

  FixtureSpec bad = spec;
  bad.n_languages = 1;
  CHECK_THROWS_AS(write_fixture(bad, tmp_dir("lidkit_fixture_bad")),
                  UsageError);
}
