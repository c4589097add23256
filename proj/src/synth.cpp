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

#include "lidkit/synth.hpp"

#include <algorithm>
#include <string_view>

#include "lidkit/embed.hpp"
#include "lidkit/error.hpp"
#include "lidkit/io.hpp"
#include "lidkit/rng.hpp"
#include "lidkit/roman.hpp"
#include "lidkit/text.hpp"

namespace lidkit {

namespace {

// Markers and the shared letter pool partition the 37-character inventory,
// so a marker never leaks into another language through the shared pool.
constexpr std::string_view kMarkerChars = "0123456789'qxzwvkjfb";
constexpr std::string_view kSharedChars = "acdeghilmnoprstuy";
constexpr size_t kSharedPerLanguage = 6;

uint64_t mix_seed(uint64_t seed, uint64_t salt) {
  return seed * 1000003ULL + salt;
}

size_t sample_index(const std::vector<double>& row, Rng& rng) {
  const double u = rng.uniform();
  double cum = 0.0;
  for (size_t k = 0; k < row.size(); ++k) {
    cum += row[k];
    if (u < cum) return k;
  }
  return row.size() - 1;
}

std::string zero_pad(size_t value, size_t width) {
  std::string s = msg(value);
  while (s.size() < width) s.insert(s.begin(), '0');
  return s;
}

}  // namespace

size_t ToyLanguage::char_index(char c) const {
  const size_t pos = alphabet.find(c);
  if (pos == std::string::npos) {
    throw InternalError(msg("character '", std::string(1, c),
                            "' is not in the toy alphabet"));
  }
  return pos;
}

ToyLanguage make_toy_language(const std::string& code, int index,
                              uint64_t seed) {
  if (code.empty()) throw UsageError("toy language needs a code");
  if (index < 0) throw UsageError("toy language index must be non-negative");
  Rng rng(mix_seed(seed, uint64_t(index)));

  ToyLanguage lang;
  lang.code = code;
  const char marker = kMarkerChars[size_t(index) % kMarkerChars.size()];

  std::string pool(kSharedChars);
  for (size_t i = 0; i < kSharedPerLanguage; ++i) {
    const size_t j = i + rng.uniform_index(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  std::string shared = pool.substr(0, kSharedPerLanguage);
  std::sort(shared.begin(), shared.end());
  lang.alphabet = std::string(1, marker) + shared;

  const size_t k = lang.alphabet.size();
  lang.transitions.resize(k * k);
  for (std::vector<double>& row : lang.transitions) {
    row.resize(k);
    double total = 0.0;
    for (double& w : row) {
      w = 0.05 + rng.uniform();
      total += w;
    }
    for (double& w : row) w = 0.7 * w / total;
    row[0] += 0.3;  // the marker stays frequent in every context
    double sum = 0.0;
    for (double w : row) sum += w;
    for (double& w : row) w /= sum;
  }
  return lang;
}

TextCorpus gen_toy_corpus(const ToyLanguage& lang, size_t n_lines,
                          size_t line_len, uint64_t seed) {
  if (n_lines < 1 || line_len < 1) {
    throw UsageError("toy corpus needs at least one line and one character");
  }
  const size_t k = lang.alphabet_size();
  if (k == 0 || lang.transitions.size() != k * k) {
    throw UsageError("toy language has an inconsistent transition table");
  }
  Rng rng(seed);
  TextCorpus corpus;
  corpus.language = lang.code;
  corpus.lines.reserve(n_lines);
  for (size_t line = 0; line < n_lines; ++line) {
    std::string text(1, lang.alphabet[0]);
    size_t prev2 = 0;
    size_t prev1 = 0;
    if (line_len >= 2) {
      prev1 = sample_index(lang.transitions[0], rng);
      text += lang.alphabet[prev1];
    }
    while (text.size() < line_len) {
      const size_t next = sample_index(lang.transitions[prev2 * k + prev1], rng);
      text += lang.alphabet[next];
      prev2 = prev1;
      prev1 = next;
    }
    corpus.lines.push_back(std::move(text));
  }
  return corpus;
}

PosteriorMatrix synth_posteriors(const std::string& text, double noise_eps,
                                 double blank_rate, int frames_per_char,
                                 uint64_t seed) {
  if (!(noise_eps >= 0.0 && noise_eps < 1.0)) {
    throw UsageError("noise epsilon must be in [0, 1)");
  }
  if (!(blank_rate >= 0.0 && blank_rate < 1.0)) {
    throw UsageError("blank rate must be in [0, 1)");
  }
  if (frames_per_char < 1) {
    throw UsageError("frames per character must be at least 1");
  }
  const std::vector<char32_t> chars = to_codepoints(text);
  if (chars.empty()) {
    throw DataError("cannot synthesize posteriors for empty text");
  }

  const std::vector<std::string>& symbols = uroman_symbols();
  std::map<char32_t, size_t> sym_index;
  for (size_t s = 1; s < symbols.size(); ++s) {
    sym_index[to_codepoints(symbols[s])[0]] = s;
  }

  Rng rng(seed);
  std::vector<size_t> frames;  // symbol index per frame, 0 = blank
  for (size_t i = 0; i < chars.size(); ++i) {
    auto it = sym_index.find(chars[i]);
    if (it == sym_index.end()) {
      throw DataError(msg("character '", to_utf8(chars[i]),
                          "' is outside the posterior inventory"));
    }
    if (i > 0 && chars[i] == chars[i - 1]) {
      frames.push_back(0);  // CTC cannot collapse a repeat without a blank
    } else if (rng.uniform() < blank_rate) {
      frames.push_back(0);
    }
    for (int f = 0; f < frames_per_char; ++f) frames.push_back(it->second);
  }
  if (rng.uniform() < blank_rate) frames.push_back(0);

  PosteriorMatrix post;
  post.symbols = symbols;
  post.T = frames.size();
  post.S = symbols.size();
  post.data.assign(post.T * post.S, 0.0);
  const double off = noise_eps / double(post.S - 1);
  for (size_t t = 0; t < post.T; ++t) {
    for (size_t s = 0; s < post.S; ++s) {
      post.at(t, s) = (s == frames[t]) ? 1.0 - noise_eps : off;
    }
  }
  return post;
}

void write_fixture(const FixtureSpec& spec, const std::string& out_dir) {
  if (spec.n_languages < 2) throw UsageError("fixture needs at least 2 languages");
  if (spec.corpus_lines < 1 || spec.line_len < 1 || spec.utts_per_language < 1 ||
      spec.utt_len < 1 || spec.frames_per_char < 1 ||
      spec.train_embeddings_per_language < 2) {
    throw UsageError("fixture sizes must be positive (2+ train embeddings)");
  }

  ensure_dir(out_dir);
  ensure_dir(out_dir + "/corpora");
  ensure_dir(out_dir + "/posteriors_noisy");
  ensure_dir(out_dir + "/posteriors_clean");
  ensure_dir(out_dir + "/embeddings");

  const size_t code_width = spec.n_languages > 100 ? 3 : 2;
  std::vector<std::string> codes;
  std::vector<ToyLanguage> langs;
  for (int i = 0; i < spec.n_languages; ++i) {
    const std::string code = "toy" + zero_pad(size_t(i), code_width);
    codes.push_back(code);
    langs.push_back(make_toy_language(code, i, spec.seed));
  }

  for (int i = 0; i < spec.n_languages; ++i) {
    TextCorpus corpus = gen_toy_corpus(langs[size_t(i)], size_t(spec.corpus_lines),
                                       size_t(spec.line_len),
                                       mix_seed(spec.seed, 1000000 + uint64_t(i)));
    // Guarantees every alphabet character is in the training text, so any
    // utterance from the same source stays segmentable.
    corpus.lines.push_back(langs[size_t(i)].alphabet);
    std::string text;
    for (const std::string& line : corpus.lines) {
      text += line;
      text += '\n';
    }
    atomic_write_file(out_dir + "/corpora/" + codes[size_t(i)] + ".txt", text);
  }

  std::string manifest_noisy;
  std::string manifest_clean;
  std::vector<std::pair<std::string, std::string>> test_utts;  // (utt, lang)
  for (int i = 0; i < spec.n_languages; ++i) {
    const TextCorpus utts =
        gen_toy_corpus(langs[size_t(i)], size_t(spec.utts_per_language),
                       size_t(spec.utt_len),
                       mix_seed(spec.seed, 2000000 + uint64_t(i)));
    for (int k = 0; k < spec.utts_per_language; ++k) {
      const std::string& utt_text = utts.lines[size_t(k)];
      const std::string utt_id = codes[size_t(i)] + "_" + zero_pad(size_t(k), 3);
      const uint64_t salt = uint64_t(i) * 1000 + uint64_t(k);
      write_posteriors(
          synth_posteriors(utt_text, spec.noise_eps, spec.blank_rate,
                           spec.frames_per_char, mix_seed(spec.seed, 3000000 + salt)),
          out_dir + "/posteriors_noisy/" + utt_id + ".post");
      write_posteriors(
          synth_posteriors(utt_text, 0.0, spec.blank_rate, spec.frames_per_char,
                           mix_seed(spec.seed, 6000000 + salt)),
          out_dir + "/posteriors_clean/" + utt_id + ".post");
      manifest_noisy += msg(utt_id, "\t", codes[size_t(i)],
                            "\tposteriors_noisy/", utt_id, ".post\t", utt_text,
                            "\n");
      manifest_clean += msg(utt_id, "\t", codes[size_t(i)],
                            "\tposteriors_clean/", utt_id, ".post\t", utt_text,
                            "\n");
      test_utts.emplace_back(utt_id, codes[size_t(i)]);
    }
  }
  atomic_write_file(out_dir + "/manifest_noisy.tsv", manifest_noisy);
  atomic_write_file(out_dir + "/manifest_clean.tsv", manifest_clean);

  // Synthetic embedding space: one well-separated Gaussian per language.
  Rng erng(mix_seed(spec.seed, 9000000));
  const int dim = PoolerParams::kEmbedDim;
  std::vector<Eigen::VectorXd> means;
  for (int i = 0; i < spec.n_languages; ++i) {
    Eigen::VectorXd m(dim);
    for (int d = 0; d < dim; ++d) m(d) = 3.0 * erng.normal();
    means.push_back(std::move(m));
  }
  std::vector<Embedding> train;
  std::map<std::string, std::string> train_labels;
  for (int i = 0; i < spec.n_languages; ++i) {
    for (int k = 0; k < spec.train_embeddings_per_language; ++k) {
      Embedding e;
      e.utt_id = "train_" + codes[size_t(i)] + "_" + zero_pad(size_t(k), 3);
      e.vector.resize(dim);
      for (int d = 0; d < dim; ++d) {
        e.vector(d) = means[size_t(i)](d) + 0.5 * erng.normal();
      }
      train_labels[e.utt_id] = codes[size_t(i)];
      train.push_back(std::move(e));
    }
  }
  std::vector<Embedding> test;
  std::map<std::string, std::string> test_labels;
  for (const auto& [utt_id, lang] : test_utts) {
    const size_t li = size_t(std::find(codes.begin(), codes.end(), lang) -
                             codes.begin());
    Embedding e;
    e.utt_id = utt_id;
    e.vector.resize(dim);
    for (int d = 0; d < dim; ++d) {
      e.vector(d) = means[li](d) + 0.5 * erng.normal();
    }
    test_labels[utt_id] = lang;
    test.push_back(std::move(e));
  }
  write_embeddings_tsv(train, out_dir + "/embeddings/train.tsv");
  write_labels_tsv(train_labels, out_dir + "/embeddings/train_labels.tsv");
  write_embeddings_tsv(test, out_dir + "/embeddings/test.tsv");
  write_labels_tsv(test_labels, out_dir + "/embeddings/test_labels.tsv");

  std::map<std::string, std::string> meta;
  meta["n_languages"] = msg(spec.n_languages);
  meta["corpus_lines"] = msg(spec.corpus_lines);
  meta["line_len"] = msg(spec.line_len);
  meta["utts_per_language"] = msg(spec.utts_per_language);
  meta["utt_len"] = msg(spec.utt_len);
  meta["frames_per_char"] = msg(spec.frames_per_char);
  meta["noise_eps"] = format_double(spec.noise_eps);
  meta["blank_rate"] = format_double(spec.blank_rate);
  meta["train_embeddings_per_language"] = msg(spec.train_embeddings_per_language);
  meta["seed"] = msg(spec.seed);
  write_kv_file(out_dir + "/meta.txt", meta);
}

}  // namespace lidkit
