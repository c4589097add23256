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

#include "lidkit/lid.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <set>

#include "lidkit/error.hpp"
#include "lidkit/io.hpp"
#include "lidkit/text.hpp"

namespace lidkit {

LanguagePack build_language_pack(const TextCorpus& corpus, const RomanMap& map,
                                 const PackBuildOptions& options) {
  if (corpus.language.empty()) throw UsageError("corpus has no language code");
  if (corpus.lines.empty())
    throw DataError(msg("corpus for '", corpus.language, "' is empty"));
  if (options.lm_order < 1 || options.lm_order > 4)
    throw UsageError("lm order must be in [1,4]");

  TextCorpus sampled =
      sample_lines(corpus, options.max_corpus_lines, options.sample_seed);

  TextCorpus words;
  words.language = sampled.language;
  for (const std::string& line : sampled.lines)
    for (const std::string& word : split(line, ' '))
      if (!word.empty()) words.lines.push_back(word);
  if (words.lines.empty())
    throw DataError(msg("corpus for '", corpus.language,
                        "' has no words after normalization"));

  LanguagePack pack;
  pack.language = corpus.language;
  size_t seed_size = options.seed_size ? options.seed_size
                                       : options.vocab_size * 4;
  pack.vocab = train_unigram_vocab(words, options.vocab_size, seed_size);

  std::vector<std::string> dropped;
  pack.lexicon = build_lexicon(pack.vocab, map, pack.language, &dropped);
  if (!dropped.empty())
    warn(msg(pack.language, ": ", dropped.size(),
             " tokens romanized to nothing and were left out of the lexicon"));

  Romanizer romanizer(map);
  RomanizeStats stats;
  for (const std::string& line : sampled.lines) romanizer.romanize(line, &stats);
  if (stats.chars_in > 0 &&
      static_cast<double>(stats.chars_dropped) >
          0.05 * static_cast<double>(stats.chars_in))
    warn(msg(pack.language, ": ", stats.chars_dropped, " of ", stats.chars_in,
             " corpus characters (>5%) have no romanization rule"));

  SubwordSegmenter segmenter(pack.vocab);
  std::vector<std::vector<std::string>> sentences;
  sentences.reserve(sampled.lines.size());
  for (const std::string& line : sampled.lines) {
    std::vector<std::string> tokens;
    for (const std::string& word : split(line, ' ')) {
      if (word.empty()) continue;
      Segmentation seg = segmenter.segment(word);
      tokens.insert(tokens.end(), seg.tokens.begin(), seg.tokens.end());
    }
    if (!tokens.empty()) sentences.push_back(std::move(tokens));
  }
  pack.lm = train_kneser_ney(sentences, options.lm_order);
  return pack;
}

void save_language_pack(const LanguagePack& pack, const std::string& dir) {
  ensure_dir(dir);
  write_vocab_tsv(pack.vocab, dir + "/vocab.tsv");
  write_lexicon_tsv(pack.lexicon, dir + "/lexicon.tsv");
  write_arpa(pack.lm, dir + "/lm.arpa");
  std::map<std::string, std::string> meta;
  meta["language"] = pack.language;
  meta["version"] = pack.version;
  meta["lm_order"] = msg(pack.lm.order);
  write_kv_file(dir + "/meta.txt", meta);
}

LanguagePack load_language_pack(const std::string& dir) {
  std::map<std::string, std::string> meta = read_kv_file(dir + "/meta.txt");
  auto lang_it = meta.find("language");
  if (lang_it == meta.end() || lang_it->second.empty())
    throw DataError(msg(dir, "/meta.txt: missing language"));
  LanguagePack pack;
  pack.language = lang_it->second;
  if (meta.count("version")) pack.version = meta.at("version");
  pack.vocab = read_vocab_tsv(dir + "/vocab.tsv");
  pack.lexicon = read_lexicon_tsv(dir + "/lexicon.tsv", pack.language);
  pack.lm = read_arpa(dir + "/lm.arpa");
  if (meta.count("lm_order") &&
      parse_int(meta.at("lm_order")) != pack.lm.order)
    throw DataError(msg(dir, ": meta lm_order=", meta.at("lm_order"),
                        " but lm.arpa has order ", pack.lm.order));
  for (const auto& [token, spelling] : pack.lexicon.entries)
    if (!pack.vocab.entries.count(token))
      throw DataError(msg(dir, ": lexicon token '", token,
                          "' is not in vocab.tsv"));
  return pack;
}

std::vector<LanguagePack> load_pack_set(const std::string& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root))
    throw DataError(msg("pack root '", root, "' is not a directory"));
  std::vector<std::string> dirs;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) dirs.push_back(entry.path().string());
  std::sort(dirs.begin(), dirs.end());
  std::vector<LanguagePack> packs;
  for (const std::string& dir : dirs) packs.push_back(load_language_pack(dir));
  std::sort(packs.begin(), packs.end(),
            [](const LanguagePack& a, const LanguagePack& b) {
              return a.language < b.language;
            });
  for (size_t i = 1; i < packs.size(); ++i)
    if (packs[i].language == packs[i - 1].language)
      throw DataError(
          msg("duplicate language code '", packs[i].language, "' in ", root));
  return packs;
}

LidScores score_all_languages(const PosteriorMatrix& post,
                              const std::vector<LanguagePack>& packs,
                              const DecoderConfig& config) {
  if (packs.size() < 2)
    throw UsageError("language identification needs at least 2 packs");
  std::set<std::string> seen;
  for (const LanguagePack& pack : packs) {
    if (!seen.insert(pack.language).second)
      throw DataError(msg("duplicate language code '", pack.language, "'"));
    if (pack.lm.order != 2)
      throw DataError(msg("pack '", pack.language, "' has an order-",
                          pack.lm.order, " LM; LID packs are bigram"));
  }
  LidScores scores;
  for (const LanguagePack& pack : packs) {
    DecodeResult result = beam_decode(post, pack.lexicon, pack.lm, config);
    scores.per_language[pack.language] = result.total_logscore;
    scores.hypotheses[pack.language] = std::move(result);
  }
  return scores;
}

LidDistribution normalize_scores(const LidScores& scores) {
  if (scores.per_language.empty())
    throw UsageError("cannot normalize an empty score set");
  constexpr double kLn10 = 2.302585092994045684;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [lang, s] : scores.per_language) best = std::max(best, s);
  LidDistribution dist;
  double total = 0.0;
  for (const auto& [lang, s] : scores.per_language) {
    double p = std::isfinite(best) ? std::exp((s - best) * kLn10) : 1.0;
    dist.probs[lang] = p;
    total += p;
  }
  for (auto& [lang, p] : dist.probs) p /= total;
  return dist;
}

std::string classify(const LidDistribution& dist) {
  if (dist.probs.empty()) throw UsageError("empty distribution");
  const std::string* best_lang = nullptr;
  double best = -1.0;
  for (const auto& [lang, p] : dist.probs) {
    if (p > best) {
      best = p;
      best_lang = &lang;
    }
  }
  return *best_lang;
}

}  // namespace lidkit
