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

#include "lidkit/batch.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

#include "lidkit/ctc.hpp"
#include "lidkit/decoder.hpp"
#include "lidkit/error.hpp"
#include "lidkit/io.hpp"
#include "lidkit/text.hpp"

namespace lidkit {

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  std::vector<std::string> lines = read_lines(path);
  std::vector<ManifestEntry> out;
  std::set<std::string> seen;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> fields = split(lines[i], '\t');
    if (fields.size() != 4) {
      throw DataError(
          msg(path, " line ", i + 1,
              ": expected `utt_id<TAB>language<TAB>path<TAB>reference`"));
    }
    if (fields[0].empty() || fields[1].empty() || fields[2].empty()) {
      throw DataError(msg(path, " line ", i + 1,
                          ": utt_id, language and path must be non-empty"));
    }
    if (!seen.insert(fields[0]).second) {
      throw DataError(msg(path, " line ", i + 1, ": duplicate utterance '",
                          fields[0], "'"));
    }
    ManifestEntry entry;
    entry.utt_id = fields[0];
    entry.language = fields[1];
    std::filesystem::path p(fields[2]);
    entry.posteriors_path = p.is_absolute() ? p.string() : (base / p).string();
    entry.reference_text = fields[3];
    out.push_back(std::move(entry));
  }
  if (out.empty()) throw DataError(msg(path, ": empty manifest"));
  return out;
}

namespace {

struct UttSlot {
  std::once_flag once;
  std::optional<PosteriorMatrix> post;
};

struct PackSlot {
  std::once_flag once;
  std::unique_ptr<LexiconTrie> trie;
};

template <typename E>
[[noreturn]] void rethrow_with_utt(const std::string& utt_id, const E& e) {
  throw E(msg("utterance '", utt_id, "': ", e.what()));
}

}  // namespace

std::vector<UttScores> score_manifest(const std::vector<ManifestEntry>& manifest,
                                      const std::vector<LanguagePack>& packs,
                                      const DecoderConfig& config, int workers) {
  if (manifest.empty()) throw UsageError("empty manifest");
  if (packs.size() < 2) throw UsageError("need at least 2 language packs");
  if (workers < 1) throw UsageError("worker count must be at least 1");
  std::set<std::string> pack_langs;
  for (const LanguagePack& pack : packs) {
    if (pack.language == "best") {
      throw DataError("'best' is reserved and cannot be a language code");
    }
    if (!pack_langs.insert(pack.language).second) {
      throw DataError(msg("duplicate pack for language '", pack.language, "'"));
    }
  }

  const size_t n_utts = manifest.size();
  const size_t n_packs = packs.size();
  const size_t n_tasks = n_utts * n_packs;

  std::vector<UttSlot> utt_slots(n_utts);
  std::vector<PackSlot> pack_slots(n_packs);
  // results[u * n_packs + p]
  std::vector<std::optional<DecodeResult>> results(n_tasks);
  std::vector<std::exception_ptr> errors(n_tasks);

  std::atomic<size_t> next_task{0};
  auto run_task = [&](size_t task) {
    const size_t u = task / n_packs;
    const size_t p = task % n_packs;
    try {
      UttSlot& uslot = utt_slots[u];
      std::call_once(uslot.once, [&] {
        uslot.post = read_posteriors(manifest[u].posteriors_path);
      });
      const PosteriorMatrix& post = *uslot.post;
      PackSlot& pslot = pack_slots[p];
      std::call_once(pslot.once, [&] {
        pslot.trie = std::make_unique<LexiconTrie>(packs[p].lexicon,
                                                   post.symbols, packs[p].lm);
      });
      if (pslot.trie->symbols() != post.symbols) {
        throw DataError(
            "posterior symbol inventories differ across the manifest");
      }
      results[task] =
          beam_decode(post, *pslot.trie, packs[p].lm, config);
    } catch (...) {
      errors[task] = std::current_exception();
    }
  };

  auto worker = [&] {
    for (;;) {
      const size_t task = next_task.fetch_add(1);
      if (task >= n_tasks) return;
      run_task(task);
    }
  };

  const size_t n_threads = std::min<size_t>(size_t(workers), n_tasks);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    for (size_t i = 0; i < n_threads; ++i) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }

  for (size_t task = 0; task < n_tasks; ++task) {
    if (!errors[task]) continue;
    const std::string& utt_id = manifest[task / n_packs].utt_id;
    try {
      std::rethrow_exception(errors[task]);
    } catch (const UsageError& e) {
      rethrow_with_utt(utt_id, e);
    } catch (const DataError& e) {
      rethrow_with_utt(utt_id, e);
    } catch (const InternalError& e) {
      rethrow_with_utt(utt_id, e);
    } catch (const std::exception& e) {
      throw InternalError(msg("utterance '", utt_id, "': ", e.what()));
    }
  }

  std::vector<UttScores> out;
  out.reserve(n_utts);
  for (size_t u = 0; u < n_utts; ++u) {
    UttScores scores;
    scores.utt_id = manifest[u].utt_id;
    LidScores raw;
    for (size_t p = 0; p < n_packs; ++p) {
      const DecodeResult& result = *results[u * n_packs + p];
      raw.per_language[packs[p].language] = result.total_logscore;
      raw.hypotheses[packs[p].language] = result;
      scores.hypotheses[packs[p].language] = result;
    }
    scores.dist = normalize_scores(raw);
    scores.best = classify(scores.dist);
    out.push_back(std::move(scores));
  }
  return out;
}

void write_scores_tsv(const std::vector<UttScores>& scores,
                      const std::string& path) {
  std::string out;
  for (const UttScores& s : scores) {
    for (const auto& [lang, prob] : s.dist.probs) {
      out += msg(s.utt_id, "\t", lang, "\t", format_double(prob), "\n");
    }
    out += msg(s.utt_id, "\tbest\t", s.best, "\n");
  }
  atomic_write_file(path, out);
}

ScoresFile read_scores_tsv(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  ScoresFile file;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> fields = split(lines[i], '\t');
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
      throw DataError(msg(path, " line ", i + 1,
                          ": expected `utt<TAB>lang<TAB>prob` or "
                          "`utt<TAB>best<TAB>language`"));
    }
    const std::string& utt = fields[0];
    if (file.dists.find(utt) == file.dists.end() &&
        file.best.find(utt) == file.best.end()) {
      file.order.push_back(utt);
    }
    if (fields[1] == "best") {
      if (!file.best.emplace(utt, fields[2]).second) {
        throw DataError(msg(path, " line ", i + 1,
                            ": duplicate best row for '", utt, "'"));
      }
    } else {
      const double prob = parse_double(fields[2], msg(path, " line ", i + 1));
      if (!(prob >= 0.0) || !std::isfinite(prob)) {
        throw DataError(msg(path, " line ", i + 1, ": invalid probability"));
      }
      auto& probs = file.dists[utt].probs;
      if (!probs.emplace(fields[1], prob).second) {
        throw DataError(msg(path, " line ", i + 1, ": duplicate language '",
                            fields[1], "' for '", utt, "'"));
      }
    }
  }
  if (file.order.empty()) throw DataError(msg(path, ": empty scores file"));
  for (const std::string& utt : file.order) {
    auto bi = file.best.find(utt);
    if (bi == file.best.end()) {
      throw DataError(msg(path, ": utterance '", utt, "' has no best row"));
    }
    auto di = file.dists.find(utt);
    if (di == file.dists.end()) {
      throw DataError(msg(path, ": utterance '", utt,
                          "' has no probability rows"));
    }
    double sum = 0.0;
    for (const auto& [lang, prob] : di->second.probs) {
      (void)lang;
      sum += prob;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw DataError(msg(path, ": probabilities for '", utt,
                          "' sum to ", format_double(sum), ", not 1"));
    }
    if (di->second.probs.find(bi->second) == di->second.probs.end()) {
      throw DataError(msg(path, ": best language '", bi->second,
                          "' for '", utt, "' has no probability row"));
    }
  }
  return file;
}

void write_hyps_tsv(const std::vector<UttScores>& scores,
                    const std::string& path) {
  std::string out;
  for (const UttScores& s : scores) {
    out += msg(s.utt_id, "\t", s.hypotheses.at(s.best).text, "\n");
  }
  atomic_write_file(path, out);
}

std::map<std::string, std::string> read_hyps_tsv(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  std::map<std::string, std::string> out;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> fields = split(lines[i], '\t');
    if (fields.size() != 2 || fields[0].empty()) {
      throw DataError(msg(path, " line ", i + 1, ": expected `utt<TAB>text`"));
    }
    if (!out.emplace(fields[0], fields[1]).second) {
      throw DataError(msg(path, " line ", i + 1, ": duplicate utterance '",
                          fields[0], "'"));
    }
  }
  if (out.empty()) throw DataError(msg(path, ": empty hypotheses file"));
  return out;
}

}  // namespace lidkit
