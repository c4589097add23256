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

#include "lidkit/subword.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lidkit/error.hpp"
#include "lidkit/io.hpp"
#include "lidkit/text.hpp"

namespace lidkit {
namespace {

// Stand-in log-prob for tokens whose hard count dropped to zero. Keeps
// arithmetic finite while making the token unusable in practice.
constexpr double kZeroLogProb = -1e30;
constexpr size_t kMaxSeedLen = 8;

using TokenIndex = std::unordered_map<std::u32string, double>;

struct Cell {
  double score = -std::numeric_limits<double>::infinity();
  size_t ntok = 0;
  size_t prev = 0;  // start offset of the last token
  bool reachable = false;
};

// Spans (start, len) of the best path ending at `pos`.
std::vector<std::pair<size_t, size_t>> backtrace(const std::vector<Cell>& dp,
                                                 size_t pos) {
  std::vector<std::pair<size_t, size_t>> spans;
  while (pos > 0) {
    size_t start = dp[pos].prev;
    spans.emplace_back(start, pos - start);
    pos = start;
  }
  std::reverse(spans.begin(), spans.end());
  return spans;
}

int compare_token_seqs(const std::u32string& cps,
                       std::vector<std::pair<size_t, size_t>> a,
                       std::vector<std::pair<size_t, size_t>> b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    std::u32string ta = cps.substr(a[i].first, a[i].second);
    std::u32string tb = cps.substr(b[i].first, b[i].second);
    if (ta != tb) return ta < tb ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

// Unigram Viterbi over code points. Ties on score prefer fewer tokens, then
// the lexicographically smallest token sequence. Keeping only the smallest
// sequence per cell is safe: prefixes of equal score and length compare the
// same way after any common extension.
std::vector<Cell> viterbi_dp(const std::u32string& cps,
                             const TokenIndex& index, size_t max_len) {
  std::vector<Cell> dp(cps.size() + 1);
  dp[0].score = 0.0;
  dp[0].reachable = true;
  for (size_t j = 1; j <= cps.size(); ++j) {
    for (size_t l = 1; l <= std::min(j, max_len); ++l) {
      size_t i = j - l;
      if (!dp[i].reachable) continue;
      auto it = index.find(cps.substr(i, l));
      if (it == index.end()) continue;
      double score = dp[i].score + it->second;
      size_t ntok = dp[i].ntok + 1;
      Cell& cell = dp[j];
      bool better = false;
      if (!cell.reachable || score > cell.score) {
        better = true;
      } else if (score == cell.score) {
        if (ntok < cell.ntok) {
          better = true;
        } else if (ntok == cell.ntok) {
          auto cand = backtrace(dp, i);
          cand.emplace_back(i, l);
          better = compare_token_seqs(cps, cand, backtrace(dp, j)) < 0;
        }
      }
      if (better) {
        cell.score = score;
        cell.ntok = ntok;
        cell.prev = i;
        cell.reachable = true;
      }
    }
  }
  return dp;
}

struct ViterbiResult {
  double score = 0.0;
  std::vector<std::pair<size_t, size_t>> spans;
  bool ok = false;
};

ViterbiResult viterbi(const std::u32string& cps, const TokenIndex& index,
                      size_t max_len) {
  ViterbiResult r;
  std::vector<Cell> dp = viterbi_dp(cps, index, max_len);
  if (!dp[cps.size()].reachable) return r;
  r.ok = true;
  r.score = dp[cps.size()].score;
  r.spans = backtrace(dp, cps.size());
  return r;
}

}  // namespace

SubwordVocab train_unigram_vocab(const TextCorpus& corpus, size_t target_size,
                                 size_t seed_size, SubwordTrainTrace* trace) {
  if (corpus.lines.empty()) throw DataError("cannot train on an empty corpus");
  if (target_size < 1) throw UsageError("target_size must be >= 1");
  if (seed_size < target_size)
    throw UsageError(msg("seed_size (", seed_size, ") must be >= target_size (",
                         target_size, ")"));

  std::vector<std::u32string> lines;
  lines.reserve(corpus.lines.size());
  std::set<char32_t> alphabet;
  for (const std::string& line : corpus.lines) {
    std::vector<char32_t> cps = to_codepoints(line);
    lines.emplace_back(cps.begin(), cps.end());
    alphabet.insert(cps.begin(), cps.end());
  }
  if (target_size < alphabet.size())
    throw DataError(msg("target_size ", target_size, " is below the corpus ",
                        "character inventory of ", alphabet.size()));

  // Seed: frequent substrings of length <= 8 plus all single characters.
  std::unordered_map<std::u32string, uint64_t> substr_counts;
  for (const std::u32string& line : lines)
    for (size_t i = 0; i < line.size(); ++i)
      for (size_t l = 1; l <= std::min(kMaxSeedLen, line.size() - i); ++l)
        ++substr_counts[line.substr(i, l)];
  std::vector<std::pair<std::u32string, uint64_t>> ranked(
      substr_counts.begin(), substr_counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > seed_size) ranked.resize(seed_size);

  TokenIndex probs;
  double init_total = 0.0;
  for (const auto& [tok, count] : ranked) {
    probs[tok] = static_cast<double>(count);
    init_total += static_cast<double>(count);
  }
  for (char32_t c : alphabet) {
    std::u32string tok(1, c);
    if (!probs.count(tok)) {
      probs[tok] = static_cast<double>(substr_counts.at(tok));
      init_total += probs[tok];
    }
  }
  for (auto& [tok, p] : probs) p = std::log(p / init_total);

  std::unordered_map<std::u32string, double> counts;
  auto em_iterations = [&](int iters, std::vector<double>* lls) {
    for (int it = 0; it < iters; ++it) {
      counts.clear();
      double ll = 0.0;
      for (const std::u32string& line : lines) {
        ViterbiResult r = viterbi(line, probs, kMaxSeedLen);
        if (!r.ok)
          throw InternalError("training segmentation lost coverage");
        ll += r.score;
        for (const auto& [start, len] : r.spans)
          counts[line.substr(start, len)] += 1.0;
      }
      if (lls) lls->push_back(ll);
      double total = 0.0;
      for (const auto& [tok, c] : counts) total += c;
      for (auto& [tok, p] : probs) {
        auto it = counts.find(tok);
        p = (it == counts.end() || it->second == 0.0)
                ? kZeroLogProb
                : std::log(it->second / total);
      }
    }
  };

  while (true) {
    std::vector<double> lls;
    em_iterations(2, &lls);
    if (trace) trace->round_lls.push_back(lls);
    std::vector<std::u32string> prunable;
    for (const auto& [tok, p] : probs)
      if (tok.size() > 1) prunable.push_back(tok);
    if (probs.size() <= target_size || prunable.empty()) break;

    // Loss of removing a token: count times the score gap to its best
    // alternative segmentation.
    std::vector<std::pair<double, std::u32string>> losses;
    losses.reserve(prunable.size());
    for (const std::u32string& tok : prunable) {
      auto cit = counts.find(tok);
      double c = cit == counts.end() ? 0.0 : cit->second;
      double loss = 0.0;
      if (c > 0.0) {
        double logp = probs.at(tok);
        probs.erase(tok);
        ViterbiResult alt = viterbi(tok, probs, kMaxSeedLen);
        probs[tok] = logp;
        double alt_score = alt.ok ? alt.score : 2.0 * kZeroLogProb;
        loss = c * (logp - alt_score);
      }
      losses.emplace_back(loss, tok);
    }
    std::sort(losses.begin(), losses.end());
    size_t n_prune =
        std::min<size_t>((prunable.size() + 4) / 5, probs.size() - target_size);
    for (size_t i = 0; i < n_prune; ++i) probs.erase(losses[i].second);
  }

  // Final refinement, then smooth never-used tokens so every stored
  // log-probability is finite.
  std::vector<double> final_lls;
  em_iterations(2, &final_lls);
  if (trace) trace->round_lls.push_back(final_lls);
  double total = 0.0;
  for (const auto& [tok, p] : probs) {
    auto it = counts.find(tok);
    total += (it == counts.end() || it->second == 0.0) ? 0.5 : it->second;
  }
  SubwordVocab vocab;
  vocab.target_size = target_size;
  for (const auto& [tok, p] : probs) {
    auto it = counts.find(tok);
    double c = (it == counts.end() || it->second == 0.0) ? 0.5 : it->second;
    vocab.entries[to_utf8(std::vector<char32_t>(tok.begin(), tok.end()))] =
        std::log(c / total);
  }
  for (char32_t c : alphabet) vocab.coverage_alphabet.insert(to_utf8(c));
  return vocab;
}

SubwordSegmenter::SubwordSegmenter(const SubwordVocab& vocab) {
  for (const auto& [tok, logp] : vocab.entries) {
    std::vector<char32_t> cps = to_codepoints(tok);
    if (cps.empty()) throw DataError("vocabulary contains an empty token");
    std::u32string key(cps.begin(), cps.end());
    index_[key] = logp;
    max_len_ = std::max(max_len_, key.size());
    if (key.size() == 1) alphabet_.insert(key[0]);
  }
}

Segmentation SubwordSegmenter::segment(const std::string& text) const {
  std::vector<char32_t> raw = to_codepoints(text);
  std::u32string cps(raw.begin(), raw.end());
  for (size_t i = 0; i < cps.size(); ++i)
    if (!alphabet_.count(cps[i]))
      throw DataError(msg("character '", to_utf8(cps[i]), "' at offset ", i,
                          " is outside the vocabulary alphabet"));
  ViterbiResult r = viterbi(cps, index_, max_len_);
  if (!r.ok) throw InternalError("segmentation unreachable despite coverage");
  Segmentation seg;
  seg.score = r.score;
  seg.tokens.reserve(r.spans.size());
  for (const auto& [start, len] : r.spans) {
    std::u32string tok = cps.substr(start, len);
    seg.tokens.push_back(
        to_utf8(std::vector<char32_t>(tok.begin(), tok.end())));
  }
  return seg;
}

Segmentation segment_viterbi(const std::string& text,
                             const SubwordVocab& vocab) {
  return SubwordSegmenter(vocab).segment(text);
}

void write_vocab_tsv(const SubwordVocab& vocab, const std::string& path) {
  std::string out;
  for (const auto& [tok, logp] : vocab.entries) {
    out += tok;
    out += '\t';
    out += format_double(logp);
    out += '\n';
  }
  atomic_write_file(path, out);
}

SubwordVocab read_vocab_tsv(const std::string& path) {
  SubwordVocab vocab;
  std::vector<std::string> lines = read_lines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> fields = split(lines[i], '\t');
    if (fields.size() != 2)
      throw DataError(msg(path, ":", i + 1, ": expected token<TAB>logprob"));
    if (fields[0].empty())
      throw DataError(msg(path, ":", i + 1, ": empty token"));
    double logp = parse_double(fields[1]);
    if (!(logp <= 0.0) || !std::isfinite(logp))
      throw DataError(
          msg(path, ":", i + 1, ": log-probability must be finite and <= 0"));
    if (!vocab.entries.emplace(fields[0], logp).second)
      throw DataError(msg(path, ":", i + 1, ": duplicate token"));
    if (to_codepoints(fields[0]).size() == 1)
      vocab.coverage_alphabet.insert(fields[0]);
  }
  if (vocab.entries.empty()) throw DataError(msg(path, ": empty vocabulary"));
  vocab.target_size = vocab.entries.size();
  return vocab;
}

}  // namespace lidkit
