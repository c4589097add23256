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

#include "lidkit/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <unordered_map>

#include "lidkit/error.hpp"
#include "lidkit/text.hpp"

namespace lidkit {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct TokChain {
  std::shared_ptr<const TokChain> prev;
  int token = -1;
};

std::vector<int> chain_tokens(const std::shared_ptr<const TokChain>& chain) {
  std::vector<int> out;
  for (const TokChain* c = chain.get(); c != nullptr; c = c->prev.get())
    out.push_back(c->token);
  std::reverse(out.begin(), out.end());
  return out;
}

struct Hyp {
  int node = 0;
  uint16_t last_sym = 0;  // 0 = blank / nothing emitted yet
  NgramModel::State lm_state;
  double ac = 0.0;
  double lm = 0.0;
  int ntok = 0;
  std::shared_ptr<const TokChain> chain;

  double score(const DecoderConfig& c) const {
    return ac + c.lm_weight * lm + c.word_insertion_bonus * ntok;
  }
};

struct HypKey {
  int node;
  uint16_t last_sym;
  NgramModel::State lm_state;
  bool operator==(const HypKey& o) const {
    return node == o.node && last_sym == o.last_sym && lm_state == o.lm_state;
  }
};
struct HypKeyHash {
  size_t operator()(const HypKey& k) const {
    size_t h = NgramModel::StateHash()(k.lm_state);
    h = h * 1000003u + static_cast<size_t>(k.node);
    return h * 65599u + k.last_sym;
  }
};

int compare_chains(const LexiconTrie& trie,
                   const std::shared_ptr<const TokChain>& a,
                   const std::shared_ptr<const TokChain>& b) {
  std::vector<int> ta = chain_tokens(a), tb = chain_tokens(b);
  size_t n = std::min(ta.size(), tb.size());
  for (size_t i = 0; i < n; ++i) {
    const std::string& sa = trie.tokens()[ta[i]].text;
    const std::string& sb = trie.tokens()[tb[i]].text;
    if (sa != sb) return sa < sb ? -1 : 1;
  }
  if (ta.size() != tb.size()) return ta.size() < tb.size() ? -1 : 1;
  return 0;
}

// Deterministic full order: score desc, then fewer tokens, then
// lexicographically smaller token sequence, then state identity.
bool hyp_less(const LexiconTrie& trie, const DecoderConfig& cfg, const Hyp& a,
              const Hyp& b) {
  double sa = a.score(cfg), sb = b.score(cfg);
  if (sa != sb) return sa > sb;
  if (a.ntok != b.ntok) return a.ntok < b.ntok;
  int c = compare_chains(trie, a.chain, b.chain);
  if (c != 0) return c < 0;
  if (a.node != b.node) return a.node < b.node;
  if (a.last_sym != b.last_sym) return a.last_sym < b.last_sym;
  if (a.lm_state.len != b.lm_state.len) return a.lm_state.len < b.lm_state.len;
  return a.lm_state.key < b.lm_state.key;
}

}  // namespace

LexiconTrie::LexiconTrie(const Lexicon& lexicon,
                         const std::vector<std::string>& symbols,
                         const NgramModel& lm)
    : symbols_(symbols) {
  std::unordered_map<std::string, uint16_t> sym_id;
  for (size_t i = 0; i < symbols.size(); ++i)
    sym_id[symbols[i]] = static_cast<uint16_t>(i);
  nodes_.emplace_back();
  for (const auto& [token, spelling] : lexicon.entries) {
    int node = 0;
    for (const std::string& sym : spelling) {
      auto it = sym_id.find(sym);
      if (it == sym_id.end() || it->second == 0)
        throw DataError(msg("lexicon '", lexicon.language, "': token '", token,
                            "' uses symbol '", sym,
                            "' absent from the posterior inventory"));
      uint16_t id = it->second;
      int child = -1;
      for (const auto& [s, n] : nodes_[node].children)
        if (s == id) child = n;
      if (child < 0) {
        child = static_cast<int>(nodes_.size());
        nodes_[node].children.emplace_back(id, child);
        nodes_.emplace_back();
      }
      node = child;
    }
    int tok_idx = static_cast<int>(tokens_.size());
    tokens_.push_back(TokenInfo{token, lm.id_or_unk(token)});
    nodes_[node].labels.push_back(tok_idx);
  }
  for (Node& node : nodes_) {
    std::sort(node.children.begin(), node.children.end());
    // labels were inserted in lexicon (sorted map) order already
  }
}

DecodeResult beam_decode(const PosteriorMatrix& post, const LexiconTrie& trie,
                         const NgramModel& lm, const DecoderConfig& config) {
  if (config.beam_width < 1) throw UsageError("beam_width must be >= 1");
  if (config.lm_weight < 0) throw UsageError("lm_weight must be >= 0");
  if (trie.symbols() != post.symbols)
    throw DataError("posterior symbol inventory differs from the lexicon's");
  if (post.T < 1) throw DataError("posterior matrix has no frames");

  std::vector<double> lp(post.T * post.S);
  for (size_t i = 0; i < lp.size(); ++i)
    lp[i] = post.data[i] > 0.0 ? std::log10(post.data[i]) : kNegInf;
  auto lp_at = [&](size_t t, uint16_t s) { return lp[t * post.S + s]; };

  std::unordered_map<HypKey, Hyp, HypKeyHash> frontier;
  auto offer = [&](std::unordered_map<HypKey, Hyp, HypKeyHash>& dst, Hyp h) {
    HypKey key{h.node, h.last_sym, h.lm_state};
    auto [it, inserted] = dst.try_emplace(key, h);
    if (!inserted && hyp_less(trie, config, h, it->second)) it->second = h;
  };

  std::vector<Hyp> beam;
  {
    Hyp init;
    init.lm_state = lm.begin_state();
    beam.push_back(init);
  }

  for (size_t t = 0; t < post.T; ++t) {
    frontier.clear();
    for (const Hyp& h : beam) {
      {
        Hyp nh = h;
        nh.last_sym = 0;
        nh.ac += lp_at(t, 0) + config.blank_bias;
        offer(frontier, std::move(nh));
      }
      if (h.last_sym != 0) {
        Hyp nh = h;
        nh.ac += lp_at(t, h.last_sym);
        offer(frontier, std::move(nh));
      }
      for (const auto& [sym, child] : trie.nodes()[h.node].children) {
        if (sym == h.last_sym) continue;  // needs a separating blank
        double ac = h.ac + lp_at(t, sym);
        const LexiconTrie::Node& cn = trie.nodes()[child];
        if (!cn.children.empty()) {
          Hyp nh = h;
          nh.node = child;
          nh.last_sym = sym;
          nh.ac = ac;
          offer(frontier, std::move(nh));
        }
        for (int label : cn.labels) {
          Hyp nh = h;
          nh.node = 0;
          nh.last_sym = sym;
          nh.ac = ac;
          uint16_t lm_id = trie.tokens()[label].lm_id;
          nh.lm += lm.logp_cond(h.lm_state, lm_id);
          nh.lm_state = lm.advance(h.lm_state, lm_id);
          nh.ntok = h.ntok + 1;
          nh.chain = std::make_shared<const TokChain>(TokChain{h.chain, label});
          offer(frontier, std::move(nh));
        }
      }
    }
    if (frontier.empty()) throw InternalError("beam collapsed mid-decode");
    beam.clear();
    beam.reserve(frontier.size());
    for (auto& [key, h] : frontier) beam.push_back(std::move(h));
    std::sort(beam.begin(), beam.end(), [&](const Hyp& a, const Hyp& b) {
      return hyp_less(trie, config, a, b);
    });
    if (beam.size() > static_cast<size_t>(config.beam_width))
      beam.resize(static_cast<size_t>(config.beam_width));
  }

  // Finalists are hypotheses with no dangling spelling, plus the explicit
  // all-blank fallback, ranked with the sentence-end LM term folded in.
  std::vector<Hyp> finals;
  for (Hyp& h : beam)
    if (h.node == 0) {
      h.lm += lm.end_logp(h.lm_state);
      finals.push_back(std::move(h));
    }
  {
    Hyp empty;
    empty.lm_state = lm.begin_state();
    for (size_t t = 0; t < post.T; ++t)
      empty.ac += lp_at(t, 0) + config.blank_bias;
    empty.lm = lm.end_logp(empty.lm_state);
    finals.push_back(std::move(empty));
  }
  std::sort(finals.begin(), finals.end(), [&](const Hyp& a, const Hyp& b) {
    return hyp_less(trie, config, a, b);
  });

  const Hyp& best = finals.front();
  DecodeResult result;
  for (int idx : chain_tokens(best.chain))
    result.tokens.push_back(trie.tokens()[idx].text);
  result.text = join(result.tokens, "");
  result.acoustic_logscore = best.ac;
  result.lm_logscore = best.lm;
  result.total_logscore = best.ac + config.lm_weight * best.lm +
                          config.word_insertion_bonus * best.ntok;
  return result;
}

DecodeResult beam_decode(const PosteriorMatrix& post, const Lexicon& lexicon,
                         const NgramModel& lm, const DecoderConfig& config) {
  return beam_decode(post, LexiconTrie(lexicon, post.symbols, lm), lm, config);
}

}  // namespace lidkit
