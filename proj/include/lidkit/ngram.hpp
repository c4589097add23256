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
#include <unordered_map>
#include <vector>

namespace lidkit {

// Interpolated Kneser-Ney n-gram model over subword tokens, stored in
// backoff (ARPA) form: entry log-probs are the fully interpolated values,
// backoff weights are the interpolation factors. All scores are log10.
struct NgramModel {
  static constexpr uint16_t kUnkId = 0;
  static constexpr uint16_t kBosId = 1;
  static constexpr uint16_t kEosId = 2;
  // log10 floor for symbols the model cannot score (ARPA's -99 convention).
  static constexpr double kLogFloor = -99.0;

  struct Entry {
    double logp = 0.0;
    double bow = 0.0;  // log10; meaningful only when has_bow
    bool has_bow = false;
    bool has_children = false;  // appears as the history of a longer entry
  };

  // LM context handle: up to order-1 token ids, oldest in the lowest 16
  // bits. Suitable as a recombination key.
  struct State {
    uint64_t key = 0;
    uint8_t len = 0;
    bool operator==(const State& o) const {
      return key == o.key && len == o.len;
    }
  };
  struct StateHash {
    size_t operator()(const State& s) const {
      return std::hash<uint64_t>()(s.key * 1315423911u + s.len);
    }
  };

  int order = 0;
  std::vector<std::string> id_to_token;  // ids 0..2 reserved for specials
  std::unordered_map<std::string, uint16_t> token_to_id;
  std::vector<std::unordered_map<uint64_t, Entry>> levels;  // levels[n-1]

  uint16_t id_or_unk(const std::string& token) const;
  State begin_state() const;
  State advance(State state, uint16_t token) const;
  // log10 p(token | state), resolved through backoff.
  double logp_cond(State state, uint16_t token) const;
  double end_logp(const State& state) const;  // log10 p(</s> | state)
  // Sum of conditional log10 probs with <s> padding and </s> termination;
  // unseen tokens score via <unk>.
  double score_sequence(const std::vector<std::string>& tokens) const;
};

// Discounts D_n = n1/(n1 + 2 n2) from counts-of-counts per order, clamped
// away from 0 and 1 so every stored probability stays finite; unigram level
// uses continuation counts and routes the leftover mass to <unk>. Sentences
// must not contain the reserved tokens <s>, </s>, <unk>.
NgramModel train_kneser_ney(const std::vector<std::vector<std::string>>& sentences,
                            int order);

void write_arpa(const NgramModel& model, const std::string& path);
NgramModel read_arpa(const std::string& path);

// Test support: every stored history plus the empty history, as states.
std::vector<NgramModel::State> all_histories(const NgramModel& model);
// Sum over the vocabulary (minus <s>) of 10^logp_cond.
double history_prob_sum(const NgramModel& model, NgramModel::State history);

}  // namespace lidkit
