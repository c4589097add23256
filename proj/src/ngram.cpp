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

#include "lidkit/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lidkit/error.hpp"
#include "lidkit/io.hpp"
#include "lidkit/text.hpp"

namespace lidkit {
namespace {

constexpr uint64_t level_mask(int n) {
  return n >= 4 ? ~uint64_t(0) : (uint64_t(1) << (16 * n)) - 1;
}

uint64_t append_token(uint64_t key, int len, uint16_t token) {
  return key | (uint64_t(token) << (16 * len));
}

uint16_t last_token(uint64_t key, int len) {
  return static_cast<uint16_t>(key >> (16 * (len - 1)));
}

std::vector<uint16_t> unpack(uint64_t key, int len) {
  std::vector<uint16_t> ids(static_cast<size_t>(len));
  for (int i = 0; i < len; ++i) ids[i] = static_cast<uint16_t>(key >> (16 * i));
  return ids;
}

double discount_for_level(const std::unordered_map<uint64_t, uint64_t>& counts,
                          int n) {
  uint64_t n1 = 0, n2 = 0;
  for (const auto& [key, c] : counts) {
    if (c == 1) ++n1;
    if (c == 2) ++n2;
  }
  if (n1 + 2 * n2 == 0) {
    warn(msg("order-", n, " counts have no singletons or doubletons; ",
             "falling back to discount 0.5"));
    return 0.5;
  }
  double d = static_cast<double>(n1) / static_cast<double>(n1 + 2 * n2);
  // D=0 would make lower orders unreachable, D=1 zeroes singleton mass;
  // both break the finite-log-prob invariant on tiny corpora.
  double clamped = std::min(0.999, std::max(1e-3, d));
  if (clamped != d)
    warn(msg("order-", n, " discount ", d, " clamped to ", clamped));
  return clamped;
}

}  // namespace

uint16_t NgramModel::id_or_unk(const std::string& token) const {
  auto it = token_to_id.find(token);
  return it == token_to_id.end() ? kUnkId : it->second;
}

NgramModel::State NgramModel::begin_state() const {
  State s;
  if (order < 2) return s;
  s = advance(s, kBosId);
  return s;
}

NgramModel::State NgramModel::advance(State state, uint16_t token) const {
  if (order < 2) return State{};
  if (state.len == order - 1) {
    state.key >>= 16;
    --state.len;
  }
  state.key = append_token(state.key, state.len, token);
  ++state.len;
  // Shorten to the longest context that can still influence a query.
  while (state.len > 0) {
    auto it = levels[state.len - 1].find(state.key);
    if (it != levels[state.len - 1].end() &&
        (it->second.has_children ||
         (it->second.has_bow && it->second.bow != 0.0)))
      break;
    state.key >>= 16;
    --state.len;
  }
  return state;
}

double NgramModel::logp_cond(State state, uint16_t token) const {
  double bow_acc = 0.0;
  while (true) {
    uint64_t key = append_token(state.key, state.len, token);
    const auto& level = levels[state.len];
    auto it = level.find(key);
    if (it != level.end()) return bow_acc + it->second.logp;
    if (state.len == 0) return bow_acc + kLogFloor;
    auto hist = levels[state.len - 1].find(state.key);
    if (hist != levels[state.len - 1].end() && hist->second.has_bow)
      bow_acc += hist->second.bow;
    state.key >>= 16;
    --state.len;
  }
}

double NgramModel::end_logp(const State& state) const {
  return logp_cond(state, kEosId);
}

double NgramModel::score_sequence(const std::vector<std::string>& tokens) const {
  State state = begin_state();
  double total = 0.0;
  for (const std::string& token : tokens) {
    uint16_t id = id_or_unk(token);
    total += logp_cond(state, id);
    state = advance(state, id);
  }
  return total + end_logp(state);
}

NgramModel train_kneser_ney(
    const std::vector<std::vector<std::string>>& sentences, int order) {
  if (order < 1 || order > 4)
    throw UsageError(msg("order must be in [1,4], got ", order));
  bool any = false;
  for (const auto& s : sentences) any = any || !s.empty();
  if (sentences.empty() || !any)
    throw DataError("need at least one nonempty sentence");

  NgramModel model;
  model.order = order;
  model.id_to_token = {"<unk>", "<s>", "</s>"};
  for (size_t i = 0; i < model.id_to_token.size(); ++i)
    model.token_to_id[model.id_to_token[i]] = static_cast<uint16_t>(i);

  std::set<std::string> token_set;
  for (const auto& sentence : sentences)
    for (const std::string& token : sentence) {
      if (token == "<s>" || token == "</s>" || token == "<unk>")
        throw DataError(msg("reserved token '", token, "' in training data"));
      if (token.empty()) throw DataError("empty token in training data");
      token_set.insert(token);
    }
  for (const std::string& token : token_set) {
    model.token_to_id[token] = static_cast<uint16_t>(model.id_to_token.size());
    model.id_to_token.push_back(token);
  }
  if (model.id_to_token.size() > 65535)
    throw DataError(msg("vocabulary of ", token_set.size(),
                        " tokens exceeds the supported 65532"));

  // Highest level keeps raw counts; each clipped sentence-initial window
  // contributes a raw <s>-anchored count at its own length.
  std::vector<std::unordered_map<uint64_t, uint64_t>> counts(
      static_cast<size_t>(order));
  for (const auto& sentence : sentences) {
    std::vector<uint16_t> stream;
    stream.reserve(sentence.size() + 2);
    if (order >= 2) stream.push_back(NgramModel::kBosId);
    for (const std::string& token : sentence)
      stream.push_back(model.token_to_id.at(token));
    stream.push_back(NgramModel::kEosId);
    size_t first = order >= 2 ? 1 : 0;
    for (size_t i = first; i < stream.size(); ++i) {
      int n = static_cast<int>(std::min<size_t>(i + 1, order));
      uint64_t key = 0;
      for (int k = 0; k < n; ++k)
        key = append_token(key, k, stream[i + 1 - n + k]);
      ++counts[n - 1][key];
    }
  }
  // Lower levels: continuation counts (distinct one-token left extensions),
  // except the <s>-anchored entries added above, which nothing can extend.
  for (int n = order - 1; n >= 1; --n)
    for (const auto& [key, c] : counts[n])
      ++counts[n - 1][key >> 16];

  std::vector<double> discounts(static_cast<size_t>(order));
  for (int n = 1; n <= order; ++n)
    discounts[n - 1] = discount_for_level(counts[n - 1], n);

  model.levels.resize(static_cast<size_t>(order));

  // Unigrams: leftover mass goes to <unk> so the level sums to one exactly.
  {
    double d = discounts[0];
    uint64_t total = 0;
    for (const auto& [key, c] : counts[0]) total += c;
    double s = static_cast<double>(total);
    for (const auto& [key, c] : counts[0]) {
      NgramModel::Entry e;
      e.logp = std::log10((static_cast<double>(c) - d) / s);
      model.levels[0][key] = e;
    }
    NgramModel::Entry unk;
    unk.logp =
        std::log10(d * static_cast<double>(counts[0].size()) / s);
    model.levels[0][NgramModel::kUnkId] = unk;
    if (order >= 2) {
      NgramModel::Entry bos;
      bos.logp = NgramModel::kLogFloor;
      model.levels[0][NgramModel::kBosId] = bos;
    }
  }

  for (int n = 2; n <= order; ++n) {
    double d = discounts[n - 1];
    struct HistStat {
      uint64_t total = 0;
      uint64_t succ = 0;
    };
    std::unordered_map<uint64_t, HistStat> hist_stats;
    for (const auto& [key, c] : counts[n - 1]) {
      HistStat& hs = hist_stats[key & level_mask(n - 1)];
      hs.total += c;
      ++hs.succ;
    }
    for (const auto& [key, c] : counts[n - 1]) {
      uint64_t hkey = key & level_mask(n - 1);
      const HistStat& hs = hist_stats.at(hkey);
      double ctot = static_cast<double>(hs.total);
      double gamma = d * static_cast<double>(hs.succ) / ctot;
      NgramModel::State lower;
      lower.key = hkey >> 16;
      lower.len = static_cast<uint8_t>(n - 2);
      double p_lower = std::pow(10.0, model.logp_cond(lower, last_token(key, n)));
      NgramModel::Entry e;
      e.logp = std::log10((static_cast<double>(c) - d) / ctot + gamma * p_lower);
      model.levels[n - 1][key] = e;
    }
    for (const auto& [hkey, hs] : hist_stats) {
      NgramModel::Entry& he = model.levels[n - 2].at(hkey);
      he.bow = std::log10(d * static_cast<double>(hs.succ) /
                          static_cast<double>(hs.total));
      he.has_bow = true;
      he.has_children = true;
    }
  }
  return model;
}

void write_arpa(const NgramModel& model, const std::string& path) {
  std::string out = "\\data\\\n";
  for (int n = 1; n <= model.order; ++n)
    out += msg("ngram ", n, "=", model.levels[n - 1].size(), "\n");
  for (int n = 1; n <= model.order; ++n) {
    std::vector<std::pair<std::vector<std::string>, const NgramModel::Entry*>>
        rows;
    rows.reserve(model.levels[n - 1].size());
    for (const auto& [key, entry] : model.levels[n - 1]) {
      std::vector<std::string> words;
      for (uint16_t id : unpack(key, n)) words.push_back(model.id_to_token[id]);
      rows.emplace_back(std::move(words), &entry);
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out += msg("\n\\", n, "-grams:\n");
    for (const auto& [words, entry] : rows) {
      out += format_double(entry->logp);
      out += '\t';
      out += join(words, " ");
      if (entry->has_bow) {
        out += '\t';
        out += format_double(entry->bow);
      }
      out += '\n';
    }
  }
  out += "\n\\end\\\n";
  atomic_write_file(path, out);
}

NgramModel read_arpa(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  size_t pos = 0;
  auto next_content = [&]() -> const std::string* {
    while (pos < lines.size() && lines[pos].empty()) ++pos;
    return pos < lines.size() ? &lines[pos] : nullptr;
  };
  const std::string* line = next_content();
  if (!line || *line != "\\data\\")
    throw DataError(msg(path, ": expected \\data\\ header"));
  ++pos;

  std::vector<size_t> declared;
  while ((line = next_content()) && line->rfind("ngram ", 0) == 0) {
    std::string rest = line->substr(6);
    size_t eq = rest.find('=');
    if (eq == std::string::npos)
      throw DataError(msg(path, ": malformed count line '", *line, "'"));
    int n = static_cast<int>(parse_int(rest.substr(0, eq)));
    if (n != static_cast<int>(declared.size()) + 1)
      throw DataError(msg(path, ": ngram counts must start at 1 and be ",
                          "contiguous; got ngram ", n));
    declared.push_back(static_cast<size_t>(parse_int(rest.substr(eq + 1))));
    ++pos;
  }
  if (declared.empty() || declared.size() > 4)
    throw DataError(msg(path, ": supported orders are 1 through 4"));

  NgramModel model;
  model.order = static_cast<int>(declared.size());
  model.id_to_token = {"<unk>", "<s>", "</s>"};
  for (size_t i = 0; i < model.id_to_token.size(); ++i)
    model.token_to_id[model.id_to_token[i]] = static_cast<uint16_t>(i);
  model.levels.resize(declared.size());

  for (int n = 1; n <= model.order; ++n) {
    std::string header = msg("\\", n, "-grams:");
    line = next_content();
    if (!line || *line != header)
      throw DataError(msg(path, ": expected section ", header));
    ++pos;
    size_t seen = 0;
    while ((line = next_content()) && (*line)[0] != '\\') {
      std::vector<std::string> fields = split(*line, '\t');
      if (fields.size() < 2 || fields.size() > 3)
        throw DataError(msg(path, ": bad row in ", header, ": '", *line, "'"));
      double logp = parse_double(fields[0]);
      if (!std::isfinite(logp) || logp > 0.0)
        throw DataError(
            msg(path, ": log-prob must be finite and <= 0 in ", header));
      std::vector<std::string> words = split(fields[1], ' ');
      if (static_cast<int>(words.size()) != n)
        throw DataError(msg(path, ": ", header, " row with ", words.size(),
                            " tokens: '", *line, "'"));
      uint64_t key = 0;
      for (int k = 0; k < n; ++k) {
        auto it = model.token_to_id.find(words[k]);
        uint16_t id;
        if (it != model.token_to_id.end()) {
          id = it->second;
        } else if (n == 1) {
          id = static_cast<uint16_t>(model.id_to_token.size());
          model.token_to_id[words[k]] = id;
          model.id_to_token.push_back(words[k]);
          if (model.id_to_token.size() > 65535)
            throw DataError(msg(path, ": too many distinct tokens"));
        } else {
          throw DataError(msg(path, ": token '", words[k], "' in ", header,
                              " missing from 1-grams"));
        }
        key = append_token(key, k, id);
      }
      NgramModel::Entry entry;
      entry.logp = logp;
      if (fields.size() == 3) {
        entry.bow = parse_double(fields[2]);
        if (!std::isfinite(entry.bow))
          throw DataError(msg(path, ": non-finite backoff in ", header));
        entry.has_bow = true;
      }
      if (!model.levels[n - 1].emplace(key, entry).second)
        throw DataError(msg(path, ": duplicate entry in ", header));
      ++seen;
      ++pos;
    }
    if (seen != declared[n - 1])
      throw DataError(msg(path, ": section ", header, " has ", seen,
                          " entries but the \\data\\ header declares ",
                          declared[n - 1]));
  }
  line = next_content();
  if (!line || *line != "\\end\\")
    throw DataError(msg(path, ": expected \\end\\ marker"));

  for (int n = 2; n <= model.order; ++n)
    for (const auto& [key, entry] : model.levels[n - 1]) {
      auto hist = model.levels[n - 2].find(key & level_mask(n - 1));
      if (hist == model.levels[n - 2].end()) {
        std::vector<std::string> words;
        for (uint16_t id : unpack(key, n))
          words.push_back(model.id_to_token[id]);
        warn(msg(path, ": ", n, "-gram '", join(words, " "),
                 "' has no history entry one level down"));
        continue;
      }
      hist->second.has_children = true;
    }
  return model;
}

std::vector<NgramModel::State> all_histories(const NgramModel& model) {
  std::vector<NgramModel::State> out;
  out.push_back(NgramModel::State{});
  for (int n = 1; n < model.order; ++n)
    for (const auto& [key, entry] : model.levels[n - 1])
      if (entry.has_children)
        out.push_back(
            NgramModel::State{key, static_cast<uint8_t>(n)});
  return out;
}

double history_prob_sum(const NgramModel& model, NgramModel::State history) {
  double sum = 0.0;
  for (size_t id = 0; id < model.id_to_token.size(); ++id) {
    if (id == NgramModel::kBosId) continue;
    sum += std::pow(10.0, model.logp_cond(history, static_cast<uint16_t>(id)));
  }
  return sum;
}

}  // namespace lidkit
