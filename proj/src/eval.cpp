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

#include "lidkit/eval.hpp"

#include <algorithm>
#include <cmath>

#include "lidkit/error.hpp"
#include "lidkit/io.hpp"
#include "lidkit/text.hpp"

namespace lidkit {

size_t edit_distance(const std::string& a, const std::string& b) {
  const std::vector<char32_t> ca = to_codepoints(a);
  const std::vector<char32_t> cb = to_codepoints(b);
  const size_t n = ca.size();
  const size_t m = cb.size();
  std::vector<size_t> prev(m + 1);
  std::vector<size_t> cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = j;
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= m; ++j) {
      const size_t sub = prev[j - 1] + (ca[i - 1] == cb[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double cer(const std::string& reference, const std::string& hypothesis) {
  const std::vector<char32_t> ref = to_codepoints(reference);
  if (ref.empty()) throw DataError("CER reference must be non-empty");
  return double(edit_distance(reference, hypothesis)) / double(ref.size());
}

namespace {

std::string require_field(const std::optional<std::string>& field,
                          const UttResult& r, const char* what) {
  if (!field.has_value()) {
    throw DataError(msg("utterance '", r.utt_id, "' is missing its ", what));
  }
  return *field;
}

std::map<std::string, std::vector<double>> per_language_cers(
    const std::vector<UttResult>& results) {
  std::map<std::string, std::vector<double>> groups;
  for (const UttResult& r : results) {
    if (r.true_language.empty()) {
      throw DataError(msg("utterance '", r.utt_id, "' has no true language"));
    }
    const std::string ref = require_field(r.reference_text, r, "reference");
    const std::string hyp = require_field(r.hypothesis_text, r, "hypothesis");
    groups[r.true_language].push_back(cer(ref, hyp));
  }
  return groups;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}

}  // namespace

CerByLanguage mean_cer_by_language(const std::vector<UttResult>& results) {
  if (results.empty()) throw DataError("no results to score");
  CerByLanguage out;
  for (const auto& [lang, cers] : per_language_cers(results)) {
    out.per_language[lang] = mean(cers);
  }
  double total = 0.0;
  for (const auto& [lang, value] : out.per_language) {
    (void)lang;
    total += value;
  }
  out.macro = total / double(out.per_language.size());
  return out;
}

double lid_accuracy(const std::vector<UttResult>& results) {
  if (results.empty()) throw DataError("no results to score");
  size_t correct = 0;
  for (const UttResult& r : results) {
    if (r.predicted_language.empty()) {
      throw DataError(msg("utterance '", r.utt_id, "' has no prediction"));
    }
    if (r.predicted_language == r.true_language) ++correct;
  }
  return double(correct) / double(results.size());
}

std::vector<ConfusionPair> confusion_pairs(const std::vector<UttResult>& results,
                                           size_t top_k) {
  if (results.empty()) throw DataError("no results to score");
  std::map<std::pair<std::string, std::string>, size_t> counts;
  for (const UttResult& r : results) {
    if (r.predicted_language != r.true_language) {
      ++counts[{r.true_language, r.predicted_language}];
    }
  }
  std::vector<ConfusionPair> pairs;
  pairs.reserve(counts.size());
  for (const auto& [key, count] : counts) {
    pairs.push_back({key.first, key.second, count});
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const ConfusionPair& a, const ConfusionPair& b) {
              if (a.count != b.count) return a.count > b.count;
              if (a.truth != b.truth) return a.truth < b.truth;
              return a.predicted < b.predicted;
            });
  if (top_k > 0 && pairs.size() > top_k) pairs.resize(top_k);
  return pairs;
}

namespace {

std::string parent_language(const std::string& code) {
  const size_t dash = code.find('-');
  return dash == std::string::npos ? code : code.substr(0, dash);
}

}  // namespace

double lid_accuracy(const std::vector<UttResult>& results,
                    const ChallengeOptions& options) {
  if (!options.parent_credit) return lid_accuracy(results);
  if (results.empty()) throw DataError("no results to score");
  size_t correct = 0;
  for (const UttResult& r : results) {
    if (r.predicted_language == r.true_language ||
        parent_language(r.predicted_language) ==
            parent_language(r.true_language)) {
      ++correct;
    }
  }
  return double(correct) / double(results.size());
}

ChallengeScore challenge_score(const std::vector<UttResult>& results_main,
                               const std::vector<UttResult>& results_dialect,
                               const ChallengeOptions& options) {
  if (results_main.empty()) throw DataError("main result set is empty");
  if (results_dialect.empty()) throw DataError("dialect result set is empty");

  ChallengeScore score;
  score.lid_accuracy = lid_accuracy(results_main);

  const CerByLanguage main_cer = mean_cer_by_language(results_main);
  score.mean_cer = main_cer.macro;

  std::vector<double> values;
  values.reserve(main_cer.per_language.size());
  for (const auto& [lang, value] : main_cer.per_language) {
    (void)lang;
    values.push_back(value);
  }
  double var = 0.0;
  for (double v : values) var += (v - main_cer.macro) * (v - main_cer.macro);
  var /= double(values.size());
  score.std_cer = std::sqrt(var);

  std::sort(values.begin(), values.end(), std::greater<double>());
  score.worst15_k = std::min<size_t>(15, values.size());
  score.worst15_truncated = values.size() < 15;
  double worst = 0.0;
  for (size_t i = 0; i < score.worst15_k; ++i) worst += values[i];
  score.worst15_cer = worst / double(score.worst15_k);

  score.dialect_lid_accuracy = lid_accuracy(results_dialect, options);
  score.dialect_cer = mean_cer_by_language(results_dialect).macro;
  return score;
}

void CerTable::add(const std::string& language, const std::string& model_id,
                   double cer_value) {
  if (language.empty() || model_id.empty()) {
    throw DataError("CER table entries need a language and a model");
  }
  if (!(cer_value >= 0.0) || !std::isfinite(cer_value)) {
    throw DataError(msg("CER for (", language, ", ", model_id,
                        ") must be finite and non-negative"));
  }
  if (!cells.emplace(std::make_pair(language, model_id), cer_value).second) {
    throw DataError(msg("duplicate CER cell (", language, ", ", model_id, ")"));
  }
  support[model_id].insert(language);
}

std::vector<std::string> CerTable::languages() const {
  std::set<std::string> langs;
  for (const auto& [key, value] : cells) {
    (void)value;
    langs.insert(key.first);
  }
  return {langs.begin(), langs.end()};
}

std::vector<std::string> CerTable::models() const {
  std::vector<std::string> out;
  out.reserve(support.size());
  for (const auto& [model, langs] : support) {
    (void)langs;
    out.push_back(model);
  }
  return out;
}

void write_cer_table_tsv(const CerTable& table, const std::string& path) {
  std::string out;
  for (const auto& [key, value] : table.cells) {
    out += msg(key.first, "\t", key.second, "\t", format_double(value), "\n");
  }
  atomic_write_file(path, out);
}

CerTable read_cer_table_tsv(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  CerTable table;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> fields = split(lines[i], '\t');
    if (fields.size() != 3) {
      throw DataError(msg(path, " line ", i + 1,
                          ": expected `language<TAB>model<TAB>cer`"));
    }
    double value = parse_double(fields[2], msg(path, " line ", i + 1));
    try {
      table.add(fields[0], fields[1], value);
    } catch (const DataError& e) {
      throw DataError(msg(path, " line ", i + 1, ": ", e.what()));
    }
  }
  if (table.cells.empty()) throw DataError(msg(path, ": empty CER table"));
  return table;
}

namespace {

// Position in the precedence list; unlisted models sort after listed ones
// by name.
struct ModelRank {
  size_t listed;
  std::string name;

  bool operator<(const ModelRank& other) const {
    if (listed != other.listed) return listed < other.listed;
    return name < other.name;
  }
};

ModelRank rank_of(const std::string& model,
                  const std::vector<std::string>& precedence) {
  for (size_t i = 0; i < precedence.size(); ++i) {
    if (precedence[i] == model) return {i, model};
  }
  return {precedence.size(), model};
}

}  // namespace

RoutingTable optimize_routing(const CerTable& table,
                              const std::vector<std::string>& precedence) {
  RoutingTable routing;
  for (const std::string& lang : table.languages()) {
    bool found = false;
    double best_cer = 0.0;
    ModelRank best_rank{0, ""};
    std::string best_model;
    for (const auto& [model, langs] : table.support) {
      if (langs.find(lang) == langs.end()) continue;
      const double value = table.cells.at({lang, model});
      const ModelRank rank = rank_of(model, precedence);
      if (!found || value < best_cer ||
          (value == best_cer && rank < best_rank)) {
        found = true;
        best_cer = value;
        best_rank = rank;
        best_model = model;
      }
    }
    if (!found) {
      throw DataError(msg("language '", lang, "' has no supporting model"));
    }
    routing.route[lang] = best_model;
  }
  return routing;
}

double routed_macro_cer(const CerTable& table, const RoutingTable& routing) {
  const std::vector<std::string> langs = table.languages();
  if (langs.empty()) throw DataError("empty CER table");
  double total = 0.0;
  for (const std::string& lang : langs) {
    auto it = routing.route.find(lang);
    if (it == routing.route.end()) {
      throw DataError(msg("routing is missing language '", lang, "'"));
    }
    auto cell = table.cells.find({lang, it->second});
    if (cell == table.cells.end()) {
      throw DataError(msg("routing sends '", lang, "' to '", it->second,
                          "', which does not support it"));
    }
    total += cell->second;
  }
  return total / double(langs.size());
}

double fixed_model_macro_cer(const CerTable& table,
                             const std::string& model_id) {
  const std::vector<std::string> langs = table.languages();
  if (langs.empty()) throw DataError("empty CER table");
  double total = 0.0;
  for (const std::string& lang : langs) {
    auto cell = table.cells.find({lang, model_id});
    if (cell == table.cells.end()) {
      throw DataError(msg("model '", model_id, "' does not support '", lang,
                          "'"));
    }
    total += cell->second;
  }
  return total / double(langs.size());
}

void write_routing_tsv(const RoutingTable& routing, const std::string& path) {
  std::string out;
  for (const auto& [lang, model] : routing.route) {
    out += msg(lang, "\t", model, "\n");
  }
  atomic_write_file(path, out);
}

RoutingTable read_routing_tsv(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  RoutingTable routing;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> fields = split(lines[i], '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw DataError(msg(path, " line ", i + 1,
                          ": expected `language<TAB>model`"));
    }
    if (!routing.route.emplace(fields[0], fields[1]).second) {
      throw DataError(msg(path, " line ", i + 1, ": duplicate language '",
                          fields[0], "'"));
    }
  }
  if (routing.route.empty()) throw DataError(msg(path, ": empty routing"));
  return routing;
}

}  // namespace lidkit
