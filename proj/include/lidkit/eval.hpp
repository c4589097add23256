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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lidkit {

// Unit-cost Levenshtein distance over Unicode codepoints.
size_t edit_distance(const std::string& a, const std::string& b);

// distance / reference length; may exceed 1. The reference must be
// non-empty.
double cer(const std::string& reference, const std::string& hypothesis);

struct UttResult {
  std::string utt_id;
  std::string true_language;
  std::string predicted_language;
  std::optional<std::string> reference_text;
  std::optional<std::string> hypothesis_text;
  std::optional<std::string> model_id;
};

struct CerByLanguage {
  std::map<std::string, double> per_language;
  double macro = 0.0;  // unweighted mean over languages
};

CerByLanguage mean_cer_by_language(const std::vector<UttResult>& results);

double lid_accuracy(const std::vector<UttResult>& results);

struct ChallengeOptions {
  // Credit a dialect prediction when it matches the parent language (the
  // code prefix before '-'). Off by default: exact-variety match.
  bool parent_credit = false;
};

double lid_accuracy(const std::vector<UttResult>& results,
                    const ChallengeOptions& options);

struct ConfusionPair {
  std::string truth;
  std::string predicted;
  size_t count = 0;
};

// Wrong predictions only, sorted by count descending then pair
// lexicographic. top_k = 0 returns everything.
std::vector<ConfusionPair> confusion_pairs(const std::vector<UttResult>& results,
                                           size_t top_k);

struct ChallengeScore {
  double lid_accuracy = 0.0;
  double mean_cer = 0.0;
  double std_cer = 0.0;  // population std over per-language CERs
  double worst15_cer = 0.0;
  double dialect_lid_accuracy = 0.0;
  double dialect_cer = 0.0;
  // When the main set has fewer than 15 languages, worst15_cer is the mean
  // over all of them and this flag is set.
  bool worst15_truncated = false;
  size_t worst15_k = 15;
};

ChallengeScore challenge_score(const std::vector<UttResult>& results_main,
                               const std::vector<UttResult>& results_dialect,
                               const ChallengeOptions& options = {});

struct CerTable {
  // (language, model_id) -> mean dev CER. A missing cell means the model
  // does not support the language.
  std::map<std::pair<std::string, std::string>, double> cells;
  std::map<std::string, std::set<std::string>> support;  // model -> languages

  void add(const std::string& language, const std::string& model_id,
           double cer_value);
  std::vector<std::string> languages() const;
  std::vector<std::string> models() const;
};

void write_cer_table_tsv(const CerTable& table, const std::string& path);
CerTable read_cer_table_tsv(const std::string& path);

struct RoutingTable {
  std::map<std::string, std::string> route;  // language -> model_id
};

// Per language, the supported model with minimal CER; ties go to the model
// earliest in `precedence` (models absent from the list rank after it, in
// name order).
RoutingTable optimize_routing(const CerTable& table,
                              const std::vector<std::string>& precedence);

// Macro CER of a routing over the table's languages.
double routed_macro_cer(const CerTable& table, const RoutingTable& routing);

// Macro CER when one model serves every language it supports; languages
// outside its support make it ineligible (error).
double fixed_model_macro_cer(const CerTable& table, const std::string& model_id);

void write_routing_tsv(const RoutingTable& routing, const std::string& path);
RoutingTable read_routing_tsv(const std::string& path);

}  // namespace lidkit
