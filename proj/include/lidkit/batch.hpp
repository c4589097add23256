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
#include <string>
#include <vector>

#include "lidkit/lid.hpp"

namespace lidkit {

struct ManifestEntry {
  std::string utt_id;
  std::string language;
  std::string posteriors_path;  // resolved against the manifest directory
  std::string reference_text;   // may be empty for classification-only runs
};

// TSV `utt_id<TAB>language<TAB>posteriors_path<TAB>reference_text`.
std::vector<ManifestEntry> read_manifest(const std::string& path);

struct UttScores {
  std::string utt_id;
  LidDistribution dist;
  std::string best;
  std::map<std::string, DecodeResult> hypotheses;  // per language
};

// Decodes every manifest utterance under every pack. Work is split into
// (utterance x pack) tasks over `workers` threads; posteriors and tries
// load lazily, exactly once. Output is in manifest order and byte-identical
// for any worker count. On failure the first error in (manifest, pack)
// order is raised with the utterance id attached.
std::vector<UttScores> score_manifest(const std::vector<ManifestEntry>& manifest,
                                      const std::vector<LanguagePack>& packs,
                                      const DecoderConfig& config, int workers);

// Scores TSV: per utterance one `utt<TAB>lang<TAB>prob` row per language
// followed by a `utt<TAB>best<TAB>language` row.
void write_scores_tsv(const std::vector<UttScores>& scores,
                      const std::string& path);

struct ScoresFile {
  std::vector<std::string> order;  // utterances in file order
  std::map<std::string, LidDistribution> dists;
  std::map<std::string, std::string> best;
};

ScoresFile read_scores_tsv(const std::string& path);

// Hypotheses TSV `utt_id<TAB>text`, the decode under the predicted
// language; the text may be empty.
void write_hyps_tsv(const std::vector<UttScores>& scores,
                    const std::string& path);
std::map<std::string, std::string> read_hyps_tsv(const std::string& path);

}  // namespace lidkit
