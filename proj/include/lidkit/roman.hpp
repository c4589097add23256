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
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lidkit/subword.hpp"

namespace lidkit {

// Decoder symbol inventory: <blank>, a-z, 0-9, apostrophe. 38 symbols,
// blank first. Carried in posterior file headers so alternate inventories
// load cleanly.
const std::vector<std::string>& uroman_symbols();

// The text side of the inventory (everything but blank).
const std::set<char32_t>& uroman_alphabet();

// Table-driven rewriting system. Rules are applied longest-source-first,
// left to right; characters with no rule are dropped.
struct RomanMap {
  std::vector<std::pair<std::string, std::string>> rules;
  std::set<char32_t> output_alphabet;
};

// Identity on a-z/0-9/', Latin diacritic stripping, combining-mark removal,
// and a small Cyrillic table.
RomanMap default_roman_map();

struct RomanizeStats {
  size_t chars_in = 0;
  size_t chars_dropped = 0;  // characters with no rule at all
};

class Romanizer {
 public:
  explicit Romanizer(const RomanMap& map);
  std::string romanize(const std::string& text,
                       RomanizeStats* stats = nullptr) const;

 private:
  std::unordered_map<std::u32string, std::string> rules_;
  size_t max_src_len_ = 0;
};

std::string romanize(const std::string& text, const RomanMap& map,
                     RomanizeStats* stats = nullptr);

struct Lexicon {
  std::map<std::string, std::vector<std::string>> entries;  // token -> spelling
  std::string language;
};

// Spells each vocab token symbol by symbol; tokens that romanize to nothing
// are skipped and reported through dropped_tokens.
Lexicon build_lexicon(const SubwordVocab& vocab, const RomanMap& map,
                      const std::string& language,
                      std::vector<std::string>* dropped_tokens = nullptr);

// TSV `source<TAB>target`. Loading validates alphabet closure and the
// presence of identity rules for the full output alphabet.
void write_roman_map_tsv(const RomanMap& map, const std::string& path);
RomanMap read_roman_map_tsv(const std::string& path);

// `token<TAB>s y m b o l s`, spelling symbols space-separated.
void write_lexicon_tsv(const Lexicon& lexicon, const std::string& path);
Lexicon read_lexicon_tsv(const std::string& path, const std::string& language);

}  // namespace lidkit
