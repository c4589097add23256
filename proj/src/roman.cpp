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

#include "lidkit/roman.hpp"

#include <algorithm>

#include "lidkit/error.hpp"
#include "lidkit/io.hpp"
#include "lidkit/text.hpp"

namespace lidkit {
namespace {

std::u32string u32(const std::string& s) {
  std::vector<char32_t> cps = to_codepoints(s);
  return std::u32string(cps.begin(), cps.end());
}

void validate_target(const std::string& target, const std::string& where) {
  const std::set<char32_t>& alpha = uroman_alphabet();
  for (char32_t c : u32(target))
    if (!alpha.count(c))
      throw DataError(
          msg(where, ": rule target '", target, "' leaves the uroman alphabet"));
}

}  // namespace

const std::vector<std::string>& uroman_symbols() {
  static const std::vector<std::string> symbols = [] {
    std::vector<std::string> s;
    s.push_back("<blank>");
    for (char c = 'a'; c <= 'z'; ++c) s.push_back(std::string(1, c));
    for (char c = '0'; c <= '9'; ++c) s.push_back(std::string(1, c));
    s.push_back("'");
    return s;
  }();
  return symbols;
}

const std::set<char32_t>& uroman_alphabet() {
  static const std::set<char32_t> alpha = [] {
    std::set<char32_t> a;
    const std::vector<std::string>& symbols = uroman_symbols();
    for (size_t i = 1; i < symbols.size(); ++i)
      a.insert(static_cast<char32_t>(symbols[i][0]));
    return a;
  }();
  return alpha;
}

RomanMap default_roman_map() {
  RomanMap map;
  map.output_alphabet = uroman_alphabet();
  auto add = [&map](const std::u32string& src, const std::string& tgt) {
    map.rules.emplace_back(
        to_utf8(std::vector<char32_t>(src.begin(), src.end())), tgt);
  };
  auto add_group = [&add](const char32_t* sources, const std::string& tgt) {
    for (const char32_t* p = sources; *p; ++p) add(std::u32string(1, *p), tgt);
  };

  for (char32_t c : map.output_alphabet) add(std::u32string(1, c),
                                             to_utf8(c));
  add(U" ", "");  // word separators vanish rather than count as drops

  // Latin-1 and Latin Extended-A diacritic stripping.
  add_group(U"àáâãäåāăą", "a");
  add_group(U"çćĉċč", "c");
  add_group(U"ďđð", "d");
  add_group(U"èéêëēĕėęě", "e");
  add_group(U"ĝğġģ", "g");
  add_group(U"ĥħ", "h");
  add_group(U"ìíîïĩīĭįı", "i");
  add_group(U"ĵ", "j");
  add_group(U"ķĸ", "k");
  add_group(U"ĺļľŀł", "l");
  add_group(U"ñńņňŉŋ", "n");
  add_group(U"òóôõöøōŏő", "o");
  add_group(U"ŕŗř", "r");
  add_group(U"śŝşšſ", "s");
  add_group(U"ţťŧ", "t");
  add_group(U"ùúûüũūŭůűų", "u");
  add_group(U"ŵ", "w");
  add_group(U"ýÿŷ", "y");
  add_group(U"źżž", "z");
  add(U"æ", "ae");
  add(U"œ", "oe");
  add(U"ß", "ss");
  add(U"þ", "th");
  add(U"ĳ", "ij");

  // Small Cyrillic demo table.
  add_group(U"а", "a");
  add_group(U"б", "b");
  add_group(U"в", "v");
  add_group(U"г", "g");
  add_group(U"д", "d");
  add_group(U"еэё", "e");
  add(U"ж", "zh");
  add_group(U"з", "z");
  add_group(U"иі", "i");
  add_group(U"й", "j");
  add_group(U"к", "k");
  add_group(U"л", "l");
  add_group(U"м", "m");
  add_group(U"н", "n");
  add_group(U"о", "o");
  add_group(U"п", "p");
  add_group(U"р", "r");
  add_group(U"с", "s");
  add_group(U"т", "t");
  add_group(U"у", "u");
  add_group(U"ф", "f");
  add(U"х", "kh");
  add(U"ц", "ts");
  add(U"ч", "ch");
  add(U"ш", "sh");
  add(U"щ", "shch");
  add(U"ъ", "");
  add_group(U"ы", "y");
  add(U"ь", "");
  add(U"ю", "yu");
  add(U"я", "ya");

  // Combining marks vanish so NFD input behaves like its precomposed form.
  for (char32_t c = 0x0300; c <= 0x036F; ++c) add(std::u32string(1, c), "");

  // Uppercase sources inherit the rule of their lowercase form.
  size_t n_lower = map.rules.size();
  std::set<std::string> have;
  for (const auto& [src, tgt] : map.rules) have.insert(src);
  const std::pair<char32_t, char32_t> upper_ranges[] = {
      {0x41, 0x5A}, {0xC0, 0xDE}, {0x100, 0x17F}, {0x400, 0x42F}};
  for (const auto& [lo, hi] : upper_ranges) {
    for (char32_t cp = lo; cp <= hi; ++cp) {
      char32_t lower = to_lower_cp(cp);
      if (lower == cp) continue;
      std::string src = to_utf8(cp);
      if (have.count(src)) continue;
      for (size_t i = 0; i < n_lower; ++i) {
        if (map.rules[i].first == to_utf8(lower)) {
          add(u32(src), map.rules[i].second);
          have.insert(src);
          break;
        }
      }
    }
  }
  return map;
}

Romanizer::Romanizer(const RomanMap& map) {
  for (const auto& [src, tgt] : map.rules) {
    std::u32string key = u32(src);
    if (key.empty()) throw DataError("romanization rule with empty source");
    validate_target(tgt, "roman map");
    rules_.emplace(key, tgt);  // first rule for a source wins
    max_src_len_ = std::max(max_src_len_, key.size());
  }
  if (rules_.empty()) throw DataError("romanization map has no rules");
}

std::string Romanizer::romanize(const std::string& text,
                                RomanizeStats* stats) const {
  std::u32string cps = u32(text);
  std::string out;
  size_t i = 0;
  while (i < cps.size()) {
    if (stats) ++stats->chars_in;
    size_t best = 0;
    const std::string* tgt = nullptr;
    for (size_t l = std::min(max_src_len_, cps.size() - i); l >= 1; --l) {
      auto it = rules_.find(cps.substr(i, l));
      if (it != rules_.end()) {
        best = l;
        tgt = &it->second;
        break;
      }
    }
    if (tgt == nullptr) {
      if (stats) ++stats->chars_dropped;
      ++i;
      continue;
    }
    if (stats && best > 1) stats->chars_in += best - 1;
    out += *tgt;
    i += best;
  }
  return out;
}

std::string romanize(const std::string& text, const RomanMap& map,
                     RomanizeStats* stats) {
  return Romanizer(map).romanize(text, stats);
}

Lexicon build_lexicon(const SubwordVocab& vocab, const RomanMap& map,
                      const std::string& language,
                      std::vector<std::string>* dropped_tokens) {
  if (vocab.entries.empty()) throw DataError("cannot spell an empty vocabulary");
  Romanizer romanizer(map);
  Lexicon lexicon;
  lexicon.language = language;
  for (const auto& [token, logp] : vocab.entries) {
    std::string spelled = romanizer.romanize(token);
    if (spelled.empty()) {
      if (dropped_tokens) dropped_tokens->push_back(token);
      continue;
    }
    std::vector<std::string> spelling;
    spelling.reserve(spelled.size());
    for (char c : spelled) spelling.push_back(std::string(1, c));
    lexicon.entries.emplace(token, std::move(spelling));
  }
  if (lexicon.entries.empty())
    throw DataError(msg("every token of '", language,
                        "' romanized to an empty spelling; lexicon would be ",
                        "empty"));
  return lexicon;
}

void write_roman_map_tsv(const RomanMap& map, const std::string& path) {
  std::string out;
  for (const auto& [src, tgt] : map.rules) {
    out += src;
    out += '\t';
    out += tgt;
    out += '\n';
  }
  atomic_write_file(path, out);
}

RomanMap read_roman_map_tsv(const std::string& path) {
  RomanMap map;
  map.output_alphabet = uroman_alphabet();
  std::vector<std::string> lines = read_lines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i][0] == '#') continue;
    std::vector<std::string> fields = split(lines[i], '\t');
    if (fields.size() != 2)
      throw DataError(msg(path, ":", i + 1, ": expected source<TAB>target"));
    if (fields[0].empty())
      throw DataError(msg(path, ":", i + 1, ": empty rule source"));
    validate_target(fields[1], msg(path, ":", i + 1));
    map.rules.emplace_back(fields[0], fields[1]);
  }
  std::set<std::string> sources;
  for (const auto& [src, tgt] : map.rules) sources.insert(src);
  for (char32_t c : map.output_alphabet)
    if (!sources.count(to_utf8(c)))
      throw DataError(
          msg(path, ": missing identity rule for alphabet symbol '",
              to_utf8(c), "'"));
  return map;
}

void write_lexicon_tsv(const Lexicon& lexicon, const std::string& path) {
  std::string out;
  for (const auto& [token, spelling] : lexicon.entries) {
    out += token;
    out += '\t';
    out += join(spelling, " ");
    out += '\n';
  }
  atomic_write_file(path, out);
}

Lexicon read_lexicon_tsv(const std::string& path,
                         const std::string& language) {
  Lexicon lexicon;
  lexicon.language = language;
  std::vector<std::string> lines = read_lines(path);
  std::set<std::string> inventory(uroman_symbols().begin() + 1,
                                  uroman_symbols().end());
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> fields = split(lines[i], '\t');
    if (fields.size() != 2)
      throw DataError(
          msg(path, ":", i + 1, ": expected token<TAB>spelling"));
    std::vector<std::string> spelling;
    for (const std::string& sym : split(fields[1], ' ')) {
      if (sym.empty()) continue;
      if (!inventory.count(sym))
        throw DataError(msg(path, ":", i + 1, ": spelling symbol '", sym,
                            "' is not in the decoder inventory"));
      spelling.push_back(sym);
    }
    if (fields[0].empty() || spelling.empty())
      throw DataError(msg(path, ":", i + 1, ": empty token or spelling"));
    if (!lexicon.entries.emplace(fields[0], std::move(spelling)).second)
      throw DataError(msg(path, ":", i + 1, ": duplicate token"));
  }
  if (lexicon.entries.empty()) throw DataError(msg(path, ": empty lexicon"));
  return lexicon;
}

}  // namespace lidkit
