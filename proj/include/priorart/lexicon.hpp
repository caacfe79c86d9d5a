#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "priorart/language.hpp"

namespace priorart {

std::string ascii_lower(std::string_view s);
// Lowercases ASCII and the Latin-1 supplement range of UTF-8 (À-Þ).
std::string utf8_lower(std::string_view s);
std::string_view trim(std::string_view s);
std::vector<std::string_view> split_lines(std::string_view text);
std::vector<std::string_view> split(std::string_view s, char sep);

struct SuffixRule {
  std::string suffix;
  std::string replacement;
  std::size_t min_stem = 1;  // characters that must remain before the suffix
};

// Stopwords and suffix-stripping rules for one language.
struct Lexicon {
  Language language = Language::EN;
  std::unordered_set<std::string> stopwords;
  std::vector<SuffixRule> suffix_rules;  // first match wins

  bool is_stopword(std::string_view lowered) const { return stopwords.count(std::string(lowered)) != 0; }
  // Applies the first matching suffix rule; numbers are returned unchanged.
  std::string lemma(std::string_view lowered) const;

  // Parses the one-entry-per-line formats of data/lexicon.
  static Lexicon from_text(Language lang, std::string_view stopwords, std::string_view suffixes);
  static Lexicon from_files(Language lang, const std::string& stopword_path,
                            const std::string& suffix_path);
  static const Lexicon& defaults(Language lang);
};

// One lexicon per language.
struct Lexicons {
  Lexicon en = Lexicon::defaults(Language::EN);
  Lexicon fr = Lexicon::defaults(Language::FR);
  Lexicon de = Lexicon::defaults(Language::DE);

  const Lexicon& get(Language lang) const;
  static const Lexicons& defaults();
};

}  // namespace priorart
