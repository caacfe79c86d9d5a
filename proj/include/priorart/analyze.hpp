#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "priorart/language.hpp"
#include "priorart/lexicon.hpp"
#include "priorart/metadoc.hpp"

namespace priorart {

class TerminologyDB;
class DomainMap;

struct Token {
  std::string surface;
  std::string lemma;  // empty until lemmatized
  std::uint32_t position = 0;
};

struct TokenStream {
  Language language = Language::EN;
  std::vector<Token> tokens;  // positions strictly increasing
};

// Splits on whitespace and punctuation. Hyphens between word characters and
// commas/periods between digits stay inside the token ("3,5-dimethyl").
TokenStream tokenize(std::string_view text, Language lang);

// Lowercases, strips suffixes and drops stopwords. Positions are kept so
// adjacency across a dropped stopword is visible as a gap.
TokenStream lemmatize(TokenStream stream, const Lexicon& lexicon);

inline TokenStream analyze_text(std::string_view text, const Lexicon& lexicon) {
  return lemmatize(tokenize(text, lexicon.language), lexicon);
}

// 2·f(ab) / (f(a) + f(b)), clamped to [0, 1]; 0 when both counts are 0.
double dice(std::uint64_t f_ab, std::uint64_t f_a, std::uint64_t f_b);

struct Phrase {
  std::vector<std::string> lemmas;  // 2 or 3 lemmas
  double dice = 0.0;
  std::uint64_t count = 0;

  // Index term form: lemmas joined by '_'.
  std::string term() const;
};

struct PhraseParams {
  std::uint64_t min_count = 3;
  double dice_threshold = 0.25;
};

// Collocations of adjacent non-stopword, non-numeric lemmas. Trigrams abc
// are scored as 2·f(abc) / (f(ab) + f(bc)).
class PhraseVocabulary {
 public:
  void add(Phrase phrase);
  const Phrase* find(const std::vector<std::string>& lemmas) const;
  std::size_t size() const { return phrases_.size(); }
  // Sorted by term.
  std::vector<const Phrase*> phrases() const;

  // Phrase terms occurring in a lemmatized stream, overlaps allowed.
  std::vector<std::string> match(const TokenStream& lemmatized) const;

  void save(const std::string& path) const;
  static PhraseVocabulary load(const std::string& path);

 private:
  std::map<std::string, Phrase> phrases_;  // keyed by term()
};

PhraseVocabulary extract_phrases(const std::vector<TokenStream>& streams, const PhraseParams& params);

enum class AnalyzerKind { LemmaEN, LemmaFR, LemmaDE, PhraseEN, Concept };

inline constexpr AnalyzerKind kAnalyzerKinds[] = {AnalyzerKind::LemmaEN, AnalyzerKind::LemmaFR,
                                                  AnalyzerKind::LemmaDE, AnalyzerKind::PhraseEN,
                                                  AnalyzerKind::Concept};

std::string_view analyzer_name(AnalyzerKind kind);  // "lemma-en", ...
// Throws ConfigError on unknown names.
AnalyzerKind parse_analyzer_kind(std::string_view name);

// Term multiset; ordered so iteration is deterministic.
using TermBag = std::map<std::string, std::uint32_t>;

struct AnalysisResources {
  const Lexicons* lexicons = &Lexicons::defaults();
  const PhraseVocabulary* phrases = nullptr;  // required by PhraseEN
  const TerminologyDB* termdb = nullptr;      // required by Concept
  const DomainMap* domains = nullptr;         // required by Concept
  // Restricts the concept analyzer to one language's text (monolingual mode).
  std::optional<Language> concept_language;
};

TermBag analyze_to_terms(const MetaDocument& doc, AnalyzerKind kind, const AnalysisResources& res);

}  // namespace priorart
