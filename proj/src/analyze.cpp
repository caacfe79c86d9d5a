#include "priorart/analyze.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "priorart/error.hpp"
#include "priorart/terminology.hpp"

namespace priorart {

std::string MetaDocument::text_in(Language lang) const {
  std::string out;
  auto add = [&](const std::string& s) {
    if (s.empty()) return;
    if (!out.empty()) out.push_back('\n');
    out += s;
  };
  add(title.get(lang));
  add(abstract_text.get(lang));
  add(claims.get(lang));
  if (language == lang) add(description);
  for (const auto& ct : appended_citation_texts) {
    if (ct.language == lang) add(ct.text);
  }
  return out;
}

// --- tokenization -----------------------------------------------------------

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

}  // namespace

TokenStream tokenize(std::string_view text, Language lang) {
  TokenStream out;
  out.language = lang;
  std::uint32_t position = 0;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto at = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
  while (i < n) {
    if (!is_word_byte(at(i))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < n) {
      unsigned char c = at(i);
      if (is_word_byte(c)) {
        ++i;
        continue;
      }
      bool has_next = i + 1 < n;
      if (c == '-' && has_next && is_word_byte(at(i + 1)) && is_word_byte(at(i - 1))) {
        ++i;
        continue;
      }
      if ((c == ',' || c == '.') && has_next && is_digit(at(i + 1)) && is_digit(at(i - 1))) {
        ++i;
        continue;
      }
      break;
    }
    out.tokens.push_back({std::string(text.substr(start, i - start)), {}, position++});
  }
  return out;
}

TokenStream lemmatize(TokenStream stream, const Lexicon& lexicon) {
  std::vector<Token> kept;
  kept.reserve(stream.tokens.size());
  for (auto& tok : stream.tokens) {
    std::string lowered = utf8_lower(tok.surface);
    if (lexicon.is_stopword(lowered)) continue;
    std::string lemma = lexicon.lemma(lowered);
    if (lemma.empty() || lexicon.is_stopword(lemma)) continue;
    tok.lemma = std::move(lemma);
    kept.push_back(std::move(tok));
  }
  stream.tokens = std::move(kept);
  return stream;
}

// --- phrases ------------------------------------------------------------------

double dice(std::uint64_t f_ab, std::uint64_t f_a, std::uint64_t f_b) {
  if (f_a + f_b == 0) return 0.0;
  double d = 2.0 * static_cast<double>(f_ab) / static_cast<double>(f_a + f_b);
  return std::clamp(d, 0.0, 1.0);
}

std::string Phrase::term() const {
  std::string out;
  for (const auto& l : lemmas) {
    if (!out.empty()) out.push_back('_');
    out += l;
  }
  return out;
}

namespace {

std::string join_key(const std::vector<std::string>& lemmas) {
  Phrase p;
  p.lemmas = lemmas;
  return p.term();
}

bool phrase_candidate(const Token& t) { return !t.lemma.empty() && !is_digit(t.lemma.front()); }

// Calls fn(start, length) for each run of 2..3 adjacent phrase-candidate tokens.
template <typename Fn>
void for_each_ngram(const TokenStream& s, Fn fn) {
  const auto& t = s.tokens;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!phrase_candidate(t[i])) continue;
    for (std::size_t len = 2; len <= 3 && i + len <= t.size(); ++len) {
      const Token& last = t[i + len - 1];
      const Token& prev = t[i + len - 2];
      if (!phrase_candidate(last) || last.position != prev.position + 1) break;
      fn(i, len);
    }
  }
}

}  // namespace

void PhraseVocabulary::add(Phrase phrase) {
  auto key = phrase.term();
  phrases_[key] = std::move(phrase);
}

const Phrase* PhraseVocabulary::find(const std::vector<std::string>& lemmas) const {
  auto it = phrases_.find(join_key(lemmas));
  return it == phrases_.end() ? nullptr : &it->second;
}

std::vector<const Phrase*> PhraseVocabulary::phrases() const {
  std::vector<const Phrase*> out;
  for (const auto& [_, p] : phrases_) out.push_back(&p);
  return out;
}

std::vector<std::string> PhraseVocabulary::match(const TokenStream& lemmatized) const {
  std::vector<std::string> out;
  if (phrases_.empty()) return out;
  for_each_ngram(lemmatized, [&](std::size_t i, std::size_t len) {
    std::string key = lemmatized.tokens[i].lemma;
    for (std::size_t k = 1; k < len; ++k) key += "_" + lemmatized.tokens[i + k].lemma;
    if (phrases_.count(key)) out.push_back(std::move(key));
  });
  return out;
}

void PhraseVocabulary::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write phrase vocabulary: " + path);
  out.precision(17);
  for (const auto& [term, p] : phrases_) out << term << '\t' << p.count << '\t' << p.dice << '\n';
}

PhraseVocabulary PhraseVocabulary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open phrase vocabulary: " + path);
  PhraseVocabulary vocab;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 3) throw ParseError(path + ": expected 3 fields", 0, lineno);
    Phrase p;
    for (auto part : split(fields[0], '_')) p.lemmas.emplace_back(part);
    try {
      p.count = std::stoull(std::string(fields[1]));
      p.dice = std::stod(std::string(fields[2]));
    } catch (const std::exception&) {
      throw ParseError(path + ": bad number", 0, lineno);
    }
    if (p.lemmas.size() < 2 || p.dice < 0.0 || p.dice > 1.0) {
      throw ParseError(path + ": invalid phrase entry", 0, lineno);
    }
    vocab.add(std::move(p));
  }
  return vocab;
}

PhraseVocabulary extract_phrases(const std::vector<TokenStream>& streams, const PhraseParams& params) {
  std::unordered_map<std::string, std::uint64_t> unigram;
  std::unordered_map<std::string, std::uint64_t> ngram;  // keyed by joined lemmas
  for (const auto& s : streams) {
    for (const auto& t : s.tokens) {
      if (phrase_candidate(t)) ++unigram[t.lemma];
    }
    for_each_ngram(s, [&](std::size_t i, std::size_t len) {
      std::string key = s.tokens[i].lemma;
      for (std::size_t k = 1; k < len; ++k) key += "_" + s.tokens[i + k].lemma;
      ++ngram[key];
    });
  }
  auto count_of = [](const auto& map, const std::string& key) -> std::uint64_t {
    auto it = map.find(key);
    return it == map.end() ? 0 : it->second;
  };

  PhraseVocabulary vocab;
  for (const auto& [key, f] : ngram) {
    if (f < params.min_count) continue;
    Phrase p;
    for (auto part : split(key, '_')) p.lemmas.emplace_back(part);
    if (p.lemmas.size() == 2) {
      p.dice = dice(f, count_of(unigram, p.lemmas[0]), count_of(unigram, p.lemmas[1]));
    } else {
      p.dice = dice(f, count_of(ngram, p.lemmas[0] + "_" + p.lemmas[1]),
                    count_of(ngram, p.lemmas[1] + "_" + p.lemmas[2]));
    }
    p.count = f;
    if (p.dice >= params.dice_threshold) vocab.add(std::move(p));
  }
  return vocab;
}

// --- analyzers ----------------------------------------------------------------

std::string_view analyzer_name(AnalyzerKind kind) {
  switch (kind) {
    case AnalyzerKind::LemmaEN: return "lemma-en";
    case AnalyzerKind::LemmaFR: return "lemma-fr";
    case AnalyzerKind::LemmaDE: return "lemma-de";
    case AnalyzerKind::PhraseEN: return "phrase-en";
    case AnalyzerKind::Concept: return "concept";
  }
  return "lemma-en";
}

AnalyzerKind parse_analyzer_kind(std::string_view name) {
  for (auto kind : kAnalyzerKinds) {
    if (analyzer_name(kind) == name) return kind;
  }
  throw ConfigError("unknown analyzer '" + std::string(name) + "'");
}

TermBag analyze_to_terms(const MetaDocument& doc, AnalyzerKind kind, const AnalysisResources& res) {
  TermBag bag;
  const Lexicons& lex = res.lexicons ? *res.lexicons : Lexicons::defaults();
  auto lemma_bag = [&](Language lang) {
    auto stream = analyze_text(doc.text_in(lang), lex.get(lang));
    for (const auto& t : stream.tokens) ++bag[t.lemma];
  };
  switch (kind) {
    case AnalyzerKind::LemmaEN: lemma_bag(Language::EN); break;
    case AnalyzerKind::LemmaFR: lemma_bag(Language::FR); break;
    case AnalyzerKind::LemmaDE: lemma_bag(Language::DE); break;
    case AnalyzerKind::PhraseEN: {
      if (!res.phrases) throw ConfigError("phrase analyzer requires a phrase vocabulary");
      auto stream = analyze_text(doc.text_in(Language::EN), lex.en);
      for (auto& term : res.phrases->match(stream)) ++bag[term];
      break;
    }
    case AnalyzerKind::Concept: {
      if (!res.termdb || !res.domains) {
        throw ConfigError("concept analyzer requires a terminology database and domain map");
      }
      auto domains = patent_domains(doc.ecla_classes, doc.ipc_classes, *res.domains);
      for (auto lang : kLanguages) {
        if (res.concept_language && *res.concept_language != lang) continue;
        auto stream = analyze_text(doc.text_in(lang), lex.get(lang));
        for (auto id : tag_concepts(stream, domains, *res.termdb)) ++bag[concept_term(id)];
      }
      break;
    }
  }
  return bag;
}

}  // namespace priorart
