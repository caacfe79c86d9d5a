#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "priorart/analyze.hpp"
#include "priorart/language.hpp"

namespace priorart {

using DomainId = int;

struct ConceptTerm {
  Language language = Language::EN;
  std::string term;
  bool preferred = false;
  friend bool operator==(const ConceptTerm&, const ConceptTerm&) = default;
};

struct ConceptEntry {
  std::uint32_t concept_id = 0;
  std::vector<ConceptTerm> terms;
  std::set<DomainId> domains;
  std::string source;
  friend bool operator==(const ConceptEntry&, const ConceptEntry&) = default;
};

// IPC class (3 characters) -> technical domains.
class DomainMap {
 public:
  void add(const std::string& ipc_prefix, std::set<DomainId> domains);
  const std::set<DomainId>* find(const std::string& ipc_prefix) const;
  std::size_t size() const { return map_.size(); }
  const std::unordered_map<std::string, std::set<DomainId>>& entries() const { return map_; }

  // `ipc_prefix <TAB> domains(csv)` per line.
  static DomainMap from_text(std::string_view text);
  static DomainMap load(const std::string& path);
  void save(const std::string& path) const;

 private:
  std::unordered_map<std::string, std::set<DomainId>> map_;
};

// Domains of a patent: from its ECLA classes, or its IPC classes when it has
// no ECLA class (or none of them maps).
std::set<DomainId> patent_domains(const std::vector<std::string>& ecla,
                                  const std::vector<std::string>& ipc, const DomainMap& map);

// Multilingual concept database with lemma-level longest-match lookup.
// Concepts sharing a term and a domain are merged (transitively); the merged
// concept keeps the smallest id.
class TerminologyDB {
 public:
  TerminologyDB() = default;

  static TerminologyDB from_entries(const std::vector<ConceptEntry>& entries,
                                    const Lexicons& lexicons = Lexicons::defaults());
  // TSV: concept_id, lang, term, preferred(0|1), domains(csv), source.
  static TerminologyDB from_text(std::string_view text,
                                 const Lexicons& lexicons = Lexicons::defaults());
  static TerminologyDB load(const std::string& path, const Lexicons& lexicons = Lexicons::defaults());

  // Merged concepts sorted by id.
  const std::vector<ConceptEntry>& concepts() const { return concepts_; }
  const ConceptEntry* concept_by_id(std::uint32_t id) const;
  bool empty() const { return concepts_.empty(); }

  // Concept indices (into concepts()) realized by a lemma sequence.
  const std::vector<std::uint32_t>* lookup(Language lang, const std::string& lemma_key) const;
  std::size_t max_term_length(Language lang) const;

 private:
  std::vector<ConceptEntry> concepts_;
  std::array<std::unordered_map<std::string, std::vector<std::uint32_t>>, 3> lookup_;
  std::array<std::size_t, 3> max_len_{};
};

void write_termdb(const std::string& path, const std::vector<ConceptEntry>& entries);

// Longest-match tagging over a lemmatized stream. A matched term emits its
// concept only when exactly one candidate shares a domain with the patent;
// otherwise the term is skipped.
std::vector<std::uint32_t> tag_concepts(const TokenStream& lemmatized,
                                        const std::set<DomainId>& patent_domains,
                                        const TerminologyDB& db);

std::string concept_term(std::uint32_t concept_id);  // "c:<id>"

}  // namespace priorart
