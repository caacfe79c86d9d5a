#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "priorart/analyze.hpp"
#include "priorart/corpus.hpp"
#include "priorart/metadoc.hpp"

namespace priorart {

// Latest non-empty title/abstract/claims per language, description of the
// earliest version carrying one (A1, A2, B1, then B2).
MetaDocument build_metadoc(const PatentRecord& record);
std::vector<MetaDocument> build_metadocs(const CorpusStore& store);

// Appends each edge's citation paragraph to the cited patent's metadoc,
// tagged with the citing patent's language of proceedings.
void append_citation_texts(std::vector<MetaDocument>& metadocs, const CorpusStore& store,
                           const std::vector<CitationEdge>& edges);

struct Posting {
  std::uint32_t doc = 0;
  std::uint32_t tf = 0;
  friend bool operator==(const Posting&, const Posting&) = default;
};

class TermIndex {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  TermIndex() = default;

  AnalyzerKind analyzer() const { return analyzer_; }
  std::size_t num_docs() const { return doc_ids_.size(); }
  std::size_t num_terms() const { return terms_.size(); }
  std::uint64_t collection_length() const { return collection_length_; }
  double avg_doc_length() const {
    return doc_ids_.empty() ? 0.0 : static_cast<double>(collection_length_) / doc_ids_.size();
  }

  const std::string& doc_id(std::uint32_t ordinal) const { return doc_ids_[ordinal]; }
  const std::vector<std::string>& doc_ids() const { return doc_ids_; }
  std::uint32_t doc_length(std::uint32_t ordinal) const { return doc_length_[ordinal]; }
  std::optional<std::uint32_t> doc_ordinal(std::string_view id) const;

  // Terms sorted lexicographically; term ids are positions in this list.
  const std::vector<std::string>& terms() const { return terms_; }
  std::optional<std::uint32_t> term_id(std::string_view term) const;
  const std::vector<Posting>& postings(std::uint32_t term) const { return postings_[term]; }
  std::uint32_t doc_freq(std::uint32_t term) const {
    return static_cast<std::uint32_t>(postings_[term].size());
  }
  std::uint64_t collection_tf(std::uint32_t term) const { return collection_tf_[term]; }

  // Builds from per-document term bags; bags[i] belongs to doc_ids[i].
  static TermIndex from_bags(AnalyzerKind kind, std::vector<std::string> doc_ids,
                             const std::vector<TermBag>& bags);

  void save(const std::string& path) const;
  static TermIndex load(const std::string& path);

  friend bool operator==(const TermIndex&, const TermIndex&) = default;

 private:
  void rebuild_lookup();

  AnalyzerKind analyzer_ = AnalyzerKind::LemmaEN;
  std::vector<std::string> doc_ids_;
  std::vector<std::uint32_t> doc_length_;
  std::uint64_t collection_length_ = 0;
  std::vector<std::string> terms_;
  std::vector<std::vector<Posting>> postings_;
  std::vector<std::uint64_t> collection_tf_;
  std::unordered_map<std::string, std::uint32_t> term_lookup_;
  std::unordered_map<std::string, std::uint32_t> doc_lookup_;
};

// Analyzes documents on up to `threads` workers and merges postings in
// (term, doc ordinal) order.
TermIndex build_index(const std::vector<MetaDocument>& metadocs, AnalyzerKind kind,
                      const AnalysisResources& resources, unsigned threads = 1);

struct IndexAudit {
  std::uint64_t sum_doc_length = 0;
  std::uint64_t collection_length = 0;
  std::uint64_t mismatched_ctf = 0;  // terms whose postings tf sum differs from ctf
  std::uint64_t mismatched_df = 0;
  std::uint64_t unsorted_postings = 0;
  bool ok() const {
    return sum_doc_length == collection_length && mismatched_ctf == 0 && mismatched_df == 0 &&
           unsorted_postings == 0;
  }
};

// Full scan of the accounting identities.
IndexAudit audit_index(const TermIndex& index);

}  // namespace priorart
