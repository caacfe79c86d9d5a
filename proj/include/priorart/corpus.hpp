#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "priorart/language.hpp"

namespace priorart {

enum class VersionKind { A1, A2, B1, B2 };

std::string_view version_kind_name(VersionKind kind);
std::optional<VersionKind> parse_version_kind(std::string_view name);

struct PublicationVersion {
  VersionKind kind = VersionKind::A1;
  std::string date;  // ISO yyyy-mm-dd
  LangText title;
  LangText abstract_text;
  LangText claims;
  std::string description;  // in the language of proceedings

  friend bool operator==(const PublicationVersion&, const PublicationVersion&) = default;
};

struct PatentRecord {
  std::string id;
  Language language = Language::EN;
  std::vector<PublicationVersion> versions;  // ordered A1, A2, B1, B2
  std::vector<std::string> applicants;
  std::vector<std::string> inventors;
  std::vector<std::string> ipc_classes;
  std::vector<std::string> ecla_classes;
  std::vector<std::string> priority_ids;
  std::vector<std::string> cited_ids;  // resolved against the collection
  std::string priority_date;

  // Earliest publication date across versions.
  const std::string& publication_date() const;
  // Description of the latest version carrying one (B2, B1, A2, A1).
  const std::string& latest_description() const;

  friend bool operator==(const PatentRecord&, const PatentRecord&) = default;
};

enum class CitationCategory { X, Y, A, D, OTHER };

std::string_view citation_category_name(CitationCategory c);
CitationCategory parse_citation_category(std::string_view name);

struct CitationEdge {
  std::string from_id;
  std::string to_id;
  CitationCategory category = CitationCategory::D;
  std::optional<std::string> citation_paragraph;
};

// Parses one line of the corpus file. Throws ParseError with the byte offset
// of the problem. cited_ids is left empty; it is resolved at store load.
PatentRecord parse_record(std::string_view line);

// Inverse of parse_record for the fields the format carries.
std::string serialize_record(const PatentRecord& record);

// First 3 characters of an IPC or ECLA code ("B60K6/20" -> "B60").
std::string ipc_class3(std::string_view code);
bool valid_class_code(std::string_view code);

// Token lists used by the name normalizers.
struct NameGazetteer {
  std::vector<std::string> person_titles;
  std::vector<std::vector<std::string>> applicant_marks;  // tokenized, possibly multi-word

  static const NameGazetteer& defaults();
  static NameGazetteer from_lists(std::string_view person_titles,
                                  std::string_view entity_marks,
                                  std::string_view countries);
};

std::string normalize_person_name(std::string_view raw,
                                  const NameGazetteer& gazetteer = NameGazetteer::defaults());
std::string normalize_applicant_name(std::string_view raw,
                                     const NameGazetteer& gazetteer = NameGazetteer::defaults());

struct CitationMention {
  std::string id;
  std::string paragraph;  // enclosing paragraph of the first mention
};

// Finds patent numbers of the form EP1234567 / EP 1 234 567 / EP-1234567
// (optionally followed by a kind code) in `description`. Results are in
// order of first mention, deduplicated, filtered to `known_ids`.
std::vector<CitationMention> extract_citations(
    std::string_view description, const std::unordered_set<std::string>& known_ids);

// Forward and inverse adjacency over collection ordinals.
struct CitationGraph {
  std::vector<std::vector<std::uint32_t>> cited;   // u -> patents u cites
  std::vector<std::vector<std::uint32_t>> citers;  // v -> patents citing v

  std::size_t num_nodes() const { return cited.size(); }
  std::size_t num_edges() const;
};

// Builds the graph from each record's cited_ids; ids outside `records` are
// ignored. Ordinals are positions in `records`.
CitationGraph citation_graph(const std::vector<PatentRecord>& records);

// Immutable collection of normalized records with metadata lookups.
class CorpusStore {
 public:
  CorpusStore() = default;

  // Normalizes names, resolves description citations against the collection
  // and indexes the metadata.
  static CorpusStore build(std::vector<PatentRecord> records,
                           const NameGazetteer& gazetteer = NameGazetteer::defaults());
  static CorpusStore load(const std::string& path,
                          const NameGazetteer& gazetteer = NameGazetteer::defaults());

  std::size_t size() const { return records_.size(); }
  const std::vector<PatentRecord>& records() const { return records_; }
  const PatentRecord& record(std::uint32_t ordinal) const { return records_[ordinal]; }
  std::optional<std::uint32_t> ordinal(std::string_view id) const;
  const std::unordered_set<std::string>& id_set() const { return id_set_; }

  const std::vector<CitationEdge>& citation_edges() const { return edges_; }
  const CitationGraph& graph() const { return graph_; }

  // Postings over ordinals, each sorted ascending. Missing keys give empty.
  const std::vector<std::uint32_t>& by_applicant(const std::string& name) const;
  const std::vector<std::uint32_t>& by_inventor(const std::string& name) const;
  const std::vector<std::uint32_t>& by_ipc_class3(const std::string& cls) const;
  const std::vector<std::uint32_t>& by_ecla(const std::string& code) const;
  const std::vector<std::uint32_t>& by_priority(const std::string& priority_id) const;

  // Resolves citations of a record from outside the collection (a topic).
  std::vector<CitationMention> resolve_citations(const PatentRecord& record) const;
  // Applies the same name normalization used at build time.
  PatentRecord normalized(PatentRecord record) const;
  // Normalizes a record from outside the collection (a topic) and fills its
  // cited_ids. Records already in the store are returned as stored.
  PatentRecord prepare_topic(PatentRecord record) const;

  const std::unordered_map<std::string, std::vector<std::uint32_t>>& ecla_members() const {
    return ecla_;
  }

 private:
  NameGazetteer gazetteer_;
  std::vector<PatentRecord> records_;
  std::unordered_map<std::string, std::uint32_t> ordinal_;
  std::unordered_set<std::string> id_set_;
  std::vector<CitationEdge> edges_;
  CitationGraph graph_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> applicant_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> inventor_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> ipc3_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> ecla_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> priority_;
};

// Reads a JSON-lines file of records (topics or corpus).
std::vector<PatentRecord> read_records(const std::string& path);
void write_records(const std::string& path, const std::vector<PatentRecord>& records);

}  // namespace priorart
