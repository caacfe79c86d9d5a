#include "priorart/index.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "priorart/error.hpp"
#include "priorart/parallel.hpp"

namespace priorart {

MetaDocument build_metadoc(const PatentRecord& rec) {
  MetaDocument doc;
  doc.patent_id = rec.id;
  doc.language = rec.language;
  doc.ipc_classes = rec.ipc_classes;
  doc.ecla_classes = rec.ecla_classes;
  // versions are ordered A1, A2, B1, B2
  for (const auto& v : rec.versions) {
    if (!v.description.empty()) {
      doc.description = v.description;
      break;
    }
  }
  for (auto lang : kLanguages) {
    for (auto it = rec.versions.rbegin(); it != rec.versions.rend(); ++it) {
      if (doc.title.get(lang).empty()) doc.title.get(lang) = it->title.get(lang);
      if (doc.abstract_text.get(lang).empty()) doc.abstract_text.get(lang) = it->abstract_text.get(lang);
      if (doc.claims.get(lang).empty()) doc.claims.get(lang) = it->claims.get(lang);
    }
  }
  return doc;
}

std::vector<MetaDocument> build_metadocs(const CorpusStore& store) {
  std::vector<MetaDocument> out;
  out.reserve(store.size());
  for (const auto& rec : store.records()) out.push_back(build_metadoc(rec));
  return out;
}

void append_citation_texts(std::vector<MetaDocument>& metadocs, const CorpusStore& store,
                           const std::vector<CitationEdge>& edges) {
  for (const auto& e : edges) {
    if (!e.citation_paragraph || e.citation_paragraph->empty()) continue;
    auto to = store.ordinal(e.to_id);
    auto from = store.ordinal(e.from_id);
    if (!to || !from || *to == *from || *to >= metadocs.size()) continue;
    metadocs[*to].appended_citation_texts.push_back(
        {store.record(*from).language, *e.citation_paragraph});
  }
}

// --- term index ---------------------------------------------------------------

std::optional<std::uint32_t> TermIndex::term_id(std::string_view term) const {
  auto it = term_lookup_.find(std::string(term));
  if (it == term_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> TermIndex::doc_ordinal(std::string_view id) const {
  auto it = doc_lookup_.find(std::string(id));
  if (it == doc_lookup_.end()) return std::nullopt;
  return it->second;
}

void TermIndex::rebuild_lookup() {
  term_lookup_.clear();
  doc_lookup_.clear();
  for (std::uint32_t t = 0; t < terms_.size(); ++t) term_lookup_.emplace(terms_[t], t);
  for (std::uint32_t d = 0; d < doc_ids_.size(); ++d) doc_lookup_.emplace(doc_ids_[d], d);
}

TermIndex TermIndex::from_bags(AnalyzerKind kind, std::vector<std::string> doc_ids,
                               const std::vector<TermBag>& bags) {
  TermIndex idx;
  idx.analyzer_ = kind;
  idx.doc_ids_ = std::move(doc_ids);
  idx.doc_length_.assign(idx.doc_ids_.size(), 0);

  std::map<std::string_view, std::vector<Posting>> merged;
  for (std::uint32_t d = 0; d < bags.size(); ++d) {
    for (const auto& [term, tf] : bags[d]) {
      if (tf == 0) continue;
      merged[term].push_back({d, tf});
      idx.doc_length_[d] += tf;
    }
  }
  for (auto len : idx.doc_length_) idx.collection_length_ += len;
  idx.terms_.reserve(merged.size());
  for (auto& [term, list] : merged) {
    std::uint64_t ctf = 0;
    for (const auto& p : list) ctf += p.tf;
    idx.terms_.emplace_back(term);
    idx.collection_tf_.push_back(ctf);
    idx.postings_.push_back(std::move(list));
  }
  idx.rebuild_lookup();
  return idx;
}

TermIndex build_index(const std::vector<MetaDocument>& metadocs, AnalyzerKind kind,
                      const AnalysisResources& resources, unsigned threads) {
  std::vector<TermBag> bags(metadocs.size());
  parallel_for(metadocs.size(), threads,
               [&](std::size_t i) { bags[i] = analyze_to_terms(metadocs[i], kind, resources); });
  std::vector<std::string> ids;
  ids.reserve(metadocs.size());
  for (const auto& d : metadocs) ids.push_back(d.patent_id);
  return TermIndex::from_bags(kind, std::move(ids), bags);
}

IndexAudit audit_index(const TermIndex& index) {
  IndexAudit a;
  a.collection_length = index.collection_length();
  for (std::uint32_t d = 0; d < index.num_docs(); ++d) a.sum_doc_length += index.doc_length(d);
  for (std::uint32_t t = 0; t < index.num_terms(); ++t) {
    const auto& list = index.postings(t);
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < list.size(); ++i) {
      sum += list[i].tf;
      if (i > 0 && list[i].doc <= list[i - 1].doc) ++a.unsorted_postings;
    }
    if (sum != index.collection_tf(t)) ++a.mismatched_ctf;
    if (list.size() != index.doc_freq(t) || list.empty()) ++a.mismatched_df;
  }
  return a;
}

// --- serialization ---------------------------------------------------------------
//
// Layout (all integers little-endian):
//   magic "PRARTIDX" | u32 version | u32 analyzer | u32 num_docs
//   num_docs x (u32 id_len | id bytes | u32 doc_length)
//   u64 collection_length | u32 num_terms
//   num_terms x (u32 term_len | term bytes | u64 ctf | u32 df | df x (u32 doc | u32 tf))

namespace {

constexpr std::array<char, 8> kMagic = {'P', 'R', 'A', 'R', 'T', 'I', 'D', 'X'};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  template <typename T>
  void put(T v) {
    std::array<char, sizeof(T)> bytes;
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out_.write(bytes.data(), bytes.size());
  }
  void put_string(const std::string& s) {
    put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  Reader(std::istream& in, std::string path) : in_(in), path_(std::move(path)) {}
  template <typename T>
  T get() {
    std::array<unsigned char, sizeof(T)> bytes;
    if (!in_.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) fail("truncated");
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(bytes[i]) << (8 * i);
    return v;
  }
  std::string get_string() {
    auto n = get<std::uint32_t>();
    if (n > (1u << 24)) fail("string length out of range");
    std::string s(n, '\0');
    if (n && !in_.read(s.data(), n)) fail("truncated");
    return s;
  }
  [[noreturn]] void fail(const std::string& why) {
    throw ParseError("index file " + path_ + ": " + why, static_cast<std::size_t>(in_.tellg()));
  }

 private:
  std::istream& in_;
  std::string path_;
};

}  // namespace

void TermIndex::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write index file: " + path);
  out.write(kMagic.data(), kMagic.size());
  Writer w(out);
  w.put<std::uint32_t>(kFormatVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(analyzer_));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(doc_ids_.size()));
  for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
    w.put_string(doc_ids_[d]);
    w.put<std::uint32_t>(doc_length_[d]);
  }
  w.put<std::uint64_t>(collection_length_);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(terms_.size()));
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    w.put_string(terms_[t]);
    w.put<std::uint64_t>(collection_tf_[t]);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(postings_[t].size()));
    for (const auto& p : postings_[t]) {
      w.put<std::uint32_t>(p.doc);
      w.put<std::uint32_t>(p.tf);
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

TermIndex TermIndex::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open index file: " + path);
  Reader r(in, path);
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) r.fail("bad magic");
  if (r.get<std::uint32_t>() != kFormatVersion) r.fail("unsupported format version");
  auto kind = r.get<std::uint32_t>();
  if (kind > static_cast<std::uint32_t>(AnalyzerKind::Concept)) r.fail("unknown analyzer");
  TermIndex idx;
  idx.analyzer_ = static_cast<AnalyzerKind>(kind);
  auto ndocs = r.get<std::uint32_t>();
  for (std::uint32_t d = 0; d < ndocs; ++d) {
    idx.doc_ids_.push_back(r.get_string());
    idx.doc_length_.push_back(r.get<std::uint32_t>());
  }
  idx.collection_length_ = r.get<std::uint64_t>();
  auto nterms = r.get<std::uint32_t>();
  idx.terms_.reserve(nterms);
  for (std::uint32_t t = 0; t < nterms; ++t) {
    idx.terms_.push_back(r.get_string());
    idx.collection_tf_.push_back(r.get<std::uint64_t>());
    auto df = r.get<std::uint32_t>();
    if (df > ndocs) r.fail("document frequency exceeds document count");
    std::vector<Posting> list(df);
    for (auto& p : list) {
      p.doc = r.get<std::uint32_t>();
      p.tf = r.get<std::uint32_t>();
      if (p.doc >= ndocs) r.fail("posting references unknown document");
    }
    idx.postings_.push_back(std::move(list));
  }
  idx.rebuild_lookup();
  return idx;
}

}  // namespace priorart
