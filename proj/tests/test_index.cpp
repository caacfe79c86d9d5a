#include <doctest.h>

#include "priorart/error.hpp"
#include "priorart/index.hpp"
#include "priorart/syngen.hpp"
#include "test_util.hpp"

using namespace priorart;
using testutil::make_record;

namespace {
PublicationVersion version(VersionKind kind, const std::string& title, const std::string& claims,
                           const std::string& description) {
  PublicationVersion v;
  v.kind = kind;
  v.date = "2000-01-01";
  v.title.en = title;
  v.claims.en = claims;
  v.description = description;
  return v;
}
}  // namespace

TEST_CASE("build_metadoc") {
  SUBCASE("A1 only") {
    PatentRecord r;
    r.id = "EP1";
    r.versions = {version(VersionKind::A1, "t", "c", "d")};
    auto m = build_metadoc(r);
    CHECK(m.title.en == "t");
    CHECK(m.claims.en == "c");
    CHECK(m.description == "d");
  }
  SUBCASE("A1 + B1: description from A1, claims from B1") {
    PatentRecord r;
    r.id = "EP1";
    r.versions = {version(VersionKind::A1, "t1", "c1", "d1"), version(VersionKind::B1, "t2", "c2", "d2")};
    r.versions[1].claims.de = "k2";
    auto m = build_metadoc(r);
    CHECK(m.description == "d1");
    CHECK(m.claims.en == "c2");
    CHECK(m.claims.de == "k2");
  }
  SUBCASE("A2 + B2: description from A2, title from B2") {
    PatentRecord r;
    r.id = "EP1";
    r.versions = {version(VersionKind::A2, "t1", "c1", "d1"), version(VersionKind::B2, "t2", "", "d2")};
    auto m = build_metadoc(r);
    CHECK(m.description == "d1");
    CHECK(m.title.en == "t2");
    CHECK(m.claims.en == "c1");  // latest non-empty
  }
}

TEST_CASE("append_citation_texts") {
  auto a = make_record("EP1000001", "2000-01-01", "Like EP1000004 we do this.");
  auto c = make_record("EP1000007", "2000-01-01", "Wie EP1000004 machen wir das.");
  c.language = Language::DE;
  auto b = make_record("EP1000004");
  auto lonely = make_record("EP1000010");
  auto store = CorpusStore::build({a, b, c, lonely});
  auto docs = build_metadocs(store);
  append_citation_texts(docs, store, store.citation_edges());
  const auto& appended = docs[1].appended_citation_texts;
  REQUIRE(appended.size() == 2);
  CHECK(appended[0] == CitationText{Language::EN, "Like EP1000004 we do this."});
  CHECK(appended[1].language == Language::DE);
  CHECK(docs[3].appended_citation_texts.empty());
  CHECK(docs[1].text_in(Language::DE).find("Wie") != std::string::npos);
}

TEST_CASE("term index statistics") {
  SUBCASE("one doc 'engine engine'") {
    auto idx = TermIndex::from_bags(AnalyzerKind::LemmaEN, {"d0"}, {TermBag{{"engine", 2}}});
    auto t = idx.term_id("engine");
    REQUIRE(t);
    CHECK(idx.postings(*t) == std::vector<Posting>{{0, 2}});
    CHECK(idx.doc_length(0) == 2);
    CHECK(idx.collection_tf(*t) == 2);
  }
  SUBCASE("empty corpus") {
    auto idx = TermIndex::from_bags(AnalyzerKind::LemmaEN, {}, {});
    CHECK(idx.num_docs() == 0);
    CHECK(idx.num_terms() == 0);
    CHECK(idx.collection_length() == 0);
    CHECK(idx.avg_doc_length() == 0.0);
  }
  SUBCASE("two docs sharing a term") {
    auto idx = TermIndex::from_bags(AnalyzerKind::LemmaEN, {"a", "b"},
                                    {TermBag{{"x", 1}, {"y", 1}}, TermBag{{"x", 3}}});
    CHECK(idx.doc_freq(*idx.term_id("x")) == 2);
    CHECK(idx.collection_tf(*idx.term_id("x")) == 4);
    CHECK(idx.collection_length() == 5);
    CHECK(idx.doc_ordinal("b") == 1u);
  }
}

TEST_CASE("build_index on text and audit") {
  std::vector<MetaDocument> docs(2);
  docs[0].patent_id = "A";
  docs[0].description = "Engine engines. The piston.";
  docs[1].patent_id = "B";
  docs[1].description = "piston ring";
  auto idx = build_index(docs, AnalyzerKind::LemmaEN, {}, 2);
  CHECK(idx.postings(*idx.term_id("engine")) == std::vector<Posting>{{0, 2}});
  CHECK(idx.doc_freq(*idx.term_id("piston")) == 2);
  CHECK(audit_index(idx).ok());
}

TEST_CASE("index save/load round trip and thread independence") {
  auto syn = generate(3, [] {
    SynParams p;
    p.n_patents = 150;
    p.n_clusters = 5;
    p.vocab_size = 400;
    p.n_train_topics = 5;
    p.n_test_topics = 5;
    return p;
  }());
  auto store = CorpusStore::build(syn.patents);
  auto docs = build_metadocs(store);
  append_citation_texts(docs, store, store.citation_edges());
  auto one = build_index(docs, AnalyzerKind::LemmaDE, {}, 1);
  auto many = build_index(docs, AnalyzerKind::LemmaDE, {}, 8);
  CHECK(one == many);
  CHECK(audit_index(one).ok());

  auto dir = testutil::temp_dir("index_io");
  one.save((dir / "x.idx").string());
  auto back = TermIndex::load((dir / "x.idx").string());
  CHECK(back == one);
  CHECK(back.term_id(one.terms().front()) == 0u);

  // Truncated files are rejected.
  auto bytes = testutil::read_file(dir / "x.idx");
  testutil::write_file(dir / "bad.idx", bytes.substr(0, bytes.size() / 2));
  CHECK_THROWS_AS(TermIndex::load((dir / "bad.idx").string()), Error);
  testutil::write_file(dir / "magic.idx", "NOTANINDEX");
  CHECK_THROWS_AS(TermIndex::load((dir / "magic.idx").string()), Error);
}
