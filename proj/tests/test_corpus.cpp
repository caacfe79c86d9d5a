#include <doctest.h>

#include <string>

#include "priorart/corpus.hpp"
#include "priorart/error.hpp"
#include "test_util.hpp"

using namespace priorart;
using testutil::make_record;

TEST_CASE("parse_record: one A1 version, no citations") {
  auto r = parse_record(
      R"({"id":"EP1","lang":"en","versions":[{"kind":"A1","date":"2001-02-03","title":{"en":"Engine"}}]})");
  CHECK(r.id == "EP1");
  CHECK(r.language == Language::EN);
  REQUIRE(r.versions.size() == 1);
  CHECK(r.versions[0].kind == VersionKind::A1);
  CHECK(r.cited_ids.empty());
  CHECK(r.priority_date == "2001-02-03");
  CHECK(r.publication_date() == "2001-02-03");
}

TEST_CASE("parse_record: versions are ordered A1 before B1") {
  auto r = parse_record(
      R"({"id":"EP1","lang":"de","versions":[)"
      R"({"kind":"B1","date":"2003-01-01","claims":{"de":"x","en":"y","fr":"z"}},)"
      R"({"kind":"A1","date":"2001-01-01","description":"text"}]})");
  REQUIRE(r.versions.size() == 2);
  CHECK(r.versions[0].kind == VersionKind::A1);
  CHECK(r.versions[1].kind == VersionKind::B1);
  CHECK(r.publication_date() == "2001-01-01");
}

TEST_CASE("parse_record: rejections") {
  CHECK_THROWS_AS(parse_record(R"({"id":"EP1","lang":"en","versions":[{"kind":"C3","title":{"en":"x"}}]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_record(R"({"id":"EP1","lang":"xx","versions":[{"kind":"A1","title":{"en":"x"}}]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_record(R"({"id":"EP1","lang":"en","versions":[]})"), ParseError);
  CHECK_THROWS_AS(parse_record(R"({"id":"EP1","lang":"en","versions":[{"kind":"A1","title":{"en":"x"}},)"
                               R"({"kind":"A1","title":{"en":"y"}}]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_record(R"({"id":"EP1","lang":"en","ipc":["??"],"versions":[{"kind":"A1","title":{"en":"x"}}]})"),
                  ParseError);
  try {
    parse_record(R"({"id":"EP1", "lang": })");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() > 0);
  }
}

TEST_CASE("serialize_record round-trips") {
  auto r = make_record("EP7", "1999-05-05", "a description");
  r.applicants = {"ACME"};
  r.inventors = {"Ada Lovelace"};
  r.ipc_classes = {"B60K6/20"};
  r.ecla_classes = {"B60K6/20B"};
  r.priority_ids = {"US123"};
  r.priority_date = "1998-01-01";
  auto back = parse_record(serialize_record(r));
  CHECK(back == r);
}

TEST_CASE("normalize_person_name") {
  CHECK(normalize_person_name("Professor Dr. Dr. h.c. mult. Wolfgang Wahlster") == "Wolfgang Wahlster");
  CHECK(normalize_person_name("Wolfgang Wahlster") == "Wolfgang Wahlster");
  CHECK(normalize_person_name("  Dr.   Ada   Lovelace ") == "Ada Lovelace");
}

TEST_CASE("normalize_applicant_name") {
  CHECK(normalize_applicant_name("ACME GmbH, Germany") == "ACME");
  CHECK(normalize_applicant_name("ACME") == "ACME");
  CHECK(normalize_applicant_name("Kabushi Kaisha Toa") == "Toa");
  // Normalization is idempotent.
  for (const char* raw : {"ACME GmbH, Germany", "Kabushi Kaisha Toa", "Siemens AG"}) {
    auto once = normalize_applicant_name(raw);
    CHECK(normalize_applicant_name(once) == once);
  }
}

TEST_CASE("extract_citations") {
  std::unordered_set<std::string> known = {"EP0123456", "EP1000123"};
  auto m = extract_citations("see EP 0 123 456 A1", known);
  REQUIRE(m.size() == 1);
  CHECK(m[0].id == "EP0123456");

  auto twice = extract_citations("EP1000123 is good.\n\nAgain EP-1000123 B1.", known);
  REQUIRE(twice.size() == 1);
  CHECK(twice[0].paragraph == "EP1000123 is good.");

  CHECK(extract_citations("see EP9999999", known).empty());

  auto order = extract_citations("first EP1000123 then EP0123456", known);
  REQUIRE(order.size() == 2);
  CHECK(order[0].id == "EP1000123");
  CHECK(order[1].id == "EP0123456");
}

TEST_CASE("citation_graph") {
  SUBCASE("A cites B") {
    auto a = make_record("A");
    auto b = make_record("B");
    a.cited_ids = {"B"};
    auto g = citation_graph({a, b});
    CHECK(g.citers[1] == std::vector<std::uint32_t>{0});
    CHECK(g.cited[0] == std::vector<std::uint32_t>{1});
    CHECK(g.num_edges() == 1);
  }
  SUBCASE("empty corpus") {
    auto g = citation_graph({});
    CHECK(g.num_nodes() == 0);
    CHECK(g.num_edges() == 0);
  }
  SUBCASE("chain A->B->C") {
    auto a = make_record("A"), b = make_record("B"), c = make_record("C");
    a.cited_ids = {"B", "OUTSIDE"};
    b.cited_ids = {"C"};
    auto g = citation_graph({a, b, c});
    CHECK(g.citers[2] == std::vector<std::uint32_t>{1});
    CHECK(g.cited[0] == std::vector<std::uint32_t>{1});
    CHECK(g.num_edges() == 2);
  }
}

TEST_CASE("CorpusStore resolves citations and indexes metadata") {
  auto a = make_record("EP1000001", "2000-01-01", "Background.\n\nAs in EP 1 000 004 A1 we use gears.");
  auto b = make_record("EP1000004", "1999-01-01");
  a.applicants = {"ACME GmbH"};
  b.applicants = {"ACME"};
  a.inventors = {"Dr. Ada Lovelace"};
  a.ipc_classes = {"B60K6/20"};
  a.ecla_classes = {"B60K6/20B"};
  auto store = CorpusStore::build({a, b});
  REQUIRE(store.size() == 2);
  CHECK(store.record(0).cited_ids == std::vector<std::string>{"EP1000004"});
  CHECK(store.record(0).inventors == std::vector<std::string>{"Ada Lovelace"});
  CHECK(store.by_applicant("ACME") == std::vector<std::uint32_t>{0, 1});
  CHECK(store.by_ipc_class3("B60") == std::vector<std::uint32_t>{0});
  CHECK(store.by_ecla("B60K6/20B") == std::vector<std::uint32_t>{0});
  CHECK(store.by_ecla("none").empty());
  REQUIRE(store.citation_edges().size() == 1);
  CHECK(store.citation_edges()[0].category == CitationCategory::D);
  CHECK(store.citation_edges()[0].citation_paragraph == std::string("As in EP 1 000 004 A1 we use gears."));
  CHECK(store.graph().citers[1] == std::vector<std::uint32_t>{0});

  CHECK_THROWS_AS(CorpusStore::build({b, b}), ParseError);
}

TEST_CASE("records file round trip") {
  auto dir = testutil::temp_dir("corpus_io");
  std::vector<PatentRecord> recs = {make_record("EP1", "2000-01-01", "d1"), make_record("EP2")};
  write_records((dir / "c.jsonl").string(), recs);
  CHECK(read_records((dir / "c.jsonl").string()) == recs);
  testutil::write_file(dir / "bad.jsonl", serialize_record(recs[0]) + "\n{oops\n");
  try {
    read_records((dir / "bad.jsonl").string());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("ipc_class3 and code validation") {
  CHECK(ipc_class3("B60K6/20") == "B60");
  CHECK(valid_class_code("B60K6/20"));
  CHECK_FALSE(valid_class_code("1"));
}
