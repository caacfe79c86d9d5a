#include <doctest.h>

#include "priorart/error.hpp"
#include "priorart/workingset.hpp"
#include "test_util.hpp"

using namespace priorart;
using testutil::make_record;

namespace {
std::string pid(int i) { return "EP" + std::to_string(1000000 + i); }
}  // namespace

TEST_CASE("topic citing one patent and nothing else is inactive") {
  std::vector<PatentRecord> recs = {make_record(pid(1)), make_record(pid(2))};
  auto store = CorpusStore::build(recs);
  auto topic = store.prepare_topic(make_record("EP2000001", "2010-01-01", "As in " + pid(1) + "."));
  auto co = ecla_cooccurrence(store);
  auto ws = build_working_set(topic, store, co);
  REQUIRE(ws.step_trace.size() == 10);
  CHECK(ws.step_trace[0].size == 1);
  CHECK(ws.members == std::vector<std::string>{pid(1)});
  CHECK_FALSE(ws.active);
}

TEST_CASE("same-ECLA step adds every class member") {
  std::vector<PatentRecord> recs;
  for (int i = 0; i < 50; ++i) {
    auto r = make_record(pid(i));
    r.ecla_classes = {"F02B1/02"};
    recs.push_back(r);
  }
  recs.push_back(make_record(pid(99)));
  auto store = CorpusStore::build(recs);
  auto topic = make_record("EP2000001", "2010-01-01");
  topic.ecla_classes = {"F02B1/02"};
  topic = store.prepare_topic(topic);
  auto ws = build_working_set(topic, store, ecla_cooccurrence(store));
  CHECK(ws.step_trace[5].size == 0);
  CHECK(ws.step_trace[6].label == "6.same-ecla");
  CHECK(ws.step_trace[6].size == 50);
  CHECK(ws.members_through(6).size() == 50);
  CHECK(ws.active);
}

TEST_CASE("citation, priority and name steps") {
  // 0 <- 1 (1 cites 0), 2 cites 1, 3 shares a priority with 0, 4 same applicant + inventor.
  std::vector<PatentRecord> recs;
  for (int i = 0; i < 6; ++i) recs.push_back(make_record(pid(i)));
  recs[1].versions[0].description = "see " + pid(0);
  recs[2].versions[0].description = "see " + pid(1);
  recs[0].priority_ids = {"US1"};
  recs[3].priority_ids = {"US1"};
  recs[4].applicants = {"ACME"};
  recs[4].inventors = {"Ada"};
  recs[5].applicants = {"ACME"};
  auto store = CorpusStore::build(recs);
  auto topic = make_record("EP2000001", "2010-01-01", "see " + pid(1));
  topic.applicants = {"ACME"};
  topic.inventors = {"Ada"};
  topic = store.prepare_topic(topic);
  auto ws = build_working_set(topic, store, ecla_cooccurrence(store));
  std::vector<std::size_t> sizes;
  for (const auto& s : ws.step_trace) sizes.push_back(s.size);
  // step1 {1}, step2 +{2}, step3 +{0}, step4 +{3}, step5 +{4}; 5 never joins.
  CHECK(sizes == std::vector<std::size_t>{1, 2, 3, 4, 5, 5, 5, 5, 5, 5});
  for (std::size_t i = 0; i < ws.members.size(); ++i) {
    CHECK(ws.step_trace[ws.member_step[i]].size > i);
  }
  CHECK(std::find(ws.members.begin(), ws.members.end(), pid(5)) == ws.members.end());
}

TEST_CASE("topic in the collection never joins its own working set") {
  std::vector<PatentRecord> recs = {make_record(pid(0)), make_record(pid(1), "2000-01-01", "see " + pid(0))};
  recs[0].versions[0].description = "see " + pid(1);
  auto store = CorpusStore::build(recs);
  auto topic = store.prepare_topic(store.record(0));
  auto ws = build_working_set(topic, store, ecla_cooccurrence(store));
  CHECK(ws.members == std::vector<std::string>{pid(1)});
}

TEST_CASE("published_before filter") {
  std::vector<PatentRecord> recs = {make_record(pid(0), "1999-01-01"), make_record(pid(1), "2005-01-01")};
  auto store = CorpusStore::build(recs);
  auto topic = store.prepare_topic(make_record("EP2000001", "2010-01-01", pid(0) + " and " + pid(1)));
  WorkingSetParams p;
  p.published_before = "2000-01-01";
  auto ws = build_working_set(topic, store, ecla_cooccurrence(store), p);
  CHECK(ws.members == std::vector<std::string>{pid(0)});
}

TEST_CASE("ecla_cooccurrence") {
  SUBCASE("ranking by shared patents") {
    std::vector<PatentRecord> recs;
    for (int i = 0; i < 5; ++i) {
      auto r = make_record(pid(i));
      r.ecla_classes = {"A01B1/02", "B01B1/02"};
      recs.push_back(r);
    }
    for (int i = 5; i < 7; ++i) {
      auto r = make_record(pid(i));
      r.ecla_classes = {"A01B1/02", "C01B1/02"};
      recs.push_back(r);
    }
    auto r = make_record(pid(9));
    r.ecla_classes = {"D01B1/02"};
    recs.push_back(r);
    auto co = ecla_cooccurrence(CorpusStore::build(recs));
    CHECK(co.top("A01B1/02", 2) == std::vector<std::string>{"B01B1/02", "C01B1/02"});
    CHECK(co.ranked("A01B1/02")[0].second == 5);
    CHECK(co.ranked("A01B1/02")[1].second == 2);
    CHECK(co.ranked("D01B1/02").empty());
    CHECK(co.top("B01B1/02", 2) == std::vector<std::string>{"A01B1/02"});
  }
  SUBCASE("single-class corpus") {
    std::vector<PatentRecord> recs;
    for (int i = 0; i < 3; ++i) {
      auto r = make_record(pid(i));
      r.ecla_classes = {"A01B1/02"};
      recs.push_back(r);
    }
    CHECK(ecla_cooccurrence(CorpusStore::build(recs)).ranked("A01B1/02").empty());
  }
}

TEST_CASE("cited_patents_run") {
  std::vector<PatentRecord> recs = {make_record(pid(0)), make_record(pid(1))};
  auto store = CorpusStore::build(recs);
  SUBCASE("no citations") {
    auto topic = store.prepare_topic(make_record("EP2000001"));
    CHECK(cited_patents_run(topic, store).empty());
  }
  SUBCASE("three citations, two in the collection, mention order kept") {
    auto topic = store.prepare_topic(
        make_record("EP2000001", "2010-01-01", pid(1) + " then EP9999999 then " + pid(0)));
    auto run = cited_patents_run(topic, store);
    CHECK(run.model_id == "cited");
    REQUIRE(run.size() == 2);
    CHECK(run.entries[0] == RankedEntry{pid(1), 2.0});
    CHECK(run.entries[1] == RankedEntry{pid(0), 1.0});
  }
}

TEST_CASE("micro_recall") {
  Qrels qrels = {{"t1", {{"a", 1}, {"b", 2}}}, {"t2", {{"c", 1}, {"d", 1}}}};
  auto mk = [](std::string topic, std::vector<std::string> members) {
    WorkingSet ws;
    ws.topic_id = std::move(topic);
    ws.members = std::move(members);
    ws.member_step.assign(ws.members.size(), 0);
    ws.step_trace = {{"1.cited", ws.members.size()}};
    return ws;
  };
  CHECK(micro_recall(std::vector<WorkingSet>{mk("t1", {"a", "b"}), mk("t2", {"c", "d"})}, qrels) == 1.0);
  CHECK(micro_recall(std::vector<WorkingSet>{mk("t1", {"x"}), mk("t2", {})}, qrels) == 0.0);
  CHECK(micro_recall(std::vector<WorkingSet>{mk("t1", {"a"}), mk("t2", {"d", "z"})}, qrels) == 0.5);
  CHECK(micro_recall(std::vector<WorkingSet>{mk("t1", {"a", "b"})}, qrels, GradeFilter::HighlyRelevant) == 1.0);
}

TEST_CASE("working set files round trip") {
  std::vector<PatentRecord> recs;
  for (int i = 0; i < 4; ++i) recs.push_back(make_record(pid(i)));
  recs[1].versions[0].description = "see " + pid(0);
  auto store = CorpusStore::build(recs);
  auto topic = store.prepare_topic(make_record("EP2000001", "2010-01-01", "see " + pid(1) + " and " + pid(3)));
  std::vector<WorkingSet> sets = {build_working_set(topic, store, ecla_cooccurrence(store))};
  auto dir = testutil::temp_dir("workingset_io");
  write_working_sets((dir / "w.tsv").string(), (dir / "w.csv").string(), sets);
  auto back = read_working_sets((dir / "w.tsv").string(), (dir / "w.csv").string());
  REQUIRE(back.size() == 1);
  CHECK(back[0].members == sets[0].members);
  CHECK(back[0].member_step == sets[0].member_step);
  CHECK(back[0].active == sets[0].active);
  CHECK(back[0].step_trace.size() == 10);

  testutil::write_file(dir / "bad.csv", "topic_id,step,label,size,active\nx,0,1.cited\n");
  CHECK_THROWS_AS(read_working_sets((dir / "w.tsv").string(), (dir / "bad.csv").string()), ParseError);
}
