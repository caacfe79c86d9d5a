#include <doctest.h>

#include "priorart/error.hpp"
#include "priorart/rerank.hpp"
#include "priorart/trec.hpp"
#include "test_util.hpp"

using namespace priorart;
using testutil::make_record;

namespace {
std::string pid(int i) { return "EP" + std::to_string(1000000 + i); }

RankedList ranked(std::vector<RankedEntry> entries) {
  RankedList l{"T", "merged", std::move(entries)};
  sort_and_cut(l.entries, kDefaultCutoff);
  return l;
}
}  // namespace

TEST_CASE("apply_boosts") {
  SUBCASE("w = 0.5, s = 1 gives 1.0") {
    auto out = apply_boosts(ranked({{"a", 0.5}}), {1.0});
    CHECK(out.entries[0].score == 1.0);
  }
  SUBCASE("order flips to (0.75, 0.6)") {
    auto out = apply_boosts(ranked({{"a", 0.6}, {"b", 0.5}}), {0.0, 0.5});
    REQUIRE(out.size() == 2);
    CHECK(out.entries[0] == RankedEntry{"b", 0.75});
    CHECK(out.entries[1] == RankedEntry{"a", 0.6});
  }
  SUBCASE("s = 0 everywhere is the identity; negative s is clamped") {
    auto in = ranked({{"a", 0.9}, {"b", 0.4}, {"c", 0.1}});
    CHECK(apply_boosts(in, {0.0, 0.0, 0.0}) == in);
    CHECK(apply_boosts(in, {-3.0, -1.0, 0.0}) == in);
  }
  SUBCASE("cutoff and candidate set") {
    auto in = ranked({{"a", 0.9}, {"b", 0.4}, {"c", 0.1}});
    auto out = apply_boosts(in, {0.0, 0.0, 10.0}, 2);
    CHECK(out.doc_ids() == std::vector<std::string>{"c", "a"});
  }
  SUBCASE("monotonicity: raising one boost never lowers its rank") {
    auto in = ranked({{"a", 0.9}, {"b", 0.7}, {"c", 0.5}, {"d", 0.3}});
    std::size_t last_rank = 99;
    for (double s : {0.0, 0.2, 0.5, 1.0, 2.0, 5.0}) {
      auto ids = apply_boosts(in, {0.1, 0.3, 0.0, s}).doc_ids();
      std::size_t rank = std::find(ids.begin(), ids.end(), "d") - ids.begin();
      CHECK(rank <= last_rank);
      last_rank = rank;
    }
  }
  CHECK_THROWS_AS(apply_boosts(ranked({{"a", 1}}), {}), Error);
}

namespace {
CorpusStore fixture_store() {
  std::vector<PatentRecord> recs;
  for (int i = 0; i < 6; ++i) recs.push_back(make_record(pid(i)));
  recs[0].ecla_classes = {"F02B1/02", "F02B2/02"};
  recs[0].ipc_classes = {"F02B1/00"};
  recs[0].inventors = {"B", "C"};
  recs[0].applicants = {"ACME"};
  // Patents 1..3 cite 0; 1 and 2 are in the F02 class.
  recs[1].versions[0].description = "see " + pid(0);
  recs[1].ipc_classes = {"F02B7/00"};
  recs[2].versions[0].description = "see " + pid(0) + " and " + pid(5);
  recs[2].ipc_classes = {"F02B7/00"};
  recs[3].versions[0].description = "see " + pid(0);
  recs[3].ipc_classes = {"H01B7/00"};
  return CorpusStore::build(recs);
}
}  // namespace

TEST_CASE("extract_rerank_features") {
  auto store = fixture_store();
  auto topic = make_record("EP2000001", "2010-01-01", "Known from " + pid(0) + ".");
  topic.ecla_classes = {"F02B1/02"};
  topic.ipc_classes = {"F02B3/00"};
  topic.inventors = {"A", "B"};
  topic.applicants = {"ACME"};
  topic = store.prepare_topic(topic);
  auto results = ranked({{pid(0), 0.9}, {pid(1), 0.8}, {pid(5), 0.5}, {"EPX", 0.1}});
  auto f = extract_rerank_features(topic, results, store);
  REQUIRE(f.size() == 4);
  CHECK(f[0].cited_in_description);
  CHECK(f[0].n_common_ecla == 1);
  CHECK(f[0].n_common_ipc == 0);  // full-code match
  CHECK(f[0].same_applicant);
  CHECK(f[0].frac_common_inventors == 0.5);
  CHECK(f[0].p_cite_ipc == 1.0);      // cited by 1 and 2 (F02), the maximum
  CHECK(f[2].p_cite_ipc == 0.5);      // cited by 2 only
  CHECK(f[0].p_cite_results == 1.0);  // cited by 1, which is in the results
  CHECK(f[2].p_cite_results == 0.0);
  CHECK_FALSE(f[1].cited_in_description);
  CHECK(f[1].frac_common_inventors == 0.0);
  CHECK(f[3].encode().isZero());
  for (const auto& x : f) {
    CHECK(x.p_cite_ipc >= 0.0);
    CHECK(x.p_cite_ipc <= 1.0);
    CHECK(x.p_cite_results <= 1.0);
  }
  auto single = extract_rerank_features(topic, pid(0), store, results);
  CHECK(single.encode() == f[0].encode());
  CHECK_THROWS_AS(extract_rerank_features(topic, pid(3), store, results), Error);
  CHECK(RerankFeatures::names().size() == RerankFeatures::kDimension);
}

TEST_CASE("rerank training rows") {
  auto store = fixture_store();
  RerankTopic t{store.prepare_topic(make_record("EP2000001")), {}};
  std::vector<RankedEntry> entries;
  for (int i = 0; i < 100; ++i) entries.push_back({"D" + std::to_string(100 + i), 1.0 - i * 0.005});
  t.merged = ranked(entries);
  Qrels qrels;
  qrels["EP2000001"] = {{"D150", 1}, {"D160", 2}, {"D199", 1}};
  auto rows = rerank_training_rows({t}, qrels, store, 20);
  CHECK(rows.x.rows() == 23);
  double w_max = t.merged.entries.front().score;
  for (Eigen::Index i = 0; i < rows.y.size(); ++i) {
    const auto& doc = rows.keys[static_cast<std::size_t>(i)].second;
    CHECK(rows.y[i] == (qrels["EP2000001"].count(doc) ? w_max : 0.0));
  }
  // The negatives are the 20 highest-ranked non-relevant results.
  CHECK(rows.keys[0].second == "D100");
  CHECK(rows.keys[19].second == "D119");

  // Target for a relevant document equals the list's top score (0.8 here).
  RerankTopic u = t;
  u.merged = ranked({{"D150", 0.5}, {"D100", 0.8}});
  auto r2 = rerank_training_rows({u}, qrels, store, 20);
  REQUIRE(r2.y.size() == 2);
  CHECK(r2.y[0] == 0.0);
  CHECK(r2.y[1] == 0.8);

  CHECK_THROWS_AS(train_rerank({t}, Qrels{}, store, {}), FitError);
}

TEST_CASE("zero model leaves the list unchanged byte for byte") {
  auto store = fixture_store();
  auto topic = store.prepare_topic(make_record("EP2000001"));
  std::vector<RankedEntry> entries;
  for (int i = 0; i < 1200; ++i) entries.push_back({"D" + std::to_string(i), 1.0 / (i + 3.0)});
  auto merged = ranked(entries);
  auto out = apply_rerank(merged, topic, store, zero_rerank_model());
  RankedList cut = merged;
  cut.entries.resize(1000);
  CHECK(out == cut);
  std::ostringstream a, b;
  write_run(a, out);
  write_run(b, cut);
  CHECK(a.str() == b.str());
}
