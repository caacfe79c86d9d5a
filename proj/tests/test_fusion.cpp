#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "priorart/error.hpp"
#include "priorart/fusion.hpp"
#include "test_util.hpp"

using namespace priorart;
using testutil::make_record;

namespace {
RankedList scored(const std::string& topic, const std::string& model, std::vector<RankedEntry> entries) {
  RankedList l{topic, model, std::move(entries)};
  sort_and_cut(l.entries, kDefaultCutoff);
  return l;
}

double score_of(const RankedList& l, const std::string& doc) {
  for (const auto& e : l.entries)
    if (e.doc_id == doc) return e.score;
  return std::nan("");
}
}  // namespace

TEST_CASE("normalize_scores") {
  SUBCASE("[5,10,20]") {
    auto n = normalize_scores(scored("t", "m", {{"a", 5}, {"b", 10}, {"c", 20}}));
    REQUIRE(n.size() == 3);
    CHECK(n.entries[0] == RankedEntry{"c", 1.0});
    CHECK(n.entries[1].doc_id == "b");
    CHECK(n.entries[1].score == 1.0 / 3.0);
    CHECK(n.entries[2] == RankedEntry{"a", 0.0});
  }
  SUBCASE("all equal") {
    auto n = normalize_scores(scored("t", "m", {{"a", 4}, {"b", 4}}));
    for (const auto& e : n.entries) CHECK(e.score == 0.0);
  }
  SUBCASE("[3,7]") {
    auto n = normalize_scores(scored("t", "m", {{"a", 3}, {"b", 7}}));
    CHECK(n.entries[0] == RankedEntry{"b", 1.0});
    CHECK(n.entries[1] == RankedEntry{"a", 0.0});
  }
  SUBCASE("empty") { CHECK(normalize_scores(RankedList{}).empty()); }
  SUBCASE("negative KL-style scores stay in [0,1] and keep order") {
    auto raw = scored("t", "m", {{"a", -9.5}, {"b", -3.25}, {"c", -4.0}, {"d", -20.0}});
    auto n = normalize_scores(raw);
    CHECK(n.doc_ids() == raw.doc_ids());
    for (const auto& e : n.entries) {
      CHECK(e.score >= 0.0);
      CHECK(e.score <= 1.0);
    }
    CHECK(n.entries.front().score == 1.0);
  }
}

TEST_CASE("extract_merge_features") {
  auto topic = make_record("T1");
  topic.ipc_classes = {"F02B1/00", "B60K6/20"};
  QueryStats stats{42, std::nullopt};
  auto list = scored("T1", "kl-lemma-en", {{"a", -2}, {"b", -5}});
  auto f = extract_merge_features(topic, {ScoringModel::KL, AnalyzerKind::LemmaEN}, stats, list, 0);
  CHECK(f.min_score == -5.0);
  CHECK(f.max_score == -2.0);
  CHECK(f.score_range == 3.0);
  CHECK(f.working_set_size == 0.0);
  CHECK(f.query_size == 42.0);
  CHECK(f.ipc_trunk == 'F');
  CHECK(f.ipc_class == "F02");
  CHECK_FALSE(f.mean_phrase_words.has_value());

  FeatureSchema schema{false, {"B60", "F02"}};
  CHECK(schema.dimension() == 18);
  Vector v = schema.encode(f);
  CHECK(v(0) == 1.0);  // EN one-hot
  CHECK(v(1) == 0.0);
  CHECK(v(2) == 0.0);
  CHECK(v(8 + ('F' - 'A')) == 1.0);
  CHECK(v(16) == 0.0);
  CHECK(v(17) == 1.0);

  Query q{"T1", {{"radial_engine", 2}, {"gear_box_drive", 1}, {"piston", 1}}};
  auto ps = query_stats(q, {ScoringModel::BM25, AnalyzerKind::PhraseEN});
  CHECK(ps.query_size == 4);
  REQUIRE(ps.mean_phrase_words.has_value());
  CHECK(*ps.mean_phrase_words == doctest::Approx((2 * 2 + 3 + 1) / 4.0));
  CHECK_FALSE(query_stats(q, {ScoringModel::BM25, AnalyzerKind::LemmaEN}).mean_phrase_words.has_value());
}

TEST_CASE("merge") {
  auto l1 = normalize_scores(scored("t", "m1", {{"d", 10}, {"e", 0}}));
  auto l2 = normalize_scores(scored("t", "m2", {{"d", 4}, {"f", 10}, {"g", 0}}));
  SUBCASE("merged score arithmetic") {
    RankedList a{"t", "m1", {{"d", 1.0}}};
    RankedList b{"t", "m2", {{"x", 1.0}, {"d", 0.4}}};
    auto m = merge("t", {{&a, 0.5}, {&b, 0.5}});
    CHECK(score_of(m, "d") == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(m.model_id == "merged");
  }
  SUBCASE("document in one model only") {
    RankedList a{"t", "m1", {{"d", 0.8}}};
    RankedList b{"t", "m2", {{"x", 1.0}}};
    CHECK(score_of(merge("t", {{&a, 1.0}, {&b, 1.0}}), "d") == doctest::Approx(0.8));
  }
  SUBCASE("uniform confidences order by mean normalized score") {
    auto m = merge("t", {{&l1, 1.0}, {&l2, 1.0}});
    std::map<std::string, double> mean;
    for (const auto* l : {&l1, &l2})
      for (const auto& e : l->entries) mean[e.doc_id] += e.score / 2.0;
    std::vector<RankedEntry> expected;
    for (auto& [d, s] : mean) expected.push_back({d, s});
    sort_and_cut(expected, kDefaultCutoff);
    std::vector<std::string> ids;
    for (const auto& e : expected) ids.push_back(e.doc_id);
    CHECK(m.doc_ids() == ids);
  }
  SUBCASE("permutation invariance and confidence scaling") {
    auto a = merge("t", {{&l1, 0.3}, {&l2, 0.9}});
    auto b = merge("t", {{&l2, 0.9}, {&l1, 0.3}});
    auto c = merge("t", {{&l1, 0.6}, {&l2, 1.8}});
    CHECK(a == b);
    CHECK(a.doc_ids() == c.doc_ids());
  }
  SUBCASE("single model reproduces its ranking") {
    CHECK(merge("t", {{&l2, 0.7}}).doc_ids() == l2.doc_ids());
  }
  SUBCASE("empty lists and cutoff") {
    RankedList empty{"t", "m", {}};
    CHECK(merge("t", {{&empty, 1.0}}).empty());
    CHECK(merge("t", {{&l2, 1.0}}, 2).size() == 2);
  }
}

TEST_CASE("merge_topic and predict_confidences") {
  TopicRuns t;
  t.topic = make_record("T");
  t.lists["kl-lemma-en"] = scored("T", "kl-lemma-en", {{"a", -1}, {"b", -2}});
  t.lists["bm25-lemma-en"] = scored("T", "bm25-lemma-en", {{"b", 9}, {"c", 1}});
  auto m = merge_topic(t, {{"kl-lemma-en", 1.0}, {"bm25-lemma-en", 1.0}});
  CHECK(m.topic_id == "T");
  CHECK(m.size() == 3);
  CHECK(score_of(m, "b") == 1.0);
  CHECK(score_of(m, "a") == 1.0);

  // A model predicting a negative confidence everywhere clamps to 0, and an
  // all-zero prediction falls back to uniform weights.
  MergeModel neg;
  neg.model_id = "kl-lemma-en";
  neg.regressor.kind = ModelKind::Linear;
  neg.regressor.intercept = -1.0;
  neg.regressor.weights = Vector::Zero(static_cast<Eigen::Index>(neg.schema.dimension()));
  MergeModel neg2 = neg;
  neg2.model_id = "bm25-lemma-en";
  auto c = predict_confidences(t, {{"kl-lemma-en", neg}, {"bm25-lemma-en", neg2}});
  CHECK(c["kl-lemma-en"] == c["bm25-lemma-en"]);
  CHECK(c["kl-lemma-en"] > 0.0);
  MergeFeatures f;
  CHECK(neg.confidence(f) == 0.0);
}

TEST_CASE("train_merge") {
  // Model "kl-lemma-en" is perfect on EN topics and useless on DE topics.
  std::vector<TopicRuns> topics;
  Qrels qrels;
  for (int i = 0; i < 40; ++i) {
    TopicRuns t;
    t.topic = make_record("T" + std::to_string(i));
    t.topic.language = i % 2 ? Language::DE : Language::EN;
    t.topic.ipc_classes = {"B60K6/20"};
    qrels[t.topic.id]["rel"] = 1;
    std::vector<RankedEntry> e = {{"rel", 1.0}, {"n1", 2.0}, {"n2", 3.0}};
    if (t.topic.language == Language::EN) e[0].score = 10.0;
    t.lists["kl-lemma-en"] = scored(t.topic.id, "kl-lemma-en", e);
    t.lists["kl-lemma-de"] = scored(t.topic.id, "kl-lemma-de", {{"rel", 1.0}, {"n", 0.5}});
    t.stats["kl-lemma-en"] = {10, std::nullopt};
    t.stats["kl-lemma-de"] = {10, std::nullopt};
    topics.push_back(t);
  }
  TrainingOptions opt;
  opt.kind = ModelKind::Linear;
  auto models = train_merge(topics, qrels, {"kl-lemma-en", "kl-lemma-de"}, opt);
  REQUIRE(models.size() == 2);
  auto conf_en = predict_confidences(topics[0], models);
  auto conf_de = predict_confidences(topics[1], models);
  CHECK(conf_en["kl-lemma-en"] > conf_de["kl-lemma-en"] + 0.5);
  // Always-perfect model: confidence close to 1 on training points.
  CHECK(conf_en["kl-lemma-de"] == doctest::Approx(1.0).epsilon(1e-6));

  // Round trip through JSON.
  auto dir = testutil::temp_dir("fusion_io");
  models.at("kl-lemma-en").save((dir / "m.json").string());
  auto back = MergeModel::load((dir / "m.json").string());
  CHECK(back.schema.ipc_classes == models.at("kl-lemma-en").schema.ipc_classes);
  CHECK(back.regressor == models.at("kl-lemma-en").regressor);

  std::vector<TopicRuns> one(topics.begin(), topics.begin() + 1);
  CHECK_THROWS_AS(train_merge(one, qrels, {"kl-lemma-en"}, opt), FitError);
}

TEST_CASE("build_validation_set") {
  std::vector<PatentRecord> recs;
  auto pid = [](int i) { return "EP" + std::to_string(1000000 + i); };
  for (int i = 0; i < 10; ++i) recs.push_back(make_record(pid(i), "1990-01-01"));
  auto cites = [&](int n) {
    std::string d;
    for (int k = 0; k < n; ++k) d += pid(k) + ". ";
    return d;
  };
  recs.push_back(make_record(pid(20), "2000-01-01", cites(3)));
  recs.push_back(make_record(pid(21), "2000-01-01", cites(5)));
  auto late = make_record(pid(22), "2005-01-01", cites(4));
  late.priority_date = "1985-01-01";  // every citation postdates the priority
  recs.push_back(late);
  auto store = CorpusStore::build(recs);
  std::vector<std::string> warnings;
  auto v = build_validation_set(store, 100, 4, &warnings);
  CHECK(warnings.size() == 1);
  CHECK(std::find(v.topic_ids.begin(), v.topic_ids.end(), pid(20)) == v.topic_ids.end());
  CHECK(std::find(v.topic_ids.begin(), v.topic_ids.end(), pid(21)) != v.topic_ids.end());
  CHECK(v.qrels.at(pid(21)).size() == 5);
  CHECK(v.qrels.count(pid(22)) == 0);
}

TEST_CASE("model_language") {
  CHECK(model_language({ScoringModel::KL, AnalyzerKind::LemmaDE}) == Language::DE);
  CHECK(model_language({ScoringModel::KL, AnalyzerKind::PhraseEN}) == Language::EN);
  CHECK_FALSE(model_language({ScoringModel::BM25, AnalyzerKind::Concept}).has_value());
}
