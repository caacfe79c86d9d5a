#include <doctest.h>

#include <random>

#include "priorart/error.hpp"
#include "priorart/eval.hpp"
#include "priorart/trec.hpp"
#include "test_util.hpp"

using namespace priorart;

namespace {
RankedList list(const std::string& topic, std::vector<std::string> ids) {
  RankedList l;
  l.topic_id = topic;
  l.model_id = "m";
  for (std::size_t i = 0; i < ids.size(); ++i) l.entries.push_back({ids[i], static_cast<double>(ids.size() - i)});
  return l;
}
}  // namespace

TEST_CASE("average_precision") {
  CHECK(average_precision({"r1", "n", "r2"}, {"r1", "r2"}) == doctest::Approx(0.8333333333).epsilon(1e-9));
  CHECK(average_precision({"r1", "n", "r2"}, {"r1", "r2"}) == doctest::Approx((1.0 + 2.0 / 3.0) / 2.0).epsilon(1e-15));
  CHECK(average_precision({"r1", "r2", "n"}, {"r1", "r2"}) == 1.0);
  CHECK(average_precision({"n1", "n2"}, {"r1"}) == 0.0);
  // Unretrieved relevant documents count in the denominator.
  CHECK(average_precision({"r1"}, {"r1", "r2"}) == 0.5);
  CHECK_THROWS_AS(average_precision({"a"}, {}), EvalError);
}

TEST_CASE("precision_at_k and recall") {
  std::unordered_set<std::string> rel = {"a", "b"};
  CHECK(precision_at_k({"a", "b", "x", "y", "z"}, rel, 5) == doctest::Approx(0.4));
  CHECK(precision_at_k({"a", "x"}, rel, 1) == 1.0);
  CHECK(precision_at_k({"a"}, rel, 5) == doctest::Approx(0.2));
  CHECK(recall({"a", "x"}, rel) == 0.5);
}

TEST_CASE("evaluate_run") {
  Qrels qrels = {{"t1", {{"a", 2}}}, {"t2", {{"b", 1}}}};
  SUBCASE("two topics AP 1 and 0") {
    auto m = evaluate_run("r", {list("t1", {"a"}), list("t2", {"x"})}, qrels);
    CHECK(m.topics == 2);
    CHECK(m.map == 0.5);
    CHECK(m.macro_recall == 0.5);
    CHECK(m.micro_recall == 0.5);
  }
  SUBCASE("missing list scores 0; orphan topic warns") {
    std::vector<std::string> warnings;
    auto m = evaluate_run("r", {list("t1", {"a"}), list("t9", {"a"})}, qrels, GradeFilter::AllRelevant, &warnings);
    CHECK(m.map == 0.5);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("t9") != std::string::npos);
  }
  SUBCASE("highly relevant filter drops grade-1 documents") {
    auto m = evaluate_run("r", {list("t1", {"a"}), list("t2", {"b"})}, qrels, GradeFilter::HighlyRelevant);
    CHECK(m.topics == 1);
    CHECK(m.map == 1.0);
    CHECK(relevant_set(qrels, "t2", GradeFilter::HighlyRelevant).empty());
  }
  SUBCASE("permuting topics leaves MAP unchanged, reports are deterministic") {
    auto a = evaluate_run("r", {list("t1", {"x", "a"}), list("t2", {"b"})}, qrels);
    auto b = evaluate_run("r", {list("t2", {"b"}), list("t1", {"x", "a"})}, qrels);
    CHECK(a == b);
    CHECK(format_report({a}) == format_report({b}));
    CHECK(format_report_csv({a}).rfind("run,topics,map", 0) == 0);
  }
  SUBCASE("no relevant documents at all") {
    CHECK_THROWS_AS(evaluate_run("r", {}, Qrels{}), EvalError);
  }
}

TEST_CASE("metric bounds on random instances") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> ranked;
    std::unordered_set<std::string> rel;
    int n = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) ranked.push_back("d" + std::to_string(i));
    std::shuffle(ranked.begin(), ranked.end(), rng);
    for (int i = 0; i < 25; ++i) {
      if (rng() % 4 == 0) rel.insert("d" + std::to_string(i));
    }
    if (rel.empty()) rel.insert("d0");
    double ap = average_precision(ranked, rel);
    CHECK(ap >= 0.0);
    CHECK(ap <= 1.0);
    // AP = 1 exactly when the relevant documents fill the top ranks.
    bool top = rel.size() <= ranked.size();
    for (std::size_t i = 0; top && i < rel.size(); ++i) top = rel.count(ranked[i]) > 0;
    CHECK((ap == 1.0) == top);
  }
}

TEST_CASE("qrels and run files round trip") {
  auto dir = testutil::temp_dir("eval_io");
  Qrels qrels = {{"t1", {{"a", 2}, {"b", 1}}}};
  write_qrels((dir / "q.txt").string(), qrels);
  CHECK(read_qrels((dir / "q.txt").string()) == qrels);

  RankedList l;
  l.topic_id = "t1";
  l.model_id = "kl-lemma-en";
  l.entries = {{"a", -3.25}, {"b", -7.0 / 3.0 - 1.0}};
  write_run_file((dir / "r.run").string(), {l});
  auto back = read_run_file((dir / "r.run").string());
  REQUIRE(back.size() == 1);
  CHECK(back[0] == l);
  CHECK(format_score(0.1) == "0.1");

  testutil::write_file(dir / "bad.txt", "t1 0 a\n");
  CHECK_THROWS_AS(read_qrels((dir / "bad.txt").string()), ParseError);
  testutil::write_file(dir / "bad.run", "t1 Q0 a x 1.0 m\n");
  CHECK_THROWS_AS(read_run_file((dir / "bad.run").string()), ParseError);
}
