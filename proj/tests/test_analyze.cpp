#include <doctest.h>

#include "priorart/analyze.hpp"
#include "priorart/error.hpp"
#include "test_util.hpp"

using namespace priorart;

namespace {
std::vector<std::string> surfaces(const TokenStream& s) {
  std::vector<std::string> out;
  for (const auto& t : s.tokens) out.push_back(t.surface);
  return out;
}
std::vector<std::string> lemmas(const TokenStream& s) {
  std::vector<std::string> out;
  for (const auto& t : s.tokens) out.push_back(t.lemma);
  return out;
}
}  // namespace

TEST_CASE("tokenize") {
  CHECK(surfaces(tokenize("radial engine.", Language::EN)) == std::vector<std::string>{"radial", "engine"});
  CHECK(tokenize("", Language::EN).tokens.empty());
  CHECK(surfaces(tokenize("3,5-dimethyl", Language::EN)) == std::vector<std::string>{"3,5-dimethyl"});
  CHECK(surfaces(tokenize("a, b. 1.5 x-", Language::EN)) ==
        std::vector<std::string>{"a", "b", "1.5", "x"});
  auto s = tokenize("one two three", Language::EN);
  for (std::size_t i = 1; i < s.tokens.size(); ++i) CHECK(s.tokens[i].position > s.tokens[i - 1].position);
}

TEST_CASE("lemmatize") {
  const auto& en = Lexicon::defaults(Language::EN);
  CHECK(lemmas(analyze_text("engines", en)) == std::vector<std::string>{"engine"});
  CHECK(analyze_text("the", en).tokens.empty());
  CHECK(lemmas(analyze_text("42", en)) == std::vector<std::string>{"42"});
  CHECK(lemmas(analyze_text("Engine", en)) == std::vector<std::string>{"engine"});

  // A dropped stopword leaves a position gap.
  auto s = analyze_text("engine of the car", en);
  REQUIRE(s.tokens.size() == 2);
  CHECK(s.tokens[1].position - s.tokens[0].position == 3);
}

TEST_CASE("dice") {
  CHECK(dice(5, 10, 10) == doctest::Approx(0.5));
  CHECK(dice(10, 10, 10) == 1.0);
  CHECK(dice(0, 0, 0) == 0.0);
  CHECK(dice(0, 3, 4) == 0.0);
}

TEST_CASE("extract_phrases") {
  const auto& en = Lexicon::defaults(Language::EN);
  SUBCASE("perfect collocation") {
    std::vector<TokenStream> streams;
    for (int i = 0; i < 4; ++i) streams.push_back(analyze_text("radial engine", en));
    auto vocab = extract_phrases(streams, {3, 0.25});
    auto* p = vocab.find({"radial", "engine"});
    REQUIRE(p != nullptr);
    CHECK(p->dice == 1.0);
    CHECK(p->count == 4);
    CHECK(p->term() == "radial_engine");
  }
  SUBCASE("f(a)=10, f(b)=10, f(ab)=5") {
    std::vector<TokenStream> streams;
    for (int i = 0; i < 5; ++i) streams.push_back(analyze_text("alpha beta", en));
    for (int i = 0; i < 5; ++i) streams.push_back(analyze_text("alpha gamma. beta delta", en));
    auto vocab = extract_phrases(streams, {3, 0.25});
    auto* p = vocab.find({"alpha", "beta"});
    REQUIRE(p != nullptr);
    CHECK(p->dice == doctest::Approx(0.5));
  }
  SUBCASE("never adjacent: absent") {
    std::vector<TokenStream> streams;
    for (int i = 0; i < 5; ++i) streams.push_back(analyze_text("alpha of the beta", en));
    auto vocab = extract_phrases(streams, {1, 0.0});
    CHECK(vocab.find({"alpha", "beta"}) == nullptr);
  }
  SUBCASE("below min count") {
    std::vector<TokenStream> streams = {analyze_text("radial engine", en)};
    CHECK(extract_phrases(streams, {3, 0.25}).size() == 0);
  }
  SUBCASE("trigram dice uses bigram counts") {
    std::vector<TokenStream> streams;
    for (int i = 0; i < 4; ++i) streams.push_back(analyze_text("alpha beta gamma", en));
    auto vocab = extract_phrases(streams, {3, 0.25});
    auto* p = vocab.find({"alpha", "beta", "gamma"});
    REQUIRE(p != nullptr);
    CHECK(p->dice == 1.0);
  }
}

TEST_CASE("phrase vocabulary save/load and match") {
  PhraseVocabulary v;
  v.add({{"radial", "engine"}, 0.8, 5});
  v.add({{"engine", "block"}, 0.5, 3});
  auto dir = testutil::temp_dir("phrases");
  v.save((dir / "p.tsv").string());
  auto back = PhraseVocabulary::load((dir / "p.tsv").string());
  REQUIRE(back.size() == 2);
  CHECK(back.find({"radial", "engine"})->count == 5);
  auto terms = back.match(analyze_text("radial engine block", Lexicon::defaults(Language::EN)));
  std::sort(terms.begin(), terms.end());
  CHECK(terms == std::vector<std::string>{"engine_block", "radial_engine"});
}

TEST_CASE("analyze_to_terms") {
  AnalysisResources res;
  SUBCASE("FR analyzer uses only French text") {
    MetaDocument doc;
    doc.language = Language::EN;
    doc.description = "engine";
    doc.title.fr = "moteur";
    doc.claims.fr = "piston";
    auto bag = analyze_to_terms(doc, AnalyzerKind::LemmaFR, res);
    CHECK(bag.count("engine") == 0);
    CHECK(bag.size() == 2);
  }
  SUBCASE("empty metadoc") {
    MetaDocument doc;
    CHECK(analyze_to_terms(doc, AnalyzerKind::LemmaEN, res).empty());
  }
  SUBCASE("phrase analyzer") {
    PhraseVocabulary v;
    v.add({{"radial", "engine"}, 1.0, 3});
    res.phrases = &v;
    MetaDocument doc;
    doc.description = "A radial engine.";
    auto bag = analyze_to_terms(doc, AnalyzerKind::PhraseEN, res);
    CHECK(bag["radial_engine"] == 1);
  }
  SUBCASE("missing resources") {
    MetaDocument doc;
    CHECK_THROWS_AS(analyze_to_terms(doc, AnalyzerKind::PhraseEN, res), ConfigError);
    CHECK_THROWS_AS(analyze_to_terms(doc, AnalyzerKind::Concept, res), ConfigError);
  }
}

TEST_CASE("analyzer names round trip") {
  for (auto k : kAnalyzerKinds) CHECK(parse_analyzer_kind(analyzer_name(k)) == k);
  CHECK_THROWS_AS(parse_analyzer_kind("nope"), ConfigError);
}
