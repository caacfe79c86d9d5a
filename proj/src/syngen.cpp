#include "priorart/syngen.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <unordered_set>

#include "priorart/error.hpp"
#include "priorart/lexicon.hpp"

namespace priorart {

std::string iso_date(std::int64_t days) {
  // Civil-from-days conversion for the proleptic Gregorian calendar.
  days += 719468;
  const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
  const std::int64_t doe = days - era * 146097;
  const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  std::int64_t y = yoe + era * 400;
  const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const std::int64_t mp = (5 * doy + 2) / 153;
  const std::int64_t d = doy - (153 * mp + 2) / 5 + 1;
  const std::int64_t m = mp < 10 ? mp + 3 : mp - 9;
  if (m <= 2) ++y;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", static_cast<int>(y), static_cast<int>(m), static_cast<int>(d));
  return buf;
}

void validate(const SynParams& p) {
  auto fail = [](const std::string& msg) { throw ConfigError("syngen: " + msg); };
  if (p.n_patents == 0) fail("n_patents must be positive");
  if (p.n_clusters == 0) fail("n_clusters must be positive");
  if (p.n_clusters > p.n_patents) fail("n_clusters exceeds n_patents");
  if (p.n_clusters > 8 * 99) fail("n_clusters must be at most 792");
  if (p.subtopics_per_cluster == 0 || p.subtopics_per_cluster > 20) fail("subtopics_per_cluster must be in [1, 20]");
  if (p.ecla_per_cluster == 0 || p.ecla_per_cluster > 99) fail("ecla_per_cluster must be in [1, 99]");
  for (double v : {p.lang_en, p.lang_de, p.lang_fr}) {
    if (!std::isfinite(v) || v < 0.0) fail("language mix entries must be finite and non-negative");
  }
  if (p.lang_en + p.lang_de + p.lang_fr <= 0.0) fail("language mix must have a positive sum");
  if (!std::isfinite(p.citation_density) || p.citation_density < 0.0 || p.citation_density > 50.0) {
    fail("citation_density must be in [0, 50]");
  }
  for (double v : {p.family_fraction, p.b1_fraction}) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) fail("fractions must be in [0, 1]");
  }
  if (p.description_paragraphs == 0 || p.paragraph_words == 0) fail("description size must be positive");
  const std::size_t general = std::max<std::size_t>(10, p.vocab_size / 5);
  const std::size_t per_cluster = p.vocab_size > general ? (p.vocab_size - general) / p.n_clusters : 0;
  if (per_cluster < std::max<std::size_t>(8, 2 * p.subtopics_per_cluster)) {
    fail("vocab_size too small for the number of clusters and subtopics");
  }
}

namespace {

// Fixed generators only: the engine is specified by the standard, and all
// derived draws are computed here so the output does not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  std::size_t below(std::size_t n) { return n ? static_cast<std::size_t>(next() % n) : 0; }
  double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return real() < p; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }
  std::size_t binomial(std::size_t trials, double p) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < trials; ++i) k += chance(p) ? 1 : 0;
    return k;
  }

 private:
  std::mt19937_64 engine_;
};

struct Inventory {
  std::string_view consonants;
  std::string_view vowels;
};

constexpr Inventory kInventories[3] = {
    {"bcdflmnprstv", "aeiou"},    // EN
    {"bcdfjlmnprstv", "aeiou"},   // FR
    {"bdfghklmnprstwz", "aeiou"}  // DE
};
constexpr std::string_view kFinals = "tkmpdg";

std::string syllables(Rng& rng, const Inventory& inv, std::size_t n) {
  std::string w;
  for (std::size_t i = 0; i < n; ++i) {
    w.push_back(inv.consonants[rng.below(inv.consonants.size())]);
    w.push_back(inv.vowels[rng.below(inv.vowels.size())]);
  }
  return w;
}

std::string_view inflection(Language lang) {
  switch (lang) {
    case Language::EN: return "s";
    case Language::FR: return "s";
    case Language::DE: return "en";
  }
  return "s";
}

// Stopwords interleaved with content words; all appear in the default lists.
const std::vector<std::string>& filler(Language lang) {
  static const std::vector<std::string> en = {"the", "of", "and", "a", "to", "in", "is", "for", "with", "which"};
  static const std::vector<std::string> fr = {"le", "la", "de", "des", "et", "un", "une", "pour", "avec", "dans"};
  static const std::vector<std::string> de = {"der", "die", "das", "und", "ein", "eine", "mit", "für", "von", "zur"};
  switch (lang) {
    case Language::EN: return en;
    case Language::FR: return fr;
    case Language::DE: return de;
  }
  return en;
}

std::string_view citation_intro(Language lang) {
  switch (lang) {
    case Language::EN: return "as in";
    case Language::FR: return "comme dans";
    case Language::DE: return "wie in";
  }
  return "as in";
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

struct Applicant {
  std::string base;
  std::string mark;
  std::string country;
  std::vector<std::string> inventors;  // "Given Family"
};

struct Cluster {
  std::string class3;
  std::vector<std::string> ecla;
  std::vector<std::uint32_t> words;
  std::vector<std::size_t> applicants;  // indexes into the applicant pool
  std::vector<std::uint32_t> subtopics;
};

struct Subtopic {
  std::uint32_t cluster = 0;
  std::vector<std::uint32_t> focus;
  std::vector<std::vector<std::uint32_t>> collocations;
  std::string ipc;
  std::string ecla;
};

// A token of generated text: a content word (>= 0) with an inflection flag,
// a filler stopword (< 0), or a citation placeholder.
struct Tok {
  std::int32_t word = 0;
  bool inflect = false;
  std::string literal;  // used instead of `word` when non-empty
};
using Sentence = std::vector<Tok>;

struct Profile {
  std::uint32_t subtopic = 0;
  std::vector<std::uint32_t> own;
  Language language = Language::EN;
  std::vector<std::size_t> applicants;
  std::vector<std::string> inventors;
};

class Generator {
 public:
  Generator(std::uint64_t seed, const SynParams& p) : rng_(seed), p_(p) {}

  SyntheticCorpus run() {
    build_vocabulary();
    build_world();
    build_patents();
    build_topics(p_.n_train_topics, 2500000, out_.train_topics, out_.train_qrels, 1);
    build_topics(p_.n_test_topics, 2000000, out_.test_topics, out_.test_qrels, 2);
    build_terminology();
    return std::move(out_);
  }

 private:
  // --- vocabulary -------------------------------------------------------------------

  std::string fresh_word(Language lang, std::unordered_set<std::string>& used) {
    const auto& lex = Lexicons::defaults().get(lang);
    const auto& inv = kInventories[static_cast<int>(lang)];
    for (;;) {
      std::string w = syllables(rng_, inv, 2 + rng_.below(2));
      w.push_back(kFinals[rng_.below(kFinals.size())]);
      if (used.count(w) || lex.is_stopword(w)) continue;
      const std::string inflected = w + std::string(inflection(lang));
      if (lex.lemma(w) != w || lex.lemma(inflected) != w || lex.is_stopword(inflected)) continue;
      used.insert(w);
      return w;
    }
  }

  void build_vocabulary() {
    std::unordered_set<std::string> used[3];
    forms_.resize(p_.vocab_size);
    for (auto& f : forms_) {
      for (auto lang : kLanguages) f[static_cast<int>(lang)] = fresh_word(lang, used[static_cast<int>(lang)]);
    }
  }

  std::string name_word() {
    std::string w = syllables(rng_, kInventories[0], 2 + rng_.below(2));
    w.push_back("nrlx"[rng_.below(4)]);
    return capitalize(w);
  }

  // --- clusters, subtopics, applicants -----------------------------------------------

  void build_world() {
    general_count_ = std::max<std::size_t>(10, p_.vocab_size / 5);
    const std::size_t per_cluster = (p_.vocab_size - general_count_) / p_.n_clusters;
    static const std::vector<std::string> marks = {"GmbH", "AG", "Inc.", "Ltd.", "Corporation",
                                                   "S.A.", "Kabushiki Kaisha", "B.V.", "plc", "SpA"};
    static const std::vector<std::string> countries = {"Germany", "France", "Japan", "USA", "United Kingdom",
                                                       "Italy", "Netherlands", "Switzerland", "Sweden"};
    for (std::size_t c = 0; c < p_.n_clusters; ++c) {
      Cluster cl;
      char buf[8];
      std::snprintf(buf, sizeof(buf), "%c%02d", "ABCDEFGH"[c % 8], static_cast<int>(1 + c / 8));
      cl.class3 = buf;
      for (std::size_t k = 0; k < p_.ecla_per_cluster; ++k) {
        cl.ecla.push_back(cl.class3 + "B" + std::to_string(k + 1) + "/02");
      }
      for (std::size_t k = 0; k < per_cluster; ++k) {
        cl.words.push_back(static_cast<std::uint32_t>(general_count_ + c * per_cluster + k));
      }
      for (std::size_t a = 0; a < 4; ++a) {
        Applicant app;
        app.base = name_word();
        app.mark = rng_.pick(marks);
        app.country = rng_.pick(countries);
        for (std::size_t k = 0; k < 8; ++k) app.inventors.push_back(name_word() + " " + name_word());
        cl.applicants.push_back(applicants_.size());
        applicants_.push_back(std::move(app));
      }
      const std::size_t slice = std::max<std::size_t>(2, per_cluster / p_.subtopics_per_cluster);
      for (std::size_t s = 0; s < p_.subtopics_per_cluster; ++s) {
        Subtopic st;
        st.cluster = static_cast<std::uint32_t>(c);
        for (std::size_t k = 0; k < slice; ++k) st.focus.push_back(cl.words[(s * slice + k) % cl.words.size()]);
        for (int pair = 0; pair < 2; ++pair) {
          auto a = rng_.pick(st.focus);
          auto b = rng_.pick(st.focus);
          if (a != b) st.collocations.push_back({a, b});
        }
        if (st.focus.size() >= 3) {
          std::vector<std::uint32_t> tri = st.focus;
          rng_.shuffle(tri);
          tri.resize(3);
          st.collocations.push_back(tri);
        }
        st.ipc = cl.class3 + static_cast<char>('B' + s % 5) + " " + std::to_string(1 + s) + "/00";
        st.ecla = cl.ecla[s % cl.ecla.size()];
        cl.subtopics.push_back(static_cast<std::uint32_t>(subtopics_.size()));
        subtopics_.push_back(std::move(st));
      }
      clusters_.push_back(std::move(cl));
    }
  }

  // --- text ---------------------------------------------------------------------------

  std::uint32_t draw_word(const Profile& pr) {
    const auto& st = subtopics_[pr.subtopic];
    const auto& cl = clusters_[st.cluster];
    const double r = rng_.real();
    if (r < 0.35) return rng_.pick(st.focus);
    if (r < 0.55 && !pr.own.empty()) return rng_.pick(pr.own);
    if (r < 0.80) return rng_.pick(cl.words);
    return static_cast<std::uint32_t>(rng_.below(general_count_));
  }

  Sentence sentence(const Profile& pr, std::size_t words, bool fillers = true) {
    Sentence s;
    const auto& st = subtopics_[pr.subtopic];
    std::size_t emitted = 0;
    while (emitted < words) {
      if (fillers && rng_.chance(0.35)) {
        s.push_back({-1 - static_cast<std::int32_t>(rng_.below(10)), false, {}});
      }
      if (!st.collocations.empty() && rng_.chance(0.08)) {
        for (auto w : rng_.pick(st.collocations)) s.push_back({static_cast<std::int32_t>(w), false, {}});
        emitted += 2;
        continue;
      }
      s.push_back({static_cast<std::int32_t>(draw_word(pr)), rng_.chance(0.3), {}});
      ++emitted;
    }
    return s;
  }

  std::string render(const Sentence& s, Language lang, bool period = true) const {
    std::string out;
    for (const auto& t : s) {
      if (!out.empty()) out.push_back(' ');
      if (!t.literal.empty()) {
        out += t.literal;
      } else if (t.word < 0) {
        out += filler(lang)[static_cast<std::size_t>(-1 - t.word)];
      } else {
        out += forms_[static_cast<std::size_t>(t.word)][static_cast<int>(lang)];
        if (t.inflect) out += inflection(lang);
      }
    }
    if (period && !out.empty()) out.push_back('.');
    return out;
  }

  std::string citation_mention(const std::string& id) {
    const std::string digits = id.substr(2);
    switch (rng_.below(3)) {
      case 0: return "EP " + digits.substr(0, 1) + " " + digits.substr(1, 3) + " " + digits.substr(4) + " A1";
      case 1: return "EP" + digits;
      default: return "EP-" + digits;
    }
  }

  // Description paragraphs; each cited id is mentioned in a random paragraph.
  std::string description(const Profile& pr, const std::vector<std::string>& cited) {
    std::vector<Sentence> paragraphs;
    for (std::size_t k = 0; k < p_.description_paragraphs; ++k) {
      paragraphs.push_back(sentence(pr, p_.paragraph_words));
    }
    for (const auto& id : cited) {
      auto& para = paragraphs[rng_.below(paragraphs.size())];
      Sentence cite = sentence(pr, 6);
      cite.push_back({0, false, std::string(citation_intro(pr.language))});
      cite.push_back({0, false, citation_mention(id)});
      auto tail = sentence(pr, 4);
      cite.insert(cite.end(), tail.begin(), tail.end());
      para.insert(para.end(), cite.begin(), cite.end());
    }
    std::string out;
    for (std::size_t k = 0; k < paragraphs.size(); ++k) {
      if (k) out.push_back('\n');
      out += render(paragraphs[k], pr.language);
    }
    return out;
  }

  Sentence title_words(const Profile& pr) {
    Sentence s;
    const auto& st = subtopics_[pr.subtopic];
    for (int k = 0; k < 4; ++k) {
      auto w = (k % 2 == 0 || pr.own.empty()) ? rng_.pick(st.focus) : rng_.pick(pr.own);
      s.push_back({static_cast<std::int32_t>(w), false, {}});
    }
    return s;
  }

  PatentRecord make_record(const std::string& id, const Profile& pr, std::int64_t pub_day,
                           const std::vector<std::string>& cited) {
    PatentRecord rec;
    rec.id = id;
    rec.language = pr.language;
    const auto& st = subtopics_[pr.subtopic];
    const auto& cl = clusters_[st.cluster];

    PublicationVersion a1;
    a1.kind = VersionKind::A1;
    a1.date = iso_date(pub_day);
    const Sentence title = title_words(pr);
    const Sentence abstract_text = sentence(pr, 20);
    Sentence claims = sentence(pr, 20);
    const Sentence claims2 = sentence(pr, 20);
    claims.insert(claims.end(), claims2.begin(), claims2.end());
    a1.title.get(pr.language) = render(title, pr.language, false);
    a1.abstract_text.get(pr.language) = render(abstract_text, pr.language);
    a1.claims.get(pr.language) = render(claims, pr.language);
    a1.description = description(pr, cited);
    rec.versions.push_back(a1);
    if (rng_.chance(p_.b1_fraction)) {
      PublicationVersion b1;
      b1.kind = VersionKind::B1;
      b1.date = iso_date(pub_day + 700 + static_cast<std::int64_t>(rng_.below(400)));
      for (auto lang : kLanguages) {
        b1.title.get(lang) = render(title, lang, false);
        b1.claims.get(lang) = render(claims, lang);
      }
      b1.abstract_text.get(pr.language) = a1.abstract_text.get(pr.language);
      b1.description = a1.description;
      rec.versions.push_back(std::move(b1));
    }

    for (auto a : pr.applicants) {
      const auto& app = applicants_[a];
      std::string name = app.base + " " + app.mark;
      if (rng_.chance(0.5)) name += ", " + app.country;
      rec.applicants.push_back(std::move(name));
    }
    for (const auto& inv : pr.inventors) {
      const double r = rng_.real();
      rec.inventors.push_back(r < 0.15 ? "Dr. " + inv : r < 0.2 ? "Prof. Dr. " + inv : inv);
    }
    rec.ipc_classes.push_back(st.ipc);
    if (rng_.chance(0.3)) {
      const auto& other = subtopics_[rng_.pick(cl.subtopics)].ipc;
      if (other != st.ipc) rec.ipc_classes.push_back(other);
    }
    if (rng_.chance(0.1)) {
      const auto& far = clusters_[rng_.below(clusters_.size())];
      const auto& other = subtopics_[far.subtopics.front()].ipc;
      if (std::find(rec.ipc_classes.begin(), rec.ipc_classes.end(), other) == rec.ipc_classes.end()) {
        rec.ipc_classes.push_back(other);
      }
    }
    rec.ecla_classes.push_back(st.ecla);
    if (rng_.chance(0.3)) {
      const auto& other = rng_.pick(cl.ecla);
      if (other != st.ecla) rec.ecla_classes.push_back(other);
    }
    rec.priority_date = iso_date(pub_day - 540 - static_cast<std::int64_t>(rng_.below(60)));
    return rec;
  }

  Profile fresh_profile(std::uint32_t subtopic, Language lang) {
    Profile pr;
    pr.subtopic = subtopic;
    pr.language = lang;
    const auto& cl = clusters_[subtopics_[subtopic].cluster];
    for (int k = 0; k < 6; ++k) pr.own.push_back(rng_.pick(cl.words));
    pr.applicants.push_back(rng_.pick(cl.applicants));
    if (rng_.chance(0.1)) {
      auto second = rng_.pick(cl.applicants);
      if (second != pr.applicants.front()) pr.applicants.push_back(second);
    }
    const auto& pool = applicants_[pr.applicants.front()].inventors;
    const std::size_t n_inv = 1 + rng_.below(3);
    for (std::size_t k = 0; k < n_inv; ++k) {
      const auto& inv = rng_.pick(pool);
      if (std::find(pr.inventors.begin(), pr.inventors.end(), inv) == pr.inventors.end()) {
        pr.inventors.push_back(inv);
      }
    }
    return pr;
  }

  std::vector<Language> allocate_languages(std::size_t n) {
    const double w[3] = {p_.lang_en, p_.lang_fr, p_.lang_de};
    const double total = w[0] + w[1] + w[2];
    std::size_t count[3];
    double rem[3];
    std::size_t assigned = 0;
    for (int i = 0; i < 3; ++i) {
      const double exact = static_cast<double>(n) * w[i] / total;
      count[i] = static_cast<std::size_t>(std::floor(exact));
      rem[i] = exact - static_cast<double>(count[i]);
      assigned += count[i];
    }
    while (assigned < n) {
      int best = 0;
      for (int i = 1; i < 3; ++i) {
        if (rem[i] > rem[best]) best = i;
      }
      ++count[best];
      rem[best] = -1.0;
      ++assigned;
    }
    std::vector<Language> out;
    for (int i = 0; i < 3; ++i) out.insert(out.end(), count[i], kLanguages[i]);
    rng_.shuffle(out);
    return out;
  }

  // Preferential attachment: weight 1 + in-degree.
  std::optional<std::uint32_t> weighted_pick(const std::vector<std::uint32_t>& pool, std::size_t limit) {
    double total = 0.0;
    std::size_t n = 0;
    for (auto o : pool) {
      if (o >= limit) break;
      total += 1.0 + indegree_[o];
      ++n;
    }
    if (n == 0) return std::nullopt;
    double r = rng_.real() * total;
    for (std::size_t i = 0; i < n; ++i) {
      r -= 1.0 + indegree_[pool[i]];
      if (r < 0.0) return pool[i];
    }
    return pool[n - 1];
  }

  std::optional<std::uint32_t> related_patent(std::uint32_t subtopic, std::size_t limit) {
    const double r = rng_.real();
    if (r < 0.7) return weighted_pick(subtopic_members_[subtopic], limit);
    if (r < 0.9) return weighted_pick(cluster_members_[subtopics_[subtopic].cluster], limit);
    if (limit == 0) return std::nullopt;
    return static_cast<std::uint32_t>(rng_.below(limit));
  }

  static std::string patent_id(std::size_t base, std::size_t i) {
    return "EP" + std::to_string(base + 3 * i + 1);
  }

  // --- collection -------------------------------------------------------------------

  void build_patents() {
    const std::size_t n = p_.n_patents;
    const auto langs = allocate_languages(n);
    subtopic_members_.assign(subtopics_.size(), {});
    cluster_members_.assign(clusters_.size(), {});
    indegree_.assign(n, 0);
    profiles_.reserve(n);
    const std::int64_t start = 9131;  // 1995-01-01
    const std::int64_t span = 12 * 365;
    const std::size_t trials = static_cast<std::size_t>(std::ceil(2.0 * p_.citation_density));
    const double p_cite = trials ? p_.citation_density / static_cast<double>(trials) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Profile pr;
      std::optional<std::size_t> parent;
      if (i > 0 && rng_.chance(p_.family_fraction)) {
        parent = rng_.below(i);
        pr = profiles_[*parent];
        pr.language = langs[i];
      } else {
        pr = fresh_profile(static_cast<std::uint32_t>(rng_.below(subtopics_.size())), langs[i]);
      }
      const std::uint32_t sub = pr.subtopic;

      std::vector<std::string> cited;
      std::set<std::uint32_t> seen;
      const std::size_t k = rng_.binomial(trials, p_cite);
      for (std::size_t c = 0; c < k; ++c) {
        auto target = related_patent(sub, i);
        if (!target || !seen.insert(*target).second) continue;
        cited.push_back(out_.patents[*target].id);
        ++indegree_[*target];
      }
      const std::int64_t day = start + static_cast<std::int64_t>(i) * span / static_cast<std::int64_t>(n);
      PatentRecord rec = make_record(patent_id(1000000, i), pr, day, cited);
      if (parent) {
        const auto& par = out_.patents[*parent];
        rec.priority_ids = {par.id, par.priority_ids.front()};
      } else {
        rec.priority_ids = {"US" + std::to_string(60000000 + 7 * i)};
      }
      out_.patents.push_back(std::move(rec));
      out_.cluster.push_back(subtopics_[sub].cluster);
      out_.subtopic.push_back(sub);
      subtopic_members_[sub].push_back(static_cast<std::uint32_t>(i));
      cluster_members_[subtopics_[sub].cluster].push_back(static_cast<std::uint32_t>(i));
      profiles_.push_back(std::move(pr));
    }
    end_day_ = start + span;
  }

  // --- topics -----------------------------------------------------------------------

  void build_topics(std::size_t count, std::size_t id_base, std::vector<PatentRecord>& topics, Qrels& qrels,
                    std::int64_t offset_years) {
    std::vector<std::uint32_t> populated;
    for (std::uint32_t s = 0; s < subtopics_.size(); ++s) {
      if (!subtopic_members_[s].empty()) populated.push_back(s);
    }
    const auto langs = allocate_languages(count);
    const std::size_t n = out_.patents.size();
    for (std::size_t t = 0; t < count; ++t) {
      const std::uint32_t sub = rng_.pick(populated);
      const auto& members = subtopic_members_[sub];
      Profile pr = fresh_profile(sub, langs[t]);
      auto& rel = qrels[patent_id(id_base, t)];

      if (rng_.chance(0.3)) {  // planted near-duplicate
        const auto d = rng_.pick(members);
        pr.own = profiles_[d].own;
        pr.applicants = profiles_[d].applicants;
        rel[out_.patents[d].id] = 2;
      } else if (rng_.chance(0.4)) {
        pr.applicants = profiles_[rng_.pick(members)].applicants;
      }

      // Search-report citations: X and Y are highly relevant, A relevant.
      std::vector<std::string> mentioned;
      const std::size_t n_rel = 3 + rng_.below(5);
      for (std::size_t attempt = 0; attempt < 4 * n_rel && rel.size() < n_rel + 1; ++attempt) {
        auto target = related_patent(sub, n);
        if (!target) continue;
        const auto& id = out_.patents[*target].id;
        if (rel.count(id)) continue;
        const double r = rng_.real();
        rel[id] = r < 0.6 ? 2 : 1;
        if (rng_.chance(0.5)) mentioned.push_back(id);
      }
      if (rel.empty()) rel[out_.patents[rng_.pick(members)].id] = 2;

      const std::int64_t day = end_day_ + 365 * offset_years + static_cast<std::int64_t>(t % 300);
      topics.push_back(make_record(patent_id(id_base, t), pr, day, mentioned));
      topics.back().priority_ids = {"US" + std::to_string(70000000 + id_base + 7 * t)};
    }
  }

  // --- terminology -------------------------------------------------------------------

  void build_terminology() {
    std::set<DomainId> all;
    for (std::size_t c = 0; c < clusters_.size(); ++c) {
      const DomainId d = static_cast<DomainId>(c + 1);
      all.insert(d);
      out_.domains.add(clusters_[c].class3, {d});
    }
    std::vector<DomainId> domain_of(p_.vocab_size, 0);
    for (std::size_t c = 0; c < clusters_.size(); ++c) {
      for (auto w : clusters_[c].words) domain_of[w] = static_cast<DomainId>(c + 1);
    }
    for (std::size_t w = 0; w < p_.vocab_size; ++w) {
      ConceptEntry e;
      e.concept_id = static_cast<std::uint32_t>(w + 1);
      for (auto lang : kLanguages) e.terms.push_back({lang, forms_[w][static_cast<int>(lang)], lang == Language::EN});
      if (domain_of[w]) {
        e.domains = {domain_of[w]};
      } else {
        e.domains = all;
      }
      e.source = "syngen";
      out_.concepts.push_back(std::move(e));
    }
    // Homonyms: an English term of one cluster also names a concept of the
    // next cluster, so only the domain can tell them apart.
    std::uint32_t next_id = static_cast<std::uint32_t>(p_.vocab_size + 1);
    for (std::size_t c = 0; c < clusters_.size(); ++c) {
      const auto& here = clusters_[c];
      const auto& there = clusters_[(c + 1) % clusters_.size()];
      for (int k = 0; k < 2; ++k) {
        const auto w = rng_.pick(here.words);
        const auto v = rng_.pick(there.words);
        ConceptEntry e;
        e.concept_id = next_id++;
        e.terms.push_back({Language::EN, forms_[w][0], true});
        e.terms.push_back({Language::FR, forms_[v][1], false});
        e.terms.push_back({Language::DE, forms_[v][2], false});
        e.domains = {domain_of[v]};
        e.source = "syngen-homonym";
        out_.concepts.push_back(std::move(e));
      }
    }
  }

  Rng rng_;
  const SynParams& p_;
  SyntheticCorpus out_;
  std::vector<std::array<std::string, 3>> forms_;
  std::size_t general_count_ = 0;
  std::vector<Applicant> applicants_;
  std::vector<Cluster> clusters_;
  std::vector<Subtopic> subtopics_;
  std::vector<Profile> profiles_;
  std::vector<std::vector<std::uint32_t>> subtopic_members_;
  std::vector<std::vector<std::uint32_t>> cluster_members_;
  std::vector<std::uint32_t> indegree_;
  std::int64_t end_day_ = 0;
};

}  // namespace

SyntheticCorpus generate(std::uint64_t seed, const SynParams& params) {
  validate(params);
  return Generator(seed, params).run();
}

void write_synthetic(const SyntheticCorpus& corpus, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  const std::filesystem::path d(dir);
  write_records((d / "corpus.jsonl").string(), corpus.patents);
  write_records((d / "topics_train.jsonl").string(), corpus.train_topics);
  write_records((d / "topics_test.jsonl").string(), corpus.test_topics);
  write_qrels((d / "qrels_train.txt").string(), corpus.train_qrels);
  write_qrels((d / "qrels_test.txt").string(), corpus.test_qrels);
  write_termdb((d / "termdb.tsv").string(), corpus.concepts);
  corpus.domains.save((d / "domains.tsv").string());
}

}  // namespace priorart
