#include "priorart/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "priorart/error.hpp"
#include "priorart/lexicon.hpp"
#include "priorart/trec.hpp"

namespace priorart {

namespace {

std::string unquote(std::string_view v) {
  v = trim(v);
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) {
    v = v.substr(1, v.size() - 2);
  }
  return std::string(v);
}

double to_double(std::string_view key, std::string_view v) {
  std::string s = unquote(v);
  double out = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(out)) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + s + "'");
  }
  return out;
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
  std::string s = unquote(v);
  std::uint64_t out = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" + s + "'");
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  std::string s = ascii_lower(unquote(v));
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" + s + "'");
}

std::vector<double> to_list(std::string_view key, std::string_view v) {
  std::string s = unquote(v);
  std::string_view body = trim(s);
  if (!body.empty() && body.front() == '[' && body.back() == ']') body = body.substr(1, body.size() - 2);
  std::vector<double> out;
  for (auto item : split(body, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(to_double(key, trim(item)));
  }
  if (out.empty()) throw ConfigError(std::string(key) + ": expected a non-empty list");
  return out;
}

std::string from_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_score(v[i]);
  }
  return out;
}

std::string from_models(const std::vector<std::string>& v) {
  if (v.empty()) return "all";
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += v[i];
  }
  return out;
}

struct Entry {
  std::function<std::string()> get;
  std::function<void(std::string_view)> set;
};

std::map<std::string, Entry> table(PipelineConfig& c) {
  std::map<std::string, Entry> t;
  auto u64 = [&t](const std::string& key, auto& field) {
    using T = std::remove_reference_t<decltype(field)>;
    t[key] = {[&field] { return std::to_string(field); },
              [&field, key](std::string_view v) { field = static_cast<T>(to_u64(key, v)); }};
  };
  auto real = [&t](const std::string& key, double& field) {
    t[key] = {[&field] { return format_score(field); },
              [&field, key](std::string_view v) { field = to_double(key, v); }};
  };
  auto flag = [&t](const std::string& key, bool& field) {
    t[key] = {[&field] { return std::string(field ? "true" : "false"); },
              [&field, key](std::string_view v) { field = to_bool(key, v); }};
  };
  auto list = [&t](const std::string& key, std::vector<double>& field) {
    t[key] = {[&field] { return from_list(field); },
              [&field, key](std::string_view v) { field = to_list(key, v); }};
  };
  auto learner = [&t](const std::string& key, ModelKind& field) {
    t[key] = {[&field] { return std::string(model_kind_name(field)); },
              [&field, key](std::string_view v) {
                try {
                  field = parse_model_kind(unquote(v));
                } catch (const Error& e) {
                  throw ConfigError(key + ": " + e.what());
                }
              }};
  };

  u64("seed", c.seed);
  u64("threads", c.threads);
  flag("monolingual", c.monolingual);

  u64("gen.n_patents", c.gen.n_patents);
  u64("gen.n_clusters", c.gen.n_clusters);
  u64("gen.subtopics_per_cluster", c.gen.subtopics_per_cluster);
  u64("gen.vocab_size", c.gen.vocab_size);
  real("gen.lang_en", c.gen.lang_en);
  real("gen.lang_de", c.gen.lang_de);
  real("gen.lang_fr", c.gen.lang_fr);
  real("gen.citation_density", c.gen.citation_density);
  u64("gen.ecla_per_cluster", c.gen.ecla_per_cluster);
  real("gen.family_fraction", c.gen.family_fraction);
  real("gen.b1_fraction", c.gen.b1_fraction);
  u64("gen.n_train_topics", c.gen.n_train_topics);
  u64("gen.n_test_topics", c.gen.n_test_topics);
  u64("gen.description_paragraphs", c.gen.description_paragraphs);
  u64("gen.paragraph_words", c.gen.paragraph_words);

  u64("phrase.min_count", c.phrase_min_count);
  real("phrase.dice_threshold", c.phrase_dice_threshold);

  real("kl.lambda", c.retrieval.kl.lambda);
  real("bm25.k1", c.retrieval.bm25.k1);
  real("bm25.b", c.retrieval.bm25.b);
  real("bm25.k3", c.retrieval.bm25.k3);
  u64("retrieve.cutoff", c.retrieval.cutoff);
  t["retrieve.models"] = {[&c] { return from_models(c.models); },
                          [&c](std::string_view v) {
                            std::string s = unquote(v);
                            c.models.clear();
                            if (trim(s) == "all") return;
                            for (auto item : split(s, ',')) {
                              auto id = std::string(trim(item));
                              if (id.empty()) continue;
                              try {
                                parse_model_id(id);
                              } catch (const Error& e) {
                                throw ConfigError("retrieve.models: " + std::string(e.what()));
                              }
                              c.models.push_back(id);
                            }
                          }};

  flag("workset.enabled", c.worksets_enabled);
  u64("workset.lower", c.workset.lower);
  u64("workset.upper", c.workset.upper);
  u64("workset.cooccurrence_k", c.workset.cooccurrence_k);

  t["merge.training"] = {[&c] { return c.merge_training; },
                         [&c](std::string_view v) {
                           auto s = unquote(v);
                           if (s != "topics" && s != "validation") {
                             throw ConfigError("merge.training: expected 'topics' or 'validation', got '" + s + "'");
                           }
                           c.merge_training = s;
                         }};
  u64("merge.validation_size", c.validation_size);
  u64("merge.validation_min_citations", c.validation_min_citations);
  learner("merge.learner", c.merge_learner);

  flag("rerank.enabled", c.rerank_enabled);
  learner("rerank.learner", c.rerank_learner);
  u64("rerank.negatives", c.rerank_negatives);

  u64("train.folds", c.cv_folds);
  u64("train.max_rows", c.max_training_rows);
  list("train.ridge_grid", c.ridge_grid);
  list("train.gamma_grid", c.gamma_grid);
  list("train.reg_grid", c.reg_grid);

  t["eval.grade"] = {[&c] { return std::string(c.eval_grade == GradeFilter::AllRelevant ? "all" : "high"); },
                     [&c](std::string_view v) {
                       auto s = unquote(v);
                       if (s == "all") {
                         c.eval_grade = GradeFilter::AllRelevant;
                       } else if (s == "high") {
                         c.eval_grade = GradeFilter::HighlyRelevant;
                       } else {
                         throw ConfigError("eval.grade: expected 'all' or 'high', got '" + s + "'");
                       }
                     }};
  return t;
}

}  // namespace

const std::vector<std::string>& PipelineConfig::keys() {
  static const std::vector<std::string> k = [] {
    PipelineConfig c;
    std::vector<std::string> out;
    for (const auto& [key, _] : table(c)) out.push_back(key);
    return out;
  }();
  return k;
}

void PipelineConfig::set(std::string_view key, std::string_view value) {
  auto t = table(*this);
  auto it = t.find(std::string(trim(key)));
  if (it == t.end()) throw ConfigError("unknown config key '" + std::string(trim(key)) + "'");
  it->second.set(value);
}

void PipelineConfig::load_text(std::string_view text) {
  std::string section;
  std::size_t lineno = 0;
  for (auto raw : split(text, '\n')) {
    ++lineno;
    std::string line(raw);
    // Strip comments outside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    std::string_view body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError("config line " + std::to_string(lineno) + ": bad section header");
      section = std::string(trim(body.substr(1, body.size() - 2)));
      continue;
    }
    auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key(trim(body.substr(0, eq)));
    if (!section.empty()) key = section + "." + key;
    try {
      set(key, body.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void PipelineConfig::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    load_text(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void PipelineConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (threads == 0 || threads > 1024) fail("threads must be in [1, 1024]");
  priorart::validate(gen);
  if (phrase_min_count == 0) fail("phrase.min_count must be positive");
  if (!(phrase_dice_threshold >= 0.0 && phrase_dice_threshold <= 1.0)) fail("phrase.dice_threshold must be in [0, 1]");
  priorart::validate(retrieval.kl);
  priorart::validate(retrieval.bm25);
  if (retrieval.cutoff == 0) fail("retrieve.cutoff must be positive");
  if (workset.lower > workset.upper) fail("workset.lower must not exceed workset.upper");
  if (workset.upper == 0) fail("workset.upper must be positive");
  if (validation_size == 0) fail("merge.validation_size must be positive");
  if (validation_min_citations == 0) fail("merge.validation_min_citations must be positive");
  if (cv_folds < 2) fail("train.folds must be at least 2");
  if (max_training_rows < 2) fail("train.max_rows must be at least 2");
  for (double v : ridge_grid) {
    if (v < 0.0) fail("train.ridge_grid values must be non-negative");
  }
  for (double v : gamma_grid) {
    if (v <= 0.0) fail("train.gamma_grid values must be positive");
  }
  for (double v : reg_grid) {
    if (v < 0.0) fail("train.reg_grid values must be non-negative");
  }
}

std::vector<ModelSpec> PipelineConfig::model_specs() const {
  if (models.empty()) return all_models();
  std::vector<ModelSpec> out;
  for (const auto& id : models) out.push_back(parse_model_id(id));
  return out;
}

TrainingOptions PipelineConfig::training_options(ModelKind kind) const {
  TrainingOptions o;
  o.kind = kind;
  o.folds = cv_folds;
  o.max_rows = max_training_rows;
  if (kind == ModelKind::Linear) {
    for (double r : ridge_grid) o.grid.push_back({ModelKind::Linear, r, 1.0, 1.0});
  } else {
    for (double g : gamma_grid) {
      for (double r : reg_grid) o.grid.push_back({ModelKind::KernelRbf, 0.0, g, r});
    }
  }
  return o;
}

std::string PipelineConfig::canonical() const {
  PipelineConfig copy = *this;
  std::string out;
  for (const auto& [key, entry] : table(copy)) out += key + " = " + entry.get() + "\n";
  return out;
}

std::string PipelineConfig::hash() const {
  // The thread count never changes outputs, so it does not change the hash.
  PipelineConfig copy = *this;
  copy.threads = 1;
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : copy.canonical()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace priorart
