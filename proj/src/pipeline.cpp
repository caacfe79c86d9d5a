#include "priorart/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "priorart/error.hpp"
#include "priorart/fusion.hpp"
#include "priorart/index.hpp"
#include "priorart/lexicon.hpp"
#include "priorart/parallel.hpp"
#include "priorart/rerank.hpp"
#include "priorart/terminology.hpp"
#include "priorart/trec.hpp"

namespace fs = std::filesystem;

namespace priorart {

namespace {

const std::vector<std::string> kSplits = {"train", "validation", "test"};

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  for (auto f : split(line, '\t')) out.emplace_back(f);
  return out;
}

void ensure_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw IoError("cannot create directory " + p.string() + ": " + ec.message());
}

void require_file(const fs::path& p) {
  if (!fs::is_regular_file(p)) throw IoError("missing input file: " + p.string());
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
}

CorpusStore load_store(const Workspace& ws) {
  const auto path = ws.store() / "corpus.jsonl";
  require_file(path);
  return CorpusStore::load(path.string());
}

fs::path topics_path(const Workspace& ws, const std::string& split) {
  return ws.store() / ("topics_" + split + ".jsonl");
}

fs::path qrels_path(const Workspace& ws, const std::string& split) {
  return ws.store() / ("qrels_" + split + ".txt");
}

std::vector<PatentRecord> load_topics(const Workspace& ws, const CorpusStore& store, const std::string& split) {
  const auto path = topics_path(ws, split);
  require_file(path);
  auto raw = read_records(path.string());
  std::vector<PatentRecord> out;
  out.reserve(raw.size());
  for (auto& r : raw) out.push_back(store.prepare_topic(std::move(r)));
  return out;
}

Qrels load_qrels(const Workspace& ws, const std::string& split) {
  const auto path = qrels_path(ws, split);
  return fs::exists(path) ? read_qrels(path.string()) : Qrels{};
}

std::map<std::string, RankedList> lists_by_topic(const fs::path& run_path) {
  std::map<std::string, RankedList> out;
  if (!fs::exists(run_path)) return out;
  for (auto& l : read_run_file(run_path.string())) out[l.topic_id] = std::move(l);
  return out;
}

std::vector<RankedList> ordered_lists(const std::vector<PatentRecord>& topics,
                                      const std::vector<std::optional<RankedList>>& slots) {
  std::vector<RankedList> out;
  for (std::size_t i = 0; i < topics.size(); ++i) {
    if (slots[i]) out.push_back(*slots[i]);
  }
  return out;
}

WorkingSetParams workset_params(const PipelineConfig& cfg) { return cfg.workset; }

std::string merge_training_split(const PipelineConfig& cfg) {
  return cfg.merge_training == "validation" ? "validation" : "train";
}

bool dropped_in_monolingual(const PipelineConfig& cfg, const ModelSpec& model, Language topic_language) {
  if (!cfg.monolingual) return false;
  auto lang = model_language(model);
  return lang && *lang != topic_language;
}

// --- merging inputs ---------------------------------------------------------------

std::vector<TopicRuns> collect_topic_runs(const Workspace& ws, const PipelineConfig& cfg, const CorpusStore& store,
                                          const std::string& split) {
  auto topics = load_topics(ws, store, split);
  std::map<std::string, std::size_t> ws_size;
  const auto members = ws.worksets() / (split + ".tsv");
  const auto trace = ws.worksets() / (split + ".trace.csv");
  if (cfg.worksets_enabled && fs::exists(members) && fs::exists(trace)) {
    for (const auto& s : read_working_sets(members.string(), trace.string())) {
      ws_size[s.topic_id] = s.active ? s.members.size() : 0;
    }
  }
  std::map<std::string, std::map<std::string, QueryStats>> stats;
  {
    const auto path = ws.runs(split) / "query_stats.tsv";
    require_file(path);
    std::ifstream in(path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (lineno == 1 || line.empty()) continue;
      auto f = split_fields(line);
      if (f.size() != 4) throw ParseError(path.string() + ": expected 4 fields", 0, lineno);
      QueryStats st;
      st.query_size = std::stoull(f[2]);
      if (f[3] != "-") st.mean_phrase_words = std::stod(f[3]);
      stats[f[0]][f[1]] = st;
    }
  }
  std::vector<TopicRuns> out(topics.size());
  for (std::size_t i = 0; i < topics.size(); ++i) {
    out[i].topic = topics[i];
    auto it = ws_size.find(topics[i].id);
    out[i].working_set_size = it == ws_size.end() ? 0 : it->second;
    out[i].stats = stats[topics[i].id];
  }
  for (const auto& spec : cfg.model_specs()) {
    const auto id = model_id(spec);
    auto lists = lists_by_topic(ws.runs(split) / (id + ".run"));
    for (auto& t : out) {
      if (dropped_in_monolingual(cfg, spec, t.topic.language)) continue;
      auto it = lists.find(t.topic.id);
      if (it != lists.end()) t.lists[id] = std::move(it->second);
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> Workspace::splits() const {
  std::vector<std::string> out;
  for (const auto& s : kSplits) {
    if (fs::exists(store() / ("topics_" + s + ".jsonl"))) out.push_back(s);
  }
  return out;
}

void record_stage(const Workspace& ws, const PipelineConfig& cfg, const std::string& stage, double seconds) {
  nlohmann::ordered_json j;
  if (fs::exists(ws.manifest())) {
    try {
      j = nlohmann::ordered_json::parse(read_text(ws.manifest()));
    } catch (const nlohmann::json::exception&) {
      j = nlohmann::ordered_json::object();
    }
  }
  j["format"] = 1;
  if (j.contains("config_hash") && j["config_hash"] != cfg.hash()) j["stages"] = nlohmann::ordered_json::object();
  j["config_hash"] = cfg.hash();
  j["stages"][stage] = {{"seconds", seconds}};
  ensure_dir(ws.root);
  write_text(ws.manifest(), j.dump(2) + "\n");
}

// --- gen ------------------------------------------------------------------------------

void stage_gen(const Workspace& ws, const PipelineConfig& cfg, StageLog& log) {
  auto corpus = generate(cfg.seed, cfg.gen);
  write_synthetic(corpus, ws.input().string());
  log.out << "gen: " << corpus.patents.size() << " patents, " << corpus.train_topics.size() << " train topics, "
          << corpus.test_topics.size() << " test topics, " << corpus.concepts.size() << " concepts -> "
          << ws.input().string() << "\n";
}

// --- ingest ---------------------------------------------------------------------------

void stage_ingest(const Workspace& ws, const PipelineConfig& cfg, const IngestPaths& paths, StageLog& log) {
  auto pick = [&](const std::optional<std::string>& given, const char* name) {
    return given ? fs::path(*given) : ws.input() / name;
  };
  const auto corpus_path = pick(paths.corpus, "corpus.jsonl");
  require_file(corpus_path);
  auto store = CorpusStore::load(corpus_path.string());
  ensure_dir(ws.store());
  write_records((ws.store() / "corpus.jsonl").string(), store.records());
  {
    std::ofstream out(ws.store() / "citations.tsv", std::ios::binary);
    out << "from\tto\tcategory\n";
    for (const auto& e : store.citation_edges()) {
      out << e.from_id << '\t' << e.to_id << '\t' << citation_category_name(e.category) << '\n';
    }
  }
  std::size_t topic_count = 0;
  for (const char* split : {"train", "test"}) {
    const std::string s(split);
    const auto tp = pick(s == "train" ? paths.topics_train : paths.topics_test, ("topics_" + s + ".jsonl").c_str());
    const auto qp = pick(s == "train" ? paths.qrels_train : paths.qrels_test, ("qrels_" + s + ".txt").c_str());
    if (!fs::exists(tp)) {
      // Only an explicitly named file is required.
      if ((s == "train" ? paths.topics_train : paths.topics_test)) require_file(tp);
      fs::remove(topics_path(ws, s));
      fs::remove(qrels_path(ws, s));
      continue;
    }
    std::vector<PatentRecord> topics;
    for (auto& r : read_records(tp.string())) {
      if (store.ordinal(r.id)) log.err << "warning: " << s << " topic " << r.id << " is also a collection patent\n";
      topics.push_back(store.normalized(std::move(r)));
    }
    write_records(topics_path(ws, s).string(), topics);
    topic_count += topics.size();
    if (fs::exists(qp)) {
      auto q = read_qrels(qp.string());
      for (const auto& [topic, docs] : q) {
        for (const auto& [doc, _] : docs) {
          if (!store.ordinal(doc)) log.err << "warning: qrels for " << topic << " reference unknown patent " << doc << "\n";
        }
      }
      write_qrels(qrels_path(ws, s).string(), q);
    } else {
      if ((s == "train" ? paths.qrels_train : paths.qrels_test)) require_file(qp);
      fs::remove(qrels_path(ws, s));
    }
  }
  if (cfg.merge_training == "validation") {
    std::vector<std::string> warnings;
    auto vs = build_validation_set(store, cfg.validation_size, cfg.validation_min_citations, &warnings);
    for (const auto& w : warnings) log.err << "warning: " << w << "\n";
    std::vector<PatentRecord> topics;
    for (const auto& id : vs.topic_ids) topics.push_back(store.record(*store.ordinal(id)));
    write_records(topics_path(ws, "validation").string(), topics);
    write_qrels(qrels_path(ws, "validation").string(), vs.qrels);
  } else {
    fs::remove(topics_path(ws, "validation"));
    fs::remove(qrels_path(ws, "validation"));
  }

  const auto termdb = pick(paths.termdb, "termdb.tsv");
  const auto domains = pick(paths.domains, "domains.tsv");
  if (paths.termdb) require_file(termdb);
  if (paths.domains) require_file(domains);
  std::size_t concepts = 0;
  if (fs::exists(termdb)) {
    auto db = TerminologyDB::load(termdb.string());
    concepts = db.concepts().size();
    write_text(ws.store() / "termdb.tsv", read_text(termdb));
  } else {
    fs::remove(ws.store() / "termdb.tsv");
  }
  if (fs::exists(domains)) {
    DomainMap::load(domains.string()).save((ws.store() / "domains.tsv").string());
  } else {
    fs::remove(ws.store() / "domains.tsv");
  }
  log.out << "ingest: " << store.size() << " patents, " << store.citation_edges().size() << " citation edges, "
          << topic_count << " topics, " << concepts << " concepts\n";
}

// --- index ----------------------------------------------------------------------------

void stage_index(const Workspace& ws, const PipelineConfig& cfg, StageLog& log) {
  auto store = load_store(ws);
  auto metadocs = build_metadocs(store);
  std::vector<CitationEdge> edges;
  for (const auto& e : store.citation_edges()) {
    if (cfg.monolingual) {
      // Citation texts only cross between patents of the same language.
      const auto& from = store.record(*store.ordinal(e.from_id));
      const auto& to = store.record(*store.ordinal(e.to_id));
      if (from.language != to.language) continue;
    }
    edges.push_back(e);
  }
  append_citation_texts(metadocs, store, edges);

  const auto& lex = Lexicons::defaults();
  std::vector<TokenStream> streams(metadocs.size());
  parallel_for(metadocs.size(), cfg.threads,
               [&](std::size_t i) { streams[i] = analyze_text(metadocs[i].text_in(Language::EN), lex.en); });
  PhraseParams pp;
  pp.min_count = cfg.phrase_min_count;
  pp.dice_threshold = cfg.phrase_dice_threshold;
  auto phrases = extract_phrases(streams, pp);
  streams.clear();
  ensure_dir(ws.index());
  phrases.save((ws.index() / "phrases.tsv").string());

  TerminologyDB termdb;
  DomainMap domains;
  if (fs::exists(ws.store() / "termdb.tsv")) termdb = TerminologyDB::load((ws.store() / "termdb.tsv").string());
  if (fs::exists(ws.store() / "domains.tsv")) domains = DomainMap::load((ws.store() / "domains.tsv").string());
  AnalysisResources res;
  res.phrases = &phrases;
  res.termdb = &termdb;
  res.domains = &domains;

  std::set<AnalyzerKind> needed;
  for (const auto& m : cfg.model_specs()) needed.insert(m.analyzer);
  for (auto kind : kAnalyzerKinds) {
    if (!needed.count(kind)) continue;
    auto index = build_index(metadocs, kind, res, cfg.threads);
    index.save((ws.index() / (std::string(analyzer_name(kind)) + ".idx")).string());
    log.out << "index: " << analyzer_name(kind) << " " << index.num_docs() << " docs, " << index.num_terms()
            << " terms, " << index.collection_length() << " tokens\n";
  }
  log.out << "index: " << phrases.size() << " phrases\n";
}

void print_index_stats(const Workspace& ws, StageLog& log) {
  bool any = false;
  for (auto kind : kAnalyzerKinds) {
    const auto path = ws.index() / (std::string(analyzer_name(kind)) + ".idx");
    if (!fs::exists(path)) continue;
    any = true;
    auto index = TermIndex::load(path.string());
    auto audit = audit_index(index);
    log.out << analyzer_name(kind) << ": docs=" << index.num_docs() << " terms=" << index.num_terms()
            << " collection_length=" << index.collection_length() << " sum_doc_length=" << audit.sum_doc_length
            << " avg_doc_length=" << format_score(index.avg_doc_length())
            << " ctf_mismatches=" << audit.mismatched_ctf << " df_mismatches=" << audit.mismatched_df
            << " unsorted_postings=" << audit.unsorted_postings << " identities=" << (audit.ok() ? "ok" : "VIOLATED")
            << "\n";
  }
  if (!any) throw IoError("no index files in " + ws.index().string());
}

// --- working sets ---------------------------------------------------------------------

void stage_worksets(const Workspace& ws, const PipelineConfig& cfg, StageLog& log) {
  auto store = load_store(ws);
  auto cooc = ecla_cooccurrence(store);
  ensure_dir(ws.worksets());
  for (const auto& split : ws.splits()) {
    auto topics = load_topics(ws, store, split);
    std::vector<WorkingSet> sets(topics.size());
    std::vector<RankedList> cited(topics.size());
    parallel_for(topics.size(), cfg.threads, [&](std::size_t i) {
      auto params = workset_params(cfg);
      // Validation topics come from the collection: hide what was published
      // after their priority date.
      if (split == "validation" && !topics[i].priority_date.empty()) params.published_before = topics[i].priority_date;
      sets[i] = build_working_set(topics[i], store, cooc, params);
      cited[i] = cited_patents_run(topics[i], store);
    });
    write_working_sets((ws.worksets() / (split + ".tsv")).string(), (ws.worksets() / (split + ".trace.csv")).string(),
                       sets);
    ensure_dir(ws.runs(split));
    write_run_file((ws.runs(split) / "cited.run").string(), cited);
    std::size_t active = 0;
    for (const auto& s : sets) active += s.active ? 1 : 0;
    log.out << "worksets: " << split << " " << sets.size() << " topics, " << active << " active";
    auto qrels = load_qrels(ws, split);
    if (!qrels.empty()) {
      log.out << ", micro recall by step:";
      for (double r : micro_recall_by_step(sets, qrels, cfg.eval_grade)) log.out << ' ' << format_score(r);
    }
    log.out << "\n";
  }
}

// --- retrieval ------------------------------------------------------------------------

void stage_retrieve(const Workspace& ws, const PipelineConfig& cfg, StageLog& log) {
  auto store = load_store(ws);
  const auto specs = cfg.model_specs();
  std::map<AnalyzerKind, TermIndex> indexes;
  for (const auto& m : specs) {
    if (indexes.count(m.analyzer)) continue;
    const auto path = ws.index() / (std::string(analyzer_name(m.analyzer)) + ".idx");
    require_file(path);
    indexes.emplace(m.analyzer, TermIndex::load(path.string()));
  }
  PhraseVocabulary phrases;
  if (fs::exists(ws.index() / "phrases.tsv")) phrases = PhraseVocabulary::load((ws.index() / "phrases.tsv").string());
  TerminologyDB termdb;
  DomainMap domains;
  if (fs::exists(ws.store() / "termdb.tsv")) termdb = TerminologyDB::load((ws.store() / "termdb.tsv").string());
  if (fs::exists(ws.store() / "domains.tsv")) domains = DomainMap::load((ws.store() / "domains.tsv").string());

  for (const auto& split : ws.splits()) {
    auto topics = load_topics(ws, store, split);
    std::map<std::string, WorkingSet> sets;
    const auto members = ws.worksets() / (split + ".tsv");
    const auto trace = ws.worksets() / (split + ".trace.csv");
    if (cfg.worksets_enabled) {
      require_file(members);
      require_file(trace);
      for (auto& s : read_working_sets(members.string(), trace.string())) sets[s.topic_id] = std::move(s);
    }
    // results[model][topic]
    std::vector<std::vector<std::optional<RankedList>>> results(specs.size(),
                                                                std::vector<std::optional<RankedList>>(topics.size()));
    std::vector<std::vector<std::optional<QueryStats>>> stats(specs.size(),
                                                              std::vector<std::optional<QueryStats>>(topics.size()));
    std::vector<std::vector<std::string>> warnings(topics.size());
    parallel_for(topics.size(), cfg.threads, [&](std::size_t t) {
      const auto& topic = topics[t];
      const auto doc = build_metadoc(topic);
      AnalysisResources res;
      res.phrases = &phrases;
      res.termdb = &termdb;
      res.domains = &domains;
      if (cfg.monolingual) res.concept_language = topic.language;
      const std::vector<std::string>* restrict = nullptr;
      auto it = sets.find(topic.id);
      if (it != sets.end() && it->second.active) restrict = &it->second.members;
      std::map<AnalyzerKind, Query> queries;
      for (std::size_t m = 0; m < specs.size(); ++m) {
        if (dropped_in_monolingual(cfg, specs[m], topic.language)) continue;
        auto q = queries.find(specs[m].analyzer);
        if (q == queries.end()) {
          Query query;
          query.topic_id = topic.id;
          query.terms = analyze_to_terms(doc, specs[m].analyzer, res);
          q = queries.emplace(specs[m].analyzer, std::move(query)).first;
        }
        stats[m][t] = query_stats(q->second, specs[m]);
        try {
          results[m][t] = retrieve(q->second, indexes.at(specs[m].analyzer), specs[m], cfg.retrieval, restrict);
        } catch (const EmptyQueryError&) {
          warnings[t].push_back("topic " + topic.id + ": empty " + model_id(specs[m]) + " query, skipped");
        }
      }
    });
    for (const auto& w : warnings) {
      for (const auto& line : w) log.err << "warning: " << line << "\n";
    }
    ensure_dir(ws.runs(split));
    for (std::size_t m = 0; m < specs.size(); ++m) {
      write_run_file((ws.runs(split) / (model_id(specs[m]) + ".run")).string(), ordered_lists(topics, results[m]));
    }
    std::ofstream out(ws.runs(split) / "query_stats.tsv", std::ios::binary);
    out << "topic_id\tmodel_id\tquery_size\tmean_phrase_words\n";
    for (std::size_t t = 0; t < topics.size(); ++t) {
      for (std::size_t m = 0; m < specs.size(); ++m) {
        if (!stats[m][t]) continue;
        out << topics[t].id << '\t' << model_id(specs[m]) << '\t' << stats[m][t]->query_size << '\t'
            << (stats[m][t]->mean_phrase_words ? format_score(*stats[m][t]->mean_phrase_words) : "-") << '\n';
      }
    }
    log.out << "retrieve: " << split << " " << topics.size() << " topics x " << specs.size() << " models\n";
  }
}

// --- merging --------------------------------------------------------------------------

void stage_train_merge(const Workspace& ws, const PipelineConfig& cfg, StageLog& log) {
  auto store = load_store(ws);
  const auto split = merge_training_split(cfg);
  auto topics = collect_topic_runs(ws, cfg, store, split);
  auto qrels = load_qrels(ws, split);
  std::vector<std::string> ids;
  for (const auto& m : cfg.model_specs()) ids.push_back(model_id(m));
  // Models train independently; each writes its own slot.
  std::vector<std::optional<MergeModel>> slots(ids.size());
  const auto options = cfg.training_options(cfg.merge_learner);
  parallel_for(ids.size(), cfg.threads, [&](std::size_t i) {
    auto trained = train_merge(topics, qrels, {ids[i]}, options);
    slots[i] = std::move(trained.at(ids[i]));
  });
  ensure_dir(ws.models() / "merge");
  for (std::size_t i = 0; i < ids.size(); ++i) slots[i]->save((ws.models() / "merge" / (ids[i] + ".json")).string());
  log.out << "train-merge: " << ids.size() << " models from " << topics.size() << " " << split << " topics\n";
}

void stage_merge(const Workspace& ws, const PipelineConfig& cfg, StageLog& log) {
  auto store = load_store(ws);
  std::map<std::string, MergeModel> models;
  for (const auto& m : cfg.model_specs()) {
    const auto path = ws.models() / "merge" / (model_id(m) + ".json");
    require_file(path);
    models.emplace(model_id(m), MergeModel::load(path.string()));
  }
  for (const auto& split : ws.splits()) {
    auto topics = collect_topic_runs(ws, cfg, store, split);
    std::vector<std::optional<RankedList>> merged(topics.size()), uniform(topics.size());
    std::vector<std::map<std::string, double>> conf(topics.size());
    parallel_for(topics.size(), cfg.threads, [&](std::size_t i) {
      if (topics[i].lists.empty()) return;
      conf[i] = predict_confidences(topics[i], models);
      merged[i] = merge_topic(topics[i], conf[i], cfg.retrieval.cutoff);
      std::map<std::string, double> ones;
      for (const auto& [id, _] : topics[i].lists) ones[id] = 1.0;
      uniform[i] = merge_topic(topics[i], ones, cfg.retrieval.cutoff);
      uniform[i]->model_id = "merged-uniform";
    });
    std::vector<PatentRecord> records;
    for (const auto& t : topics) records.push_back(t.topic);
    write_run_file((ws.runs(split) / "merged.run").string(), ordered_lists(records, merged));
    write_run_file((ws.runs(split) / "merged-uniform.run").string(), ordered_lists(records, uniform));
    std::ofstream out(ws.runs(split) / "confidences.csv", std::ios::binary);
    out << "topic_id,model_id,confidence\n";
    for (std::size_t i = 0; i < topics.size(); ++i) {
      for (const auto& [id, c] : conf[i]) out << topics[i].topic.id << ',' << id << ',' << format_score(c) << '\n';
    }
    log.out << "merge: " << split << " " << topics.size() << " topics\n";
  }
}

// --- re-ranking -----------------------------------------------------------------------

void stage_train_rerank(const Workspace& ws, const PipelineConfig& cfg, StageLog& log) {
  if (!cfg.rerank_enabled) {
    log.out << "train-rerank: disabled\n";
    return;
  }
  auto store = load_store(ws);
  auto splits = ws.splits();
  const std::string split =
      std::find(splits.begin(), splits.end(), "train") != splits.end() ? "train" : merge_training_split(cfg);
  auto topics = load_topics(ws, store, split);
  auto merged = lists_by_topic(ws.runs(split) / "merged.run");
  std::vector<RerankTopic> rows;
  for (auto& t : topics) {
    auto it = merged.find(t.id);
    if (it == merged.end()) continue;
    rows.push_back({t, it->second});
  }
  auto model = train_rerank(rows, load_qrels(ws, split), store, cfg.training_options(cfg.rerank_learner),
                            cfg.rerank_negatives);
  ensure_dir(ws.models());
  model.save((ws.models() / "rerank.json").string());
  log.out << "train-rerank: " << model_kind_name(model.kind) << " model from " << rows.size() << " " << split
          << " topics\n";
}

void stage_rerank(const Workspace& ws, const PipelineConfig& cfg, StageLog& log) {
  auto store = load_store(ws);
  RegressionModel model = zero_rerank_model();
  if (cfg.rerank_enabled) {
    const auto path = ws.models() / "rerank.json";
    require_file(path);
    model = RegressionModel::load(path.string());
  }
  for (const auto& split : ws.splits()) {
    auto topics = load_topics(ws, store, split);
    auto merged = lists_by_topic(ws.runs(split) / "merged.run");
    std::vector<std::optional<RankedList>> final_lists(topics.size());
    std::vector<std::vector<RerankFeatures>> features(topics.size());
    parallel_for(topics.size(), cfg.threads, [&](std::size_t i) {
      auto it = merged.find(topics[i].id);
      if (it == merged.end()) return;
      features[i] = extract_rerank_features(topics[i], it->second, store);
      final_lists[i] = apply_rerank(it->second, topics[i], store, model, cfg.retrieval.cutoff);
      final_lists[i]->model_id = "reranked";
    });
    write_run_file((ws.runs(split) / "final.run").string(), ordered_lists(topics, final_lists));
    std::ofstream out(ws.runs(split) / "rerank_features.csv", std::ios::binary);
    out << "topic_id,doc_id";
    for (const auto& n : RerankFeatures::names()) out << ',' << n;
    out << '\n';
    for (std::size_t i = 0; i < topics.size(); ++i) {
      auto it = merged.find(topics[i].id);
      if (it == merged.end()) continue;
      for (std::size_t k = 0; k < features[i].size(); ++k) {
        const auto v = features[i][k].encode();
        out << topics[i].id << ',' << it->second.entries[k].doc_id;
        for (Eigen::Index d = 0; d < v.size(); ++d) out << ',' << format_score(v[d]);
        out << '\n';
      }
    }
    log.out << "rerank: " << split << " " << topics.size() << " topics\n";
  }
}

// --- evaluation -----------------------------------------------------------------------

void stage_eval(const Workspace& ws, const PipelineConfig& cfg, StageLog& log) {
  ensure_dir(ws.reports());
  for (const auto& split : ws.splits()) {
    auto qrels = load_qrels(ws, split);
    if (qrels.empty() || !fs::exists(ws.runs(split))) continue;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(ws.runs(split))) {
      if (entry.path().extension() == ".run") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<RunMetrics> rows;
    std::set<std::string> warned;
    for (const auto& f : files) {
      std::vector<std::string> warnings;
      rows.push_back(evaluate_run(f.stem().string(), read_run_file(f.string()), qrels, cfg.eval_grade, &warnings));
      for (const auto& w : warnings) {
        if (warned.insert(w).second) log.err << "warning: " << w << "\n";
      }
    }
    const auto report = format_report(rows);
    write_text(ws.reports() / ("eval_" + split + ".txt"), report);
    write_text(ws.reports() / ("eval_" + split + ".csv"), format_report_csv(rows));
    log.out << "eval: " << split << "\n" << report;
  }
}

// --- pipeline -------------------------------------------------------------------------

void run_pipeline(const Workspace& ws, const PipelineConfig& cfg, StageLog& log) {
  ensure_dir(ws.root);
  write_text(ws.config(), cfg.canonical());
  auto timed = [&](const std::string& name, auto&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    record_stage(ws, cfg, name, elapsed.count());
  };
  if (!fs::exists(ws.input() / "corpus.jsonl")) timed("gen", [&] { stage_gen(ws, cfg, log); });
  timed("ingest", [&] { stage_ingest(ws, cfg, {}, log); });
  timed("index", [&] { stage_index(ws, cfg, log); });
  timed("worksets", [&] { stage_worksets(ws, cfg, log); });
  timed("retrieve", [&] { stage_retrieve(ws, cfg, log); });
  timed("train-merge", [&] { stage_train_merge(ws, cfg, log); });
  timed("merge", [&] { stage_merge(ws, cfg, log); });
  timed("train-rerank", [&] { stage_train_rerank(ws, cfg, log); });
  timed("rerank", [&] { stage_rerank(ws, cfg, log); });
  timed("eval", [&] { stage_eval(ws, cfg, log); });
}

}  // namespace priorart
