#include "priorart/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "priorart/error.hpp"

namespace priorart {

RankedList normalize_scores(const RankedList& list) {
  RankedList out = list;
  if (list.entries.empty()) return out;
  double lo = list.entries.front().score;
  double hi = lo;
  for (const auto& e : list.entries) {
    lo = std::min(lo, e.score);
    hi = std::max(hi, e.score);
  }
  const double range = hi - lo;
  for (auto& e : out.entries) e.score = range > 0.0 ? (e.score - lo) / range : 0.0;
  sort_and_cut(out.entries, out.entries.size());
  return out;
}

QueryStats query_stats(const Query& query, const ModelSpec& model) {
  QueryStats stats;
  stats.query_size = query.length();
  if (model.analyzer == AnalyzerKind::PhraseEN) {
    std::uint64_t words = 0;
    std::uint64_t count = 0;
    for (const auto& [term, tf] : query.terms) {
      words += tf * static_cast<std::uint64_t>(1 + std::count(term.begin(), term.end(), '_'));
      count += tf;
    }
    stats.mean_phrase_words = count ? static_cast<double>(words) / static_cast<double>(count) : 0.0;
  }
  return stats;
}

MergeFeatures extract_merge_features(const PatentRecord& topic, const ModelSpec& model,
                                     const QueryStats& stats, const RankedList& list,
                                     std::size_t working_set_size) {
  MergeFeatures f;
  f.language = topic.language;
  f.query_size = static_cast<double>(stats.query_size);
  f.working_set_size = static_cast<double>(working_set_size);
  if (!list.entries.empty()) {
    f.min_score = f.max_score = list.entries.front().score;
    for (const auto& e : list.entries) {
      f.min_score = std::min(f.min_score, e.score);
      f.max_score = std::max(f.max_score, e.score);
    }
  }
  f.score_range = f.max_score - f.min_score;
  if (!topic.ipc_classes.empty() && !topic.ipc_classes.front().empty()) {
    f.ipc_trunk = topic.ipc_classes.front().front();
    f.ipc_class = ipc_class3(topic.ipc_classes.front());
  }
  if (model.analyzer == AnalyzerKind::PhraseEN) f.mean_phrase_words = stats.mean_phrase_words.value_or(0.0);
  return f;
}

Vector FeatureSchema::encode(const MergeFeatures& f) const {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dimension()));
  Eigen::Index i = 0;
  v[i + static_cast<int>(f.language)] = 1.0;
  i += 3;
  v[i++] = f.query_size;
  v[i++] = f.working_set_size;
  v[i++] = f.min_score;
  v[i++] = f.max_score;
  v[i++] = f.score_range;
  if (f.ipc_trunk >= 'A' && f.ipc_trunk <= 'H') v[i + (f.ipc_trunk - 'A')] = 1.0;
  i += 8;
  auto it = std::lower_bound(ipc_classes.begin(), ipc_classes.end(), f.ipc_class);
  if (it != ipc_classes.end() && *it == f.ipc_class) v[i + (it - ipc_classes.begin())] = 1.0;
  i += static_cast<Eigen::Index>(ipc_classes.size());
  if (phrase) v[i++] = f.mean_phrase_words.value_or(0.0);
  return v;
}

double MergeModel::confidence(const MergeFeatures& f) const {
  return std::max(0.0, regressor.predict(schema.encode(f)));
}

void MergeModel::save(const std::string& path) const {
  nlohmann::ordered_json j;
  j["format"] = 1;
  j["model_id"] = model_id;
  j["phrase"] = schema.phrase;
  j["ipc_classes"] = schema.ipc_classes;
  j["regressor"] = nlohmann::ordered_json::parse(regressor.to_json());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(1) << '\n';
}

MergeModel MergeModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    auto j = nlohmann::json::parse(buf.str());
    if (j.at("format").get<int>() != 1) throw ParseError(path + ": unsupported merge model format");
    MergeModel m;
    m.model_id = j.at("model_id").get<std::string>();
    m.schema.phrase = j.at("phrase").get<bool>();
    m.schema.ipc_classes = j.at("ipc_classes").get<std::vector<std::string>>();
    m.regressor = RegressionModel::from_json(j.at("regressor").dump());
    if (m.regressor.dimension() != m.schema.dimension()) {
      throw ParseError(path + ": regressor dimension does not match the feature schema");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

namespace {

const RankedList* find_list(const TopicRuns& topic, const std::string& model) {
  auto it = topic.lists.find(model);
  return it == topic.lists.end() ? nullptr : &it->second;
}

MergeFeatures features_for(const TopicRuns& topic, const std::string& model, const RankedList& list) {
  auto st = topic.stats.find(model);
  QueryStats stats = st == topic.stats.end() ? QueryStats{} : st->second;
  return extract_merge_features(topic.topic, parse_model_id(model), stats, list, topic.working_set_size);
}

}  // namespace

std::map<std::string, MergeModel> train_merge(const std::vector<TopicRuns>& topics, const Qrels& qrels,
                                              const std::vector<std::string>& model_ids,
                                              const TrainingOptions& options) {
  std::set<std::string> classes;
  for (const auto& t : topics) {
    if (!t.topic.ipc_classes.empty()) classes.insert(ipc_class3(t.topic.ipc_classes.front()));
  }
  std::map<std::string, MergeModel> out;
  for (const auto& model : model_ids) {
    MergeModel m;
    m.model_id = model;
    m.schema.phrase = parse_model_id(model).analyzer == AnalyzerKind::PhraseEN;
    m.schema.ipc_classes.assign(classes.begin(), classes.end());

    std::vector<Vector> rows;
    std::vector<double> targets;
    for (const auto& t : topics) {
      auto relevant = relevant_set(qrels, t.topic.id);
      if (relevant.empty()) continue;
      static const RankedList kEmpty;
      const RankedList* list = find_list(t, model);
      if (!list) list = &kEmpty;
      rows.push_back(m.schema.encode(features_for(t, model, *list)));
      targets.push_back(average_precision(list->doc_ids(), relevant));
    }
    if (rows.size() < 2) {
      throw FitError("model " + model + ": need at least 2 training topics with relevant documents, got " +
                     std::to_string(rows.size()));
    }
    Matrix x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m.schema.dimension()));
    Vector y(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      x.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
      y[static_cast<Eigen::Index>(i)] = targets[i];
    }
    m.regressor = fit_pipeline(x, y, options);
    out.emplace(model, std::move(m));
  }
  return out;
}

std::map<std::string, double> predict_confidences(const TopicRuns& topic,
                                                  const std::map<std::string, MergeModel>& models) {
  std::map<std::string, double> out;
  double total = 0.0;
  for (const auto& [model, list] : topic.lists) {
    auto it = models.find(model);
    double c = it == models.end() ? 0.0 : it->second.confidence(features_for(topic, model, list));
    out[model] = c;
    total += c;
  }
  if (total <= 0.0) {
    for (auto& [_, c] : out) c = 1.0;
  }
  return out;
}

RankedList merge(const std::string& topic_id, const std::vector<WeightedList>& lists, std::size_t cutoff) {
  RankedList out;
  out.topic_id = topic_id;
  out.model_id = "merged";
  std::unordered_map<std::string, double> score;
  for (const auto& wl : lists) {
    if (!wl.normalized) continue;
    for (const auto& e : wl.normalized->entries) score[e.doc_id] += wl.confidence * e.score;
  }
  out.entries.reserve(score.size());
  for (auto& [doc, s] : score) out.entries.push_back({doc, s});
  sort_and_cut(out.entries, cutoff);
  return out;
}

RankedList merge_topic(const TopicRuns& topic, const std::map<std::string, double>& confidences,
                       std::size_t cutoff) {
  // Accumulate in model-id order so the floating-point sums do not depend on
  // the caller's container order.
  std::vector<RankedList> normalized;
  std::vector<double> weights;
  for (const auto& [model, list] : topic.lists) {
    auto it = confidences.find(model);
    normalized.push_back(normalize_scores(list));
    weights.push_back(it == confidences.end() ? 0.0 : it->second);
  }
  std::vector<WeightedList> weighted;
  for (std::size_t i = 0; i < normalized.size(); ++i) weighted.push_back({&normalized[i], weights[i]});
  return merge(topic.topic.id, weighted, cutoff);
}

std::optional<Language> model_language(const ModelSpec& model) {
  switch (model.analyzer) {
    case AnalyzerKind::LemmaEN:
    case AnalyzerKind::PhraseEN: return Language::EN;
    case AnalyzerKind::LemmaFR: return Language::FR;
    case AnalyzerKind::LemmaDE: return Language::DE;
    case AnalyzerKind::Concept: return std::nullopt;
  }
  return std::nullopt;
}

ValidationSet build_validation_set(const CorpusStore& store, std::size_t n, std::size_t min_citations,
                                   std::vector<std::string>* warnings) {
  using Stratum = std::pair<int, std::string>;
  auto stratum_of = [](const PatentRecord& r) {
    return Stratum{static_cast<int>(r.language), r.ipc_classes.empty() ? std::string() : ipc_class3(r.ipc_classes.front())};
  };
  const auto& graph = store.graph();
  std::map<Stratum, std::size_t> population;
  std::map<Stratum, std::vector<std::uint32_t>> candidates;
  std::size_t total_candidates = 0;
  for (std::uint32_t o = 0; o < store.size(); ++o) {
    const auto& rec = store.record(o);
    ++population[stratum_of(rec)];
    if (graph.cited[o].size() >= min_citations) {
      candidates[stratum_of(rec)].push_back(o);
      ++total_candidates;
    }
  }

  std::vector<std::uint32_t> chosen;
  if (total_candidates <= n) {
    if (total_candidates < n && warnings) {
      warnings->push_back("validation set: only " + std::to_string(total_candidates) +
                          " candidates cite at least " + std::to_string(min_citations) +
                          " collection patents; " + std::to_string(n) + " requested");
    }
    for (const auto& [_, c] : candidates) chosen.insert(chosen.end(), c.begin(), c.end());
  } else {
    // Largest-remainder quotas proportional to the whole collection.
    struct Quota {
      Stratum stratum;
      std::size_t take;
      double remainder;
    };
    std::vector<Quota> quotas;
    std::size_t assigned = 0;
    for (const auto& [s, count] : population) {
      double exact = static_cast<double>(n) * static_cast<double>(count) / static_cast<double>(store.size());
      auto take = static_cast<std::size_t>(std::floor(exact));
      quotas.push_back({s, take, exact - static_cast<double>(take)});
      assigned += take;
    }
    std::vector<std::size_t> order(quotas.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return quotas[a].remainder > quotas[b].remainder; });
    for (std::size_t i = 0; assigned < n && i < order.size(); ++i, ++assigned) ++quotas[order[i]].take;

    std::set<std::uint32_t> picked;
    std::size_t shortfall = 0;
    for (const auto& q : quotas) {
      auto it = candidates.find(q.stratum);
      const std::size_t avail = it == candidates.end() ? 0 : it->second.size();
      const std::size_t take = std::min(q.take, avail);
      shortfall += q.take - take;
      // Spread picks evenly over the stratum's candidates.
      for (std::size_t k = 0; k < take; ++k) picked.insert(it->second[k * avail / take]);
    }
    // Fill any shortfall from strata with spare candidates, in collection order.
    for (const auto& [_, c] : candidates) {
      for (auto o : c) {
        if (shortfall == 0) break;
        if (picked.insert(o).second) --shortfall;
      }
    }
    chosen.assign(picked.begin(), picked.end());
  }
  std::sort(chosen.begin(), chosen.end());

  ValidationSet out;
  for (auto o : chosen) {
    const auto& rec = store.record(o);
    out.topic_ids.push_back(rec.id);
    auto& rel = out.qrels[rec.id];
    for (auto c : graph.cited[o]) {
      const auto& cited = store.record(c);
      if (rec.priority_date.empty() || cited.publication_date() <= rec.priority_date) rel[cited.id] = 1;
    }
    if (rel.empty()) out.qrels.erase(rec.id);
  }
  return out;
}

}  // namespace priorart
