#include "priorart/rerank.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "priorart/error.hpp"

namespace priorart {

Vector RerankFeatures::encode() const {
  Vector v(static_cast<Eigen::Index>(kDimension));
  v << (cited_in_description ? 1.0 : 0.0), static_cast<double>(n_common_ecla),
      static_cast<double>(n_common_ipc), p_cite_ipc, p_cite_results, (same_applicant ? 1.0 : 0.0),
      frac_common_inventors;
  return v;
}

const std::vector<std::string>& RerankFeatures::names() {
  static const std::vector<std::string> n = {"cited_in_description", "n_common_ecla",  "n_common_ipc",
                                             "p_cite_ipc",           "p_cite_results", "same_applicant",
                                             "frac_common_inventors"};
  return n;
}

namespace {

std::size_t common_count(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::set<std::string> sa(a.begin(), a.end());
  std::set<std::string> sb(b.begin(), b.end());
  std::size_t n = 0;
  for (const auto& x : sa) n += sb.count(x);
  return n;
}

}  // namespace

std::vector<RerankFeatures> extract_rerank_features(const PatentRecord& topic, const RankedList& results,
                                                    const CorpusStore& store) {
  const auto& graph = store.graph();
  const std::size_t n = results.entries.size();
  std::vector<std::optional<std::uint32_t>> ord(n);
  std::unordered_set<std::uint32_t> in_results;
  for (std::size_t i = 0; i < n; ++i) {
    ord[i] = store.ordinal(results.entries[i].doc_id);
    if (ord[i]) in_results.insert(*ord[i]);
  }
  std::set<std::string> topic_classes;
  for (const auto& c : topic.ipc_classes) topic_classes.insert(ipc_class3(c));
  const std::unordered_set<std::string> cited(topic.cited_ids.begin(), topic.cited_ids.end());
  const std::set<std::string> topic_applicants(topic.applicants.begin(), topic.applicants.end());

  std::vector<double> ipc_cites(n, 0.0), result_cites(n, 0.0);
  double max_ipc = 0.0, max_results = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!ord[i]) continue;
    for (auto citer : graph.citers[*ord[i]]) {
      if (in_results.count(citer)) result_cites[i] += 1.0;
      for (const auto& c : store.record(citer).ipc_classes) {
        if (topic_classes.count(ipc_class3(c))) {
          ipc_cites[i] += 1.0;
          break;
        }
      }
    }
    max_ipc = std::max(max_ipc, ipc_cites[i]);
    max_results = std::max(max_results, result_cites[i]);
  }

  std::vector<RerankFeatures> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& f = out[i];
    f.cited_in_description = cited.count(results.entries[i].doc_id) > 0;
    f.p_cite_ipc = max_ipc > 0.0 ? ipc_cites[i] / max_ipc : 0.0;
    f.p_cite_results = max_results > 0.0 ? result_cites[i] / max_results : 0.0;
    if (!ord[i]) continue;
    const auto& cand = store.record(*ord[i]);
    f.n_common_ecla = common_count(topic.ecla_classes, cand.ecla_classes);
    f.n_common_ipc = common_count(topic.ipc_classes, cand.ipc_classes);
    for (const auto& a : cand.applicants) {
      if (topic_applicants.count(a)) {
        f.same_applicant = true;
        break;
      }
    }
    std::set<std::string> topic_inventors(topic.inventors.begin(), topic.inventors.end());
    if (!topic_inventors.empty()) {
      f.frac_common_inventors = static_cast<double>(common_count(topic.inventors, cand.inventors)) /
                                static_cast<double>(topic_inventors.size());
    }
  }
  return out;
}

RerankFeatures extract_rerank_features(const PatentRecord& topic, const std::string& candidate,
                                       const CorpusStore& store, const RankedList& results) {
  auto all = extract_rerank_features(topic, results, store);
  for (std::size_t i = 0; i < results.entries.size(); ++i) {
    if (results.entries[i].doc_id == candidate) return all[i];
  }
  throw Error("candidate " + candidate + " is not in the result set of " + topic.id);
}

RerankRows rerank_training_rows(const std::vector<RerankTopic>& topics, const Qrels& qrels,
                                const CorpusStore& store, std::size_t negatives_per_topic) {
  std::vector<Vector> rows;
  std::vector<double> targets;
  RerankRows out;
  for (const auto& t : topics) {
    auto relevant = relevant_set(qrels, t.topic.id);
    if (relevant.empty() || t.merged.entries.empty()) continue;
    double w_max = t.merged.entries.front().score;
    for (const auto& e : t.merged.entries) w_max = std::max(w_max, e.score);
    auto features = extract_rerank_features(t.topic, t.merged, store);
    std::size_t negatives = 0;
    for (std::size_t i = 0; i < t.merged.entries.size(); ++i) {
      const auto& doc = t.merged.entries[i].doc_id;
      const bool rel = relevant.count(doc) > 0;
      if (!rel) {
        if (negatives >= negatives_per_topic) continue;
        ++negatives;
      }
      rows.push_back(features[i].encode());
      targets.push_back(rel ? w_max : 0.0);
      out.keys.emplace_back(t.topic.id, doc);
    }
  }
  out.x.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(RerankFeatures::kDimension));
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.x.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    out.y[static_cast<Eigen::Index>(i)] = targets[i];
  }
  return out;
}

RegressionModel train_rerank(const std::vector<RerankTopic>& topics, const Qrels& qrels,
                             const CorpusStore& store, const TrainingOptions& options,
                             std::size_t negatives_per_topic) {
  auto rows = rerank_training_rows(topics, qrels, store, negatives_per_topic);
  if (rows.x.rows() == 0) throw FitError("rerank: no training rows (no topic has relevant documents)");
  return fit_pipeline(rows.x, rows.y, options);
}

RankedList apply_boosts(const RankedList& list, const std::vector<double>& boosts, std::size_t cutoff) {
  if (boosts.size() != list.entries.size()) throw Error("apply_boosts: one boost per entry required");
  RankedList out = list;
  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    out.entries[i].score *= std::max(0.0, boosts[i]) + 1.0;
  }
  sort_and_cut(out.entries, cutoff);
  return out;
}

RankedList apply_rerank(const RankedList& merged, const PatentRecord& topic, const CorpusStore& store,
                        const RegressionModel& model, std::size_t cutoff) {
  auto features = extract_rerank_features(topic, merged, store);
  std::vector<double> boosts(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) boosts[i] = model.predict(features[i].encode());
  return apply_boosts(merged, boosts, cutoff);
}

RegressionModel zero_rerank_model() {
  RegressionModel m;
  m.kind = ModelKind::Linear;
  m.intercept = 0.0;
  m.weights = Vector::Zero(static_cast<Eigen::Index>(RerankFeatures::kDimension));
  return m;
}

}  // namespace priorart
