#pragma once

#include <string>
#include <utility>
#include <vector>

#include "priorart/corpus.hpp"
#include "priorart/eval.hpp"
#include "priorart/ranked_list.hpp"
#include "priorart/regress.hpp"

namespace priorart {

struct RerankFeatures {
  bool cited_in_description = false;
  std::size_t n_common_ecla = 0;
  std::size_t n_common_ipc = 0;
  double p_cite_ipc = 0.0;      // citers sharing an IPC class with the topic, / max over the result set
  double p_cite_results = 0.0;  // in-degree from the result set, / max over the result set
  bool same_applicant = false;
  double frac_common_inventors = 0.0;  // |common| / |topic inventors|

  static constexpr std::size_t kDimension = 7;
  Vector encode() const;
  static const std::vector<std::string>& names();
};

// Features for every entry of `results`, in list order. Candidates not in the
// store get zero graph features.
std::vector<RerankFeatures> extract_rerank_features(const PatentRecord& topic, const RankedList& results,
                                                    const CorpusStore& store);

// Features of one candidate of the result set.
RerankFeatures extract_rerank_features(const PatentRecord& topic, const std::string& candidate,
                                       const CorpusStore& store, const RankedList& results);

struct RerankTopic {
  PatentRecord topic;
  RankedList merged;
};

struct RerankRows {
  Matrix x;
  Vector y;
  std::vector<std::pair<std::string, std::string>> keys;  // (topic, doc) per row
};

// Rows for every relevant document in each merged list (target: the list's
// top score) plus its `negatives_per_topic` highest-ranked non-relevant ones
// (target: 0). Topics without relevant documents are skipped.
RerankRows rerank_training_rows(const std::vector<RerankTopic>& topics, const Qrels& qrels,
                                const CorpusStore& store, std::size_t negatives_per_topic = 20);

// Throws FitError when there are no training rows.
RegressionModel train_rerank(const std::vector<RerankTopic>& topics, const Qrels& qrels,
                             const CorpusStore& store, const TrainingOptions& options,
                             std::size_t negatives_per_topic = 20);

// w' = w·(max(s, 0) + 1) per entry; re-sorted and cut. `boosts` is parallel to
// `list.entries`. The run tag is kept.
RankedList apply_boosts(const RankedList& list, const std::vector<double>& boosts,
                        std::size_t cutoff = kDefaultCutoff);

RankedList apply_rerank(const RankedList& merged, const PatentRecord& topic, const CorpusStore& store,
                        const RegressionModel& model, std::size_t cutoff = kDefaultCutoff);

// Model predicting 0 everywhere; reranking with it truncates the input.
RegressionModel zero_rerank_model();

}  // namespace priorart
