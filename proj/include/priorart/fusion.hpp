#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "priorart/corpus.hpp"
#include "priorart/eval.hpp"
#include "priorart/ranked_list.hpp"
#include "priorart/regress.hpp"
#include "priorart/retrieve.hpp"

namespace priorart {

// Min-max normalization to [0, 1]; all-equal scores map to 0. Order is kept.
RankedList normalize_scores(const RankedList& list);

// Query-side statistics recorded at retrieval time.
struct QueryStats {
  std::uint64_t query_size = 0;             // terms in the query multiset
  std::optional<double> mean_phrase_words;  // phrase models only
};

QueryStats query_stats(const Query& query, const ModelSpec& model);

// Features describing one model's list for one topic.
struct MergeFeatures {
  Language language = Language::EN;  // f1
  double query_size = 0.0;           // f2
  double working_set_size = 0.0;     // f3, 0 when no working set was used
  double min_score = 0.0;            // f4
  double max_score = 0.0;            // f5
  double score_range = 0.0;          // f6 = f5 - f4
  char ipc_trunk = 0;                // f7, 0 when the topic has no IPC class
  std::string ipc_class;             // f8
  std::optional<double> mean_phrase_words;  // f9
};

MergeFeatures extract_merge_features(const PatentRecord& topic, const ModelSpec& model,
                                     const QueryStats& stats, const RankedList& list,
                                     std::size_t working_set_size);

// One-hot layout: f1 (3) | f2 f3 f4 f5 f6 | f7 (A-H) | f8 (training classes) | f9?
struct FeatureSchema {
  bool phrase = false;
  std::vector<std::string> ipc_classes;  // sorted

  std::size_t dimension() const { return 3 + 5 + 8 + ipc_classes.size() + (phrase ? 1 : 0); }
  Vector encode(const MergeFeatures& f) const;
};

struct MergeModel {
  std::string model_id;
  FeatureSchema schema;
  RegressionModel regressor;

  // Predicted confidence, clamped to >= 0.
  double confidence(const MergeFeatures& f) const;

  void save(const std::string& path) const;
  static MergeModel load(const std::string& path);
};

// Everything known about one topic when merging.
struct TopicRuns {
  PatentRecord topic;
  std::size_t working_set_size = 0;            // 0 when inactive
  std::map<std::string, RankedList> lists;     // model id -> raw list
  std::map<std::string, QueryStats> stats;     // model id -> query statistics
};

// Fits one confidence regressor per model from features to per-topic average
// precision. Topics without relevant documents are skipped. Throws FitError
// with fewer than 2 usable topics.
std::map<std::string, MergeModel> train_merge(const std::vector<TopicRuns>& topics, const Qrels& qrels,
                                              const std::vector<std::string>& model_ids,
                                              const TrainingOptions& options);

// Confidences for the models present in `topic.lists`. When every prediction
// clamps to 0 the models are weighted uniformly.
std::map<std::string, double> predict_confidences(const TopicRuns& topic,
                                                  const std::map<std::string, MergeModel>& models);

struct WeightedList {
  const RankedList* normalized = nullptr;
  double confidence = 0.0;
};

// s_d = Σ_m c_m·w_{m,d} over the union of the lists (absent documents count
// 0); sorted descending, ties by doc id, cut at `cutoff`.
RankedList merge(const std::string& topic_id, const std::vector<WeightedList>& lists,
                 std::size_t cutoff = kDefaultCutoff);

// Normalizes each list and merges with the given confidences.
RankedList merge_topic(const TopicRuns& topic, const std::map<std::string, double>& confidences,
                       std::size_t cutoff = kDefaultCutoff);

// Index language of a model's analyzer; nullopt for the concept analyzer.
std::optional<Language> model_language(const ModelSpec& model);

struct ValidationSet {
  std::vector<std::string> topic_ids;
  Qrels qrels;  // in-collection citations not published after the priority date
};

// Collection patents citing at least `min_citations` collection patents,
// sampled to follow the collection's (language, IPC class) distribution.
// Returns every candidate, with a warning, when fewer than `n` qualify.
ValidationSet build_validation_set(const CorpusStore& store, std::size_t n, std::size_t min_citations = 4,
                                   std::vector<std::string>* warnings = nullptr);

}  // namespace priorart
