#pragma once

#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "priorart/ranked_list.hpp"

namespace priorart {

// topic -> doc -> grade (1 relevant, 2 very relevant).
using Qrels = std::map<std::string, std::map<std::string, int>>;

enum class GradeFilter { AllRelevant, HighlyRelevant };

// `topic_id 0 patent_id grade` per line.
Qrels read_qrels(const std::string& path);
void write_qrels(const std::string& path, const Qrels& qrels);

std::unordered_set<std::string> relevant_set(const Qrels& qrels, const std::string& topic,
                                             GradeFilter filter = GradeFilter::AllRelevant);

// (1/|rel|)·Σ precision@k over ranks holding a relevant document. Throws
// EvalError when `relevant` is empty.
double average_precision(const std::vector<std::string>& ranked,
                         const std::unordered_set<std::string>& relevant);
// Slots beyond the end of the list count as non-relevant.
double precision_at_k(const std::vector<std::string>& ranked,
                      const std::unordered_set<std::string>& relevant, std::size_t k);
double recall(const std::vector<std::string>& ranked, const std::unordered_set<std::string>& relevant);

// Pooled recall: Σ|retrieved ∩ rel| / Σ|rel| over topics with qrels.
// Throws EvalError when the qrels hold no relevant document.
double micro_recall(const std::map<std::string, std::vector<std::string>>& retrieved,
                    const Qrels& qrels, GradeFilter filter = GradeFilter::AllRelevant);

struct RunMetrics {
  std::string name;
  std::size_t topics = 0;
  double map = 0.0;
  double p5 = 0.0;
  double p10 = 0.0;
  double macro_recall = 0.0;
  double micro_recall = 0.0;
  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

// Metrics over the topics holding at least one relevant document; a topic
// without a list in `run` scores 0. Run topics absent from the qrels are
// skipped and reported through `warnings`.
RunMetrics evaluate_run(const std::string& name, const std::vector<RankedList>& run, const Qrels& qrels,
                        GradeFilter filter = GradeFilter::AllRelevant,
                        std::vector<std::string>* warnings = nullptr);

std::string format_report(const std::vector<RunMetrics>& rows);
std::string format_report_csv(const std::vector<RunMetrics>& rows);

}  // namespace priorart
