#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "priorart/corpus.hpp"
#include "priorart/eval.hpp"
#include "priorart/ranked_list.hpp"

namespace priorart {

struct WorkingSetParams {
  std::size_t lower = 10;
  std::size_t upper = 10000;
  std::size_t cooccurrence_k = 2;  // co-occurring ECLA classes used per topic class
  // When set, patents first published after this date are never added.
  std::optional<std::string> published_before;
};

struct StepSize {
  std::string label;
  std::size_t size = 0;
};

struct WorkingSet {
  std::string topic_id;
  std::vector<std::string> members;        // in order of addition
  std::vector<std::uint8_t> member_step;   // index into step_trace that added each member
  std::vector<StepSize> step_trace;        // sizes non-decreasing
  bool active = false;

  // Members present after step `step` (inclusive).
  std::vector<std::string> members_through(std::size_t step) const;
};

// Labels of the ten recorded steps, in order.
const std::vector<std::string>& working_set_step_labels();

// For each ECLA class, the other classes ranked by the number of patents
// carrying both (count desc, class asc).
class EclaCooccurrence {
 public:
  const std::vector<std::pair<std::string, std::size_t>>& ranked(const std::string& cls) const;
  std::vector<std::string> top(const std::string& cls, std::size_t k) const;

  friend EclaCooccurrence ecla_cooccurrence(const CorpusStore& store);

 private:
  std::unordered_map<std::string, std::vector<std::pair<std::string, std::size_t>>> table_;
};

EclaCooccurrence ecla_cooccurrence(const CorpusStore& store);

// Citation/metadata candidate set for a topic prepared with
// CorpusStore::prepare_topic. The topic itself is never a member.
WorkingSet build_working_set(const PatentRecord& topic, const CorpusStore& store,
                             const EclaCooccurrence& cooccurrence, const WorkingSetParams& params = {});

// Patents cited in the topic description and present in the collection, in
// order of first mention, with scores n, n-1, ..., 1.
RankedList cited_patents_run(const PatentRecord& topic, const CorpusStore& store);

// Pooled coverage of the relevant documents by the working sets.
double micro_recall(const std::vector<WorkingSet>& sets, const Qrels& qrels,
                    GradeFilter filter = GradeFilter::AllRelevant);
// Micro recall after each recorded step.
std::vector<double> micro_recall_by_step(const std::vector<WorkingSet>& sets, const Qrels& qrels,
                                         GradeFilter filter = GradeFilter::AllRelevant);

// `topic_id <TAB> member_id` lines plus a CSV trace
// `topic_id,step,label,size,active`.
void write_working_sets(const std::string& members_path, const std::string& trace_path,
                        const std::vector<WorkingSet>& sets);
std::vector<WorkingSet> read_working_sets(const std::string& members_path, const std::string& trace_path);

}  // namespace priorart
