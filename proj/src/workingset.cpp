#include "priorart/workingset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "priorart/error.hpp"
#include "priorart/lexicon.hpp"

namespace priorart {

const std::vector<std::string>& working_set_step_labels() {
  static const std::vector<std::string> labels = {
      "1.cited",        "2.citers",          "3.cited-by",   "4.priority",        "5.applicant-inventor",
      "2+3.second-pass", "6.same-ecla",       "7.cooc-ecla",  "8.applicant-ipc",   "9.same-ipc"};
  return labels;
}

std::vector<std::string> WorkingSet::members_through(std::size_t step) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (member_step[i] <= step) out.push_back(members[i]);
  }
  return out;
}

// --- ECLA co-occurrence -----------------------------------------------------------

const std::vector<std::pair<std::string, std::size_t>>& EclaCooccurrence::ranked(
    const std::string& cls) const {
  static const std::vector<std::pair<std::string, std::size_t>> kEmpty;
  auto it = table_.find(cls);
  return it == table_.end() ? kEmpty : it->second;
}

std::vector<std::string> EclaCooccurrence::top(const std::string& cls, std::size_t k) const {
  std::vector<std::string> out;
  for (const auto& [other, _] : ranked(cls)) {
    if (out.size() >= k) break;
    out.push_back(other);
  }
  return out;
}

EclaCooccurrence ecla_cooccurrence(const CorpusStore& store) {
  std::map<std::string, std::map<std::string, std::size_t>> counts;
  for (const auto& rec : store.records()) {
    std::set<std::string> classes(rec.ecla_classes.begin(), rec.ecla_classes.end());
    for (const auto& a : classes) {
      for (const auto& b : classes) {
        if (a != b) ++counts[a][b];
      }
    }
  }
  EclaCooccurrence out;
  for (auto& [cls, others] : counts) {
    std::vector<std::pair<std::string, std::size_t>> ranked(others.begin(), others.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& x, const auto& y) { return x.second > y.second; });
    out.table_.emplace(cls, std::move(ranked));
  }
  return out;
}

// --- construction -----------------------------------------------------------------

namespace {

class SetBuilder {
 public:
  SetBuilder(const CorpusStore& store, std::optional<std::uint32_t> topic,
             const std::optional<std::string>& published_before)
      : store_(store), in_(store.size(), 0), topic_(topic), published_before_(published_before) {}

  void add(std::uint32_t ordinal) {
    if (in_[ordinal] || (topic_ && *topic_ == ordinal)) return;
    if (published_before_ && store_.record(ordinal).publication_date() > *published_before_) return;
    in_[ordinal] = 1;
    members_.push_back(ordinal);
    steps_.push_back(static_cast<std::uint8_t>(step_));
  }
  void add_all(const std::vector<std::uint32_t>& ordinals) {
    for (auto o : ordinals) add(o);
  }
  bool contains(std::uint32_t o) const { return in_[o] != 0; }
  std::vector<std::uint32_t> snapshot() const { return members_; }
  std::size_t size() const { return members_.size(); }
  void finish_step(std::size_t step) { step_ = step + 1; }

  const std::vector<std::uint32_t>& members() const { return members_; }
  const std::vector<std::uint8_t>& steps() const { return steps_; }

 private:
  const CorpusStore& store_;
  std::vector<char> in_;
  std::vector<std::uint32_t> members_;
  std::vector<std::uint8_t> steps_;
  std::optional<std::uint32_t> topic_;
  const std::optional<std::string>& published_before_;
  std::size_t step_ = 0;
};

bool shares_any(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  for (const auto& x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) return true;
  }
  return false;
}

std::set<std::string> class3_set(const std::vector<std::string>& codes) {
  std::set<std::string> out;
  for (const auto& c : codes) out.insert(ipc_class3(c));
  return out;
}

}  // namespace

WorkingSet build_working_set(const PatentRecord& topic, const CorpusStore& store,
                             const EclaCooccurrence& cooccurrence, const WorkingSetParams& params) {
  const auto& graph = store.graph();
  SetBuilder s(store, store.ordinal(topic.id), params.published_before);
  WorkingSet ws;
  ws.topic_id = topic.id;
  const auto& labels = working_set_step_labels();
  std::size_t step = 0;
  auto record_step = [&] {
    ws.step_trace.push_back({labels[step], s.size()});
    s.finish_step(step);
    ++step;
  };
  auto citers_pass = [&] {
    for (auto m : s.snapshot()) s.add_all(graph.citers[m]);
  };
  auto cited_pass = [&] {
    for (auto m : s.snapshot()) s.add_all(graph.cited[m]);
  };

  // 1. cited in the topic description
  for (const auto& id : topic.cited_ids) {
    if (auto o = store.ordinal(id)) s.add(*o);
  }
  record_step();
  // 2. up the citation tree
  citers_pass();
  record_step();
  // 3. down the citation tree
  cited_pass();
  record_step();
  // 4. priority dependencies
  {
    auto current = s.snapshot();
    std::set<std::string> priorities(topic.priority_ids.begin(), topic.priority_ids.end());
    for (auto m : current) {
      const auto& p = store.record(m).priority_ids;
      priorities.insert(p.begin(), p.end());
    }
    for (const auto& p : priorities) s.add_all(store.by_priority(p));
    for (auto m : current) {
      for (const auto& p : store.record(m).priority_ids) {
        if (auto doc = store.ordinal(p)) s.add_all(graph.citers[*doc]);
      }
    }
  }
  record_step();
  // 5. same applicant and at least one common inventor
  for (const auto& applicant : topic.applicants) {
    for (auto o : store.by_applicant(applicant)) {
      if (shares_any(store.record(o).inventors, topic.inventors)) s.add(o);
    }
  }
  record_step();
  // second pass of 2 and 3
  citers_pass();
  cited_pass();
  record_step();
  // 6. same ECLA class
  for (const auto& c : topic.ecla_classes) s.add_all(store.by_ecla(c));
  record_step();
  // 7. most frequently co-occurring ECLA classes
  for (const auto& c : topic.ecla_classes) {
    for (const auto& other : cooccurrence.top(c, params.cooccurrence_k)) s.add_all(store.by_ecla(other));
  }
  record_step();
  // 8. same applicant and IPC class, while below the upper limit
  const auto topic_classes = class3_set(topic.ipc_classes);
  if (s.size() < params.upper) {
    for (const auto& applicant : topic.applicants) {
      for (auto o : store.by_applicant(applicant)) {
        for (const auto& c : store.record(o).ipc_classes) {
          if (topic_classes.count(ipc_class3(c))) {
            s.add(o);
            break;
          }
        }
      }
    }
  }
  record_step();
  // 9. same IPC class, while still below the upper limit
  if (s.size() < params.upper) {
    for (const auto& c : topic_classes) s.add_all(store.by_ipc_class3(c));
  }
  record_step();

  ws.members.reserve(s.size());
  for (auto o : s.members()) ws.members.push_back(store.record(o).id);
  ws.member_step = s.steps();
  ws.active = s.size() >= params.lower && s.size() <= params.upper;
  return ws;
}

RankedList cited_patents_run(const PatentRecord& topic, const CorpusStore& store) {
  RankedList out;
  out.topic_id = topic.id;
  out.model_id = "cited";
  std::unordered_set<std::string> seen;
  std::vector<std::string> ids;
  for (const auto& id : topic.cited_ids) {
    if (id != topic.id && store.ordinal(id) && seen.insert(id).second) ids.push_back(id);
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out.entries.push_back({ids[i], static_cast<double>(ids.size() - i)});
  }
  return out;
}

double micro_recall(const std::vector<WorkingSet>& sets, const Qrels& qrels, GradeFilter filter) {
  std::map<std::string, std::vector<std::string>> retrieved;
  for (const auto& ws : sets) retrieved[ws.topic_id] = ws.members;
  return micro_recall(retrieved, qrels, filter);
}

std::vector<double> micro_recall_by_step(const std::vector<WorkingSet>& sets, const Qrels& qrels,
                                         GradeFilter filter) {
  std::vector<double> out;
  const std::size_t steps = working_set_step_labels().size();
  for (std::size_t step = 0; step < steps; ++step) {
    std::map<std::string, std::vector<std::string>> retrieved;
    for (const auto& ws : sets) retrieved[ws.topic_id] = ws.members_through(step);
    out.push_back(micro_recall(retrieved, qrels, filter));
  }
  return out;
}

// --- files ----------------------------------------------------------------------------

void write_working_sets(const std::string& members_path, const std::string& trace_path,
                        const std::vector<WorkingSet>& sets) {
  std::ofstream members(members_path, std::ios::binary);
  if (!members) throw IoError("cannot write " + members_path);
  std::ofstream trace(trace_path, std::ios::binary);
  if (!trace) throw IoError("cannot write " + trace_path);
  trace << "topic_id,step,label,size,active\n";
  for (const auto& ws : sets) {
    for (std::size_t i = 0; i < ws.members.size(); ++i) {
      members << ws.topic_id << '\t' << ws.members[i] << '\n';
    }
    for (std::size_t i = 0; i < ws.step_trace.size(); ++i) {
      trace << ws.topic_id << ',' << i << ',' << ws.step_trace[i].label << ',' << ws.step_trace[i].size << ','
            << (ws.active ? 1 : 0) << '\n';
    }
  }
}

std::vector<WorkingSet> read_working_sets(const std::string& members_path, const std::string& trace_path) {
  std::ifstream trace(trace_path);
  if (!trace) throw IoError("cannot open " + trace_path);
  std::vector<WorkingSet> out;
  std::map<std::string, std::size_t> slot;
  std::string line;
  std::size_t lineno = 0;
  std::getline(trace, line);  // header
  while (std::getline(trace, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = split(line, ',');
    if (f.size() != 5) throw ParseError(trace_path + ": expected 5 fields", 0, lineno + 1);
    std::string topic(f[0]);
    auto [it, fresh] = slot.emplace(topic, out.size());
    if (fresh) {
      out.emplace_back();
      out.back().topic_id = topic;
    }
    auto& ws = out[it->second];
    try {
      ws.step_trace.push_back({std::string(f[2]), std::stoul(std::string(f[3]))});
    } catch (const std::exception&) {
      throw ParseError(trace_path + ": bad size", 0, lineno + 1);
    }
    ws.active = f[4] == "1";
  }
  std::ifstream members(members_path);
  if (!members) throw IoError("cannot open " + members_path);
  lineno = 0;
  while (std::getline(members, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = split(line, '\t');
    if (f.size() != 2) throw ParseError(members_path + ": expected 2 fields", 0, lineno);
    auto it = slot.find(std::string(f[0]));
    if (it == slot.end()) throw ParseError(members_path + ": topic missing from trace", 0, lineno);
    out[it->second].members.emplace_back(f[1]);
  }
  // Members are listed in order of addition, so the cumulative step sizes
  // give the step that added each one.
  for (auto& ws : out) {
    std::size_t step = 0;
    for (std::size_t i = 0; i < ws.members.size(); ++i) {
      while (step < ws.step_trace.size() && ws.step_trace[step].size <= i) ++step;
      if (step == ws.step_trace.size()) {
        throw ParseError(members_path + ": more members than the trace records for " + ws.topic_id);
      }
      ws.member_step.push_back(static_cast<std::uint8_t>(step));
    }
  }
  return out;
}

}  // namespace priorart
