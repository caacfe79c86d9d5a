#include "priorart/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "priorart/error.hpp"

namespace priorart {

Qrels read_qrels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open qrels file: " + path);
  Qrels q;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string topic, iter, doc;
    int grade = 0;
    if (!(fields >> topic >> iter >> doc >> grade)) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected 4 fields", 0, lineno);
    }
    if (grade < 0 || grade > 2) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": grade must be 0, 1 or 2", 0, lineno);
    }
    q[topic][doc] = grade;
  }
  return q;
}

void write_qrels(const std::string& path, const Qrels& qrels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write qrels file: " + path);
  for (const auto& [topic, docs] : qrels) {
    for (const auto& [doc, grade] : docs) out << topic << " 0 " << doc << ' ' << grade << '\n';
  }
}

std::unordered_set<std::string> relevant_set(const Qrels& qrels, const std::string& topic,
                                             GradeFilter filter) {
  std::unordered_set<std::string> out;
  auto it = qrels.find(topic);
  if (it == qrels.end()) return out;
  const int min_grade = filter == GradeFilter::HighlyRelevant ? 2 : 1;
  for (const auto& [doc, grade] : it->second) {
    if (grade >= min_grade) out.insert(doc);
  }
  return out;
}

double average_precision(const std::vector<std::string>& ranked,
                         const std::unordered_set<std::string>& relevant) {
  if (relevant.empty()) throw EvalError("average precision needs at least one relevant document");
  double sum = 0.0;
  std::size_t hits = 0;
  std::unordered_set<std::string> seen;
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    if (!relevant.count(ranked[k]) || !seen.insert(ranked[k]).second) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  return sum / static_cast<double>(relevant.size());
}

double precision_at_k(const std::vector<std::string>& ranked,
                      const std::unordered_set<std::string>& relevant, std::size_t k) {
  if (k == 0) throw EvalError("precision@k needs k >= 1");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) hits += relevant.count(ranked[i]);
  return static_cast<double>(hits) / static_cast<double>(k);
}

double recall(const std::vector<std::string>& ranked, const std::unordered_set<std::string>& relevant) {
  if (relevant.empty()) return 0.0;
  std::unordered_set<std::string> found;
  for (const auto& d : ranked) {
    if (relevant.count(d)) found.insert(d);
  }
  return static_cast<double>(found.size()) / static_cast<double>(relevant.size());
}

double micro_recall(const std::map<std::string, std::vector<std::string>>& retrieved,
                    const Qrels& qrels, GradeFilter filter) {
  std::size_t total = 0;
  std::size_t found = 0;
  for (const auto& [topic, _] : qrels) {
    auto rel = relevant_set(qrels, topic, filter);
    total += rel.size();
    auto it = retrieved.find(topic);
    if (it == retrieved.end()) continue;
    std::unordered_set<std::string> hit;
    for (const auto& d : it->second) {
      if (rel.count(d)) hit.insert(d);
    }
    found += hit.size();
  }
  if (total == 0) throw EvalError("micro recall needs at least one relevant document");
  return static_cast<double>(found) / static_cast<double>(total);
}

RunMetrics evaluate_run(const std::string& name, const std::vector<RankedList>& run, const Qrels& qrels,
                        GradeFilter filter, std::vector<std::string>* warnings) {
  std::map<std::string, std::vector<std::string>> by_topic;
  for (const auto& list : run) {
    if (!qrels.count(list.topic_id)) {
      if (warnings) warnings->push_back("topic " + list.topic_id + " has no qrels; skipped");
      continue;
    }
    auto& ids = by_topic[list.topic_id];
    for (const auto& e : list.entries) ids.push_back(e.doc_id);
  }
  RunMetrics m;
  m.name = name;
  std::size_t total_rel = 0;
  std::size_t total_found = 0;
  for (const auto& [topic, _] : qrels) {
    auto rel = relevant_set(qrels, topic, filter);
    if (rel.empty()) continue;
    static const std::vector<std::string> kNone;
    auto it = by_topic.find(topic);
    const auto& ranked = it == by_topic.end() ? kNone : it->second;
    ++m.topics;
    m.map += average_precision(ranked, rel);
    m.p5 += precision_at_k(ranked, rel, 5);
    m.p10 += precision_at_k(ranked, rel, 10);
    std::unordered_set<std::string> found;
    for (const auto& d : ranked) {
      if (rel.count(d)) found.insert(d);
    }
    m.macro_recall += static_cast<double>(found.size()) / static_cast<double>(rel.size());
    total_rel += rel.size();
    total_found += found.size();
  }
  if (m.topics == 0) throw EvalError("no topic with relevant documents");
  const double n = static_cast<double>(m.topics);
  m.map /= n;
  m.p5 /= n;
  m.p10 /= n;
  m.macro_recall /= n;
  m.micro_recall = static_cast<double>(total_found) / static_cast<double>(total_rel);
  return m;
}

std::string format_report(const std::vector<RunMetrics>& rows) {
  std::size_t width = 4;
  for (const auto& r : rows) width = std::max(width, r.name.size());
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-*s %7s %8s %8s %8s %9s %9s\n", static_cast<int>(width), "run",
                "topics", "MAP", "P@5", "P@10", "macro_R", "micro_R");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%-*s %7zu %8.4f %8.4f %8.4f %9.4f %9.4f\n", static_cast<int>(width),
                  r.name.c_str(), r.topics, r.map, r.p5, r.p10, r.macro_recall, r.micro_recall);
    out << buf;
  }
  return out.str();
}

std::string format_report_csv(const std::vector<RunMetrics>& rows) {
  std::ostringstream out;
  out << "run,topics,map,p5,p10,macro_recall,micro_recall\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%zu,%.6f,%.6f,%.6f,%.6f,%.6f\n", r.name.c_str(), r.topics, r.map,
                  r.p5, r.p10, r.macro_recall, r.micro_recall);
    out << buf;
  }
  return out.str();
}

}  // namespace priorart
