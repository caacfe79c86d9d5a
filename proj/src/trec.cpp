#include "priorart/trec.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "priorart/error.hpp"

namespace priorart {

std::string format_score(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_run(std::ostream& out, const RankedList& list) {
  std::size_t rank = 1;
  for (const auto& e : list.entries) {
    out << list.topic_id << " Q0 " << e.doc_id << ' ' << rank++ << ' ' << format_score(e.score) << ' '
        << list.model_id << '\n';
  }
}

void write_run_file(const std::string& path, const std::vector<RankedList>& lists) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write run file: " + path);
  for (const auto& l : lists) write_run(out, l);
}

std::vector<RankedList> read_run_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open run file: " + path);
  std::vector<RankedList> out;
  std::map<std::pair<std::string, std::string>, std::size_t> slot;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string topic, q0, doc, rank, score, model;
    if (!(fields >> topic >> q0 >> doc >> rank >> score >> model)) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected 6 fields", 0, lineno);
    }
    std::size_t rank_value = 0;
    auto rank_res = std::from_chars(rank.data(), rank.data() + rank.size(), rank_value);
    if (rank_res.ec != std::errc() || rank_res.ptr != rank.data() + rank.size() || rank_value == 0) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": bad rank '" + rank + "'", 0, lineno);
    }
    double value = 0.0;
    auto res = std::from_chars(score.data(), score.data() + score.size(), value);
    if (res.ec != std::errc() || res.ptr != score.data() + score.size()) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": bad score '" + score + "'", 0, lineno);
    }
    auto [it, fresh] = slot.emplace(std::make_pair(topic, model), out.size());
    if (fresh) out.push_back({topic, model, {}});
    out[it->second].entries.push_back({doc, value});
  }
  return out;
}

}  // namespace priorart
