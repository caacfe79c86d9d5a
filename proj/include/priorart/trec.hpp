#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "priorart/ranked_list.hpp"

namespace priorart {

// Shortest decimal form that reads back to the same double.
std::string format_score(double v);

// `topic_id Q0 patent_id rank score model_id`, ranks starting at 1.
void write_run(std::ostream& out, const RankedList& list);
void write_run_file(const std::string& path, const std::vector<RankedList>& lists);

// Groups lines by (topic, model) in order of first appearance; entries keep
// file order. Throws ParseError on malformed lines.
std::vector<RankedList> read_run_file(const std::string& path);

}  // namespace priorart
