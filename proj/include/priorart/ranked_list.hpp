#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace priorart {

struct RankedEntry {
  std::string doc_id;
  double score = 0.0;
  friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

// Results for one topic from one model or fused stage. Entries are sorted by
// descending score, ties by ascending doc id, without duplicates.
struct RankedList {
  std::string topic_id;
  std::string model_id;
  std::vector<RankedEntry> entries;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
  std::vector<std::string> doc_ids() const;
  friend bool operator==(const RankedList&, const RankedList&) = default;
};

inline constexpr std::size_t kDefaultCutoff = 1000;

// Sorts by (score desc, doc id asc) and truncates to `cutoff`.
void sort_and_cut(std::vector<RankedEntry>& entries, std::size_t cutoff);

}  // namespace priorart
