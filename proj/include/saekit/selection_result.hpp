#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "saekit/csv.hpp"

namespace saekit {

// Ranked document selection. Scores are non-increasing; cum_tokens is the
// running whitespace-token count over the ranking.
struct SelectionResult {
  struct Entry {
    uint64_t doc_id;
    double score;
    uint64_t cum_tokens;
  };
  std::vector<Entry> entries;
  uint64_t tokens_consumed = 0;
  // Set when a token budget was requested but the whole corpus fell short.
  bool budget_exceeds_corpus = false;
};

inline void write_selection_csv(const SelectionResult& r, const std::string& path) {
  CsvBuilder csv({"rank", "doc_id", "score", "cum_tokens"});
  for (size_t i = 0; i < r.entries.size(); ++i)
    csv.row_strings({std::to_string(i + 1), std::to_string(r.entries[i].doc_id),
                     csv_double(r.entries[i].score), std::to_string(r.entries[i].cum_tokens)});
  csv.write(path);
}

}  // namespace saekit
