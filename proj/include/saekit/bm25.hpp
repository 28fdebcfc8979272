#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "saekit/corpus.hpp"
#include "saekit/errors.hpp"
#include "saekit/selection_result.hpp"

namespace saekit {

// Okapi BM25 inverted index. idf uses the +1-inside-the-log variant,
// ln((N - df + 0.5) / (df + 0.5) + 1), which never goes negative.
struct Bm25Index {
  double k1 = 1.2;
  double b = 0.75;
  double avgdl = 0.0;
  std::vector<uint64_t> doc_ids;
  std::vector<uint64_t> doc_lengths;     // in retrieval tokens
  std::vector<uint64_t> ws_token_counts; // whitespace tokens, for budget math
  // term -> (doc index, term frequency), doc indices ascending
  std::unordered_map<std::string, std::vector<std::pair<uint32_t, uint32_t>>> postings;

  double idf(const std::string& term) const {
    const auto it = postings.find(term);
    const double df = it == postings.end() ? 0.0 : static_cast<double>(it->second.size());
    const double n = static_cast<double>(doc_ids.size());
    return std::log((n - df + 0.5) / (df + 0.5) + 1.0);
  }
};

inline Bm25Index bm25_build(const Corpus& corpus, double k1 = 1.2, double b = 0.75) {
  if (corpus.docs.empty()) throw ShapeError("bm25_build: empty corpus");
  Bm25Index index;
  index.k1 = k1;
  index.b = b;
  uint64_t total_len = 0;
  for (size_t d = 0; d < corpus.docs.size(); ++d) {
    const auto terms = tokenize_for_retrieval(corpus.docs[d].text);
    std::unordered_map<std::string, uint32_t> tf;
    for (const auto& t : terms) ++tf[t];
    for (const auto& [term, count] : tf)
      index.postings[term].push_back({static_cast<uint32_t>(d), count});
    index.doc_ids.push_back(corpus.docs[d].id);
    index.doc_lengths.push_back(terms.size());
    index.ws_token_counts.push_back(whitespace_token_count(corpus.docs[d].text));
    total_len += terms.size();
  }
  for (auto& [term, plist] : index.postings)
    std::sort(plist.begin(), plist.end());
  index.avgdl = static_cast<double>(total_len) / static_cast<double>(corpus.docs.size());
  return index;
}

// Scores every document against the query term multiset (query term counts
// multiply the per-term contribution).
inline std::vector<double> bm25_score_all(const Bm25Index& index,
                                          const std::vector<std::string>& query_terms) {
  std::unordered_map<std::string, uint32_t> qtf;
  for (const auto& t : query_terms) ++qtf[t];
  std::vector<double> scores(index.doc_ids.size(), 0.0);
  for (const auto& [term, qcount] : qtf) {
    const auto it = index.postings.find(term);
    if (it == index.postings.end()) continue;
    const double idf = index.idf(term);
    for (const auto& [doc, tf] : it->second) {
      const double dl = static_cast<double>(index.doc_lengths[doc]);
      const double denom = static_cast<double>(tf) +
                           index.k1 * (1.0 - index.b + index.b * dl / index.avgdl);
      scores[doc] += static_cast<double>(qcount) * idf *
                     (static_cast<double>(tf) * (index.k1 + 1.0)) / denom;
    }
  }
  return scores;
}

// Ranks docs by score descending, ties by ascending doc id.
inline std::vector<size_t> rank_by_score(const std::vector<double>& scores,
                                         const std::vector<uint64_t>& doc_ids) {
  std::vector<size_t> order(scores.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return doc_ids[a] < doc_ids[b];
  });
  return order;
}

// Query = the union multiset of all seed-text terms.
inline SelectionResult bm25_retrieve(const Bm25Index& index,
                                     const std::vector<std::string>& seed_texts,
                                     size_t top_k) {
  if (top_k == 0) throw ConfigError("top_k must be >= 1");
  std::vector<std::string> query;
  for (const auto& s : seed_texts) {
    auto terms = tokenize_for_retrieval(s);
    query.insert(query.end(), terms.begin(), terms.end());
  }
  const std::vector<double> scores = bm25_score_all(index, query);
  const std::vector<size_t> order = rank_by_score(scores, index.doc_ids);
  SelectionResult result;
  uint64_t cum = 0;
  for (size_t r = 0; r < std::min(top_k, order.size()); ++r) {
    const size_t d = order[r];
    cum += index.ws_token_counts[d];
    result.entries.push_back({index.doc_ids[d], scores[d], cum});
  }
  result.tokens_consumed = cum;
  return result;
}

}  // namespace saekit
