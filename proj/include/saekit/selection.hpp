#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "saekit/bm25.hpp"
#include "saekit/corpus.hpp"
#include "saekit/dataset.hpp"
#include "saekit/dense.hpp"
#include "saekit/selection_result.hpp"
#include "saekit/tracin.hpp"

namespace saekit {

enum class RetrievalMethod { bm25, dense };

// Inputs for the two-stage pipeline; only the pieces needed by the chosen
// method / rerank flag must be present.
struct TwoStageInputs {
  const Corpus* corpus = nullptr;
  std::vector<std::string> seed_texts;       // bm25 stage
  const EmbeddingSet* seed_embeddings = nullptr;       // dense stage
  const EmbeddingSet* candidate_embeddings = nullptr;  // dense stage, ids = doc ids
  const SaeParams* params = nullptr;                   // tracin rerank
  const ActivationDataset* activations = nullptr;      // tracin rerank
  const Matrix* seed_rows = nullptr;                   // tracin rerank
  double lambda = 0.0;
};

namespace detail {
inline Matrix doc_rows(const Doc& doc, const ActivationDataset& ds) {
  if (!doc.row_range)
    throw ConfigError("doc " + std::to_string(doc.id) + " has no activation row range");
  const auto [lo, hi] = *doc.row_range;
  if (lo >= hi || hi > ds.rows)
    throw ShapeError("doc " + std::to_string(doc.id) + " has invalid row range");
  Matrix m(hi - lo, ds.dim);
  for (uint64_t r = lo; r < hi; ++r) {
    const auto src = ds.row(r);
    auto dst = m.row(r - lo);
    for (size_t c = 0; c < src.size(); ++c) dst[c] = src[c];
  }
  return m;
}
}  // namespace detail

// Stage 1 keeps the top filter_fraction of the corpus by retrieval score;
// stage 2 (optional) stably reorders survivors by descending TracIn score;
// docs are then accumulated greedily until token_budget is met or exceeded
// by at most one doc.
inline SelectionResult two_stage_select(const TwoStageInputs& in, RetrievalMethod method,
                                        double filter_fraction, bool rerank,
                                        uint64_t token_budget) {
  if (!in.corpus || in.corpus->docs.empty()) throw ShapeError("two_stage_select: empty corpus");
  if (!(filter_fraction > 0.0 && filter_fraction <= 1.0))
    throw ConfigError("filter_fraction must be in (0, 1]");
  if (token_budget == 0) throw ConfigError("token_budget must be positive");
  const size_t n_docs = in.corpus->docs.size();

  // Stage 1: retrieval ranking over the full corpus.
  SelectionResult stage1;
  if (method == RetrievalMethod::bm25) {
    const Bm25Index index = bm25_build(*in.corpus);
    stage1 = bm25_retrieve(index, in.seed_texts, n_docs);
  } else {
    if (!in.seed_embeddings || !in.candidate_embeddings)
      throw ConfigError("dense selection requires seed and candidate embeddings");
    stage1 = dense_retrieve(*in.seed_embeddings, *in.candidate_embeddings, n_docs);
  }
  const size_t keep = std::max<size_t>(
      1, static_cast<size_t>(filter_fraction * static_cast<double>(stage1.entries.size())));
  stage1.entries.resize(std::min(keep, stage1.entries.size()));

  std::unordered_map<uint64_t, const Doc*> by_id;
  for (const auto& d : in.corpus->docs) by_id[d.id] = &d;

  // Stage 2: TracIn rerank of the survivors (stable: retrieval order is
  // preserved on score ties).
  struct Ranked {
    const Doc* doc;
    double score;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(stage1.entries.size());
  for (const auto& e : stage1.entries) {
    const auto it = by_id.find(e.doc_id);
    if (it == by_id.end()) throw ShapeError("embedding id " + std::to_string(e.doc_id) + " not in corpus");
    ranked.push_back({it->second, e.score});
  }
  if (rerank) {
    if (!in.params || !in.activations || !in.seed_rows)
      throw ConfigError("tracin rerank requires params, activations and seed rows");
    for (auto& r : ranked)
      r.score = tracin_score(*in.params, detail::doc_rows(*r.doc, *in.activations),
                             *in.seed_rows, in.lambda);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const Ranked& a, const Ranked& b) { return a.score > b.score; });
  }

  // Budgeted accumulation.
  SelectionResult out;
  uint64_t cum = 0;
  for (const auto& r : ranked) {
    if (cum >= token_budget) break;
    cum += whitespace_token_count(r.doc->text);
    out.entries.push_back({r.doc->id, r.score, cum});
  }
  out.tokens_consumed = cum;
  out.budget_exceeds_corpus = cum < token_budget;
  return out;
}

}  // namespace saekit
