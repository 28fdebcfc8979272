#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "saekit/dataset.hpp"
#include "saekit/errors.hpp"
#include "saekit/matrix.hpp"
#include "saekit/selection_result.hpp"

namespace saekit {

// Embedding rows are L2-normalized on load.
struct EmbeddingSet {
  std::vector<uint64_t> ids;
  Matrix vectors;  // count x dim, unit rows
};

inline EmbeddingSet make_embedding_set(std::vector<uint64_t> ids, Matrix vectors) {
  if (ids.size() != vectors.rows)
    throw ShapeError("embedding ids length does not match vector count");
  for (size_t r = 0; r < vectors.rows; ++r) {
    const double nrm = norm2(vectors.row(r));
    if (nrm < 1e-12)
      throw NumericError("zero-norm embedding for id " + std::to_string(ids[r]));
    for (double& v : vectors.row(r)) v /= nrm;
  }
  return {std::move(ids), std::move(vectors)};
}

// Embeddings arrive as a SAED matrix plus a sidecar of raw little-endian u64
// ids, one per row.
inline std::vector<uint64_t> load_id_sidecar(const std::string& path, uint64_t expected_rows) {
  const uint64_t bytes = file_size_bytes(path);
  if (bytes != expected_rows * 8)
    throw ShapeError("id sidecar " + path + " holds " + std::to_string(bytes / 8) +
                     " ids, expected " + std::to_string(expected_rows));
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open file: " + path);
  std::vector<uint64_t> ids(expected_rows);
  for (auto& id : ids) id = read_u64(is, "doc id");
  return ids;
}

inline EmbeddingSet load_embedding_set(const std::string& saed_path, const std::string& ids_path) {
  const ActivationDataset ds = open_dataset(saed_path);
  std::vector<uint64_t> ids = load_id_sidecar(ids_path, ds.rows);
  return make_embedding_set(std::move(ids), rows_as_matrix(ds));
}

// Candidate score = cosine similarity to the re-normalized mean of the
// normalized seed vectors; ties broken by ascending id.
inline SelectionResult dense_retrieve(const EmbeddingSet& seeds, const EmbeddingSet& candidates,
                                      size_t top_k) {
  if (top_k == 0) throw ConfigError("top_k must be >= 1");
  if (seeds.vectors.cols != candidates.vectors.cols)
    throw ShapeError("embedding dimensions differ: " + std::to_string(seeds.vectors.cols) +
                     " vs " + std::to_string(candidates.vectors.cols));
  if (seeds.vectors.rows == 0) throw ShapeError("no seed embeddings");
  std::vector<double> mean(seeds.vectors.cols, 0.0);
  for (size_t r = 0; r < seeds.vectors.rows; ++r)
    for (size_t c = 0; c < seeds.vectors.cols; ++c) mean[c] += seeds.vectors(r, c);
  const double nrm = norm2(mean);
  if (nrm < 1e-12) throw NumericError("zero-norm mean seed vector");
  for (double& v : mean) v /= nrm;

  std::vector<double> scores(candidates.vectors.rows);
  for (size_t r = 0; r < candidates.vectors.rows; ++r)
    scores[r] = dot(candidates.vectors.row(r), mean);

  std::vector<size_t> order(scores.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return candidates.ids[a] < candidates.ids[b];
  });

  SelectionResult result;
  for (size_t r = 0; r < std::min(top_k, order.size()); ++r)
    result.entries.push_back({candidates.ids[order[r]], scores[order[r]], 0});
  return result;
}

}  // namespace saekit
