#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "saekit/dataset.hpp"
#include "saekit/errors.hpp"
#include "saekit/matrix.hpp"
#include "saekit/rng.hpp"

namespace saekit {

struct ShuffleStream {
  size_t batch_size = 4096;
  size_t buffer_batches = 4;
  uint64_t seed = 0;

  void validate() const {
    if (batch_size == 0) throw ConfigError("batch_size must be positive");
    if (buffer_batches == 0) throw ConfigError("buffer_batches must be >= 1");
  }
};

struct Batch {
  Matrix values;                      // batch_size x dim, f64
  std::vector<uint64_t> row_indices;  // source rows, for alignment and tests
};

// Deterministic buffered shuffle over one epoch: rows are pulled in file
// order into a buffer of buffer_batches * batch_size rows, the buffer is
// permuted with the seeded generator, and full batches are emitted. The
// final partial buffer is permuted the same way; rows short of a full batch
// are dropped and counted. Every row is emitted at most once per epoch.
class BatchStream {
 public:
  BatchStream(const ActivationDataset& ds, ShuffleStream cfg)
      : ds_(&ds), cfg_(cfg), rng_(cfg.seed) {
    cfg_.validate();
    if (ds.rows < cfg_.batch_size)
      throw ConfigError("dataset has fewer rows than one batch");
    reset();
  }

  void reset() {
    rng_ = Rng(cfg_.seed);
    cursor_ = 0;
    buffer_.clear();
    buffer_pos_ = 0;
    rows_dropped_ = 0;
  }

  uint64_t rows_dropped() const { return rows_dropped_; }

  std::optional<Batch> next() {
    if (buffer_pos_ + cfg_.batch_size > buffer_.size() && !refill()) return std::nullopt;
    Batch b;
    b.values = Matrix(cfg_.batch_size, ds_->dim);
    b.row_indices.resize(cfg_.batch_size);
    for (size_t i = 0; i < cfg_.batch_size; ++i) {
      const uint64_t src = buffer_[buffer_pos_ + i];
      b.row_indices[i] = src;
      const auto r = ds_->row(src);
      auto dst = b.values.row(i);
      for (size_t c = 0; c < r.size(); ++c) dst[c] = r[c];
    }
    buffer_pos_ += cfg_.batch_size;
    return b;
  }

 private:
  bool refill() {
    rows_dropped_ += buffer_.size() - buffer_pos_;
    buffer_.clear();
    buffer_pos_ = 0;
    if (cursor_ >= ds_->rows) return false;
    const uint64_t capacity = static_cast<uint64_t>(cfg_.batch_size) * cfg_.buffer_batches;
    const uint64_t take = std::min<uint64_t>(capacity, ds_->rows - cursor_);
    buffer_.resize(take);
    for (uint64_t i = 0; i < take; ++i) buffer_[i] = cursor_ + i;
    cursor_ += take;
    rng_.shuffle(buffer_);
    if (buffer_.size() < cfg_.batch_size) {
      rows_dropped_ += buffer_.size();
      buffer_.clear();
      return false;
    }
    return true;
  }

  const ActivationDataset* ds_;
  ShuffleStream cfg_;
  Rng rng_;
  uint64_t cursor_ = 0;
  std::vector<uint64_t> buffer_;
  size_t buffer_pos_ = 0;
  uint64_t rows_dropped_ = 0;
};

}  // namespace saekit
