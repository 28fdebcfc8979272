#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "saekit/errors.hpp"
#include "saekit/io.hpp"
#include "saekit/matrix.hpp"
#include "saekit/rng.hpp"

namespace saekit {

// Activation dump format ("SAED"):
//   magic "SAED", u32 version = 1, u64 rows, u32 dim, u8 has_token_ids,
//   f32 values row-major, u32 token ids if flagged. Little-endian.
inline constexpr uint32_t kSaedVersion = 1;

struct ActivationDataset {
  uint64_t rows = 0;
  uint32_t dim = 0;
  std::vector<float> values;  // row-major, rows * dim
  std::optional<std::vector<uint32_t>> token_ids;
  std::string source_meta;

  std::span<const float> row(uint64_t r) const {
    return {values.data() + r * dim, dim};
  }

  std::vector<double> row_as_double(uint64_t r) const {
    const auto s = row(r);
    return std::vector<double>(s.begin(), s.end());
  }
};

inline uint64_t saed_expected_bytes(uint64_t rows, uint32_t dim, bool has_ids) {
  return 4 + 4 + 8 + 4 + 1 + rows * dim * 4 + (has_ids ? rows * 4 : 0);
}

inline void write_dataset(const ActivationDataset& ds, const std::string& path) {
  if (ds.values.size() != ds.rows * ds.dim)
    throw ShapeError("write_dataset: values size does not match rows*dim");
  if (ds.token_ids && ds.token_ids->size() != ds.rows)
    throw ShapeError("write_dataset: token_ids length does not match rows");
  atomic_write_file(path, [&](std::ostream& os) {
    write_bytes(os, "SAED", 4);
    write_u32(os, kSaedVersion);
    write_u64(os, ds.rows);
    write_u32(os, ds.dim);
    write_u8(os, ds.token_ids ? 1 : 0);
    for (float v : ds.values) write_f32(os, v);
    if (ds.token_ids)
      for (uint32_t t : *ds.token_ids) write_u32(os, t);
  });
}

// Loads raw little-endian u32 token ids; length must equal expected_rows.
inline std::vector<uint32_t> load_token_id_sidecar(const std::string& path, uint64_t expected_rows) {
  const uint64_t bytes = file_size_bytes(path);
  if (bytes != expected_rows * 4)
    throw ShapeError("token-id sidecar " + path + " holds " + std::to_string(bytes / 4) +
                     " ids, expected " + std::to_string(expected_rows));
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open file: " + path);
  std::vector<uint32_t> ids(expected_rows);
  for (uint64_t i = 0; i < expected_rows; ++i) ids[i] = read_u32(is, "token id");
  return ids;
}

inline ActivationDataset open_dataset(const std::string& path,
                                      const std::optional<std::string>& token_sidecar = std::nullopt) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open file: " + path);
  char magic[4];
  if (!read_exact(is, magic, 4) || std::string(magic, 4) != "SAED")
    throw IoError("bad magic in " + path + ": expected SAED");
  const uint32_t version = read_u32(is, "version");
  if (version != kSaedVersion)
    throw IoError("unsupported SAED version " + std::to_string(version));
  ActivationDataset ds;
  ds.rows = read_u64(is, "rows");
  ds.dim = read_u32(is, "dim");
  const uint8_t has_ids = read_u8(is, "token-id flag");
  const uint64_t expected = saed_expected_bytes(ds.rows, ds.dim, has_ids != 0);
  const uint64_t actual = file_size_bytes(path);
  if (actual != expected)
    throw IoError(path + ": expected " + std::to_string(expected) + " bytes, file has " +
                  std::to_string(actual));
  ds.values.resize(ds.rows * ds.dim);
  for (uint64_t i = 0; i < ds.values.size(); ++i) {
    ds.values[i] = read_f32(is, "values");
    if (!std::isfinite(ds.values[i]))
      throw NumericError(path + ": non-finite value at row " + std::to_string(i / ds.dim));
  }
  if (has_ids) {
    std::vector<uint32_t> ids(ds.rows);
    for (uint64_t i = 0; i < ds.rows; ++i) ids[i] = read_u32(is, "token ids");
    ds.token_ids = std::move(ids);
  }
  if (token_sidecar) {
    if (ds.token_ids) throw ConfigError("dataset already has inline token ids");
    ds.token_ids = load_token_id_sidecar(*token_sidecar, ds.rows);
  }
  ds.source_meta = path;
  return ds;
}

// Seeded, disjoint, exhaustive row partition. Each fraction must be positive
// and they must sum to 1 within 1e-9; per-split counts are floored and the
// remainder rows go to train.
struct SplitFractions {
  double train, val, test;
};

inline std::array<ActivationDataset, 3> split(const ActivationDataset& ds,
                                              SplitFractions f, uint64_t seed) {
  if (!(f.train > 0.0 && f.val > 0.0 && f.test > 0.0))
    throw ConfigError("split fractions must all be positive");
  if (std::abs(f.train + f.val + f.test - 1.0) > 1e-9)
    throw ConfigError("split fractions must sum to 1");
  const uint64_t n_val = static_cast<uint64_t>(f.val * static_cast<double>(ds.rows));
  const uint64_t n_test = static_cast<uint64_t>(f.test * static_cast<double>(ds.rows));
  if (n_val + n_test > ds.rows) throw ConfigError("split fractions exceed dataset size");
  const uint64_t n_train = ds.rows - n_val - n_test;  // floor each, remainder to train
  if (n_train == 0 || n_val == 0 || n_test == 0)
    throw ConfigError("split would produce an empty subset");

  Rng rng(derive_seed(seed, "split"));
  const std::vector<uint64_t> perm = rng.permutation(ds.rows);
  std::array<ActivationDataset, 3> out;
  const std::array<uint64_t, 3> counts{n_train, n_val, n_test};
  uint64_t cursor = 0;
  for (size_t s = 0; s < 3; ++s) {
    ActivationDataset& part = out[s];
    part.dim = ds.dim;
    part.rows = counts[s];
    part.values.resize(counts[s] * ds.dim);
    if (ds.token_ids) part.token_ids = std::vector<uint32_t>(counts[s]);
    part.source_meta = ds.source_meta;
    for (uint64_t i = 0; i < counts[s]; ++i) {
      const uint64_t src = perm[cursor + i];
      const auto r = ds.row(src);
      std::copy(r.begin(), r.end(), part.values.begin() + i * ds.dim);
      if (ds.token_ids) (*part.token_ids)[i] = (*ds.token_ids)[src];
    }
    cursor += counts[s];
  }
  return out;
}

inline Matrix rows_as_matrix(const ActivationDataset& ds) {
  Matrix m(ds.rows, ds.dim);
  for (size_t i = 0; i < ds.values.size(); ++i) m.data[i] = ds.values[i];
  return m;
}

}  // namespace saekit
