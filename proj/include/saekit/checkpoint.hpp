#pragma once

#include <cstdint>
#include <string>

#include "saekit/io.hpp"
#include "saekit/sae.hpp"

namespace saekit {

// Checkpoint format ("SAE1"): magic "SAE1", u32 version = 1, u32 n, u32 M,
// then b_enc, w_enc (row-major), b_dec, w_dec (column-major) as f32 arrays.
// Little-endian throughout.
inline constexpr uint32_t kCheckpointVersion = 1;

inline void save_checkpoint(const SaeParams& p, const std::string& path) {
  atomic_write_file(path, [&](std::ostream& os) {
    write_bytes(os, "SAE1", 4);
    write_u32(os, kCheckpointVersion);
    write_u32(os, static_cast<uint32_t>(p.n));
    write_u32(os, static_cast<uint32_t>(p.m));
    for (double v : p.b_enc) write_f32(os, static_cast<float>(v));
    for (double v : p.w_enc.data) write_f32(os, static_cast<float>(v));
    for (double v : p.b_dec) write_f32(os, static_cast<float>(v));
    for (size_t j = 0; j < p.m; ++j)
      for (size_t i = 0; i < p.n; ++i) write_f32(os, static_cast<float>(p.w_dec(i, j)));
  });
}

inline SaeParams load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open file: " + path);
  char magic[4];
  if (!read_exact(is, magic, 4) || std::string(magic, 4) != "SAE1")
    throw IoError("bad magic in " + path + ": expected SAE1");
  const uint32_t version = read_u32(is, "version");
  if (version != kCheckpointVersion)
    throw IoError("unsupported checkpoint version " + std::to_string(version));
  const uint32_t n = read_u32(is, "n");
  const uint32_t m = read_u32(is, "M");
  if (n == 0 || m == 0) throw IoError("checkpoint has zero dimension");
  const uint64_t expected = 4 + 4 + 4 + 4 + 4ULL * (m + static_cast<uint64_t>(m) * n + n + static_cast<uint64_t>(n) * m);
  const uint64_t actual = file_size_bytes(path);
  if (actual != expected)
    throw IoError(path + ": expected " + std::to_string(expected) + " bytes, file has " + std::to_string(actual));
  SaeParams p;
  p.n = n;
  p.m = m;
  p.b_enc.resize(m);
  p.w_enc = Matrix(m, n);
  p.b_dec.resize(n);
  p.w_dec = Matrix(n, m);
  for (auto& v : p.b_enc) v = read_f32(is, "b_enc");
  for (auto& v : p.w_enc.data) v = read_f32(is, "w_enc");
  for (auto& v : p.b_dec) v = read_f32(is, "b_dec");
  for (size_t j = 0; j < m; ++j)
    for (size_t i = 0; i < n; ++i) p.w_dec(i, j) = read_f32(is, "w_dec");
  return p;
}

}  // namespace saekit
