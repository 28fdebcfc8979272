#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "saekit/errors.hpp"

namespace saekit {

// Little-endian binary file helpers, written byte-by-byte so the on-disk
// layout does not depend on host endianness.

inline void write_bytes(std::ostream& os, const void* p, size_t n) {
  os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

inline void write_u8(std::ostream& os, uint8_t v) { write_bytes(os, &v, 1); }

inline void write_u32(std::ostream& os, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  write_bytes(os, b, 4);
}

inline void write_u64(std::ostream& os, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  write_bytes(os, b, 8);
}

inline void write_f32(std::ostream& os, float v) {
  write_u32(os, std::bit_cast<uint32_t>(v));
}

inline bool read_exact(std::istream& is, void* p, size_t n) {
  is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  return static_cast<size_t>(is.gcount()) == n;
}

inline uint8_t read_u8(std::istream& is, const std::string& what) {
  uint8_t v;
  if (!read_exact(is, &v, 1)) throw IoError("truncated file while reading " + what);
  return v;
}

inline uint32_t read_u32(std::istream& is, const std::string& what) {
  unsigned char b[4];
  if (!read_exact(is, b, 4)) throw IoError("truncated file while reading " + what);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

inline uint64_t read_u64(std::istream& is, const std::string& what) {
  unsigned char b[8];
  if (!read_exact(is, b, 8)) throw IoError("truncated file while reading " + what);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

inline float read_f32(std::istream& is, const std::string& what) {
  return std::bit_cast<float>(read_u32(is, what));
}

// Writes through a temporary sibling then renames, so consumers never see a
// partially written file.
template <typename WriteFn>
void atomic_write_file(const std::string& path, WriteFn&& fn) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open for writing: " + tmp);
    fn(os);
    os.flush();
    if (!os) throw IoError("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed for " + path + ": " + ec.message());
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open file: " + path);
  std::string s((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return s;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  atomic_write_file(path, [&](std::ostream& os) { os << content; });
}

inline uint64_t file_size_bytes(const std::string& path) {
  std::error_code ec;
  const auto sz = std::filesystem::file_size(path, ec);
  if (ec) throw IoError("cannot stat file: " + path);
  return static_cast<uint64_t>(sz);
}

}  // namespace saekit
