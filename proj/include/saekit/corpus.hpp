#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "saekit/errors.hpp"
#include "saekit/io.hpp"

namespace saekit {

struct Doc {
  uint64_t id = 0;
  std::string text;
  // Optional half-open range of activation rows belonging to this doc.
  std::optional<std::pair<uint64_t, uint64_t>> row_range;
};

struct Corpus {
  std::vector<Doc> docs;
};

// Corpus input: JSON-lines, one object per line with fields id (u64) and
// text (string); optional row_begin/row_end link the doc to activation rows.
inline Corpus load_corpus_jsonl(const std::string& path) {
  const std::string text = read_text_file(path);
  Corpus corpus;
  std::unordered_set<uint64_t> seen;
  size_t line_no = 0;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    ++line_no;
    std::string line = text.substr(start, end - start);
    start = end + 1;
    if (line.empty() || line == "\r") continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.contains("id") || !j.contains("text"))
      throw ParseError(path + ":" + std::to_string(line_no) + ": missing id or text field");
    Doc d;
    d.id = j.at("id").get<uint64_t>();
    d.text = j.at("text").get<std::string>();
    if (j.contains("row_begin") != j.contains("row_end"))
      throw ParseError(path + ":" + std::to_string(line_no) + ": row_begin/row_end must appear together");
    if (j.contains("row_begin"))
      d.row_range = {j.at("row_begin").get<uint64_t>(), j.at("row_end").get<uint64_t>()};
    if (!seen.insert(d.id).second)
      throw ParseError(path + ":" + std::to_string(line_no) + ": duplicate doc id " + std::to_string(d.id));
    corpus.docs.push_back(std::move(d));
  }
  return corpus;
}

// Retrieval tokenization: UTF-8 aware, ASCII letters lowercased, runs of
// ASCII alphanumerics (plus any non-ASCII codepoint, kept verbatim) form
// terms; everything else separates. No stemming, no stopwords.
inline std::vector<std::string> tokenize_for_retrieval(const std::string& text) {
  std::vector<std::string> terms;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      cur += static_cast<char>(std::tolower(c));
    } else if (c >= 0x80) {
      cur += static_cast<char>(c);
    } else {
      if (!cur.empty()) terms.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) terms.push_back(std::move(cur));
  return terms;
}

// Token budget arithmetic uses whitespace-separated token counts.
inline uint64_t whitespace_token_count(const std::string& text) {
  uint64_t count = 0;
  bool in_token = false;
  for (unsigned char c : text) {
    const bool space = std::isspace(c);
    if (!space && !in_token) ++count;
    in_token = !space;
  }
  return count;
}

}  // namespace saekit
