#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "saekit/dataset.hpp"
#include "saekit/errors.hpp"
#include "saekit/prompt_texts.hpp"
#include "saekit/rng.hpp"
#include "saekit/sae.hpp"

namespace saekit {

// One text example whose tokens align 1:1 with consecutive dataset rows
// starting at row_begin.
struct TokenizedExample {
  std::vector<std::string> tokens;
  uint64_t row_begin = 0;
};

inline void check_examples_aligned(const std::vector<TokenizedExample>& examples,
                                   const ActivationDataset& ds) {
  for (const auto& e : examples)
    if (e.row_begin + e.tokens.size() > ds.rows)
      throw ShapeError("example rows extend past the dataset");
}

// Joins tokens with single spaces and wraps maximal runs of activating
// tokens in << >> delimiters; consecutive activating tokens share one pair.
inline std::string delimit_activating_tokens(const std::vector<std::string>& tokens,
                                             const std::vector<double>& activations,
                                             double threshold = 0.0) {
  if (tokens.size() != activations.size())
    throw ShapeError("delimit_activating_tokens: token/activation length mismatch");
  std::string out;
  bool open = false;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    const bool active = activations[i] > threshold;
    if (active && !open) {
      out += "<<";
      open = true;
    }
    out += tokens[i];
    const bool next_active = i + 1 < tokens.size() && activations[i + 1] > threshold;
    if (open && !next_active) {
      out += ">>";
      open = false;
    }
  }
  return out;
}

struct ActivatingExample {
  size_t example_index = 0;
  double max_activation = 0.0;
  std::string delimited_text;
};

struct TopExamples {
  std::vector<ActivatingExample> examples;
  bool feature_dead = false;  // no example activates the feature
};

inline std::vector<double> feature_activations(const SaeParams& p, const ActivationDataset& ds,
                                               const TokenizedExample& example, size_t feature) {
  std::vector<double> acts(example.tokens.size());
  for (size_t t = 0; t < example.tokens.size(); ++t)
    acts[t] = encode(p, ds.row_as_double(example.row_begin + t))[feature];
  return acts;
}

// The k examples with the highest per-example max activation of the
// feature, ties broken by ascending example index, formatted with
// activation delimiters.
inline TopExamples top_activating_examples(const SaeParams& p, const ActivationDataset& ds,
                                           const std::vector<TokenizedExample>& examples,
                                           size_t feature, size_t k = 10,
                                           double threshold = 0.0) {
  if (feature >= p.m) throw ShapeError("feature index out of range");
  check_examples_aligned(examples, ds);
  std::vector<std::pair<double, size_t>> ranked;  // (max activation, index)
  std::vector<std::vector<double>> all_acts(examples.size());
  for (size_t e = 0; e < examples.size(); ++e) {
    all_acts[e] = feature_activations(p, ds, examples[e], feature);
    double mx = 0.0;
    for (double a : all_acts[e]) mx = std::max(mx, a);
    ranked.push_back({mx, e});
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  TopExamples out;
  for (size_t r = 0; r < std::min(k, ranked.size()); ++r) {
    const auto [mx, e] = ranked[r];
    if (mx <= threshold) break;  // only activating examples qualify
    out.examples.push_back(
        {e, mx, delimit_activating_tokens(examples[e].tokens, all_acts[e], threshold)});
  }
  out.feature_dead = out.examples.empty();
  return out;
}

// ---- prompt construction ----------------------------------------------

namespace detail {
inline std::string replace_once(std::string text, std::string_view placeholder,
                                std::string_view value) {
  const size_t pos = text.find(placeholder);
  if (pos == std::string::npos)
    throw ParseError("template is missing placeholder " + std::string(placeholder));
  text.replace(pos, placeholder.size(), value);
  return text;
}
}  // namespace detail

// "\nExample 1: <text>\nExample 2: <text>\n..." (1-based, trailing newline).
inline std::string render_examples_block(const std::vector<std::string>& example_texts) {
  if (example_texts.empty()) throw ConfigError("need at least one example");
  std::string out = "\n";
  for (size_t i = 0; i < example_texts.size(); ++i)
    out += "Example " + std::to_string(i + 1) + ": " + example_texts[i] + "\n";
  return out;
}

// The interpreter system prompt: the fixed template with the worked
// demonstration spliced into {prompt} and the configured (possibly empty)
// subject instructions into {subject_specific_instructions}.
inline std::string interpreter_system_prompt(const std::string& subject_instructions = "") {
  std::string demo = std::string(prompts::kInterpreterExampleBlock) +
                     std::string(prompts::kInterpreterExampleExplanation);
  std::string text = detail::replace_once(std::string(prompts::kInterpreterSystemTemplate),
                                          "{prompt}", demo);
  return detail::replace_once(std::move(text), "{subject_specific_instructions}",
                              subject_instructions);
}

// The per-feature interpreter user text: the examples block.
inline std::string build_interpreter_prompt(const std::vector<std::string>& example_texts) {
  return render_examples_block(example_texts);
}

inline std::string predictor_system_prompt() {
  return std::string(prompts::kPredictorSystemPrompt);
}

// "Feature explanation: <expl>\nText examples:\nExample 0:<text>\n..."
// (0-based, no space after the colon, trailing newline).
inline std::string build_predictor_prompt(const std::string& explanation,
                                          const std::vector<std::string>& example_texts) {
  if (explanation.empty()) throw ConfigError("explanation must be nonempty");
  if (example_texts.empty()) throw ConfigError("need at least one example");
  std::string out = "Feature explanation: " + explanation + "\nText examples:\n";
  for (size_t i = 0; i < example_texts.size(); ++i)
    out += "Example " + std::to_string(i) + ":" + example_texts[i] + "\n";
  return out;
}

inline std::string join_numbered_explanations(const std::vector<std::string>& explanations) {
  if (explanations.empty()) throw ConfigError("need at least one explanation");
  std::string joined;
  for (size_t i = 0; i < explanations.size(); ++i) {
    if (i) joined += "\n";
    joined += std::to_string(i + 1) + ". " + explanations[i];
  }
  return joined;
}

inline std::string build_aggregation_prompt(const std::vector<std::string>& explanations) {
  return detail::replace_once(std::string(prompts::kAggregationTemplate), "{explanations}",
                              join_numbered_explanations(explanations));
}

inline std::string build_diversity_prompt(const std::vector<std::string>& explanations) {
  return detail::replace_once(std::string(prompts::kDiversityTemplate), "{explanations}",
                              join_numbered_explanations(explanations));
}

// ---- response parsing ---------------------------------------------------

// The explanation is the text after the last "[EXPLANATION]:" marker.
inline std::string parse_explanation(const std::string& response) {
  const std::string marker = "[EXPLANATION]:";
  const size_t pos = response.rfind(marker);
  if (pos == std::string::npos) throw ParseError("response has no [EXPLANATION]: line");
  size_t start = pos + marker.size();
  while (start < response.size() && response[start] == ' ') ++start;
  size_t end = response.find('\n', start);
  if (end == std::string::npos) end = response.size();
  std::string text = response.substr(start, end - start);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.pop_back();
  if (text.empty()) throw ParseError("empty explanation");
  return text;
}

// First well-formed bracketed list of 0/1 values in the response.
inline std::vector<int> parse_prediction(const std::string& response) {
  for (size_t open = response.find('['); open != std::string::npos;
       open = response.find('[', open + 1)) {
    const size_t close = response.find(']', open);
    if (close == std::string::npos) break;
    std::vector<int> values;
    bool ok = true, expecting_value = true;
    for (size_t i = open + 1; i < close; ++i) {
      const char c = response[i];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
      if (expecting_value && (c == '0' || c == '1')) {
        values.push_back(c - '0');
        expecting_value = false;
      } else if (!expecting_value && c == ',') {
        expecting_value = true;
      } else {
        ok = false;
        break;
      }
    }
    if (ok && !values.empty() && !expecting_value) return values;
  }
  throw ParseError("response has no bracketed 0/1 list");
}

// F1 = 2PR / (P + R), defined as 0 when P + R = 0.
inline double f1_score(const std::vector<int>& preds, const std::vector<int>& truth) {
  if (preds.size() != truth.size()) throw ShapeError("f1: prediction/truth length mismatch");
  if (preds.empty()) throw ShapeError("f1: empty inputs");
  double tp = 0, fp = 0, fn = 0;
  for (size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] != 0 && preds[i] != 1) throw NumericError("f1: labels must be 0/1");
    if (truth[i] != 0 && truth[i] != 1) throw NumericError("f1: labels must be 0/1");
    if (preds[i] == 1 && truth[i] == 1) ++tp;
    if (preds[i] == 1 && truth[i] == 0) ++fp;
    if (preds[i] == 0 && truth[i] == 1) ++fn;
  }
  const double precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  const double recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  return precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

struct DiversityScore {
  int score = 0;
  bool out_of_range = false;  // raw value fell outside [1, 100] and was clamped
};

// Integer after the first "Diversity Score:" marker; values outside [1, 100]
// are clamped and flagged.
inline DiversityScore parse_diversity_score(const std::string& response) {
  const std::string marker = "Diversity Score:";
  const size_t pos = response.find(marker);
  if (pos == std::string::npos) throw ParseError("response has no Diversity Score: line");
  size_t i = pos + marker.size();
  while (i < response.size() && (response[i] == ' ' || response[i] == '[')) ++i;
  size_t end = i;
  while (end < response.size() && std::isdigit(static_cast<unsigned char>(response[end]))) ++end;
  if (end == i) throw ParseError("Diversity Score is not a number");
  const long raw = std::stol(response.substr(i, end - i));
  DiversityScore out;
  out.out_of_range = raw < 1 || raw > 100;
  out.score = static_cast<int>(std::clamp(raw, 1L, 100L));
  return out;
}

// ---- balanced example sampling -----------------------------------------

struct PredictionExamples {
  std::vector<size_t> example_indices;  // length n_pos + n_neg, shuffled
  std::vector<int> truth;               // 1 = activating
};

// Balanced activating / non-activating sample: activating examples drawn
// uniformly from those at or above the feature's median positive
// activation, non-activating uniformly from examples where the feature
// stays at zero. The combined list is shuffled so labels are not ordered.
inline PredictionExamples sample_prediction_examples(const SaeParams& p,
                                                     const ActivationDataset& ds,
                                                     const std::vector<TokenizedExample>& examples,
                                                     size_t feature, size_t n_pos, size_t n_neg,
                                                     Rng& rng, double threshold = 0.0) {
  check_examples_aligned(examples, ds);
  std::vector<std::pair<double, size_t>> positives;
  std::vector<size_t> negatives;
  for (size_t e = 0; e < examples.size(); ++e) {
    double mx = 0.0;
    for (double a : feature_activations(p, ds, examples[e], feature)) mx = std::max(mx, a);
    if (mx > threshold) positives.push_back({mx, e});
    else negatives.push_back(e);
  }
  if (positives.size() < n_pos)
    throw ShapeError("feature has only " + std::to_string(positives.size()) +
                     " activating examples, need " + std::to_string(n_pos));
  if (negatives.size() < n_neg)
    throw ShapeError("feature has only " + std::to_string(negatives.size()) +
                     " non-activating examples, need " + std::to_string(n_neg));
  std::sort(positives.begin(), positives.end());
  std::vector<size_t> strong;  // at or above the median positive activation
  for (size_t i = positives.size() / 2; i < positives.size(); ++i)
    strong.push_back(positives[i].second);
  // too few above the median: extend with the strongest remaining positives
  for (size_t i = positives.size() / 2; strong.size() < n_pos && i > 0; --i)
    strong.push_back(positives[i - 1].second);
  std::sort(strong.begin(), strong.end());

  rng.shuffle(strong);
  rng.shuffle(negatives);
  PredictionExamples out;
  struct Item {
    size_t index;
    int label;
  };
  std::vector<Item> items;
  for (size_t i = 0; i < n_pos; ++i) items.push_back({strong[i], 1});
  for (size_t i = 0; i < n_neg; ++i) items.push_back({negatives[i], 0});
  rng.shuffle(items);
  for (const auto& it : items) {
    out.example_indices.push_back(it.index);
    out.truth.push_back(it.label);
  }
  return out;
}

inline std::string plain_text(const TokenizedExample& e) {
  std::string out;
  for (size_t i = 0; i < e.tokens.size(); ++i) {
    if (i) out += ' ';
    out += e.tokens[i];
  }
  return out;
}

}  // namespace saekit
