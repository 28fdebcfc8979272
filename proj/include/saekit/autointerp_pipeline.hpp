#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "saekit/autointerp.hpp"
#include "saekit/csv.hpp"
#include "saekit/llm_client.hpp"

namespace saekit {

struct FeatureExplanation {
  size_t feature_id = 0;
  std::string explanation;
  std::vector<size_t> source_example_ids;
};

struct PredictionRecord {
  size_t feature_id = 0;
  std::vector<size_t> example_ids;
  std::vector<int> preds;
  std::vector<int> truth;
  double f1 = 0.0;
};

struct AutointerpResult {
  std::vector<FeatureExplanation> explanations;
  std::vector<PredictionRecord> records;
  std::vector<size_t> dead_features;
  std::vector<size_t> skipped_features;  // unparseable responses
};

struct AutointerpOptions {
  size_t top_k_examples = 10;
  size_t n_activating = 5;
  size_t n_non_activating = 5;
  double threshold = 0.0;
  uint64_t seed = 0;
  std::string subject_instructions;
};

// Interpreter/Predictor protocol over a feature list: explain each feature
// from its top activating examples, then score the explanation by F1 on a
// balanced activating/non-activating sample. Features whose responses do
// not parse are skipped and counted, not failed.
inline AutointerpResult run_autointerp(const SaeParams& params, const ActivationDataset& ds,
                                       const std::vector<TokenizedExample>& examples,
                                       const std::vector<size_t>& features, LlmClient& client,
                                       const AutointerpOptions& opt = {}) {
  AutointerpResult result;
  Rng rng(derive_seed(opt.seed, "autointerp"));
  const std::string interp_system = interpreter_system_prompt(opt.subject_instructions);
  const std::string pred_system = predictor_system_prompt();
  for (size_t feature : features) {
    const TopExamples top = top_activating_examples(params, ds, examples, feature,
                                                    opt.top_k_examples, opt.threshold);
    if (top.feature_dead) {
      result.dead_features.push_back(feature);
      continue;
    }
    std::vector<std::string> example_texts;
    FeatureExplanation expl;
    expl.feature_id = feature;
    for (const auto& e : top.examples) {
      example_texts.push_back(e.delimited_text);
      expl.source_example_ids.push_back(e.example_index);
    }
    const std::string interp_user = build_interpreter_prompt(example_texts);
    try {
      expl.explanation = parse_explanation(client.complete(interp_system, interp_user));
    } catch (const ParseError&) {
      result.skipped_features.push_back(feature);
      continue;
    }
    result.explanations.push_back(expl);

    PredictionExamples sample;
    try {
      sample = sample_prediction_examples(params, ds, examples, feature, opt.n_activating,
                                          opt.n_non_activating, rng, opt.threshold);
    } catch (const ShapeError&) {
      // not enough activating / non-activating examples to build the panel
      result.skipped_features.push_back(feature);
      continue;
    }
    std::vector<std::string> panel_texts;
    for (size_t idx : sample.example_indices) panel_texts.push_back(plain_text(examples[idx]));
    const std::string pred_user = build_predictor_prompt(expl.explanation, panel_texts);
    PredictionRecord rec;
    rec.feature_id = feature;
    rec.example_ids = sample.example_indices;
    rec.truth = sample.truth;
    try {
      rec.preds = parse_prediction(client.complete(pred_system, pred_user));
    } catch (const ParseError&) {
      result.skipped_features.push_back(feature);
      continue;
    }
    if (rec.preds.size() != rec.truth.size()) {
      result.skipped_features.push_back(feature);
      continue;
    }
    rec.f1 = f1_score(rec.preds, rec.truth);
    result.records.push_back(std::move(rec));
  }
  return result;
}

inline void write_f1_csv(const AutointerpResult& result, const std::string& path) {
  CsvBuilder csv({"feature_id", "f1", "n_skipped"});
  for (const auto& r : result.records)
    csv.row_strings({std::to_string(r.feature_id), csv_double(r.f1), "0"});
  for (size_t f : result.skipped_features)
    csv.row_strings({std::to_string(f), "", "1"});
  csv.write(path);
}

inline void write_explanations_csv(const AutointerpResult& result, const std::string& path) {
  CsvBuilder csv({"feature_id", "explanation"});
  for (const auto& e : result.explanations)
    csv.row_strings({std::to_string(e.feature_id), e.explanation});
  csv.write(path);
}

struct DiversityResult {
  std::string unified_explanation;
  int score = 0;
  bool out_of_range = false;
};

// Aggregation (unified explanation) followed by diversity scoring, both over
// the per-chunk explanations of one feature.
inline DiversityResult diversity_score_pipeline(const std::vector<std::string>& chunk_explanations,
                                                LlmClient& client) {
  if (chunk_explanations.empty()) throw ConfigError("need at least one chunk explanation");
  DiversityResult out;
  out.unified_explanation = client.complete("", build_aggregation_prompt(chunk_explanations));
  const std::string scored = client.complete("", build_diversity_prompt(chunk_explanations));
  const DiversityScore score = parse_diversity_score(scored);
  out.score = score.score;
  out.out_of_range = score.out_of_range;
  return out;
}

}  // namespace saekit
