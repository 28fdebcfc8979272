// saekit command-line interface: subcommands over the library for dataset
// generation, training, data selection, sweeps, evaluation, influence
// scoring, automated interpretability, and description-length reports.
//
// Every command writes its outputs plus a resolved_config.cfg snapshot into
// --out; rerunning a command from that snapshot reproduces the outputs
// bit-exactly (autointerp requires mock mode for that guarantee).

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "saekit/autointerp_pipeline.hpp"
#include "saekit/checkpoint.hpp"
#include "saekit/config.hpp"
#include "saekit/csv.hpp"
#include "saekit/dataset.hpp"
#include "saekit/dense.hpp"
#include "saekit/errors.hpp"
#include "saekit/llm_http.hpp"
#include "saekit/mdl.hpp"
#include "saekit/metrics.hpp"
#include "saekit/pareto.hpp"
#include "saekit/selection.hpp"
#include "saekit/synth.hpp"
#include "saekit/tracin.hpp"
#include "saekit/train.hpp"

namespace fs = std::filesystem;
using namespace saekit;

namespace {

int exit_code_for(const Error& e) {
  const std::map<std::string, int> codes{{"config", 2}, {"io", 3},      {"shape", 4},
                                         {"numeric", 5}, {"parse", 6},  {"network", 7}};
  const auto it = codes.find(e.category());
  return it == codes.end() ? 1 : it->second;
}

std::string out_path(const std::string& out_dir, const std::string& name) {
  return (fs::path(out_dir) / name).string();
}

void prepare_out_dir(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());
}

void write_dataset_debug_csv(const ActivationDataset& ds, const std::string& path) {
  std::vector<std::string> header{"row"};
  for (uint32_t c = 0; c < ds.dim; ++c) header.push_back("v" + std::to_string(c));
  if (ds.token_ids) header.push_back("token_id");
  CsvBuilder csv(header);
  for (uint64_t r = 0; r < ds.rows; ++r) {
    std::vector<std::string> cells{std::to_string(r)};
    for (float v : ds.row(r)) cells.push_back(csv_double(v));
    if (ds.token_ids) cells.push_back(std::to_string((*ds.token_ids)[r]));
    csv.row_strings(cells);
  }
  csv.write(path);
}

// ---- configuration plumbing --------------------------------------------

// Layered config: file keys first, then CLI overrides; unknown keys are
// rejected against the per-command schema before use.
struct ConfigLayer {
  RunConfig cfg;

  void load_file(const std::string& path) {
    if (!path.empty()) cfg = RunConfig::from_file(path);
  }
  void override_if(bool present, const std::string& key, const std::string& value) {
    if (present) cfg.set(key, value);
  }
  void finalize(const std::set<std::string>& known, const std::string& out_dir) {
    cfg.require_known(known);
    prepare_out_dir(out_dir);
    cfg.write_resolved(out_path(out_dir, "resolved_config.cfg"));
  }
};

TrainConfig train_config_from(const RunConfig& cfg) {
  TrainConfig tc;
  tc.lambda = cfg.has("lambda") ? cfg.get_double("lambda") : 0.0;
  if (cfg.has("lr")) tc.lr = cfg.get_double("lr");
  if (cfg.has("batch_size")) tc.batch_size = cfg.get_u64("batch_size");
  if (cfg.has("steps")) tc.steps = cfg.get_u64("steps");
  if (cfg.has("lr_decay_last_steps")) tc.lr_decay_last_steps = cfg.get_u64("lr_decay_last_steps");
  if (cfg.has("buffer_batches")) tc.buffer_batches = cfg.get_u64("buffer_batches");
  if (cfg.has("seed")) tc.seed = cfg.get_u64("seed");
  if (cfg.has("tilt_t")) {
    TiltConfig tilt;
    tilt.t = cfg.get_double("tilt_t");
    if (cfg.has("tilt_hard_max_threshold"))
      tilt.hard_max_threshold = cfg.get_double("tilt_hard_max_threshold");
    tc.tilt = tilt;
  } else if (cfg.has("tilt_hard_max_threshold")) {
    throw ConfigError("tilt_hard_max_threshold requires tilt_t");
  }
  const bool any_ada = cfg.has("adaptive_l0_low") || cfg.has("adaptive_l0_high") ||
                       cfg.has("adaptive_lambda_factor") || cfg.has("adaptive_check_interval");
  if (any_ada) {
    AdaptiveLambdaConfig ada;
    ada.l0_target_low = cfg.get_double("adaptive_l0_low");
    ada.l0_target_high = cfg.get_double("adaptive_l0_high");
    if (cfg.has("adaptive_lambda_factor"))
      ada.lambda_step_factor = cfg.get_double("adaptive_lambda_factor");
    if (cfg.has("adaptive_check_interval"))
      ada.check_interval = cfg.get_u64("adaptive_check_interval");
    tc.adaptive_lambda = ada;
  }
  return tc;
}

const std::set<std::string> kTrainKeys{
    "data", "init", "out", "m", "lambda", "lr", "batch_size", "steps", "lr_decay_last_steps",
    "buffer_batches", "seed", "tilt_t", "tilt_hard_max_threshold", "adaptive_l0_low",
    "adaptive_l0_high", "adaptive_lambda_factor", "adaptive_check_interval"};

SaeParams initial_params(const RunConfig& cfg, uint32_t data_dim) {
  if (cfg.has("init")) return load_checkpoint(cfg.get("init"));
  const uint64_t m = cfg.has("m") ? cfg.get_u64("m") : 2 * static_cast<uint64_t>(data_dim);
  Rng rng(derive_seed(cfg.has("seed") ? cfg.get_u64("seed") : 0, "train.init"));
  return fresh_init(data_dim, m, rng);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const std::string item = text.substr(start, end - start);
    if (!item.empty()) {
      try {
        out.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ConfigError("not a number: " + item);
      }
    }
    start = end + 1;
    if (end == text.size()) break;
  }
  if (out.empty()) throw ConfigError("empty number list");
  return out;
}

std::vector<size_t> parse_index_list(const std::string& text) {
  std::vector<size_t> out;
  for (double v : parse_double_list(text)) out.push_back(static_cast<size_t>(v));
  return out;
}

// ---- command: gen --------------------------------------------------------

struct GenMixtureArgs {
  MixtureSpec spec;
  std::string out_dir;
  bool debug_csv = false;
};

void run_gen_mixture(const GenMixtureArgs& args) {
  prepare_out_dir(args.out_dir);
  const MixtureData mix = gen_mixture(args.spec);
  write_dataset(mix.data, out_path(args.out_dir, "mixture.saed"));
  write_labels_csv(mix.labels, out_path(args.out_dir, "labels.csv"));
  if (args.debug_csv)
    write_dataset_debug_csv(mix.data, out_path(args.out_dir, "mixture.csv"));
  RunConfig resolved;
  resolved.set("kind", "mixture");
  resolved.set("d", std::to_string(args.spec.d));
  resolved.set("delta", csv_double(args.spec.delta));
  resolved.set("sigma", csv_double(args.spec.sigma));
  resolved.set("qa", csv_double(args.spec.q_a));
  resolved.set("n", std::to_string(args.spec.n_total));
  resolved.set("seed", std::to_string(args.spec.seed));
  resolved.write_resolved(out_path(args.out_dir, "resolved_config.cfg"));
  std::cout << "wrote " << out_path(args.out_dir, "mixture.saed") << " (" << mix.data.rows
            << " rows, dim " << mix.data.dim << ")\n";
}

struct GenDictionaryArgs {
  DictionarySpec spec;
  std::string out_dir;
  bool debug_csv = false;
};

void run_gen_dictionary(const GenDictionaryArgs& args) {
  prepare_out_dir(args.out_dir);
  const DictionaryData dict = gen_dictionary_data(args.spec);
  write_dataset(dict.data, out_path(args.out_dir, "dictionary.saed"));
  if (dict.orthogonal_fallback)
    std::cerr << "warning: k_true > n, ground-truth directions are random unit vectors\n";
  ActivationDataset dirs;
  dirs.rows = args.spec.k_true;
  dirs.dim = args.spec.n;
  dirs.values.resize(dirs.rows * dirs.dim);
  for (uint32_t k = 0; k < args.spec.k_true; ++k)
    for (uint32_t i = 0; i < args.spec.n; ++i)
      dirs.values[k * args.spec.n + i] = static_cast<float>(dict.true_dirs(i, k));
  write_dataset(dirs, out_path(args.out_dir, "true_dirs.saed"));
  ActivationDataset codes;
  codes.rows = args.spec.n_samples;
  codes.dim = args.spec.k_true;
  codes.values.resize(codes.rows * codes.dim);
  for (uint64_t s = 0; s < args.spec.n_samples; ++s)
    for (uint32_t k = 0; k < args.spec.k_true; ++k)
      codes.values[s * args.spec.k_true + k] = static_cast<float>(dict.true_codes(s, k));
  write_dataset(codes, out_path(args.out_dir, "true_codes.saed"));
  if (args.debug_csv)
    write_dataset_debug_csv(dict.data, out_path(args.out_dir, "dictionary.csv"));
  RunConfig resolved;
  resolved.set("kind", "dictionary");
  resolved.set("n", std::to_string(args.spec.n));
  resolved.set("k_true", std::to_string(args.spec.k_true));
  resolved.set("avg_active", csv_double(args.spec.avg_active));
  resolved.set("coeff_scale", csv_double(args.spec.coeff_scale));
  resolved.set("noise_sigma", csv_double(args.spec.noise_sigma));
  resolved.set("samples", std::to_string(args.spec.n_samples));
  resolved.set("seed", std::to_string(args.spec.seed));
  resolved.write_resolved(out_path(args.out_dir, "resolved_config.cfg"));
  std::cout << "wrote " << out_path(args.out_dir, "dictionary.saed") << " (" << dict.data.rows
            << " rows, dim " << dict.data.dim << ")\n";
}

// ---- command: train ------------------------------------------------------

void run_train(ConfigLayer& layer) {
  const std::string out_dir = layer.cfg.get("out");
  layer.finalize(kTrainKeys, out_dir);
  const RunConfig& cfg = layer.cfg;
  const ActivationDataset data = open_dataset(cfg.get("data"));
  SaeParams init = initial_params(cfg, data.dim);
  const TrainConfig tc = train_config_from(cfg);
  auto [params, log] = train(tc, data, std::move(init));
  save_checkpoint(params, out_path(out_dir, "checkpoint.sae"));
  write_training_log_csv(log, out_path(out_dir, "training_log.csv"));
  std::cout << "trained " << tc.steps << " steps; checkpoint at "
            << out_path(out_dir, "checkpoint.sae") << "\n";
  if (!log.dead_features.empty())
    std::cout << "dead features: " << log.dead_features.size() << "\n";
  if (log.rows_dropped_in_buffers > 0)
    std::cout << "rows dropped in partial buffers: " << log.rows_dropped_in_buffers << "\n";
}

// ---- command: sweep ------------------------------------------------------

void run_sweep(ConfigLayer& layer, const std::string& lambdas_text, const std::string& split_text,
               const std::string& ood_path, const std::string& auc_range) {
  std::set<std::string> known = kTrainKeys;
  known.insert({"lambdas", "split", "ood", "val_check_interval", "auc_range"});
  const std::string out_dir = layer.cfg.get("out");
  layer.override_if(!lambdas_text.empty(), "lambdas", lambdas_text);
  layer.override_if(!split_text.empty(), "split", split_text);
  layer.override_if(!ood_path.empty(), "ood", ood_path);
  layer.override_if(!auc_range.empty(), "auc_range", auc_range);
  layer.finalize(known, out_dir);
  const RunConfig& cfg = layer.cfg;

  const ActivationDataset data = open_dataset(cfg.get("data"));
  const std::vector<double> lambdas = parse_double_list(cfg.get("lambdas"));
  const std::vector<double> fr = parse_double_list(cfg.get_or("split", "0.8,0.1,0.1"));
  if (fr.size() != 3) throw ConfigError("split needs three fractions");
  const auto parts = split(data, {fr[0], fr[1], fr[2]},
                           cfg.has("seed") ? cfg.get_u64("seed") : 0);
  ActivationDataset ood;
  std::vector<NamedSplit> tests{{"in_dist", &parts[2]}};
  if (cfg.has("ood")) {
    ood = open_dataset(cfg.get("ood"));
    tests.push_back({"out_of_dist", &ood});
  }
  const SaeParams base = initial_params(cfg, data.dim);
  const TrainConfig tc = train_config_from(cfg);
  const uint64_t interval = cfg.has("val_check_interval") ? cfg.get_u64("val_check_interval") : 0;
  const auto points = pareto_sweep(base, tc, lambdas, parts[0], parts[1], tests, interval);
  write_pareto_csv(points, out_path(out_dir, "pareto.csv"));
  std::cout << "sweep complete: " << points.size() << " pareto points\n";

  if (cfg.has("auc_range")) {
    const std::vector<double> range = parse_double_list(cfg.get("auc_range"));
    if (range.size() != 2) throw ConfigError("auc_range needs two numbers lo,hi");
    CsvBuilder csv({"split", "l0_lo", "l0_hi", "auc_recon_mse", "interpolation"});
    for (const auto& t : tests) {
      std::vector<std::pair<double, double>> curve;
      for (const auto& p : points)
        if (p.split == t.tag) curve.push_back({p.l0, p.recon_mse});
      const auto auc = pareto_auc(curve, range[0], range[1]);
      csv.row_strings({t.tag, csv_double(range[0]), csv_double(range[1]),
                       auc ? csv_double(*auc) : "", "trapezoid-linear"});
    }
    csv.write(out_path(out_dir, "pareto_auc.csv"));
  }
}

// ---- command: select -----------------------------------------------------

struct SelectArgs {
  std::string corpus_path, seeds_path, method = "bm25";
  std::string seed_emb, seed_emb_ids, cand_emb, cand_emb_ids;
  std::string checkpoint, activations, seed_activations;
  double filter_fraction = 1.0;
  bool rerank = false;
  double lambda = 0.0;
  uint64_t budget = 0;
  std::string out_dir;
};

void run_select(const SelectArgs& args) {
  prepare_out_dir(args.out_dir);
  const Corpus corpus = load_corpus_jsonl(args.corpus_path);
  TwoStageInputs in;
  in.corpus = &corpus;
  in.lambda = args.lambda;

  RetrievalMethod method;
  if (args.method == "bm25") method = RetrievalMethod::bm25;
  else if (args.method == "dense") method = RetrievalMethod::dense;
  else throw ConfigError("method must be bm25 or dense");

  Corpus seeds;
  if (!args.seeds_path.empty()) {
    seeds = load_corpus_jsonl(args.seeds_path);
    for (const auto& d : seeds.docs) in.seed_texts.push_back(d.text);
  }
  EmbeddingSet seed_emb, cand_emb;
  if (method == RetrievalMethod::dense) {
    seed_emb = load_embedding_set(args.seed_emb, args.seed_emb_ids);
    cand_emb = load_embedding_set(args.cand_emb, args.cand_emb_ids);
    in.seed_embeddings = &seed_emb;
    in.candidate_embeddings = &cand_emb;
  } else if (args.seeds_path.empty()) {
    throw ConfigError("bm25 selection requires --seeds");
  }
  SaeParams params;
  ActivationDataset activations;
  ActivationDataset seed_rows_ds;
  Matrix seed_rows;
  if (args.rerank) {
    params = load_checkpoint(args.checkpoint);
    activations = open_dataset(args.activations);
    seed_rows_ds = open_dataset(args.seed_activations);
    seed_rows = rows_as_matrix(seed_rows_ds);
    in.params = &params;
    in.activations = &activations;
    in.seed_rows = &seed_rows;
  }
  const SelectionResult result =
      two_stage_select(in, method, args.filter_fraction, args.rerank, args.budget);
  write_selection_csv(result, out_path(args.out_dir, "selection.csv"));
  if (result.budget_exceeds_corpus)
    std::cerr << "warning: token budget exceeds the corpus; returning everything\n";
  RunConfig resolved;
  resolved.set("corpus", args.corpus_path);
  resolved.set("method", args.method);
  resolved.set("filter_fraction", csv_double(args.filter_fraction));
  resolved.set("rerank", args.rerank ? "true" : "false");
  resolved.set("budget", std::to_string(args.budget));
  resolved.set("lambda", csv_double(args.lambda));
  if (!args.seeds_path.empty()) resolved.set("seeds", args.seeds_path);
  if (!args.seed_emb.empty()) resolved.set("seed_emb", args.seed_emb);
  if (!args.cand_emb.empty()) resolved.set("cand_emb", args.cand_emb);
  if (!args.checkpoint.empty()) resolved.set("checkpoint", args.checkpoint);
  resolved.write_resolved(out_path(args.out_dir, "resolved_config.cfg"));
  std::cout << "selected " << result.entries.size() << " docs, " << result.tokens_consumed
            << " tokens\n";
}

// ---- command: eval -------------------------------------------------------

struct EvalArgs {
  std::string checkpoint, data, token_sidecar;
  std::string unembedding, token_freqs;
  std::string baseline_counts;
  double threshold = 0.0;
  double pca_variance = 0.95;
  size_t bins = 50;
  std::string out_dir;
};

std::vector<double> load_token_freqs_csv(const std::string& path, size_t vocab) {
  const auto rows = read_csv(path);
  if (rows.empty() || rows[0] != std::vector<std::string>{"token_id", "frequency"})
    throw ParseError(path + ": expected header token_id,frequency");
  std::vector<double> freqs(vocab, 0.0);
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 2) throw ParseError(path + ": bad row " + std::to_string(i));
    const size_t id = std::stoull(rows[i][0]);
    if (id >= vocab) throw ShapeError(path + ": token id " + rows[i][0] + " outside vocab");
    freqs[id] = std::stod(rows[i][1]);
  }
  return freqs;
}

void run_eval(const EvalArgs& args) {
  prepare_out_dir(args.out_dir);
  const SaeParams params = load_checkpoint(args.checkpoint);
  const ActivationDataset ds =
      args.token_sidecar.empty() ? open_dataset(args.data)
                                 : open_dataset(args.data, args.token_sidecar);

  // headline metrics
  const double l0 = l0_metric(params, ds, args.threshold);
  const ReconMetrics rm = recon_metrics(params, ds);
  {
    CsvBuilder csv({"l0", "recon_mse", "frac_variance_explained", "rows", "features",
                    "activation_threshold"});
    csv.row_strings({csv_double(l0), csv_double(rm.mse),
                     rm.frac_variance_explained ? csv_double(*rm.frac_variance_explained) : "",
                     std::to_string(ds.rows), std::to_string(params.m),
                     csv_double(args.threshold)});
    csv.write(out_path(args.out_dir, "eval_summary.csv"));
  }

  // per-feature activation counts and the rank curve
  const std::vector<uint64_t> counts = activation_count_per_feature(params, ds, args.threshold);
  {
    CsvBuilder csv({"feature", "count"});
    for (size_t j = 0; j < counts.size(); ++j)
      csv.row_strings({std::to_string(j), std::to_string(counts[j])});
    csv.write(out_path(args.out_dir, "feature_counts.csv"));
    const std::vector<uint64_t> curve = rank_curve(counts);
    CsvBuilder rank_csv({"rank", "count"});
    for (size_t r = 0; r < curve.size(); ++r)
      rank_csv.row_strings({std::to_string(r + 1), std::to_string(curve[r])});
    rank_csv.write(out_path(args.out_dir, "activation_rank_curve.csv"));
  }

  // per-row entropy / max activation and the detection curve
  const FeatureStats stats = token_entropy_and_threshold_curves(params, ds, {}, args.threshold);
  {
    CsvBuilder csv({"tau", "detection_proportion"});
    for (size_t k = 0; k < stats.threshold_grid.size(); ++k)
      csv.row_strings({csv_double(stats.threshold_grid[k]),
                       csv_double(stats.detection_proportion[k])});
    csv.write(out_path(args.out_dir, "detection_curve.csv"));
    CsvBuilder ent({"row_entropy_bits"});
    for (double h : stats.row_entropy_nats) ent.row_strings({csv_double(h / std::log(2.0))});
    ent.write(out_path(args.out_dir, "row_entropy.csv"));
    CsvBuilder mx({"row", "max_activation"});
    for (size_t r = 0; r < stats.row_max_activation.size(); ++r)
      mx.row_strings({std::to_string(r), csv_double(stats.row_max_activation[r])});
    mx.write(out_path(args.out_dir, "row_max_activation.csv"));
  }

  // decoder geometry
  if (params.m >= 2) {
    const Histogram cos = decoder_cosine_distribution(params, args.bins);
    CsvBuilder csv({"bin_lo", "bin_hi", "mass"});
    for (size_t k = 0; k + 1 < cos.edges.size(); ++k)
      csv.row_strings({csv_double(cos.edges[k]), csv_double(cos.edges[k + 1]),
                       csv_double(cos.mass[k])});
    csv.write(out_path(args.out_dir, "decoder_cosine_hist.csv"));
    const PcaResult pca = pca_components_to_explain(params, args.pca_variance);
    CsvBuilder pcsv({"variance_threshold", "components", "degenerate"});
    pcsv.row_strings({csv_double(args.pca_variance), std::to_string(pca.components),
                      pca.degenerate ? "1" : "0"});
    pcsv.write(out_path(args.out_dir, "pca.csv"));
  }

  // logit-lens coverage, when the unembedding inputs are given
  if (!args.unembedding.empty()) {
    if (args.token_freqs.empty()) throw ConfigError("--unembedding requires --token-freqs");
    const ActivationDataset u = open_dataset(args.unembedding);
    const Matrix unemb = rows_as_matrix(u);
    const std::vector<double> freqs = load_token_freqs_csv(args.token_freqs, u.rows);
    const CoverageReport cov = logit_lens_coverage(params, unemb, freqs);
    CsvBuilder bcsv({"freq_lo", "freq_hi", "tokens", "covered", "proportion"});
    for (const auto& b : cov.buckets)
      bcsv.row_strings({csv_double(b.freq_lo), csv_double(b.freq_hi), std::to_string(b.tokens),
                        std::to_string(b.covered), csv_double(b.proportion)});
    bcsv.write(out_path(args.out_dir, "coverage_buckets.csv"));
    CsvBuilder ccsv({"cum_token_share", "cum_covered_norm"});
    for (const auto& p : cov.cumulative)
      ccsv.row_strings({csv_double(p.cum_token_share), csv_double(p.cum_covered_norm)});
    ccsv.write(out_path(args.out_dir, "coverage_cumulative.csv"));
  }

  // reconstruction error by token rank, when token ids are present
  if (ds.token_ids) {
    const auto curve = token_rank_error(params, ds);
    CsvBuilder csv({"rank", "token_id", "frequency", "mean_error", "var_error"});
    for (const auto& p : curve)
      csv.row_strings({std::to_string(p.rank), std::to_string(p.token_id),
                       std::to_string(p.frequency), csv_double(p.mean_error),
                       csv_double(p.var_error)});
    csv.write(out_path(args.out_dir, "token_rank_error.csv"));
  }

  // activation-count log ratio against a baseline run
  if (!args.baseline_counts.empty()) {
    const auto rows = read_csv(args.baseline_counts);
    if (rows.empty() || rows[0] != std::vector<std::string>{"feature", "count"})
      throw ParseError(args.baseline_counts + ": expected header feature,count");
    std::vector<uint64_t> baseline;
    for (size_t i = 1; i < rows.size(); ++i) baseline.push_back(std::stoull(rows[i][1]));
    const Histogram h = log_ratio_histogram(counts, baseline, args.bins);
    CsvBuilder csv({"bin_lo", "bin_hi", "mass"});
    for (size_t k = 0; k + 1 < h.edges.size(); ++k)
      csv.row_strings({csv_double(h.edges[k]), csv_double(h.edges[k + 1]), csv_double(h.mass[k])});
    csv.write(out_path(args.out_dir, "log_ratio_hist.csv"));
  }

  RunConfig resolved;
  resolved.set("checkpoint", args.checkpoint);
  resolved.set("data", args.data);
  resolved.set("threshold", csv_double(args.threshold));
  resolved.set("pca_variance", csv_double(args.pca_variance));
  resolved.set("bins", std::to_string(args.bins));
  if (!args.unembedding.empty()) resolved.set("unembedding", args.unembedding);
  if (!args.token_freqs.empty()) resolved.set("token_freqs", args.token_freqs);
  if (!args.baseline_counts.empty()) resolved.set("baseline_counts", args.baseline_counts);
  if (!args.token_sidecar.empty()) resolved.set("token_sidecar", args.token_sidecar);
  resolved.write_resolved(out_path(args.out_dir, "resolved_config.cfg"));
  std::cout << "l0=" << l0 << " recon_mse=" << rm.mse << "\n";
}

// ---- command: tracin -----------------------------------------------------

struct TracinArgs {
  std::string checkpoint, candidates, seeds, doc_ranges;
  double lambda = 0.0;
  std::string out_dir;
};

void run_tracin(const TracinArgs& args) {
  prepare_out_dir(args.out_dir);
  const SaeParams params = load_checkpoint(args.checkpoint);
  const ActivationDataset cand = open_dataset(args.candidates);
  const ActivationDataset seeds = open_dataset(args.seeds);
  const Matrix seed_rows = rows_as_matrix(seeds);
  CsvBuilder csv({"id", "score"});
  if (args.doc_ranges.empty()) {
    // one score per candidate row
    for (uint64_t r = 0; r < cand.rows; ++r) {
      Matrix row(1, cand.dim);
      const auto src = cand.row(r);
      for (size_t c = 0; c < src.size(); ++c) row(0, c) = src[c];
      csv.row_strings({std::to_string(r), csv_double(tracin_score(params, row, seed_rows,
                                                                  args.lambda))});
    }
  } else {
    const auto rows = read_csv(args.doc_ranges);
    if (rows.empty() || rows[0] != std::vector<std::string>{"doc_id", "row_begin", "row_end"})
      throw ParseError(args.doc_ranges + ": expected header doc_id,row_begin,row_end");
    for (size_t i = 1; i < rows.size(); ++i) {
      const uint64_t lo = std::stoull(rows[i][1]), hi = std::stoull(rows[i][2]);
      if (lo >= hi || hi > cand.rows) throw ShapeError(args.doc_ranges + ": bad range at row " + std::to_string(i));
      Matrix m(hi - lo, cand.dim);
      for (uint64_t r = lo; r < hi; ++r) {
        const auto src = cand.row(r);
        for (size_t c = 0; c < src.size(); ++c) m(r - lo, c) = src[c];
      }
      csv.row_strings({rows[i][0], csv_double(tracin_score(params, m, seed_rows, args.lambda))});
    }
  }
  csv.write(out_path(args.out_dir, "tracin_scores.csv"));
  RunConfig resolved;
  resolved.set("checkpoint", args.checkpoint);
  resolved.set("candidates", args.candidates);
  resolved.set("seeds", args.seeds);
  resolved.set("lambda", csv_double(args.lambda));
  if (!args.doc_ranges.empty()) resolved.set("doc_ranges", args.doc_ranges);
  resolved.write_resolved(out_path(args.out_dir, "resolved_config.cfg"));
}

// ---- command: autointerp -------------------------------------------------

struct AutointerpArgs {
  std::string checkpoint, data, texts;
  std::string features_text;
  std::string endpoint, model, auth_env = "SAEKIT_LLM_TOKEN";
  std::string mock_responses_path;
  std::string diversity_chunks;
  double timeout_s = 60.0;
  int max_retries = 3;
  uint64_t seed = 0;
  std::string subject_instructions;
  std::string out_dir;
};

std::vector<TokenizedExample> load_texts_jsonl(const std::string& path, uint64_t rows) {
  const std::string text = read_text_file(path);
  std::vector<TokenizedExample> out;
  uint64_t cursor = 0;
  size_t start = 0, line_no = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    ++line_no;
    const std::string line = text.substr(start, end - start);
    start = end + 1;
    if (line.empty() || line == "\r") continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.contains("tokens") || !j["tokens"].is_array())
      throw ParseError(path + ":" + std::to_string(line_no) + ": missing tokens array");
    TokenizedExample ex;
    ex.row_begin = j.contains("row_begin") ? j.at("row_begin").get<uint64_t>() : cursor;
    for (const auto& t : j["tokens"]) ex.tokens.push_back(t.get<std::string>());
    cursor = ex.row_begin + ex.tokens.size();
    if (cursor > rows)
      throw ShapeError(path + ":" + std::to_string(line_no) + ": tokens extend past dataset rows");
    out.push_back(std::move(ex));
  }
  return out;
}

LlmClient make_client(const AutointerpArgs& args) {
  LlmClientConfig cfg;
  cfg.endpoint_url = args.endpoint;
  cfg.model_name = args.model;
  cfg.auth_token_env_var_name = args.auth_env;
  cfg.timeout_s = args.timeout_s;
  cfg.max_retries = args.max_retries;
  if (!args.mock_responses_path.empty()) {
    cfg.mock_mode = true;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_text_file(args.mock_responses_path));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(args.mock_responses_path + ": " + e.what());
    }
    if (!j.is_array()) throw ParseError(args.mock_responses_path + ": expected a JSON array");
    for (const auto& r : j) cfg.mock_responses.push_back(r.get<std::string>());
    return LlmClient(cfg);
  }
  if (args.endpoint.empty()) throw ConfigError("need --endpoint or --mock-responses");
  return LlmClient(cfg, make_http_transport());
}

void run_autointerp(const AutointerpArgs& args) {
  prepare_out_dir(args.out_dir);
  LlmClient client = make_client(args);

  if (!args.diversity_chunks.empty()) {
    const std::string text = read_text_file(args.diversity_chunks);
    CsvBuilder csv({"feature_id", "diversity_score", "out_of_range", "unified_explanation"});
    size_t start = 0, line_no = 0, skipped = 0;
    while (start < text.size()) {
      size_t end = text.find('\n', start);
      if (end == std::string::npos) end = text.size();
      ++line_no;
      const std::string line = text.substr(start, end - start);
      start = end + 1;
      if (line.empty()) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(args.diversity_chunks + ":" + std::to_string(line_no) + ": " + e.what());
      }
      std::vector<std::string> explanations;
      for (const auto& e : j.at("explanations")) explanations.push_back(e.get<std::string>());
      try {
        const DiversityResult res = diversity_score_pipeline(explanations, client);
        csv.row_strings({std::to_string(j.at("feature_id").get<uint64_t>()),
                         std::to_string(res.score), res.out_of_range ? "1" : "0",
                         res.unified_explanation});
      } catch (const ParseError&) {
        ++skipped;  // unparseable score: record skipped, not failed
      }
    }
    csv.write(out_path(args.out_dir, "diversity.csv"));
    RunConfig resolved;
    resolved.set("diversity_chunks", args.diversity_chunks);
    resolved.set("mock", args.mock_responses_path.empty() ? "false" : "true");
    resolved.write_resolved(out_path(args.out_dir, "resolved_config.cfg"));
    if (skipped > 0) std::cout << "diversity records skipped: " << skipped << "\n";
    return;
  }

  if (args.checkpoint.empty() || args.data.empty() || args.texts.empty())
    throw ConfigError("autointerp needs --checkpoint, --data and --texts");
  const SaeParams params = load_checkpoint(args.checkpoint);
  const ActivationDataset ds = open_dataset(args.data);
  const std::vector<TokenizedExample> examples = load_texts_jsonl(args.texts, ds.rows);
  std::vector<size_t> features;
  if (!args.features_text.empty()) features = parse_index_list(args.features_text);
  else
    for (size_t j = 0; j < params.m; ++j) features.push_back(j);
  AutointerpOptions opt;
  opt.seed = args.seed;
  opt.subject_instructions = args.subject_instructions;
  const AutointerpResult result = run_autointerp(params, ds, examples, features, client, opt);
  write_f1_csv(result, out_path(args.out_dir, "f1.csv"));
  write_explanations_csv(result, out_path(args.out_dir, "explanations.csv"));
  RunConfig resolved;
  resolved.set("checkpoint", args.checkpoint);
  resolved.set("data", args.data);
  resolved.set("texts", args.texts);
  resolved.set("seed", std::to_string(args.seed));
  resolved.set("mock", args.mock_responses_path.empty() ? "false" : "true");
  resolved.write_resolved(out_path(args.out_dir, "resolved_config.cfg"));
  std::cout << "autointerp: " << result.records.size() << " scored, "
            << result.skipped_features.size() << " skipped, " << result.dead_features.size()
            << " dead\n";
}

// ---- command: mdl --------------------------------------------------------

struct MdlArgs {
  std::string erm_checkpoint, term_checkpoint, data, labels;
  double threshold = 0.0;
  double pa_erm = -1.0, pb_erm = -1.0, pa_term = -1.0, pb_term = -1.0;
  uint64_t n_a = 0, n_b = 0;
  uint64_t k = 0;
  std::string out_dir;
};

void run_mdl(const MdlArgs& args) {
  prepare_out_dir(args.out_dir);
  MdlReport erm, term;
  if (!args.erm_checkpoint.empty()) {
    const SaeParams perm = load_checkpoint(args.erm_checkpoint);
    const SaeParams pterm = load_checkpoint(args.term_checkpoint);
    const ActivationDataset ds = open_dataset(args.data);
    const std::vector<ClusterLabel> labels = read_labels_csv(args.labels);
    const ActivationProbs ap_erm = estimate_activation_probs(perm, ds, labels, args.threshold);
    const ActivationProbs ap_term = estimate_activation_probs(pterm, ds, labels, args.threshold);
    uint64_t n_a = 0, n_b = 0;
    for (auto l : labels) (l == ClusterLabel::A ? n_a : n_b) += 1;
    erm = mdl_report(ap_erm.p_a, ap_erm.p_b, n_a, n_b, perm.m);
    term = mdl_report(ap_term.p_a, ap_term.p_b, n_a, n_b, pterm.m);
  } else {
    if (args.pa_erm < 0 || args.pb_erm < 0 || args.pa_term < 0 || args.pb_term < 0 ||
        args.n_a == 0 || args.n_b == 0 || args.k == 0)
      throw ConfigError("direct mode needs --pa-erm --pb-erm --pa-term --pb-term --na --nb --k");
    erm = mdl_report(args.pa_erm, args.pb_erm, args.n_a, args.n_b, args.k);
    term = mdl_report(args.pa_term, args.pb_term, args.n_a, args.n_b, args.k);
  }
  write_mdl_csv(erm, term, out_path(args.out_dir, "mdl_report.csv"));
  const MdlDelta d = mdl_delta(erm, term);
  std::printf("dh_a_bits=%.6f dh_b_bits=%.6f\n", d.dh_a, d.dh_b);
  std::printf("delta_dl_bits=%.6f (k=%llu x %.6f bits per feature)\n", d.ddl,
              static_cast<unsigned long long>(erm.k), d.ddl / static_cast<double>(erm.k));
  RunConfig resolved;
  if (!args.erm_checkpoint.empty()) {
    resolved.set("erm_checkpoint", args.erm_checkpoint);
    resolved.set("term_checkpoint", args.term_checkpoint);
    resolved.set("data", args.data);
    resolved.set("labels", args.labels);
    resolved.set("threshold", csv_double(args.threshold));
  } else {
    resolved.set("pa_erm", csv_double(args.pa_erm));
    resolved.set("pb_erm", csv_double(args.pb_erm));
    resolved.set("pa_term", csv_double(args.pa_term));
    resolved.set("pb_term", csv_double(args.pb_term));
    resolved.set("na", std::to_string(args.n_a));
    resolved.set("nb", std::to_string(args.n_b));
    resolved.set("k", std::to_string(args.k));
  }
  resolved.write_resolved(out_path(args.out_dir, "resolved_config.cfg"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse autoencoder training, data selection and evaluation toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate synthetic benchmark datasets");
  gen->require_subcommand(1);
  GenMixtureArgs mix_args;
  auto* gen_mix = gen->add_subcommand("mixture", "two-Gaussian mixture with cluster labels");
  gen_mix->add_option("--d", mix_args.spec.d, "ambient dimension");
  gen_mix->add_option("--delta", mix_args.spec.delta, "minority cluster mean offset");
  gen_mix->add_option("--sigma", mix_args.spec.sigma, "cluster standard deviation");
  gen_mix->add_option("--qa", mix_args.spec.q_a, "majority proportion in (0,1)");
  gen_mix->add_option("--n", mix_args.spec.n_total, "total rows");
  gen_mix->add_option("--seed", mix_args.spec.seed, "generator seed");
  gen_mix->add_option("--out", mix_args.out_dir, "output directory")->required();
  gen_mix->add_flag("--debug-csv", mix_args.debug_csv, "also write the dataset as CSV");

  GenDictionaryArgs dict_args;
  auto* gen_dict = gen->add_subcommand("dictionary", "sparse linear dictionary data");
  gen_dict->add_option("--n", dict_args.spec.n, "ambient dimension");
  gen_dict->add_option("--k-true", dict_args.spec.k_true, "ground-truth directions");
  gen_dict->add_option("--avg-active", dict_args.spec.avg_active, "mean active coefficients");
  gen_dict->add_option("--coeff-scale", dict_args.spec.coeff_scale, "coefficient scale");
  gen_dict->add_option("--noise-sigma", dict_args.spec.noise_sigma, "additive noise sigma");
  gen_dict->add_option("--samples", dict_args.spec.n_samples, "sample count");
  gen_dict->add_option("--seed", dict_args.spec.seed, "generator seed");
  gen_dict->add_option("--out", dict_args.out_dir, "output directory")->required();
  gen_dict->add_flag("--debug-csv", dict_args.debug_csv, "also write the dataset as CSV");

  // train
  auto* train_cmd = app.add_subcommand("train", "train or finetune an autoencoder");
  std::string train_config, t_data, t_init, t_out, t_lambda, t_lr, t_batch, t_steps, t_decay,
      t_seed, t_tilt, t_hard, t_m;
  train_cmd->add_option("--config", train_config, "key = value config file");
  train_cmd->add_option("--data", t_data, "training dataset (SAED)");
  train_cmd->add_option("--init", t_init, "initial checkpoint");
  train_cmd->add_option("--out", t_out, "output directory");
  train_cmd->add_option("--lambda", t_lambda, "sparsity coefficient");
  train_cmd->add_option("--lr", t_lr, "learning rate");
  train_cmd->add_option("--batch-size", t_batch, "rows per step");
  train_cmd->add_option("--steps", t_steps, "optimizer steps");
  train_cmd->add_option("--lr-decay-last-steps", t_decay, "linear decay window");
  train_cmd->add_option("--seed", t_seed, "global seed");
  train_cmd->add_option("--tilt-t", t_tilt, "tilt parameter (enables tilted training)");
  train_cmd->add_option("--tilt-hard-max", t_hard, "tilt hard-max threshold");
  train_cmd->add_option("--m", t_m, "feature count for fresh initialization");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "sparsity sweep with pareto reporting");
  std::string s_config, s_data, s_init, s_out, s_lambdas, s_split, s_ood, s_auc, s_seed, s_lr,
      s_batch, s_steps, s_m, s_tilt, s_interval;
  sweep_cmd->add_option("--config", s_config, "key = value config file");
  sweep_cmd->add_option("--data", s_data, "dataset to split and sweep on");
  sweep_cmd->add_option("--init", s_init, "base checkpoint to finetune from");
  sweep_cmd->add_option("--out", s_out, "output directory");
  sweep_cmd->add_option("--lambdas", s_lambdas, "comma-separated sparsity coefficients");
  sweep_cmd->add_option("--split", s_split, "train,val,test fractions");
  sweep_cmd->add_option("--ood", s_ood, "out-of-distribution test dataset");
  sweep_cmd->add_option("--auc-range", s_auc, "l0 range lo,hi for trapezoidal AUC");
  sweep_cmd->add_option("--seed", s_seed, "global seed");
  sweep_cmd->add_option("--lr", s_lr, "learning rate");
  sweep_cmd->add_option("--batch-size", s_batch, "rows per step");
  sweep_cmd->add_option("--steps", s_steps, "optimizer steps per lambda");
  sweep_cmd->add_option("--m", s_m, "feature count for fresh initialization");
  sweep_cmd->add_option("--tilt-t", s_tilt, "tilt parameter");
  sweep_cmd->add_option("--val-check-interval", s_interval, "steps between val checks");

  // select
  SelectArgs sel;
  auto* select_cmd = app.add_subcommand("select", "two-stage subdomain data selection");
  select_cmd->add_option("--corpus", sel.corpus_path, "corpus JSONL")->required();
  select_cmd->add_option("--seeds", sel.seeds_path, "seed documents JSONL");
  select_cmd->add_option("--method", sel.method, "bm25 or dense");
  select_cmd->add_option("--seed-emb", sel.seed_emb, "seed embeddings SAED");
  select_cmd->add_option("--seed-emb-ids", sel.seed_emb_ids, "seed embedding id sidecar");
  select_cmd->add_option("--cand-emb", sel.cand_emb, "candidate embeddings SAED");
  select_cmd->add_option("--cand-emb-ids", sel.cand_emb_ids, "candidate embedding id sidecar");
  select_cmd->add_option("--filter-fraction", sel.filter_fraction, "stage-1 keep fraction");
  select_cmd->add_flag("--rerank", sel.rerank, "rerank survivors by influence score");
  select_cmd->add_option("--checkpoint", sel.checkpoint, "checkpoint for reranking");
  select_cmd->add_option("--activations", sel.activations, "doc activations (SAED)");
  select_cmd->add_option("--seed-activations", sel.seed_activations, "seed activations (SAED)");
  select_cmd->add_option("--lambda", sel.lambda, "loss lambda for influence gradients");
  select_cmd->add_option("--budget", sel.budget, "token budget")->required();
  select_cmd->add_option("--out", sel.out_dir, "output directory")->required();

  // eval
  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "metric battery over a checkpoint");
  eval_cmd->add_option("--checkpoint", ev.checkpoint, "checkpoint file")->required();
  eval_cmd->add_option("--data", ev.data, "evaluation dataset (SAED)")->required();
  eval_cmd->add_option("--token-sidecar", ev.token_sidecar, "token-id sidecar file");
  eval_cmd->add_option("--unembedding", ev.unembedding, "unembedding matrix (SAED, rows=vocab)");
  eval_cmd->add_option("--token-freqs", ev.token_freqs, "token frequency CSV");
  eval_cmd->add_option("--baseline-counts", ev.baseline_counts, "baseline feature_counts.csv");
  eval_cmd->add_option("--threshold", ev.threshold, "activation threshold");
  eval_cmd->add_option("--pca-variance", ev.pca_variance, "pca variance threshold");
  eval_cmd->add_option("--bins", ev.bins, "histogram bins");
  eval_cmd->add_option("--out", ev.out_dir, "output directory")->required();

  // tracin
  TracinArgs tr;
  auto* tracin_cmd = app.add_subcommand("tracin", "influence scores against a seed set");
  tracin_cmd->add_option("--checkpoint", tr.checkpoint, "checkpoint file")->required();
  tracin_cmd->add_option("--candidates", tr.candidates, "candidate activations")->required();
  tracin_cmd->add_option("--seeds", tr.seeds, "seed activations")->required();
  tracin_cmd->add_option("--doc-ranges", tr.doc_ranges, "doc_id,row_begin,row_end CSV");
  tracin_cmd->add_option("--lambda", tr.lambda, "loss lambda");
  tracin_cmd->add_option("--out", tr.out_dir, "output directory")->required();

  // autointerp
  AutointerpArgs ai;
  auto* ai_cmd = app.add_subcommand("autointerp", "explanation + prediction scoring pipeline");
  ai_cmd->add_option("--checkpoint", ai.checkpoint, "checkpoint file");
  ai_cmd->add_option("--data", ai.data, "activation dataset (SAED)");
  ai_cmd->add_option("--texts", ai.texts, "tokenized texts JSONL aligned to rows");
  ai_cmd->add_option("--features", ai.features_text, "comma-separated feature ids");
  ai_cmd->add_option("--endpoint", ai.endpoint, "chat-completion endpoint URL");
  ai_cmd->add_option("--model", ai.model, "model name");
  ai_cmd->add_option("--auth-env", ai.auth_env, "env var holding the bearer token");
  ai_cmd->add_option("--timeout", ai.timeout_s, "request timeout seconds");
  ai_cmd->add_option("--retries", ai.max_retries, "max retries");
  ai_cmd->add_option("--mock-responses", ai.mock_responses_path,
                     "JSON array of canned responses (enables mock mode)");
  ai_cmd->add_option("--diversity-chunks", ai.diversity_chunks,
                     "JSONL of {feature_id, explanations} for diversity scoring");
  ai_cmd->add_option("--seed", ai.seed, "sampling seed");
  ai_cmd->add_option("--subject-instructions", ai.subject_instructions,
                     "extra subject-specific instructions");
  ai_cmd->add_option("--out", ai.out_dir, "output directory")->required();

  // mdl
  MdlArgs mdl_args;
  auto* mdl_cmd = app.add_subcommand("mdl", "description-length report for a checkpoint pair");
  mdl_cmd->add_option("--erm-checkpoint", mdl_args.erm_checkpoint, "first checkpoint");
  mdl_cmd->add_option("--term-checkpoint", mdl_args.term_checkpoint, "second checkpoint");
  mdl_cmd->add_option("--data", mdl_args.data, "mixture dataset (SAED)");
  mdl_cmd->add_option("--labels", mdl_args.labels, "labels CSV");
  mdl_cmd->add_option("--threshold", mdl_args.threshold, "activation threshold");
  mdl_cmd->add_option("--pa-erm", mdl_args.pa_erm, "direct mode: p_A first model");
  mdl_cmd->add_option("--pb-erm", mdl_args.pb_erm, "direct mode: p_B first model");
  mdl_cmd->add_option("--pa-term", mdl_args.pa_term, "direct mode: p_A second model");
  mdl_cmd->add_option("--pb-term", mdl_args.pb_term, "direct mode: p_B second model");
  mdl_cmd->add_option("--na", mdl_args.n_a, "direct mode: N_A");
  mdl_cmd->add_option("--nb", mdl_args.n_b, "direct mode: N_B");
  mdl_cmd->add_option("--k", mdl_args.k, "direct mode: feature count");
  mdl_cmd->add_option("--out", mdl_args.out_dir, "output directory")->required();

  // export-csv
  std::string exp_data, exp_out;
  auto* export_cmd = app.add_subcommand("export-csv", "dump a SAED dataset as CSV (debug)");
  export_cmd->add_option("--data", exp_data, "dataset (SAED)")->required();
  export_cmd->add_option("--out", exp_out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (gen_mix->parsed()) run_gen_mixture(mix_args);
    if (gen_dict->parsed()) run_gen_dictionary(dict_args);
    if (train_cmd->parsed()) {
      ConfigLayer layer;
      layer.load_file(train_config);
      layer.override_if(!t_data.empty(), "data", t_data);
      layer.override_if(!t_init.empty(), "init", t_init);
      layer.override_if(!t_out.empty(), "out", t_out);
      layer.override_if(!t_lambda.empty(), "lambda", t_lambda);
      layer.override_if(!t_lr.empty(), "lr", t_lr);
      layer.override_if(!t_batch.empty(), "batch_size", t_batch);
      layer.override_if(!t_steps.empty(), "steps", t_steps);
      layer.override_if(!t_decay.empty(), "lr_decay_last_steps", t_decay);
      layer.override_if(!t_seed.empty(), "seed", t_seed);
      layer.override_if(!t_tilt.empty(), "tilt_t", t_tilt);
      layer.override_if(!t_hard.empty(), "tilt_hard_max_threshold", t_hard);
      layer.override_if(!t_m.empty(), "m", t_m);
      run_train(layer);
    }
    if (sweep_cmd->parsed()) {
      ConfigLayer layer;
      layer.load_file(s_config);
      layer.override_if(!s_data.empty(), "data", s_data);
      layer.override_if(!s_init.empty(), "init", s_init);
      layer.override_if(!s_out.empty(), "out", s_out);
      layer.override_if(!s_seed.empty(), "seed", s_seed);
      layer.override_if(!s_lr.empty(), "lr", s_lr);
      layer.override_if(!s_batch.empty(), "batch_size", s_batch);
      layer.override_if(!s_steps.empty(), "steps", s_steps);
      layer.override_if(!s_m.empty(), "m", s_m);
      layer.override_if(!s_tilt.empty(), "tilt_t", s_tilt);
      layer.override_if(!s_interval.empty(), "val_check_interval", s_interval);
      run_sweep(layer, s_lambdas, s_split, s_ood, s_auc);
    }
    if (select_cmd->parsed()) run_select(sel);
    if (eval_cmd->parsed()) run_eval(ev);
    if (tracin_cmd->parsed()) run_tracin(tr);
    if (ai_cmd->parsed()) run_autointerp(ai);
    if (mdl_cmd->parsed()) run_mdl(mdl_args);
    if (export_cmd->parsed()) write_dataset_debug_csv(open_dataset(exp_data), exp_out);
  } catch (const Error& e) {
    std::cerr << "error: category=" << e.category() << " message=" << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: category=internal message=" << e.what() << "\n";
    return 1;
  }
  return 0;
}
