// Acceptance suite: end-to-end checks of the library and CLI against fixed
// tolerances, one pass/fail line per criterion. Exits nonzero if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "saekit/autointerp.hpp"
#include "saekit/autointerp_pipeline.hpp"
#include "saekit/bm25.hpp"
#include "saekit/checkpoint.hpp"
#include "saekit/csv.hpp"
#include "saekit/dataset.hpp"
#include "saekit/dense.hpp"
#include "saekit/llm_client.hpp"
#include "saekit/mdl.hpp"
#include "saekit/metrics.hpp"
#include "saekit/selection.hpp"
#include "saekit/stream.hpp"
#include "saekit/synth.hpp"
#include "saekit/tilt.hpp"
#include "saekit/tracin.hpp"
#include "saekit/train.hpp"
#include "test_helpers.hpp"

namespace fs = std::filesystem;
using namespace saekit;
using namespace saekit::testing;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---- criterion 1: gradient correctness -----------------------------------

void criterion_gradients() {
  Timer timer;
  Rng rng(20240901);
  double worst = 0.0;
  int done = 0;
  while (done < 100) {
    const size_t n = 2 + rng.uniform_index(7);    // <= 8
    const size_t m = 2 + rng.uniform_index(15);   // <= 16
    const size_t rows = 1 + rng.uniform_index(4); // <= 4
    SaeParams p = random_params(n, m, rng);
    const Matrix batch = random_batch(rows, n, rng);
    if (near_kink(p, batch, 1e-7)) continue;  // excluded near-kink coordinates
    const double lambda = rng.uniform(0.0, 1.0);
    std::vector<double> weights(rows);
    double wsum = 0.0;
    for (auto& w : weights) {
      w = rng.uniform(0.1, 1.0);
      wsum += w;
    }
    for (auto& w : weights) w /= wsum;
    const Gradients g = grad(p, batch, lambda, weights);
    const auto check = finite_difference_check(p, batch, lambda, weights, g);
    worst = std::max(worst, check.max_rel_error);
    ++done;
  }
  const double secs = timer.seconds();
  report(1, "analytic gradient vs central finite differences", worst < 1e-5 && secs < 10.0,
         "max rel err " + fmt(worst) + " over 100 cases in " + fmt(secs) + "s");
}

// ---- criterion 2: tilted-loss limits --------------------------------------

void criterion_term_limits() {
  Rng rng(7002);
  bool mean_ok = true, max_ok = true, monotone_ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> losses(2 + rng.uniform_index(15));
    for (auto& l : losses) l = rng.uniform(0.0, 20.0);
    double mean = 0.0, mx = losses[0];
    for (double l : losses) {
      mean += l;
      mx = std::max(mx, l);
    }
    mean /= static_cast<double>(losses.size());

    const double tiny = tilted_loss(losses, TiltConfig{1e-8, 1e6});
    if (std::abs(tiny - mean) > 1e-6 * (1.0 + std::abs(mean))) mean_ok = false;
    if (tilted_loss(losses, TiltConfig{1e6, 1e6}) != mx) max_ok = false;
    if (tilted_loss(losses, TiltConfig{1e9, 1e6}) != mx) max_ok = false;

    double prev = -1e300;
    for (int k = 0; k < 20; ++k) {
      const double t = std::pow(10.0, -8.0 + 14.0 * static_cast<double>(k) / 19.0);
      const double v = tilted_loss(losses, TiltConfig{t, 1e6});
      if (v < prev - 1e-10) monotone_ok = false;
      prev = v;
    }
  }
  report(2, "tilted loss recovers mean / max and is monotone in t",
         mean_ok && max_ok && monotone_ok,
         std::string("mean ") + (mean_ok ? "ok" : "FAIL") + ", hard-max " +
             (max_ok ? "ok" : "FAIL") + ", monotone " + (monotone_ok ? "ok" : "FAIL"));
}

// ---- criterion 3: unit-norm decoder through a full run --------------------

void criterion_unit_norm() {
  DictionarySpec spec;
  spec.n = 12;
  spec.k_true = 6;
  spec.avg_active = 2.0;
  spec.noise_sigma = 0.01;
  spec.n_samples = 20000;
  spec.seed = 31;
  const DictionaryData dict = gen_dictionary_data(spec);
  TrainConfig cfg;
  cfg.lambda = 3e-3;
  cfg.lr = 2e-3;
  cfg.batch_size = 128;
  cfg.steps = 2000;
  cfg.lr_decay_last_steps = 400;
  cfg.seed = 97;
  double worst = 0.0;
  uint64_t checked_steps = 0;
  train(cfg, dict.data, std::nullopt, [&](const TrainStepRecord&, const SaeParams& p) {
    ++checked_steps;
    for (size_t j = 0; j < p.m; ++j) {
      double nn = 0.0;
      for (size_t i = 0; i < p.n; ++i) nn += p.w_dec(i, j) * p.w_dec(i, j);
      worst = std::max(worst, std::abs(std::sqrt(nn) - 1.0));
    }
  });
  report(3, "decoder columns unit norm at every step of a 2000-step run",
         worst < 1e-6 && checked_steps == 2000,
         "worst deviation " + fmt(worst) + " over " + std::to_string(checked_steps) + " steps");
}

// ---- criterion 4: dictionary recovery -------------------------------------

void criterion_dictionary_recovery() {
  Timer timer;
  DictionarySpec spec;
  spec.n = 16;
  spec.k_true = 8;
  spec.avg_active = 2.0;
  spec.noise_sigma = 0.01;
  spec.n_samples = 50000;
  spec.seed = 1234;
  const DictionaryData dict = gen_dictionary_data(spec);
  double best = 0.0, best_lambda = 0.0;
  for (double lambda : {3e-3, 1e-2, 3e-2, 1e-1}) {
    TrainConfig cfg;
    cfg.lambda = lambda;
    cfg.lr = 2e-3;
    cfg.batch_size = 256;
    cfg.steps = 4000;
    cfg.lr_decay_last_steps = 800;
    cfg.seed = 7;
    Rng rng(derive_seed(7, "accept.dict.init"));
    SaeParams init = fresh_init(16, 32, rng);
    auto [params, log] = train(cfg, dict.data, std::move(init));
    const FeatureMatch match = match_features(params.w_dec, dict.true_dirs);
    if (match.mean_max_cosine > best) {
      best = match.mean_max_cosine;
      best_lambda = lambda;
    }
  }
  const double secs = timer.seconds();
  report(4, "dictionary recovery mean max |cosine| >= 0.9 over a 4-lambda sweep",
         best >= 0.9 && secs < 300.0,
         "best " + fmt(best) + " at lambda " + fmt(best_lambda) + " in " + fmt(secs) + "s");
}

// ---- criterion 5: tilted finetuning improves the tail ---------------------

struct ErrStats {
  double max_err = 0.0;
  double mean_b = 0.0;
};

ErrStats mixture_errors(const SaeParams& p, const ActivationDataset& ds,
                        const std::vector<ClusterLabel>& labels) {
  ErrStats s;
  uint64_t nb = 0;
  for (uint64_t r = 0; r < ds.rows; ++r) {
    const auto x = ds.row_as_double(r);
    const auto xhat = decode(p, encode(p, x));
    const double e = squared_distance(x, xhat);
    s.max_err = std::max(s.max_err, e);
    if (labels[r] == ClusterLabel::B) {
      s.mean_b += e;
      ++nb;
    }
  }
  s.mean_b /= static_cast<double>(nb);
  return s;
}

void criterion_term_tail() {
  bool all_pass = true;
  std::string detail;
  for (uint64_t seed : {1, 2, 3}) {
    MixtureSpec spec;
    spec.d = 16;
    spec.delta = 4.0;
    spec.sigma = 1.0;
    spec.q_a = 0.9;
    spec.n_total = 20000;
    spec.seed = seed;
    const MixtureData mix = gen_mixture(spec);
    // generator rows are pre-shuffled: take the first 16k as train, rest as test
    const uint64_t n_train = 16000;
    ActivationDataset train_ds, test_ds;
    train_ds.dim = test_ds.dim = spec.d;
    train_ds.rows = n_train;
    train_ds.values.assign(mix.data.values.begin(),
                           mix.data.values.begin() + n_train * spec.d);
    test_ds.rows = spec.n_total - n_train;
    test_ds.values.assign(mix.data.values.begin() + n_train * spec.d, mix.data.values.end());
    const std::vector<ClusterLabel> test_labels(mix.labels.begin() + n_train, mix.labels.end());

    // shared pretrained base, then one plain and one tilted finetune from
    // the identical initialization and data order
    Rng rng(derive_seed(seed, "accept.term.init"));
    SaeParams init = fresh_init(spec.d, 24, rng);
    TrainConfig pre;
    pre.lambda = 0.01;
    pre.lr = 1e-3;
    pre.batch_size = 64;
    pre.steps = 8000;
    pre.lr_decay_last_steps = 1600;
    pre.seed = derive_seed(seed, "accept.term.pre");
    auto [base, pre_log] = train(pre, train_ds, std::move(init));

    TrainConfig fine;
    fine.lambda = 0.01;
    fine.lr = 3e-4;
    fine.batch_size = 64;
    fine.steps = 4000;
    fine.lr_decay_last_steps = 2000;
    fine.seed = derive_seed(seed, "accept.term.fine");
    TrainConfig fine_tilted = fine;
    fine_tilted.tilt = TiltConfig{100.0, 1e6};

    auto [p_erm, log_e] = train(fine, train_ds, base);
    auto [p_term, log_t] = train(fine_tilted, train_ds, base);
    const ErrStats erm = mixture_errors(p_erm, test_ds, test_labels);
    const ErrStats term = mixture_errors(p_term, test_ds, test_labels);

    const bool max_ok = erm.max_err >= 1.05 * term.max_err;  // >= 5% margin
    const bool mean_b_ok = term.mean_b < erm.mean_b;
    all_pass = all_pass && max_ok && mean_b_ok;
    detail += "seed " + std::to_string(seed) + ": max " + fmt(erm.max_err) + "->" +
              fmt(term.max_err) + (max_ok ? "" : " (FAIL)") + ", meanB " + fmt(erm.mean_b) +
              "->" + fmt(term.mean_b) + (mean_b_ok ? "" : " (FAIL)") + "; ";
  }
  report(5, "tilted finetuning lowers max error (>=5% margin) and cluster-B mean, 3 seeds",
         all_pass, detail);
}

// ---- criterion 6: description-length arithmetic ---------------------------

void criterion_mdl() {
  // the worked illustration: p_A 0.1 -> 0.11 (the prose says 0.12, but the
  // published -0.031 / 0.531 / 25.2k figures are consistent only with 0.11),
  // p_B 0.5 -> 0.1, N_A 900, N_B 100
  const uint64_t k = 16;
  const MdlReport erm = mdl_report(0.1, 0.5, 900, 100, k);
  const MdlReport term = mdl_report(0.11, 0.1, 900, 100, k);
  const MdlDelta d = mdl_delta(erm, term);
  const bool dh_a_ok = std::abs(d.dh_a - (-0.031)) / 0.031 < 0.005;
  const bool dh_b_ok = std::abs(d.dh_b - 0.531) / 0.531 < 0.005;
  const double ddl_per_k = d.ddl / static_cast<double>(k);
  const bool ddl_ok = std::abs(ddl_per_k - 25.2) / 25.2 < 0.005;
  report(6, "description-length deltas match the worked example within 0.5%",
         dh_a_ok && dh_b_ok && ddl_ok,
         "dH_A " + fmt(d.dh_a) + ", dH_B " + fmt(d.dh_b) + ", dDL/k " + fmt(ddl_per_k));
}

// ---- criterion 7: retrieval oracles on a 50-doc corpus ---------------------

Corpus fifty_doc_corpus(Rng& rng) {
  const std::vector<std::string> vocab{"atom",  "boson",  "charge", "dipole", "energy",
                                       "field", "gluon",  "hadron", "ion",    "joule",
                                       "kaon",  "lepton", "muon",   "nucleus"};
  Corpus corpus;
  for (uint64_t d = 0; d < 50; ++d) {
    std::string text;
    const size_t len = 4 + rng.uniform_index(20);
    for (size_t w = 0; w < len; ++w) text += vocab[rng.uniform_index(vocab.size())] + " ";
    corpus.docs.push_back({d, text, std::make_pair(d, d + 1)});
  }
  return corpus;
}

void criterion_retrieval_oracles() {
  Rng rng(555);
  const Corpus corpus = fifty_doc_corpus(rng);
  const std::vector<std::string> seed_texts{"energy field of the muon", "nucleus charge"};

  // bm25 against a from-scratch formula evaluation
  bool bm25_ok = true;
  {
    const Bm25Index index = bm25_build(corpus);
    const SelectionResult got = bm25_retrieve(index, seed_texts, 50);
    std::vector<std::string> query;
    for (const auto& s : seed_texts) {
      const auto t = tokenize_for_retrieval(s);
      query.insert(query.end(), t.begin(), t.end());
    }
    std::vector<std::vector<std::string>> docs;
    for (const auto& d : corpus.docs) docs.push_back(tokenize_for_retrieval(d.text));
    double avgdl = 0.0;
    for (const auto& d : docs) avgdl += static_cast<double>(d.size());
    avgdl /= 50.0;
    std::vector<std::pair<double, uint64_t>> want;
    for (size_t di = 0; di < 50; ++di) {
      double score = 0.0;
      for (const auto& q : query) {
        double tf = 0.0;
        for (const auto& t : docs[di]) tf += t == q;
        if (tf == 0.0) continue;
        double df = 0.0;
        for (const auto& other : docs)
          df += std::find(other.begin(), other.end(), q) != other.end();
        const double idf = std::log((50.0 - df + 0.5) / (df + 0.5) + 1.0);
        const double dl = static_cast<double>(docs[di].size());
        score += idf * tf * 2.2 / (tf + 1.2 * (1.0 - 0.75 + 0.75 * dl / avgdl));
      }
      want.push_back({score, corpus.docs[di].id});
    }
    std::sort(want.begin(), want.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (size_t r = 0; r < 50; ++r)
      if (got.entries[r].doc_id != want[r].second) bm25_ok = false;
  }

  // dense retrieval against a pairwise-cosine oracle
  bool dense_ok = true;
  {
    const size_t dim = 6;
    Matrix seed(3, dim), cand(50, dim);
    for (auto& v : seed.data) v = rng.uniform(-1.0, 1.0);
    for (auto& v : cand.data) v = rng.uniform(-1.0, 1.0);
    std::vector<uint64_t> ids;
    for (uint64_t i = 0; i < 50; ++i) ids.push_back(i);
    const EmbeddingSet seeds = make_embedding_set({900, 901, 902}, seed);
    const EmbeddingSet cands = make_embedding_set(ids, cand);
    const SelectionResult got = dense_retrieve(seeds, cands, 50);
    auto normalize = [](std::vector<double> v) {
      double nn = 0.0;
      for (double x : v) nn += x * x;
      for (double& x : v) x /= std::sqrt(nn);
      return v;
    };
    std::vector<double> mean(dim, 0.0);
    for (size_t s = 0; s < 3; ++s) {
      auto row = normalize(std::vector<double>(seed.row(s).begin(), seed.row(s).end()));
      for (size_t c = 0; c < dim; ++c) mean[c] += row[c];
    }
    mean = normalize(mean);
    std::vector<std::pair<double, uint64_t>> want;
    for (size_t i = 0; i < 50; ++i) {
      auto row = normalize(std::vector<double>(cand.row(i).begin(), cand.row(i).end()));
      double cos = 0.0;
      for (size_t c = 0; c < dim; ++c) cos += row[c] * mean[c];
      want.push_back({cos, ids[i]});
    }
    std::sort(want.begin(), want.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (size_t r = 0; r < 50; ++r)
      if (got.entries[r].doc_id != want[r].second) dense_ok = false;
  }

  // two-stage pipeline against the composed brute-force oracle
  bool two_stage_ok = true;
  {
    ActivationDataset acts;
    acts.dim = 5;
    acts.rows = 51;
    acts.values.resize(acts.rows * acts.dim);
    for (auto& v : acts.values) v = static_cast<float>(rng.uniform(-1.0, 1.0));
    const SaeParams params = random_params(5, 10, rng);
    const Matrix seed_rows = random_batch(4, 5, rng);
    TwoStageInputs in;
    in.corpus = &corpus;
    in.seed_texts = seed_texts;
    in.params = &params;
    in.activations = &acts;
    in.seed_rows = &seed_rows;
    in.lambda = 0.02;
    const double fraction = 0.3;
    const uint64_t budget = 60;
    const SelectionResult got =
        two_stage_select(in, RetrievalMethod::bm25, fraction, true, budget);

    const Bm25Index index = bm25_build(corpus);
    const SelectionResult stage1 = bm25_retrieve(index, seed_texts, 50);
    const size_t keep = static_cast<size_t>(fraction * 50.0);
    std::vector<std::pair<uint64_t, double>> survivors;
    for (size_t r = 0; r < keep; ++r) {
      const uint64_t id = stage1.entries[r].doc_id;
      Matrix rows(1, 5);
      const auto src = acts.row(id);
      for (size_t c = 0; c < 5; ++c) rows(0, c) = src[c];
      survivors.push_back({id, tracin_score(params, rows, seed_rows, in.lambda)});
    }
    std::stable_sort(survivors.begin(), survivors.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<uint64_t> want_ids;
    uint64_t cum = 0;
    for (const auto& [id, score] : survivors) {
      if (cum >= budget) break;
      cum += whitespace_token_count(corpus.docs[id].text);
      want_ids.push_back(id);
    }
    if (got.entries.size() != want_ids.size()) two_stage_ok = false;
    else
      for (size_t r = 0; r < want_ids.size(); ++r)
        if (got.entries[r].doc_id != want_ids[r]) two_stage_ok = false;
  }

  report(7, "retrieval rankings equal brute-force oracles exactly",
         bm25_ok && dense_ok && two_stage_ok,
         std::string("bm25 ") + (bm25_ok ? "ok" : "FAIL") + ", dense " +
             (dense_ok ? "ok" : "FAIL") + ", two-stage " + (two_stage_ok ? "ok" : "FAIL"));
}

// ---- criterion 8: tracin ---------------------------------------------------

void criterion_tracin() {
  Rng rng(808);
  bool self_ok = true, dot_ok = true;
  double worst_gap = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const size_t n = 2 + rng.uniform_index(5);
    const size_t m = 2 + rng.uniform_index(8);
    const SaeParams p = random_params(n, m, rng);
    const Matrix cand = random_batch(1 + rng.uniform_index(4), n, rng);
    const Matrix seed = random_batch(1 + rng.uniform_index(4), n, rng);
    const double lambda = rng.uniform(0.0, 0.5);
    if (tracin_score(p, cand, cand, lambda) < 0.0) self_ok = false;
    const double got = tracin_score(p, cand, seed, lambda);
    const Gradients gc = grad(p, cand, lambda, uniform_weights(cand.rows));
    const Gradients gs = grad(p, seed, lambda, uniform_weights(seed.rows));
    double want = 0.0;
    const auto ac = grad_coords(gc);
    const auto as = grad_coords(gs);
    for (size_t i = 0; i < ac.size(); ++i) want += *ac[i] * *as[i];
    worst_gap = std::max(worst_gap, std::abs(got - want));
    if (std::abs(got - want) >= 1e-10) dot_ok = false;
  }
  report(8, "influence scores: self >= 0 and equal to the flattened dot product",
         self_ok && dot_ok, "worst dot-product gap " + fmt(worst_gap));
}

// ---- criterion 9: logit-lens coverage on an orthonormal toy ----------------

void criterion_logit_lens() {
  const size_t vocab = 64, n = 64, m = 8, top_k = 10;
  Matrix unemb(vocab, n);
  for (size_t v = 0; v < vocab; ++v) unemb(v, v) = 1.0;
  SaeParams p;
  p.n = n;
  p.m = m;
  p.w_enc = Matrix(m, n);
  p.b_enc.assign(m, 0.0);
  p.w_dec = Matrix(n, m);
  p.b_dec.assign(n, 0.0);
  const std::vector<size_t> chosen{3, 7, 12, 21, 33, 40, 55, 63};
  for (size_t j = 0; j < m; ++j) p.w_dec(chosen[j], j) = 1.0;
  std::vector<double> freqs(vocab);
  for (size_t v = 0; v < vocab; ++v) freqs[v] = static_cast<double>(vocab - v);
  const CoverageReport report_cov = logit_lens_coverage(p, unemb, freqs, top_k);

  bool chosen_ok = true;
  for (size_t v : chosen)
    if (!report_cov.covered[v]) chosen_ok = false;

  // brute-force enumeration of every feature's top-10 with id tie-breaks
  std::vector<uint8_t> want(vocab, 0);
  for (size_t j = 0; j < m; ++j) {
    std::vector<std::pair<double, uint32_t>> logits;
    for (uint32_t v = 0; v < vocab; ++v) {
      double d = 0.0;
      for (size_t i = 0; i < n; ++i) d += unemb(v, i) * p.w_dec(i, j);
      logits.push_back({d, v});
    }
    std::sort(logits.begin(), logits.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (size_t k = 0; k < top_k; ++k) want[logits[k].second] = 1;
  }
  const bool exact = report_cov.covered == want;
  report(9, "logit-lens coverage matches brute-force top-10 enumeration exactly",
         chosen_ok && exact,
         std::string("aligned tokens ") + (chosen_ok ? "covered" : "MISSING") +
             ", full map " + (exact ? "exact" : "MISMATCH"));
}

// ---- criterion 10: streaming determinism ----------------------------------

void criterion_streaming() {
  Rng meta(1010);
  bool identical_ok = true, multiset_ok = true;
  for (int trial = 0; trial < 10; ++trial) {
    const size_t batch = 4 + meta.uniform_index(12);
    // half the datasets are exact batch multiples, half are not
    uint64_t rows = batch * (3 + meta.uniform_index(6));
    if (trial % 2 == 1) rows += 1 + meta.uniform_index(batch - 1);
    ActivationDataset ds;
    ds.rows = rows;
    ds.dim = 3;
    ds.values.resize(rows * 3);
    for (auto& v : ds.values) v = static_cast<float>(meta.uniform(-1.0, 1.0));

    ShuffleStream cfg;
    cfg.batch_size = batch;
    cfg.buffer_batches = 1 + meta.uniform_index(4);
    cfg.seed = 4000 + trial;
    BatchStream stream(ds, cfg);
    std::vector<uint64_t> epoch1;
    while (auto b = stream.next())
      epoch1.insert(epoch1.end(), b->row_indices.begin(), b->row_indices.end());
    const uint64_t dropped1 = stream.rows_dropped();
    stream.reset();
    std::vector<uint64_t> epoch2;
    while (auto b = stream.next())
      epoch2.insert(epoch2.end(), b->row_indices.begin(), b->row_indices.end());
    if (epoch1 != epoch2 || dropped1 != stream.rows_dropped()) identical_ok = false;

    std::vector<uint64_t> sorted = epoch1;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) multiset_ok = false;
    if (epoch1.size() + dropped1 != rows) multiset_ok = false;
    if (dropped1 >= batch) multiset_ok = false;
    if (rows % batch == 0 && dropped1 != 0) multiset_ok = false;
    if (rows % batch == 0) {
      // exact permutation: emitted values form the dataset multiset
      std::multiset<std::vector<float>> emitted, source;
      for (uint64_t idx : epoch1) {
        const auto s = ds.row(idx);
        emitted.insert(std::vector<float>(s.begin(), s.end()));
      }
      for (uint64_t r = 0; r < rows; ++r) {
        const auto s = ds.row(r);
        source.insert(std::vector<float>(s.begin(), s.end()));
      }
      if (emitted != source) multiset_ok = false;
    }
  }
  report(10, "stream epochs are seed-deterministic permutations", identical_ok && multiset_ok,
         std::string("replay ") + (identical_ok ? "identical" : "DIVERGED") + ", multiset " +
             (multiset_ok ? "ok" : "FAIL"));
}

// ---- criterion 11: autointerp plumbing -------------------------------------

const std::string kSourceDir = SAEKIT_SOURCE_DIR;

void criterion_autointerp() {
  bool goldens_ok = true;
  std::string golden_detail;
  try {
    const auto want = [&](const std::string& rel) {
      return read_text_file(kSourceDir + "/" + rel);
    };
    // template sources
    if (std::string(prompts::kInterpreterSystemTemplate) !=
        want("prompts/interpreter_system.txt"))
      goldens_ok = false;
    if (std::string(prompts::kPredictorSystemPrompt) != want("prompts/predictor_system.txt"))
      goldens_ok = false;
    // worked-example round-trips
    const std::vector<std::string> idioms{
        " and he was <<over the moon>> to find",
        " we'll be laughing <<till the cows come home>>! Pro",
        " thought Scotland was boring, but really there's more \n<<than meets the eye>>! I'd"};
    if (build_interpreter_prompt(idioms) != want("prompts/interpreter_example_block.txt"))
      goldens_ok = false;
    const std::vector<std::string> box7_texts{
        " climate, Tomblinâ Chief of Staff Charlie Lorensen said.",
        " no wonderworking relics, no true Body and Blood of Christ,\nno true Baptism",
        "Deborah Sathe, Head of Talent Development and Production\nat Film London,",
        " It has been devised by Director of Public Prosecutions (DPP)",
        " and fair investigation not even include the Director of\nAthletics? Finally, we believe "
        "the"};
    if (build_predictor_prompt("\"of\" before words that start\nwith a capital letter.",
                               box7_texts) != want("tests/golden/predictor_example.txt"))
      goldens_ok = false;
    // full renders
    if (interpreter_system_prompt() != want("tests/golden/interpreter_system_rendered.txt"))
      goldens_ok = false;
    const std::vector<std::string> chunks{"stories about dogs", "stories about cats"};
    if (build_aggregation_prompt(chunks) != want("tests/golden/aggregation_rendered.txt"))
      goldens_ok = false;
    if (build_diversity_prompt(chunks) != want("tests/golden/diversity_rendered.txt"))
      goldens_ok = false;
  } catch (const std::exception& e) {
    goldens_ok = false;
    golden_detail = e.what();
  }

  // f1 hand arithmetic
  const double f1 = f1_score({1, 1, 1, 1, 1, 0, 0, 0, 0, 0}, {1, 1, 1, 0, 0, 1, 0, 0, 0, 0});
  const bool f1_ok = std::abs(f1 - 2.0 / 3.0) < 1e-12;

  // end-to-end mock pipeline with an injected counting transport
  int network_calls = 0;
  bool pipeline_ok = true;
  try {
    SaeParams p;
    p.n = 1;
    p.m = 1;
    p.w_enc = Matrix(1, 1);
    p.w_enc(0, 0) = 1.0;
    p.b_enc.assign(1, 0.0);
    p.w_dec = Matrix(1, 1);
    p.b_dec.assign(1, 0.0);
    ActivationDataset ds;
    ds.rows = 30;
    ds.dim = 1;
    ds.values.resize(30, 0.0f);
    std::vector<TokenizedExample> examples;
    for (int i = 0; i < 30; ++i) {
      ds.values[i] = i < 15 ? 0.0f : static_cast<float>(i - 14);
      examples.push_back({{"token" + std::to_string(i)}, static_cast<uint64_t>(i)});
    }
    LlmClientConfig cfg;
    cfg.mock_mode = true;
    cfg.mock_responses = {"[EXPLANATION]: large values", "[1,0,1,0,1,0,1,0,1,0]"};
    LlmClient client(cfg, [&](const TransportRequest&) {
      ++network_calls;
      return TransportResult{};
    });
    AutointerpOptions opt;
    opt.seed = 11;
    const AutointerpResult result = run_autointerp(p, ds, examples, {0}, client, opt);
    pipeline_ok = result.records.size() == 1 && result.records[0].truth.size() == 10 &&
                  result.explanations.size() == 1;
  } catch (const std::exception&) {
    pipeline_ok = false;
  }
  report(11, "prompt goldens, exact F1 arithmetic, zero-network mock pipeline",
         goldens_ok && f1_ok && pipeline_ok && network_calls == 0,
         std::string("goldens ") + (goldens_ok ? "ok" : ("FAIL " + golden_detail)) + ", f1 " +
             fmt(f1) + ", network calls " + std::to_string(network_calls));
}

// ---- criterion 12: end-to-end cli smoke ------------------------------------

int run_cli(const std::string& args, const std::string& log_path) {
  const std::string cmd = std::string(SAEKIT_CLI_PATH) + " " + args + " > " + log_path +
                          " 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -2;
}

bool csv_header_is(const std::string& path, const std::vector<std::string>& want,
                   std::string& detail) {
  if (!fs::exists(path)) {
    detail += path + " missing; ";
    return false;
  }
  const auto rows = read_csv(path);
  if (rows.empty() || rows[0] != want) {
    detail += path + " header mismatch; ";
    return false;
  }
  return true;
}

void criterion_cli_smoke() {
  Timer timer;
  std::string detail;
  bool ok = true;
  const fs::path dir = fs::temp_directory_path() / "saekit_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string d = dir.string();

  const auto step = [&](const std::string& name, const std::string& args) {
    const int code = run_cli(args, d + "/" + name + ".log");
    if (code != 0) {
      ok = false;
      detail += name + " exit " + std::to_string(code) + "; ";
    }
  };

  step("gen", "gen dictionary --n 8 --k-true 4 --avg-active 2 --noise-sigma 0.01 "
              "--samples 6000 --seed 11 --out " + d + "/gen");
  step("train", "train --data " + d + "/gen/dictionary.saed --out " + d + "/train --m 16 "
                "--lambda 0.003 --lr 2e-3 --batch-size 128 --steps 300 --seed 3");
  // steps=0 reproduces the input checkpoint byte-identically
  step("train0", "train --data " + d + "/gen/dictionary.saed --init " + d +
                 "/train/checkpoint.sae --out " + d + "/train0 --steps 0 --seed 3");
  if (ok && read_text_file(d + "/train/checkpoint.sae") !=
                read_text_file(d + "/train0/checkpoint.sae")) {
    ok = false;
    detail += "steps=0 checkpoint differs; ";
  }
  step("sweep", "sweep --data " + d + "/gen/dictionary.saed --init " + d +
                "/train/checkpoint.sae --out " + d + "/sweep --lambdas 1e-4,1e-3,1e-2,1e-1 "
                "--split 0.7,0.15,0.15 --steps 120 --batch-size 128 --lr 2e-3 --seed 4");

  // unembedding + token frequencies for the coverage path
  {
    Rng rng(606);
    ActivationDataset unemb;
    unemb.rows = 32;
    unemb.dim = 8;
    unemb.values.resize(32 * 8);
    for (auto& v : unemb.values) v = static_cast<float>(rng.uniform(-1.0, 1.0));
    write_dataset(unemb, d + "/unemb.saed");
    CsvBuilder freqs({"token_id", "frequency"});
    for (uint32_t t = 0; t < 32; ++t)
      freqs.row_strings({std::to_string(t), std::to_string(1 + (t * 7) % 90)});
    freqs.write(d + "/freqs.csv");
  }
  step("eval", "eval --checkpoint " + d + "/train/checkpoint.sae --data " + d +
               "/gen/dictionary.saed --unembedding " + d + "/unemb.saed --token-freqs " + d +
               "/freqs.csv --out " + d + "/eval");
  step("eval2", "eval --checkpoint " + d + "/train/checkpoint.sae --data " + d +
                "/gen/dictionary.saed --baseline-counts " + d +
                "/eval/feature_counts.csv --out " + d + "/eval2");

  // influence scores via the cli
  step("tracin", "tracin --checkpoint " + d + "/train/checkpoint.sae --candidates " + d +
                 "/gen/dictionary.saed --seeds " + d + "/gen/dictionary.saed --lambda 0.003 "
                 "--out " + d + "/tracin");

  // selection over a generated corpus
  {
    std::string jsonl;
    for (int i = 0; i < 8; ++i)
      jsonl += "{\"id\": " + std::to_string(i) + ", \"text\": \"doc " + std::to_string(i) +
               " about topic " + (i % 2 ? "alpha" : "beta") + "\"}\n";
    write_text_file(d + "/corpus.jsonl", jsonl);
    write_text_file(d + "/seeds.jsonl", "{\"id\": 100, \"text\": \"alpha topic\"}\n");
  }
  step("select", "select --corpus " + d + "/corpus.jsonl --seeds " + d +
                 "/seeds.jsonl --method bm25 --budget 20 --out " + d + "/select");

  // the worked description-length example through the cli
  step("mdl", "mdl --pa-erm 0.1 --pb-erm 0.5 --pa-term 0.11 --pb-term 0.1 --na 900 --nb 100 "
              "--k 16 --out " + d + "/mdl");
  if (ok) {
    const auto rows = read_csv(d + "/mdl/mdl_report.csv");
    bool found = false;
    for (const auto& row : rows)
      if (row.size() >= 13 && row[0] == "term") {
        const double per_k = std::stod(row[12]);
        found = std::abs(per_k - 25.2) / 25.2 < 0.005;
      }
    if (!found) {
      ok = false;
      detail += "mdl per-feature delta off; ";
    }
  }

  // autointerp in mock mode through the cli
  {
    std::string texts;
    for (int i = 0; i < 24; ++i)
      texts += "{\"tokens\": [\"w" + std::to_string(i) + "\"]}\n";
    write_text_file(d + "/texts.jsonl", texts);
    // 24 rows of dim 8 with varying first coordinate
    ActivationDataset acts;
    acts.rows = 24;
    acts.dim = 8;
    acts.values.resize(24 * 8, 0.0f);
    for (int i = 0; i < 24; ++i) acts.values[i * 8] = i < 12 ? 0.0f : float(i - 11);
    write_dataset(acts, d + "/acts.saed");
    // a 1-feature probe checkpoint wired to coordinate 0
    SaeParams probe;
    probe.n = 8;
    probe.m = 2;
    probe.w_enc = Matrix(2, 8);
    probe.w_enc(0, 0) = 1.0;
    probe.b_enc.assign(2, 0.0);
    probe.w_dec = Matrix(8, 2);
    probe.w_dec(0, 0) = 1.0;
    probe.w_dec(1, 1) = 1.0;
    probe.b_dec.assign(8, 0.0);
    save_checkpoint(probe, d + "/probe.sae");
    write_text_file(d + "/mock.json",
                    "[\"[EXPLANATION]: first coordinate\", \"[1,1,0,0,1,0,1,0,1,0]\"]");
  }
  step("autointerp", "autointerp --checkpoint " + d + "/probe.sae --data " + d +
                     "/acts.saed --texts " + d + "/texts.jsonl --features 0 "
                     "--mock-responses " + d + "/mock.json --seed 5 --out " + d + "/ai");

  // documented headers on every emitted csv
  ok &= csv_header_is(d + "/train/training_log.csv",
                      {"step", "mean_loss", "max_loss", "lambda", "l0_estimate", "lr"}, detail);
  ok &= csv_header_is(d + "/sweep/pareto.csv",
                      {"lambda", "split", "l0", "recon_mse", "frac_variance_explained"}, detail);
  ok &= csv_header_is(d + "/eval/eval_summary.csv",
                      {"l0", "recon_mse", "frac_variance_explained", "rows", "features",
                       "activation_threshold"},
                      detail);
  ok &= csv_header_is(d + "/eval/feature_counts.csv", {"feature", "count"}, detail);
  ok &= csv_header_is(d + "/eval/activation_rank_curve.csv", {"rank", "count"}, detail);
  ok &= csv_header_is(d + "/eval/detection_curve.csv", {"tau", "detection_proportion"}, detail);
  ok &= csv_header_is(d + "/eval/decoder_cosine_hist.csv", {"bin_lo", "bin_hi", "mass"}, detail);
  ok &= csv_header_is(d + "/eval/pca.csv", {"variance_threshold", "components", "degenerate"},
                      detail);
  ok &= csv_header_is(d + "/eval/coverage_buckets.csv",
                      {"freq_lo", "freq_hi", "tokens", "covered", "proportion"}, detail);
  ok &= csv_header_is(d + "/eval/coverage_cumulative.csv",
                      {"cum_token_share", "cum_covered_norm"}, detail);
  ok &= csv_header_is(d + "/eval2/log_ratio_hist.csv", {"bin_lo", "bin_hi", "mass"}, detail);
  ok &= csv_header_is(d + "/tracin/tracin_scores.csv", {"id", "score"}, detail);
  ok &= csv_header_is(d + "/select/selection.csv", {"rank", "doc_id", "score", "cum_tokens"},
                      detail);
  ok &= csv_header_is(d + "/mdl/mdl_report.csv",
                      {"model", "p_a", "p_b", "n_a", "n_b", "k", "dl_a_bits", "dl_b_bits",
                       "dl_total_bits", "dh_a_bits", "dh_b_bits", "ddl_bits",
                       "ddl_per_feature_bits"},
                      detail);
  ok &= csv_header_is(d + "/ai/f1.csv", {"feature_id", "f1", "n_skipped"}, detail);
  ok &= csv_header_is(d + "/ai/explanations.csv", {"feature_id", "explanation"}, detail);

  // resolved-config snapshots exist beside outputs
  for (const std::string sub : {"gen", "train", "sweep", "eval", "select", "mdl", "ai"})
    if (!fs::exists(dir / sub / "resolved_config.cfg")) {
      ok = false;
      detail += sub + "/resolved_config.cfg missing; ";
    }

  // determinism: re-running the training command reproduces the checkpoint
  step("train_again", "train --data " + d + "/gen/dictionary.saed --out " + d +
                      "/train_again --m 16 --lambda 0.003 --lr 2e-3 --batch-size 128 "
                      "--steps 300 --seed 3");
  if (ok && read_text_file(d + "/train/checkpoint.sae") !=
                read_text_file(d + "/train_again/checkpoint.sae")) {
    ok = false;
    detail += "rerun checkpoint differs; ";
  }

  const double secs = timer.seconds();
  if (secs >= 600.0) {
    ok = false;
    detail += "took " + fmt(secs) + "s; ";
  }
  report(12, "cli pipeline gen -> train -> sweep -> eval emits documented csvs", ok,
         detail.empty() ? ("completed in " + fmt(secs) + "s") : detail);
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion_gradients();
  criterion_term_limits();
  criterion_unit_norm();
  criterion_dictionary_recovery();
  criterion_term_tail();
  criterion_mdl();
  criterion_retrieval_oracles();
  criterion_tracin();
  criterion_logit_lens();
  criterion_streaming();
  criterion_autointerp();
  criterion_cli_smoke();
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", g_failures);
  return 1;
}
