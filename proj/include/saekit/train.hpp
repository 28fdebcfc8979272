#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "saekit/adam.hpp"
#include "saekit/csv.hpp"
#include "saekit/dataset.hpp"
#include "saekit/sae.hpp"
#include "saekit/stream.hpp"
#include "saekit/tilt.hpp"

namespace saekit {

// Multiplicative sparsity-coefficient controller: every check_interval
// steps, lambda is scaled up by lambda_step_factor when the running-mean L0
// exceeds the target range and scaled down when it falls below.
struct AdaptiveLambdaConfig {
  double l0_target_low = 0.0;
  double l0_target_high = 0.0;
  double lambda_step_factor = 1.02;
  uint64_t check_interval = 100;

  void validate() const {
    if (!(l0_target_low < l0_target_high))
      throw ConfigError("adaptive lambda: l0_target_low must be < l0_target_high");
    if (!(lambda_step_factor > 1.0))
      throw ConfigError("adaptive lambda: lambda_step_factor must be > 1");
    if (check_interval == 0) throw ConfigError("adaptive lambda: check_interval must be positive");
  }
};

struct TrainConfig {
  double lambda = 0.0;
  double lr = 5e-5;
  size_t batch_size = 4096;
  uint64_t steps = 1000;
  uint64_t lr_decay_last_steps = 0;
  std::optional<TiltConfig> tilt;
  std::optional<AdaptiveLambdaConfig> adaptive_lambda;
  size_t buffer_batches = 4;
  uint64_t seed = 0;

  void validate() const {
    if (!(lambda >= 0.0)) throw ConfigError("lambda must be nonnegative");
    if (!(lr > 0.0)) throw ConfigError("lr must be positive");
    if (batch_size == 0) throw ConfigError("batch_size must be positive");
    if (lr_decay_last_steps > steps)
      throw ConfigError("lr_decay_last_steps must not exceed steps");
    if (tilt) tilt->validate();
    if (adaptive_lambda) adaptive_lambda->validate();
  }
};

struct TrainStepRecord {
  uint64_t step;  // 1-based
  double mean_loss;
  double max_loss;
  double lambda;
  double l0_estimate;
  double lr;
};

struct DecoderResetEvent {
  uint64_t step;
  size_t column;
};

struct TrainingLog {
  std::vector<TrainStepRecord> steps;
  std::vector<DecoderResetEvent> decoder_resets;
  std::vector<size_t> dead_features;  // never active over the whole run
  uint64_t rows_dropped_in_buffers = 0;
};

inline void write_training_log_csv(const TrainingLog& log, const std::string& path) {
  CsvBuilder csv({"step", "mean_loss", "max_loss", "lambda", "l0_estimate", "lr"});
  for (const auto& r : log.steps)
    csv.row_strings({std::to_string(r.step), csv_double(r.mean_loss), csv_double(r.max_loss),
                     csv_double(r.lambda), csv_double(r.l0_estimate), csv_double(r.lr)});
  csv.write(path);
}

// Linear decay over the final `window` steps: full lr up to step
// steps-window, then lr * (steps - step + 1) / window (1-based), reaching
// lr/window on the last step.
inline double lr_at_step(double lr, uint64_t step, uint64_t steps, uint64_t window) {
  if (window == 0 || step <= steps - window) return lr;
  return lr * static_cast<double>(steps - step + 1) / static_cast<double>(window);
}

using TrainObserver = std::function<void(const TrainStepRecord&, const SaeParams&)>;

// Runs `steps` Adam steps over shuffled batches. Per-example tilt weights
// are computed from total per-example losses when tilt is set. Decoder
// columns keep unit norm via gradient projection before the step and
// renormalization after it.
inline std::pair<SaeParams, TrainingLog> train(const TrainConfig& cfg,
                                               const ActivationDataset& data,
                                               std::optional<SaeParams> init = std::nullopt,
                                               const TrainObserver& observer = {}) {
  cfg.validate();
  if (data.rows == 0) throw ShapeError("train: empty dataset");

  SaeParams params = init ? std::move(*init) : [&] {
    Rng init_rng(derive_seed(cfg.seed, "train.init"));
    return fresh_init(data.dim, 2 * data.dim, init_rng);
  }();
  if (params.n != data.dim)
    throw ShapeError("train: dataset dim " + std::to_string(data.dim) +
                     " does not match params n " + std::to_string(params.n));

  TrainingLog log;
  if (cfg.steps == 0) return {std::move(params), std::move(log)};
  if (data.rows < cfg.batch_size) throw ConfigError("dataset has fewer rows than one batch");

  AdamState adam = AdamState::init(params);
  Rng reset_rng(derive_seed(cfg.seed, "train.column_reset"));
  double lambda = cfg.lambda;
  std::vector<uint8_t> ever_active(params.m, 0);

  double l0_window_sum = 0.0;
  uint64_t l0_window_count = 0;

  uint64_t step = 0;
  uint64_t epoch = 0;
  while (step < cfg.steps) {
    ShuffleStream scfg;
    scfg.batch_size = cfg.batch_size;
    scfg.buffer_batches = cfg.buffer_batches;
    scfg.seed = derive_seed(cfg.seed, "train.stream", epoch);
    BatchStream stream(data, scfg);
    std::optional<Batch> batch;
    while (step < cfg.steps && (batch = stream.next())) {
      ++step;
      const Matrix& xs = batch->values;

      // forward pass for per-example losses and activity stats
      std::vector<double> totals(xs.rows);
      double mean_loss = 0.0, max_loss = 0.0, l0_sum = 0.0;
      for (size_t b = 0; b < xs.rows; ++b) {
        const auto x = xs.row(b);
        double recon = 0.0, l1 = 0.0;
        std::vector<double> f = encode(params, x);
        size_t active = 0;
        for (size_t j = 0; j < params.m; ++j) {
          if (f[j] > 0.0) {
            ++active;
            ever_active[j] = 1;
            l1 += f[j];
          }
        }
        const std::vector<double> xhat = decode(params, f);
        recon = squared_distance(x, xhat);
        totals[b] = recon + lambda * l1;
        if (!std::isfinite(totals[b]))
          throw NumericError("train: non-finite loss at step " + std::to_string(step));
        mean_loss += totals[b];
        max_loss = b == 0 ? totals[b] : std::max(max_loss, totals[b]);
        l0_sum += static_cast<double>(active);
      }
      mean_loss /= static_cast<double>(xs.rows);
      const double l0_estimate = l0_sum / static_cast<double>(xs.rows);

      const std::vector<double> weights =
          cfg.tilt ? tilt_weights(totals, *cfg.tilt) : uniform_weights(xs.rows);
      Gradients g = grad(params, xs, lambda, weights);
      project_decoder_gradient(params, g);
      const double lr = lr_at_step(cfg.lr, step, cfg.steps, cfg.lr_decay_last_steps);
      adam_step(params, adam, g, lr);
      std::vector<size_t> resets;
      renormalize_decoder_columns(params, reset_rng, &resets);
      for (size_t c : resets) log.decoder_resets.push_back({step, c});

      log.steps.push_back({step, mean_loss, max_loss, lambda, l0_estimate, lr});
      if (observer) observer(log.steps.back(), params);

      if (cfg.adaptive_lambda) {
        l0_window_sum += l0_estimate;
        ++l0_window_count;
        if (step % cfg.adaptive_lambda->check_interval == 0) {
          const double running_l0 = l0_window_sum / static_cast<double>(l0_window_count);
          if (running_l0 > cfg.adaptive_lambda->l0_target_high)
            lambda *= cfg.adaptive_lambda->lambda_step_factor;
          else if (running_l0 < cfg.adaptive_lambda->l0_target_low)
            lambda /= cfg.adaptive_lambda->lambda_step_factor;
          l0_window_sum = 0.0;
          l0_window_count = 0;
        }
      }
    }
    log.rows_dropped_in_buffers += stream.rows_dropped();
    ++epoch;
  }

  for (size_t j = 0; j < params.m; ++j)
    if (!ever_active[j]) log.dead_features.push_back(j);
  return {std::move(params), std::move(log)};
}

}  // namespace saekit
