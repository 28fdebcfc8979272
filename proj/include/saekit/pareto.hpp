#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "saekit/csv.hpp"
#include "saekit/metrics.hpp"
#include "saekit/train.hpp"

namespace saekit {

struct ParetoPoint {
  double lambda = 0.0;
  double l0 = 0.0;
  double recon_mse = 0.0;
  std::optional<double> frac_variance_explained;
  std::string split;
};

struct NamedSplit {
  std::string tag;
  const ActivationDataset* data = nullptr;
};

// One sparsity sweep: for each lambda, finetune from base_params, keep the
// checkpoint with the lowest validation total loss (checked every
// val_check_interval steps and at the end), then report test metrics per
// split. All lambdas share the training seed so they see the same batches.
inline std::vector<ParetoPoint> pareto_sweep(const SaeParams& base_params,
                                             const TrainConfig& cfg_template,
                                             const std::vector<double>& lambdas,
                                             const ActivationDataset& train_ds,
                                             const ActivationDataset& val_ds,
                                             const std::vector<NamedSplit>& test_splits,
                                             uint64_t val_check_interval = 0) {
  if (lambdas.empty()) throw ConfigError("pareto_sweep: need at least one lambda");
  if (val_check_interval == 0)
    val_check_interval = std::max<uint64_t>(1, cfg_template.steps / 10);

  const auto val_total_loss = [&](const SaeParams& p, double lambda) {
    double total = 0.0;
    for (uint64_t r = 0; r < val_ds.rows; ++r)
      total += loss(p, val_ds.row_as_double(r), lambda).total;
    return total / static_cast<double>(val_ds.rows);
  };

  std::vector<ParetoPoint> points;
  for (double lambda : lambdas) {
    TrainConfig cfg = cfg_template;
    cfg.lambda = lambda;
    SaeParams best = base_params;
    double best_val = val_total_loss(base_params, lambda);
    try {
      auto [final_params, log] = train(
          cfg, train_ds, base_params,
          [&](const TrainStepRecord& rec, const SaeParams& p) {
            if (rec.step % val_check_interval != 0 && rec.step != cfg.steps) return;
            const double v = val_total_loss(p, lambda);
            if (v < best_val) {
              best_val = v;
              best = p;
            }
          });
      (void)final_params;
    } catch (const Error& e) {
      throw Error(e.category(), "lambda=" + csv_double(lambda) + ": " + e.what());
    }
    for (const auto& split : test_splits) {
      ParetoPoint pt;
      pt.lambda = lambda;
      pt.split = split.tag;
      pt.l0 = l0_metric(best, *split.data);
      const ReconMetrics rm = recon_metrics(best, *split.data);
      pt.recon_mse = rm.mse;
      pt.frac_variance_explained = rm.frac_variance_explained;
      points.push_back(std::move(pt));
    }
  }
  return points;
}

inline void write_pareto_csv(const std::vector<ParetoPoint>& points, const std::string& path) {
  CsvBuilder csv({"lambda", "split", "l0", "recon_mse", "frac_variance_explained"});
  for (const auto& p : points)
    csv.row_strings({csv_double(p.lambda), p.split, csv_double(p.l0), csv_double(p.recon_mse),
                     p.frac_variance_explained ? csv_double(*p.frac_variance_explained) : ""});
  csv.write(path);
}

// Trapezoidal area under the linearly interpolated (l0, metric) curve over
// [l0_lo, l0_hi]. Returns nullopt when the sweep does not span the range.
inline std::optional<double> pareto_auc(std::vector<std::pair<double, double>> curve,
                                        double l0_lo, double l0_hi) {
  if (curve.size() < 2 || !(l0_lo < l0_hi)) return std::nullopt;
  std::sort(curve.begin(), curve.end());
  if (curve.front().first > l0_lo || curve.back().first < l0_hi) return std::nullopt;
  const auto value_at = [&](double x) {
    for (size_t i = 1; i < curve.size(); ++i) {
      if (x <= curve[i].first) {
        const auto [x0, y0] = curve[i - 1];
        const auto [x1, y1] = curve[i];
        if (x1 == x0) return y1;
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
      }
    }
    return curve.back().second;
  };
  // integrate piecewise over interior knots
  std::vector<double> xs{l0_lo};
  for (const auto& [x, y] : curve)
    if (x > l0_lo && x < l0_hi) xs.push_back(x);
  xs.push_back(l0_hi);
  double area = 0.0;
  for (size_t i = 1; i < xs.size(); ++i)
    area += 0.5 * (value_at(xs[i - 1]) + value_at(xs[i])) * (xs[i] - xs[i - 1]);
  return area;
}

}  // namespace saekit
