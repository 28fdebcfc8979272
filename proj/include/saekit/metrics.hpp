#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "saekit/dataset.hpp"
#include "saekit/errors.hpp"
#include "saekit/matrix.hpp"
#include "saekit/rng.hpp"
#include "saekit/sae.hpp"

namespace saekit {

// Mean number of active features per row. "Active" means strictly above the
// threshold; the default threshold of exactly 0 matches relu's true zeros.
inline double l0_metric(const SaeParams& p, const ActivationDataset& ds, double threshold = 0.0) {
  if (ds.rows == 0) throw ShapeError("l0_metric: empty dataset");
  double total = 0.0;
  for (uint64_t r = 0; r < ds.rows; ++r) {
    const std::vector<double> f = encode(p, ds.row_as_double(r));
    for (double v : f) total += v > threshold ? 1.0 : 0.0;
  }
  return total / static_cast<double>(ds.rows);
}

struct ReconMetrics {
  double mse = 0.0;  // mean ||x - xhat||^2
  std::optional<double> frac_variance_explained;  // absent for zero-variance data
};

inline ReconMetrics recon_metrics(const SaeParams& p, const ActivationDataset& ds) {
  if (ds.rows == 0) throw ShapeError("recon_metrics: empty dataset");
  std::vector<double> mean(ds.dim, 0.0);
  for (uint64_t r = 0; r < ds.rows; ++r) {
    const auto row = ds.row(r);
    for (uint32_t c = 0; c < ds.dim; ++c) mean[c] += row[c];
  }
  for (double& v : mean) v /= static_cast<double>(ds.rows);

  double mse = 0.0, var = 0.0;
  for (uint64_t r = 0; r < ds.rows; ++r) {
    const std::vector<double> x = ds.row_as_double(r);
    const std::vector<double> xhat = decode(p, encode(p, x));
    mse += squared_distance(x, xhat);
    var += squared_distance(x, mean);
  }
  mse /= static_cast<double>(ds.rows);
  var /= static_cast<double>(ds.rows);
  ReconMetrics out;
  out.mse = mse;
  if (var > 0.0) out.frac_variance_explained = 1.0 - mse / var;
  return out;
}

struct CoverageBucket {
  double freq_lo = 0.0;
  double freq_hi = 0.0;
  uint64_t tokens = 0;
  uint64_t covered = 0;
  double proportion = 0.0;
};

struct CoveragePoint {
  double cum_token_share = 0.0;    // cumulative frequency mass, frequent first
  double cum_covered_norm = 0.0;   // covered types so far / covered types total
};

struct CoverageReport {
  std::vector<uint8_t> covered;  // per token id
  uint64_t covered_total = 0;
  std::vector<CoverageBucket> buckets;
  std::vector<CoveragePoint> cumulative;
};

// Top-k token ids of a logit vector, ties broken by ascending token id.
inline std::vector<uint32_t> top_k_tokens(std::span<const double> logits, size_t k) {
  std::vector<uint32_t> ids(logits.size());
  for (uint32_t i = 0; i < ids.size(); ++i) ids[i] = i;
  std::partial_sort(ids.begin(), ids.begin() + k, ids.end(), [&](uint32_t a, uint32_t b) {
    if (logits[a] != logits[b]) return logits[a] > logits[b];
    return a < b;
  });
  ids.resize(k);
  return ids;
}

// Projects every decoder direction through the unembedding matrix and marks
// a token covered when it appears in the top_k logits of at least one
// feature. Tokens are bucketed into n_buckets log-spaced frequency ranges
// (zero-frequency tokens are skipped); the cumulative curve walks token
// types from most to least frequent and is normalized so it ends at 1.
inline CoverageReport logit_lens_coverage(const SaeParams& p, const Matrix& unembedding,
                                          const std::vector<double>& token_freqs,
                                          size_t top_k = 10, size_t n_buckets = 10) {
  const size_t vocab = unembedding.rows;
  if (unembedding.cols != p.n) throw ShapeError("unembedding column dim must equal n");
  if (token_freqs.size() != vocab) throw ShapeError("token_freqs length must equal vocab size");
  if (vocab < top_k) throw ShapeError("vocab smaller than top_k");

  CoverageReport report;
  report.covered.assign(vocab, 0);
  std::vector<double> logits(vocab);
  std::vector<double> dir(p.n);
  for (size_t j = 0; j < p.m; ++j) {
    for (size_t i = 0; i < p.n; ++i) dir[i] = p.w_dec(i, j);
    for (size_t v = 0; v < vocab; ++v) logits[v] = dot(unembedding.row(v), dir);
    for (uint32_t t : top_k_tokens(logits, top_k)) report.covered[t] = 1;
  }
  for (uint8_t c : report.covered) report.covered_total += c;

  // frequency buckets
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (double f : token_freqs) {
    if (f <= 0.0) continue;
    if (!any) {
      lo = hi = f;
      any = true;
    } else {
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
  }
  if (any) {
    std::vector<double> edges(n_buckets + 1);
    for (size_t k = 0; k <= n_buckets; ++k)
      edges[k] = lo * std::pow(hi / lo, static_cast<double>(k) / static_cast<double>(n_buckets));
    report.buckets.resize(n_buckets);
    for (size_t k = 0; k < n_buckets; ++k) {
      report.buckets[k].freq_lo = edges[k];
      report.buckets[k].freq_hi = edges[k + 1];
    }
    for (size_t v = 0; v < vocab; ++v) {
      const double f = token_freqs[v];
      if (f <= 0.0) continue;
      size_t k = n_buckets - 1;
      if (hi > lo) {
        const double pos = std::log(f / lo) / std::log(hi / lo) * static_cast<double>(n_buckets);
        k = std::min<size_t>(n_buckets - 1, static_cast<size_t>(std::max(0.0, pos)));
      } else {
        k = 0;
      }
      ++report.buckets[k].tokens;
      report.buckets[k].covered += report.covered[v];
    }
    for (auto& b : report.buckets)
      b.proportion = b.tokens ? static_cast<double>(b.covered) / static_cast<double>(b.tokens) : 0.0;
  }

  // cumulative curve over token types ordered by descending frequency
  std::vector<uint32_t> order;
  double total_freq = 0.0;
  for (uint32_t v = 0; v < vocab; ++v) {
    if (token_freqs[v] <= 0.0) continue;
    order.push_back(v);
    total_freq += token_freqs[v];
  }
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    if (token_freqs[a] != token_freqs[b]) return token_freqs[a] > token_freqs[b];
    return a < b;
  });
  uint64_t covered_so_far = 0;
  uint64_t covered_among_ranked = 0;
  for (uint32_t v : order) covered_among_ranked += report.covered[v];
  double mass = 0.0;
  for (uint32_t v : order) {
    mass += token_freqs[v];
    covered_so_far += report.covered[v];
    CoveragePoint pt;
    pt.cum_token_share = total_freq > 0.0 ? mass / total_freq : 0.0;
    pt.cum_covered_norm = covered_among_ranked > 0
                              ? static_cast<double>(covered_so_far) / static_cast<double>(covered_among_ranked)
                              : 0.0;
    report.cumulative.push_back(pt);
  }
  return report;
}

inline std::vector<uint64_t> activation_count_per_feature(const SaeParams& p,
                                                          const ActivationDataset& ds,
                                                          double threshold = 0.0) {
  std::vector<uint64_t> counts(p.m, 0);
  for (uint64_t r = 0; r < ds.rows; ++r) {
    const std::vector<double> f = encode(p, ds.row_as_double(r));
    for (size_t j = 0; j < p.m; ++j)
      if (f[j] > threshold) ++counts[j];
  }
  return counts;
}

inline std::vector<uint64_t> rank_curve(std::vector<uint64_t> counts) {
  std::sort(counts.begin(), counts.end(), std::greater<>());
  return counts;
}

struct Histogram {
  std::vector<double> edges;  // bins + 1
  std::vector<double> mass;   // normalized, sums to 1 when any values fell in
  std::vector<double> values; // raw values the histogram was built from
};

inline Histogram make_histogram(std::vector<double> values, size_t bins) {
  if (bins == 0) throw ConfigError("histogram needs at least one bin");
  Histogram h;
  h.values = std::move(values);
  if (h.values.empty()) return h;
  double lo = h.values[0], hi = h.values[0];
  for (double v : h.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo == hi) {  // point mass
    h.edges = {lo, hi};
    h.mass = {1.0};
    return h;
  }
  h.edges.resize(bins + 1);
  for (size_t k = 0; k <= bins; ++k)
    h.edges[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(bins);
  h.mass.assign(bins, 0.0);
  for (double v : h.values) {
    size_t k = static_cast<size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
    k = std::min(k, bins - 1);
    h.mass[k] += 1.0;
  }
  for (double& m : h.mass) m /= static_cast<double>(h.values.size());
  return h;
}

// Per-feature log2((count_model + 1) / (count_baseline + 1)), as a
// normalized histogram.
inline Histogram log_ratio_histogram(const std::vector<uint64_t>& counts_model,
                                     const std::vector<uint64_t>& counts_baseline,
                                     size_t bins = 50) {
  if (counts_model.size() != counts_baseline.size())
    throw ShapeError("log_ratio_histogram: length mismatch");
  std::vector<double> values(counts_model.size());
  for (size_t j = 0; j < values.size(); ++j)
    values[j] = std::log2((static_cast<double>(counts_model[j]) + 1.0) /
                          (static_cast<double>(counts_baseline[j]) + 1.0));
  return make_histogram(std::move(values), bins);
}

// Cosine similarities between distinct decoder columns: all pairs when
// M <= pair_cutoff, otherwise sample_pairs seeded draws.
inline Histogram decoder_cosine_distribution(const SaeParams& p, size_t bins = 50,
                                             size_t sample_pairs = 1u << 20,
                                             uint64_t seed = 0,
                                             size_t pair_cutoff = 2048) {
  if (p.m < 2) throw ShapeError("decoder_cosine_distribution: need at least 2 features");
  std::vector<std::vector<double>> cols(p.m, std::vector<double>(p.n));
  std::vector<double> norms(p.m);
  for (size_t j = 0; j < p.m; ++j) {
    for (size_t i = 0; i < p.n; ++i) cols[j][i] = p.w_dec(i, j);
    norms[j] = norm2(cols[j]);
  }
  auto cosine = [&](size_t a, size_t b) {
    const double d = norms[a] * norms[b];
    return d > 0.0 ? dot(cols[a], cols[b]) / d : 0.0;
  };
  std::vector<double> values;
  if (p.m <= pair_cutoff) {
    values.reserve(p.m * (p.m - 1) / 2);
    for (size_t a = 0; a < p.m; ++a)
      for (size_t b = a + 1; b < p.m; ++b) values.push_back(cosine(a, b));
  } else {
    Rng rng(derive_seed(seed, "decoder_cosine"));
    values.reserve(sample_pairs);
    for (size_t s = 0; s < sample_pairs; ++s) {
      const size_t a = rng.uniform_index(p.m);
      size_t b = rng.uniform_index(p.m - 1);
      if (b >= a) ++b;
      values.push_back(cosine(a, b));
    }
  }
  return make_histogram(std::move(values), bins);
}

namespace detail {
// Cyclic Jacobi eigenvalue iteration for a symmetric matrix; returns
// eigenvalues (unsorted). Deterministic, adequate for the small n used here.
inline std::vector<double> symmetric_eigenvalues(Matrix a) {
  const size_t n = a.rows;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-26) break;
    for (size_t pp = 0; pp < n; ++pp) {
      for (size_t q = pp + 1; q < n; ++q) {
        if (a(pp, q) == 0.0) continue;
        const double theta = (a(q, q) - a(pp, pp)) / (2.0 * a(pp, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (size_t k = 0; k < n; ++k) {
          const double akp = a(k, pp), akq = a(k, q);
          a(k, pp) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (size_t k = 0; k < n; ++k) {
          const double apk = a(pp, k), aqk = a(q, k);
          a(pp, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  return eig;
}
}  // namespace detail

struct PcaResult {
  size_t components = 0;
  bool degenerate = false;  // zero covariance (all directions identical)
};

// Smallest count of principal components of the decoder directions (M
// points in R^n, mean-centered) whose eigenvalue mass reaches the variance
// threshold.
inline PcaResult pca_components_to_explain(const SaeParams& p, double variance_threshold) {
  if (!(variance_threshold > 0.0 && variance_threshold < 1.0))
    throw ConfigError("variance_threshold must be in (0, 1)");
  if (p.m < 2) throw ShapeError("pca_components_to_explain: need at least 2 features");
  std::vector<double> mean(p.n, 0.0);
  for (size_t i = 0; i < p.n; ++i) {
    for (size_t j = 0; j < p.m; ++j) mean[i] += p.w_dec(i, j);
    mean[i] /= static_cast<double>(p.m);
  }
  Matrix cov(p.n, p.n);
  for (size_t a = 0; a < p.n; ++a)
    for (size_t b = a; b < p.n; ++b) {
      double s = 0.0;
      for (size_t j = 0; j < p.m; ++j)
        s += (p.w_dec(a, j) - mean[a]) * (p.w_dec(b, j) - mean[b]);
      s /= static_cast<double>(p.m);
      cov(a, b) = s;
      cov(b, a) = s;
    }
  std::vector<double> eig = detail::symmetric_eigenvalues(cov);
  std::sort(eig.begin(), eig.end(), std::greater<>());
  double total = 0.0;
  for (double& e : eig) {
    e = std::max(e, 0.0);
    total += e;
  }
  PcaResult out;
  if (total <= 0.0) {
    out.degenerate = true;
    return out;
  }
  double acc = 0.0;
  for (size_t c = 0; c < eig.size(); ++c) {
    acc += eig[c];
    if (acc / total >= variance_threshold) {
      out.components = c + 1;
      return out;
    }
  }
  out.components = eig.size();
  return out;
}

struct TokenRankErrorPoint {
  uint64_t rank;       // 1 = most frequent
  uint32_t token_id;
  uint64_t frequency;  // occurrences in the dataset
  double mean_error;
  double var_error;    // population variance
};

// Per-token reconstruction-error curve, tokens ranked by dataset frequency
// descending (ties by ascending token id).
inline std::vector<TokenRankErrorPoint> token_rank_error(const SaeParams& p,
                                                         const ActivationDataset& ds) {
  if (!ds.token_ids) throw ShapeError("token_rank_error: dataset has no token ids");
  std::map<uint32_t, std::vector<double>> errors_by_token;
  for (uint64_t r = 0; r < ds.rows; ++r) {
    const std::vector<double> x = ds.row_as_double(r);
    const std::vector<double> xhat = decode(p, encode(p, x));
    errors_by_token[(*ds.token_ids)[r]].push_back(squared_distance(x, xhat));
  }
  std::vector<std::pair<uint32_t, const std::vector<double>*>> order;
  for (const auto& [tok, errs] : errors_by_token) order.push_back({tok, &errs});
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second->size() != b.second->size()) return a.second->size() > b.second->size();
    return a.first < b.first;
  });
  std::vector<TokenRankErrorPoint> out;
  for (size_t r = 0; r < order.size(); ++r) {
    const auto& errs = *order[r].second;
    double mean = 0.0;
    for (double e : errs) mean += e;
    mean /= static_cast<double>(errs.size());
    double var = 0.0;
    for (double e : errs) var += (e - mean) * (e - mean);
    var /= static_cast<double>(errs.size());
    out.push_back({r + 1, order[r].first, errs.size(), mean, var});
  }
  return out;
}

struct FeatureStats {
  std::vector<uint64_t> activation_counts;   // per feature
  std::vector<double> row_entropy_nats;      // per row with any activation
  std::vector<double> row_max_activation;    // per row
  uint64_t zero_rows = 0;                    // rows with no activation
  std::vector<double> threshold_grid;
  std::vector<double> detection_proportion;  // fraction of rows with max > tau
};

// Per-row activation entropy (of f / sum f, natural log) and the detection
// curve: fraction of rows whose max activation exceeds each threshold in the
// grid. An empty grid defaults to 101 linear points from 0 to the largest
// max activation.
inline FeatureStats token_entropy_and_threshold_curves(const SaeParams& p,
                                                       const ActivationDataset& ds,
                                                       std::vector<double> threshold_grid = {},
                                                       double activity_threshold = 0.0) {
  if (ds.rows == 0) throw ShapeError("token_entropy_and_threshold_curves: empty dataset");
  FeatureStats stats;
  stats.activation_counts.assign(p.m, 0);
  stats.row_max_activation.reserve(ds.rows);
  for (uint64_t r = 0; r < ds.rows; ++r) {
    const std::vector<double> f = encode(p, ds.row_as_double(r));
    double sum = 0.0, mx = 0.0;
    for (size_t j = 0; j < p.m; ++j) {
      if (f[j] > activity_threshold) ++stats.activation_counts[j];
      sum += f[j];
      mx = std::max(mx, f[j]);
    }
    stats.row_max_activation.push_back(mx);
    if (sum <= 0.0) {
      ++stats.zero_rows;
      continue;
    }
    double h = 0.0;
    for (double v : f) {
      if (v <= 0.0) continue;
      const double q = v / sum;
      h -= q * std::log(q);
    }
    stats.row_entropy_nats.push_back(h);
  }
  if (threshold_grid.empty()) {
    double hi = 0.0;
    for (double v : stats.row_max_activation) hi = std::max(hi, v);
    threshold_grid.resize(101);
    for (size_t k = 0; k <= 100; ++k)
      threshold_grid[k] = hi * static_cast<double>(k) / 100.0;
  }
  stats.threshold_grid = std::move(threshold_grid);
  stats.detection_proportion.resize(stats.threshold_grid.size());
  for (size_t k = 0; k < stats.threshold_grid.size(); ++k) {
    uint64_t det = 0;
    for (double v : stats.row_max_activation) det += v > stats.threshold_grid[k] ? 1 : 0;
    stats.detection_proportion[k] =
        static_cast<double>(det) / static_cast<double>(ds.rows);
  }
  return stats;
}

}  // namespace saekit
