#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "saekit/csv.hpp"
#include "saekit/dataset.hpp"
#include "saekit/errors.hpp"
#include "saekit/matrix.hpp"
#include "saekit/rng.hpp"

namespace saekit {

// Two-Gaussian mixture: majority cluster A at the origin, minority cluster B
// at delta * 1, both with covariance sigma^2 I.
struct MixtureSpec {
  uint32_t d = 16;
  double delta = 4.0;
  double sigma = 1.0;
  double q_a = 0.9;
  uint64_t n_total = 1000;
  uint64_t seed = 0;

  void validate() const {
    if (d == 0 || n_total == 0) throw ConfigError("mixture: d and n_total must be positive");
    if (!(delta > 0.0) || !(sigma > 0.0)) throw ConfigError("mixture: delta and sigma must be positive");
    if (!(q_a > 0.0 && q_a < 1.0)) throw ConfigError("mixture: q_a must lie in (0, 1)");
  }
};

enum class ClusterLabel : uint8_t { A = 0, B = 1 };

struct MixtureData {
  ActivationDataset data;
  std::vector<ClusterLabel> labels;  // aligned with rows
};

// Exactly round(q_a * N) rows from cluster A, the remainder from B; rows and
// labels are then jointly permuted with the seeded generator.
inline MixtureData gen_mixture(const MixtureSpec& spec) {
  spec.validate();
  const uint64_t n_a = static_cast<uint64_t>(std::llround(spec.q_a * static_cast<double>(spec.n_total)));
  Rng rng(derive_seed(spec.seed, "gen.mixture"));

  MixtureData out;
  out.data.rows = spec.n_total;
  out.data.dim = spec.d;
  out.data.values.resize(spec.n_total * spec.d);
  out.data.source_meta = "gen_mixture";
  out.labels.resize(spec.n_total);

  for (uint64_t r = 0; r < spec.n_total; ++r) {
    const bool is_b = r >= n_a;
    out.labels[r] = is_b ? ClusterLabel::B : ClusterLabel::A;
    const double mean = is_b ? spec.delta : 0.0;
    for (uint32_t c = 0; c < spec.d; ++c)
      out.data.values[r * spec.d + c] = static_cast<float>(rng.normal(mean, spec.sigma));
  }
  const std::vector<uint64_t> perm = rng.permutation(spec.n_total);
  std::vector<float> shuffled(out.data.values.size());
  std::vector<ClusterLabel> shuffled_labels(spec.n_total);
  for (uint64_t r = 0; r < spec.n_total; ++r) {
    const uint64_t src = perm[r];
    std::copy(out.data.values.begin() + src * spec.d, out.data.values.begin() + (src + 1) * spec.d,
              shuffled.begin() + r * spec.d);
    shuffled_labels[r] = out.labels[src];
  }
  out.data.values = std::move(shuffled);
  out.labels = std::move(shuffled_labels);
  return out;
}

inline void write_labels_csv(const std::vector<ClusterLabel>& labels, const std::string& path) {
  CsvBuilder csv({"row", "label"});
  for (size_t r = 0; r < labels.size(); ++r)
    csv.row_strings({std::to_string(r), labels[r] == ClusterLabel::A ? "A" : "B"});
  csv.write(path);
}

inline std::vector<ClusterLabel> read_labels_csv(const std::string& path) {
  const auto rows = read_csv(path);
  if (rows.empty() || rows[0] != std::vector<std::string>{"row", "label"})
    throw ParseError(path + ": expected header row,label");
  std::vector<ClusterLabel> labels;
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 2) throw ParseError(path + ": bad row " + std::to_string(i));
    if (rows[i][1] == "A") labels.push_back(ClusterLabel::A);
    else if (rows[i][1] == "B") labels.push_back(ClusterLabel::B);
    else throw ParseError(path + ": unknown label " + rows[i][1]);
  }
  return labels;
}

// Sparse linear dictionary data: x = sum_i f_i d_i + noise, with unit
// ground-truth directions and Bernoulli(avg_active / k_true) supports.
// Active coefficients are uniform in [0.5, 1.5] * coeff_scale.
struct DictionarySpec {
  uint32_t n = 16;
  uint32_t k_true = 8;
  double avg_active = 2.0;
  double coeff_scale = 1.0;
  double noise_sigma = 0.01;
  uint64_t n_samples = 1000;
  uint64_t seed = 0;

  void validate() const {
    if (n == 0 || k_true == 0 || n_samples == 0)
      throw ConfigError("dictionary: n, k_true and n_samples must be positive");
    if (!(avg_active > 0.0 && avg_active <= static_cast<double>(k_true)))
      throw ConfigError("dictionary: avg_active must lie in (0, k_true]");
    if (!(coeff_scale > 0.0)) throw ConfigError("dictionary: coeff_scale must be positive");
    if (noise_sigma < 0.0) throw ConfigError("dictionary: noise_sigma must be nonnegative");
  }
};

struct DictionaryData {
  ActivationDataset data;
  Matrix true_dirs;   // n x k_true, unit columns
  Matrix true_codes;  // n_samples x k_true
  bool orthogonal_fallback = false;  // k_true > n: random unit dirs instead
};

inline DictionaryData gen_dictionary_data(const DictionarySpec& spec) {
  spec.validate();
  Rng rng(derive_seed(spec.seed, "gen.dictionary"));
  DictionaryData out;
  out.true_dirs = Matrix(spec.n, spec.k_true);

  // Gram-Schmidt on Gaussian draws when an orthonormal set fits.
  std::vector<std::vector<double>> dirs;
  for (uint32_t k = 0; k < spec.k_true; ++k) {
    std::vector<double> v(spec.n);
    while (true) {
      for (auto& x : v) x = rng.normal();
      if (spec.k_true <= spec.n) {
        for (const auto& u : dirs) {
          const double c = dot(std::span<const double>(v), std::span<const double>(u));
          for (uint32_t i = 0; i < spec.n; ++i) v[i] -= c * u[i];
        }
      }
      const double nrm = norm2(v);
      if (nrm > 1e-8) {
        for (auto& x : v) x /= nrm;
        break;
      }
    }
    dirs.push_back(std::move(v));
  }
  out.orthogonal_fallback = spec.k_true > spec.n;
  for (uint32_t k = 0; k < spec.k_true; ++k)
    for (uint32_t i = 0; i < spec.n; ++i) out.true_dirs(i, k) = dirs[k][i];

  const double p_active = spec.avg_active / static_cast<double>(spec.k_true);
  out.true_codes = Matrix(spec.n_samples, spec.k_true);
  out.data.rows = spec.n_samples;
  out.data.dim = spec.n;
  out.data.values.resize(spec.n_samples * spec.n);
  out.data.source_meta = "gen_dictionary_data";
  std::vector<double> x(spec.n);
  for (uint64_t s = 0; s < spec.n_samples; ++s) {
    std::fill(x.begin(), x.end(), 0.0);
    for (uint32_t k = 0; k < spec.k_true; ++k) {
      if (rng.uniform() >= p_active) continue;
      const double coeff = spec.coeff_scale * rng.uniform(0.5, 1.5);
      out.true_codes(s, k) = coeff;
      for (uint32_t i = 0; i < spec.n; ++i) x[i] += coeff * out.true_dirs(i, k);
    }
    for (uint32_t i = 0; i < spec.n; ++i)
      out.data.values[s * spec.n + i] = static_cast<float>(x[i] + spec.noise_sigma * rng.normal());
  }
  return out;
}

struct FeatureMatch {
  double mean_max_cosine = 0.0;
  std::vector<size_t> best_learned;   // per true direction
  std::vector<double> best_cosine;    // per true direction, |cosine|
};

// For each ground-truth direction, the best |cosine| over learned decoder
// columns; invariant to sign flips and column permutations.
inline FeatureMatch match_features(const Matrix& learned_dec, const Matrix& true_dirs) {
  if (learned_dec.rows != true_dirs.rows)
    throw ShapeError("match_features: ambient dimensions differ");
  if (learned_dec.cols == 0 || true_dirs.cols == 0)
    throw ShapeError("match_features: empty matrix");
  const size_t n = learned_dec.rows;
  FeatureMatch match;
  match.best_learned.resize(true_dirs.cols);
  match.best_cosine.resize(true_dirs.cols);
  std::vector<double> lnorm(learned_dec.cols, 0.0), tnorm(true_dirs.cols, 0.0);
  for (size_t j = 0; j < learned_dec.cols; ++j)
    for (size_t i = 0; i < n; ++i) lnorm[j] += learned_dec(i, j) * learned_dec(i, j);
  for (size_t k = 0; k < true_dirs.cols; ++k)
    for (size_t i = 0; i < n; ++i) tnorm[k] += true_dirs(i, k) * true_dirs(i, k);
  for (size_t k = 0; k < true_dirs.cols; ++k) {
    double best = -1.0;
    size_t best_j = 0;
    for (size_t j = 0; j < learned_dec.cols; ++j) {
      double d = 0.0;
      for (size_t i = 0; i < n; ++i) d += learned_dec(i, j) * true_dirs(i, k);
      const double denom = std::sqrt(lnorm[j] * tnorm[k]);
      const double c = denom > 0.0 ? std::abs(d) / denom : 0.0;
      if (c > best) {
        best = c;
        best_j = j;
      }
    }
    match.best_cosine[k] = best;
    match.best_learned[k] = best_j;
    match.mean_max_cosine += best;
  }
  match.mean_max_cosine /= static_cast<double>(true_dirs.cols);
  return match;
}

}  // namespace saekit
