#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "saekit/csv.hpp"
#include "saekit/dataset.hpp"
#include "saekit/errors.hpp"
#include "saekit/sae.hpp"
#include "saekit/synth.hpp"

namespace saekit {

// Binary entropy in bits, with H(0) = H(1) = 0 by the continuity convention.
inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw NumericError("binary_entropy: p must lie in [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

struct ActivationProbs {
  double p_a = 0.0;
  double p_b = 0.0;
  std::vector<double> per_feature_a;  // diagnostic breakdown
  std::vector<double> per_feature_b;
};

// Empirical activation probability per cluster, pooled over features:
// p_C = (# active (row, feature) pairs among cluster-C rows) / (N_C * M).
inline ActivationProbs estimate_activation_probs(const SaeParams& params,
                                                 const ActivationDataset& ds,
                                                 const std::vector<ClusterLabel>& labels,
                                                 double threshold = 0.0) {
  if (labels.size() != ds.rows)
    throw ShapeError("estimate_activation_probs: labels length must equal rows");
  uint64_t n_a = 0, n_b = 0;
  for (auto l : labels) (l == ClusterLabel::A ? n_a : n_b) += 1;
  if (n_a == 0 || n_b == 0) throw ShapeError("estimate_activation_probs: a cluster is empty");

  ActivationProbs probs;
  probs.per_feature_a.assign(params.m, 0.0);
  probs.per_feature_b.assign(params.m, 0.0);
  uint64_t active_a = 0, active_b = 0;
  for (uint64_t r = 0; r < ds.rows; ++r) {
    const std::vector<double> f = encode(params, ds.row_as_double(r));
    const bool is_a = labels[r] == ClusterLabel::A;
    for (size_t j = 0; j < params.m; ++j) {
      if (f[j] > threshold) {
        if (is_a) {
          ++active_a;
          probs.per_feature_a[j] += 1.0;
        } else {
          ++active_b;
          probs.per_feature_b[j] += 1.0;
        }
      }
    }
  }
  for (auto& v : probs.per_feature_a) v /= static_cast<double>(n_a);
  for (auto& v : probs.per_feature_b) v /= static_cast<double>(n_b);
  probs.p_a = static_cast<double>(active_a) / (static_cast<double>(n_a) * static_cast<double>(params.m));
  probs.p_b = static_cast<double>(active_b) / (static_cast<double>(n_b) * static_cast<double>(params.m));
  return probs;
}

// Description-length arithmetic under the binary-latent idealization:
// per-point DL for cluster C is k * H(p_C) bits and the data total is
// N_A k H(p_A) + N_B k H(p_B).
struct MdlReport {
  double p_a = 0.0;
  double p_b = 0.0;
  uint64_t n_a = 0;
  uint64_t n_b = 0;
  uint64_t k = 0;
  double dl_a = 0.0;       // bits per cluster-A point
  double dl_b = 0.0;       // bits per cluster-B point
  double dl_total = 0.0;   // bits for the whole dataset
};

inline MdlReport mdl_report(double p_a, double p_b, uint64_t n_a, uint64_t n_b, uint64_t k) {
  if (n_a == 0 || n_b == 0 || k == 0) throw ConfigError("mdl_report: counts must be positive");
  MdlReport r;
  r.p_a = p_a;
  r.p_b = p_b;
  r.n_a = n_a;
  r.n_b = n_b;
  r.k = k;
  r.dl_a = static_cast<double>(k) * binary_entropy(p_a);
  r.dl_b = static_cast<double>(k) * binary_entropy(p_b);
  r.dl_total = static_cast<double>(n_a) * r.dl_a + static_cast<double>(n_b) * r.dl_b;
  return r;
}

struct MdlDelta {
  double dh_a = 0.0;  // H(p_A first) - H(p_A second), bits
  double dh_b = 0.0;
  double ddl = 0.0;   // first total - second total; positive = second is shorter
};

inline MdlDelta mdl_delta(const MdlReport& first, const MdlReport& second) {
  if (first.n_a != second.n_a || first.n_b != second.n_b || first.k != second.k)
    throw ShapeError("mdl_delta: reports must share N_A, N_B and k");
  MdlDelta d;
  d.dh_a = binary_entropy(first.p_a) - binary_entropy(second.p_a);
  d.dh_b = binary_entropy(first.p_b) - binary_entropy(second.p_b);
  d.ddl = first.dl_total - second.dl_total;
  return d;
}

inline double delta_dl(const MdlReport& first, const MdlReport& second) {
  return mdl_delta(first, second).ddl;
}

inline void write_mdl_csv(const MdlReport& erm, const MdlReport& term, const std::string& path) {
  const MdlDelta d = mdl_delta(erm, term);
  CsvBuilder csv({"model", "p_a", "p_b", "n_a", "n_b", "k", "dl_a_bits", "dl_b_bits", "dl_total_bits",
                  "dh_a_bits", "dh_b_bits", "ddl_bits", "ddl_per_feature_bits"});
  const auto row = [&](const std::string& name, const MdlReport& r, bool with_delta) {
    csv.row_strings({name, csv_double(r.p_a), csv_double(r.p_b), std::to_string(r.n_a),
                     std::to_string(r.n_b), std::to_string(r.k), csv_double(r.dl_a),
                     csv_double(r.dl_b), csv_double(r.dl_total),
                     with_delta ? csv_double(d.dh_a) : "", with_delta ? csv_double(d.dh_b) : "",
                     with_delta ? csv_double(d.ddl) : "",
                     with_delta ? csv_double(d.ddl / static_cast<double>(r.k)) : ""});
  };
  row("erm", erm, false);
  row("term", term, true);
  csv.write(path);
}

}  // namespace saekit
