#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "saekit/errors.hpp"
#include "saekit/matrix.hpp"
#include "saekit/rng.hpp"

namespace saekit {

// Single-layer sparse autoencoder:
//   f(x)    = relu(w_enc x + b_enc)
//   xhat(f) = w_dec f + b_dec
// w_enc is m-by-n, w_dec is n-by-m; column j of w_dec is the unit-norm
// direction of feature j.
struct SaeParams {
  size_t m = 0;  // feature count
  size_t n = 0;  // input dimension
  Matrix w_enc;  // m x n
  std::vector<double> b_enc;
  Matrix w_dec;  // n x m
  std::vector<double> b_dec;
};

// Gradient (or moment) arrays with the same shapes as SaeParams.
struct SaeTensors {
  Matrix w_enc;
  std::vector<double> b_enc;
  Matrix w_dec;
  std::vector<double> b_dec;

  static SaeTensors zeros_like(const SaeParams& p) {
    SaeTensors t;
    t.w_enc = Matrix(p.m, p.n);
    t.b_enc.assign(p.m, 0.0);
    t.w_dec = Matrix(p.n, p.m);
    t.b_dec.assign(p.n, 0.0);
    return t;
  }
};

using Gradients = SaeTensors;

struct LossBreakdown {
  double recon = 0.0;  // ||x - xhat||^2
  double l1 = 0.0;     // ||f||_1 (= sum of f, activations are nonnegative)
  double total = 0.0;  // recon + lambda * l1
};

// Fresh initialization: w_enc iid uniform in [-1/sqrt(n), 1/sqrt(n)],
// w_dec = w_enc^T with columns rescaled to unit norm, biases zero.
inline SaeParams fresh_init(size_t n, size_t m, Rng& rng) {
  if (n == 0 || m == 0) throw ShapeError("fresh_init: m and n must be >= 1");
  SaeParams p;
  p.m = m;
  p.n = n;
  p.w_enc = Matrix(m, n);
  p.b_enc.assign(m, 0.0);
  p.w_dec = Matrix(n, m);
  p.b_dec.assign(n, 0.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (double& w : p.w_enc.data) w = rng.uniform(-scale, scale);
  for (size_t j = 0; j < m; ++j) {
    double nrm = norm2(p.w_enc.row(j));
    while (nrm == 0.0) {  // vanishing row: redraw
      for (double& w : p.w_enc.row(j)) w = rng.uniform(-scale, scale);
      nrm = norm2(p.w_enc.row(j));
    }
    for (size_t i = 0; i < n; ++i) p.w_dec(i, j) = p.w_enc(j, i) / nrm;
  }
  return p;
}

inline void check_input_dim(const SaeParams& p, std::span<const double> x) {
  if (x.size() != p.n) throw ShapeError("input has length " + std::to_string(x.size()) + ", expected " + std::to_string(p.n));
}

inline std::vector<double> encode(const SaeParams& p, std::span<const double> x) {
  check_input_dim(p, x);
  std::vector<double> f(p.m);
  for (size_t j = 0; j < p.m; ++j) {
    const double z = dot(p.w_enc.row(j), x) + p.b_enc[j];
    f[j] = z > 0.0 ? z : 0.0;
  }
  return f;
}

inline std::vector<double> decode(const SaeParams& p, std::span<const double> f) {
  if (f.size() != p.m) throw ShapeError("code has length " + std::to_string(f.size()) + ", expected " + std::to_string(p.m));
  std::vector<double> xhat(p.b_dec.begin(), p.b_dec.end());
  for (size_t i = 0; i < p.n; ++i) {
    double acc = xhat[i];
    const auto wrow = p.w_dec.row(i);
    for (size_t j = 0; j < p.m; ++j) acc += wrow[j] * f[j];
    xhat[i] = acc;
  }
  return xhat;
}

inline LossBreakdown loss(const SaeParams& p, std::span<const double> x, double lambda) {
  if (lambda < 0.0) throw ConfigError("lambda must be nonnegative");
  if (!all_finite(x)) throw NumericError("loss: non-finite input");
  const std::vector<double> f = encode(p, x);
  const std::vector<double> xhat = decode(p, f);
  LossBreakdown lb;
  lb.recon = squared_distance(x, xhat);
  for (double v : f) lb.l1 += v;
  lb.total = lb.recon + lambda * lb.l1;
  return lb;
}

inline std::vector<LossBreakdown> per_example_losses(const SaeParams& p, const Matrix& batch, double lambda) {
  if (batch.cols != p.n) throw ShapeError("batch dimension mismatch");
  std::vector<LossBreakdown> out(batch.rows);
  for (size_t b = 0; b < batch.rows; ++b) out[b] = loss(p, batch.row(b), lambda);
  return out;
}

// Weighted batch gradient of the training loss: sum_b weights[b] * dL(x_b).
// Weights must be nonnegative and sum to 1 within 1e-9 (uniform 1/B under
// plain empirical risk). The relu subgradient at exactly 0 is taken as 0.
inline Gradients grad(const SaeParams& p, const Matrix& batch, double lambda,
                      std::span<const double> weights) {
  if (batch.cols != p.n) throw ShapeError("batch dimension mismatch");
  if (weights.size() != batch.rows) throw ShapeError("weights length must equal batch rows");
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw NumericError("grad: weights must be nonnegative and finite");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-9) throw NumericError("grad: weights must sum to 1 (got " + std::to_string(wsum) + ")");

  Gradients g = Gradients::zeros_like(p);
  std::vector<double> z(p.m), f(p.m), r(p.n), dz(p.m);
  for (size_t b = 0; b < batch.rows; ++b) {
    const double w = weights[b];
    if (w == 0.0) continue;
    const auto x = batch.row(b);
    for (size_t j = 0; j < p.m; ++j) {
      z[j] = dot(p.w_enc.row(j), x) + p.b_enc[j];
      f[j] = z[j] > 0.0 ? z[j] : 0.0;
    }
    // residual r = xhat - x
    for (size_t i = 0; i < p.n; ++i) {
      double acc = p.b_dec[i] - x[i];
      const auto wrow = p.w_dec.row(i);
      for (size_t j = 0; j < p.m; ++j) acc += wrow[j] * f[j];
      r[i] = acc;
    }
    // decoder side: dL/dw_dec = 2 r f^T, dL/db_dec = 2 r
    for (size_t i = 0; i < p.n; ++i) {
      const double two_r = 2.0 * r[i];
      g.b_dec[i] += w * two_r;
      auto grow = g.w_dec.row(i);
      for (size_t j = 0; j < p.m; ++j) grow[j] += w * two_r * f[j];
    }
    // encoder side through the relu: df_j = 2 (w_dec^T r)_j + lambda
    for (size_t j = 0; j < p.m; ++j) dz[j] = 0.0;
    for (size_t i = 0; i < p.n; ++i) {
      const double two_r = 2.0 * r[i];
      const auto wrow = p.w_dec.row(i);
      for (size_t j = 0; j < p.m; ++j) dz[j] += two_r * wrow[j];
    }
    for (size_t j = 0; j < p.m; ++j) {
      const double d = z[j] > 0.0 ? dz[j] + lambda : 0.0;
      if (d == 0.0) continue;
      g.b_enc[j] += w * d;
      auto grow = g.w_enc.row(j);
      for (size_t k = 0; k < p.n; ++k) grow[k] += w * d * x[k];
    }
  }
  if (!all_finite(g.w_enc.data) || !all_finite(g.b_enc) ||
      !all_finite(g.w_dec.data) || !all_finite(g.b_dec))
    throw NumericError("grad: non-finite gradient");
  return g;
}

inline std::vector<double> uniform_weights(size_t b) {
  return std::vector<double>(b, 1.0 / static_cast<double>(b));
}

// Removes the component of each decoder-column gradient parallel to that
// column, so optimizer steps move columns tangentially.
inline void project_decoder_gradient(const SaeParams& p, Gradients& g) {
  for (size_t j = 0; j < p.m; ++j) {
    double gd = 0.0, dd = 0.0;
    for (size_t i = 0; i < p.n; ++i) {
      gd += g.w_dec(i, j) * p.w_dec(i, j);
      dd += p.w_dec(i, j) * p.w_dec(i, j);
    }
    if (dd == 0.0) continue;
    const double c = gd / dd;
    for (size_t i = 0; i < p.n; ++i) g.w_dec(i, j) -= c * p.w_dec(i, j);
  }
}

// Rescales every decoder column to unit norm. A zero-norm column is
// reinitialized to a fresh seeded unit direction; its index is appended to
// reset_columns when provided.
inline void renormalize_decoder_columns(SaeParams& p, Rng& rng,
                                        std::vector<size_t>* reset_columns = nullptr) {
  for (size_t j = 0; j < p.m; ++j) {
    double nrm2 = 0.0;
    for (size_t i = 0; i < p.n; ++i) nrm2 += p.w_dec(i, j) * p.w_dec(i, j);
    double nrm = std::sqrt(nrm2);
    if (nrm < 1e-12) {
      do {
        nrm2 = 0.0;
        for (size_t i = 0; i < p.n; ++i) {
          p.w_dec(i, j) = rng.normal();
          nrm2 += p.w_dec(i, j) * p.w_dec(i, j);
        }
        nrm = std::sqrt(nrm2);
      } while (nrm < 1e-12);
      if (reset_columns) reset_columns->push_back(j);
    }
    for (size_t i = 0; i < p.n; ++i) p.w_dec(i, j) /= nrm;
  }
}

}  // namespace saekit
