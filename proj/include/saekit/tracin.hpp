#pragma once

#include "saekit/matrix.hpp"
#include "saekit/sae.hpp"

namespace saekit {

inline double flattened_dot(const Gradients& a, const Gradients& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.w_enc.data.size(); ++i) s += a.w_enc.data[i] * b.w_enc.data[i];
  for (size_t i = 0; i < a.b_enc.size(); ++i) s += a.b_enc[i] * b.b_enc[i];
  for (size_t i = 0; i < a.w_dec.data.size(); ++i) s += a.w_dec.data[i] * b.w_dec.data[i];
  for (size_t i = 0; i < a.b_dec.size(); ++i) s += a.b_dec[i] * b.b_dec[i];
  return s;
}

// Influence of a candidate set on the seed set at fixed parameters: the dot
// product of the two mean flattened loss gradients.
inline double tracin_score(const SaeParams& params, const Matrix& candidate_rows,
                           const Matrix& seed_rows, double lambda) {
  if (candidate_rows.rows == 0 || seed_rows.rows == 0)
    throw ShapeError("tracin_score: empty row set");
  const Gradients gc = grad(params, candidate_rows, lambda, uniform_weights(candidate_rows.rows));
  const Gradients gs = grad(params, seed_rows, lambda, uniform_weights(seed_rows.rows));
  return flattened_dot(gc, gs);
}

}  // namespace saekit
