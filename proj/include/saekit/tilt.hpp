#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "saekit/errors.hpp"

namespace saekit {

// Tilted risk aggregation. Tilts at or above hard_max_threshold are treated
// as the exact max-loss limit: exp(t * L) ties collapse numerically long
// before t reaches the 1e9 range used in practice, so the limit is computed
// directly instead.
struct TiltConfig {
  double t = 0.0;
  double hard_max_threshold = 1e6;

  void validate() const {
    if (!(t > 0.0)) throw ConfigError("tilt t must be positive");
    if (!(hard_max_threshold > 0.0)) throw ConfigError("hard_max_threshold must be positive");
  }
};

inline void check_losses_finite(std::span<const double> losses) {
  if (losses.empty()) throw ShapeError("losses must be nonempty");
  for (double l : losses)
    if (!std::isfinite(l)) throw NumericError("non-finite loss value");
}

// Gradient coefficients of the tilted objective: softmax(t * L), computed
// with max subtraction. In the hard-max regime, weight 1/|argmax| on each
// maximal loss (exact ties split uniformly) and 0 elsewhere.
inline std::vector<double> tilt_weights(std::span<const double> losses, const TiltConfig& tilt) {
  tilt.validate();
  check_losses_finite(losses);
  const double mx = *std::max_element(losses.begin(), losses.end());
  std::vector<double> w(losses.size());
  if (tilt.t >= tilt.hard_max_threshold) {
    size_t ties = 0;
    for (double l : losses) ties += (l == mx);
    for (size_t i = 0; i < losses.size(); ++i)
      w[i] = losses[i] == mx ? 1.0 / static_cast<double>(ties) : 0.0;
    return w;
  }
  double z = 0.0;
  for (size_t i = 0; i < losses.size(); ++i) {
    w[i] = std::exp(tilt.t * (losses[i] - mx));
    z += w[i];
  }
  for (double& wi : w) wi /= z;
  return w;
}

// (1/t) log((1/B) sum exp(t L_i)), evaluated as
//   max(L) + log1p(mean(expm1(t (L_i - max)))) / t
// which is exact for equal losses and stable for both tiny and large t.
inline double tilted_loss(std::span<const double> losses, const TiltConfig& tilt) {
  tilt.validate();
  check_losses_finite(losses);
  const double mx = *std::max_element(losses.begin(), losses.end());
  if (tilt.t >= tilt.hard_max_threshold) return mx;
  double s = 0.0;
  for (double l : losses) s += std::expm1(tilt.t * (l - mx));
  s /= static_cast<double>(losses.size());
  return mx + std::log1p(s) / tilt.t;
}

}  // namespace saekit
