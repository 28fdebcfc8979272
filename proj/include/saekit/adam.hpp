#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include "saekit/sae.hpp"

namespace saekit {

struct AdamState {
  SaeTensors first_moment;
  SaeTensors second_moment;
  uint64_t step_count = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState init(const SaeParams& p) {
    AdamState s;
    s.first_moment = SaeTensors::zeros_like(p);
    s.second_moment = SaeTensors::zeros_like(p);
    return s;
  }
};

namespace detail {
inline void adam_update_array(std::span<double> x, std::span<const double> g,
                              std::span<double> m, std::span<double> v,
                              const AdamState& s, double lr) {
  const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step_count));
  const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step_count));
  for (size_t i = 0; i < x.size(); ++i) {
    m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * g[i];
    v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * g[i] * g[i];
    x[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + s.eps);
  }
}
}  // namespace detail

// Standard bias-corrected Adam update over all four parameter arrays.
inline void adam_step(SaeParams& p, AdamState& s, const Gradients& g, double lr) {
  if (!g.w_enc.same_shape(p.w_enc) || !g.w_dec.same_shape(p.w_dec) ||
      g.b_enc.size() != p.b_enc.size() || g.b_dec.size() != p.b_dec.size())
    throw ShapeError("adam_step: gradient shapes do not match parameters");
  s.step_count += 1;
  detail::adam_update_array(p.w_enc.data, g.w_enc.data, s.first_moment.w_enc.data,
                            s.second_moment.w_enc.data, s, lr);
  detail::adam_update_array(p.b_enc, g.b_enc, s.first_moment.b_enc,
                            s.second_moment.b_enc, s, lr);
  detail::adam_update_array(p.w_dec.data, g.w_dec.data, s.first_moment.w_dec.data,
                            s.second_moment.w_dec.data, s, lr);
  detail::adam_update_array(p.b_dec, g.b_dec, s.first_moment.b_dec,
                            s.second_moment.b_dec, s, lr);
}

}  // namespace saekit
