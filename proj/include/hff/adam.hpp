#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hff/mlp.hpp"

namespace hff {

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Optimizer state: first/second moment accumulators shaped like the
/// parameters, plus the step counter used for bias correction.
struct AdamState {
  std::vector<Layer> m;
  std::vector<Layer> v;
  long long t = 0;
  AdamConfig cfg;
};

inline AdamState make_adam_state(const MlpParams& params, const AdamConfig& cfg = {}) {
  if (!(cfg.learning_rate > 0.0))
    throw std::invalid_argument("AdamState: learning rate must be positive");
  if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0 && cfg.beta2 >= 0.0 && cfg.beta2 < 1.0))
    throw std::invalid_argument("AdamState: betas must lie in [0,1)");
  if (!(cfg.epsilon > 0.0))
    throw std::invalid_argument("AdamState: epsilon must be positive");
  AdamState st;
  st.cfg = cfg;
  for (const Layer& layer : params.layers) {
    Layer zero;
    zero.w = Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols());
    zero.b = Eigen::VectorXd::Zero(layer.b.size());
    st.m.push_back(zero);
    st.v.push_back(std::move(zero));
  }
  return st;
}

/// One Adam update with bias correction:
///   m <- b1*m + (1-b1)*g;  v <- b2*v + (1-b2)*g^2;  t <- t+1
///   theta <- theta - lr * (m/(1-b1^t)) / (sqrt(v/(1-b2^t)) + eps)
inline void adam_step(AdamState& st, MlpParams& params,
                      const std::vector<Layer>& grads) {
  if (grads.size() != params.layers.size() || st.m.size() != params.layers.size())
    throw std::invalid_argument("adam_step: shape mismatch");
  for (const Layer& g : grads)
    if (!g.w.allFinite() || !g.b.allFinite())
      throw std::runtime_error("adam_step: non-finite gradient");

  st.t += 1;
  const double c1 = 1.0 - std::pow(st.cfg.beta1, static_cast<double>(st.t));
  const double c2 = 1.0 - std::pow(st.cfg.beta2, static_cast<double>(st.t));
  auto update = [&](auto& theta, auto& m, auto& v, const auto& g) {
    m = (st.cfg.beta1 * m.array() + (1.0 - st.cfg.beta1) * g.array()).matrix();
    v = (st.cfg.beta2 * v.array() + (1.0 - st.cfg.beta2) * g.array().square()).matrix();
    theta = (theta.array() -
             st.cfg.learning_rate * (m.array() / c1) /
                 ((v.array() / c2).sqrt() + st.cfg.epsilon))
                .matrix();
  };
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    update(params.layers[l].w, st.m[l].w, st.v[l].w, grads[l].w);
    update(params.layers[l].b, st.m[l].b, st.v[l].b, grads[l].b);
  }
}

}  // namespace hff
