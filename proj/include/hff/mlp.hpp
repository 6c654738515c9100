#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hff {

/// Hidden-layer nonlinearity. Sine is sin(w0*z); Finer is the
/// variable-periodic sin(w0*(|z|+1)*z), which widens the representable
/// frequency band.
enum class Activation : std::uint32_t { Sine = 0, Finer = 1 };

inline std::string to_string(Activation a) {
  return a == Activation::Sine ? "siren" : "finer";
}

inline Activation activation_from_string(const std::string& s) {
  if (s == "siren" || s == "sine") return Activation::Sine;
  if (s == "finer") return Activation::Finer;
  throw std::invalid_argument("unknown backbone: " + s);
}

struct ActivationSpec {
  Activation kind = Activation::Sine;
  double omega0 = 30.0;
  double finer_bias_scale = 1.0;  // bias init half-range, Finer only
};

struct Layer {
  Eigen::MatrixXd w;  // out_dim x in_dim
  Eigen::VectorXd b;  // out_dim
};

/// Coordinate MLP parameters. layers.back() is the affine output layer and
/// carries no activation; every earlier layer is followed by the configured
/// sine-family activation.
struct MlpParams {
  std::vector<Layer> layers;
  Activation activation = Activation::Sine;
  double omega0 = 30.0;

  int in_dim() const { return static_cast<int>(layers.front().w.cols()); }
  int out_dim() const { return static_cast<int>(layers.back().w.rows()); }
};

/// One full-batch training view of an image: pixel coordinates in [-1,1]^2,
/// per-pixel channel targets in [0,1], and per-element loss weights.
struct CoordBatch {
  Eigen::MatrixXd coords;   // N x 2, rows are (x, y)
  Eigen::MatrixXd targets;  // N x C
  Eigen::MatrixXd weights;  // N x C, all ones for unweighted training
};

/// SIREN-scheme initialization: first layer uniform on [-1/in_dim, 1/in_dim],
/// deeper layers uniform on +/- sqrt(6/fan_in)/w0. Biases are zero except for
/// Finer nets, whose sine-layer biases draw from +/- finer_bias_scale.
inline MlpParams init_mlp(int hidden_layers, int width, int out_channels,
                          const ActivationSpec& act, std::uint64_t seed) {
  if (hidden_layers < 1) throw std::invalid_argument("init_mlp: hidden_layers must be >= 1");
  if (width < 1) throw std::invalid_argument("init_mlp: width must be >= 1");
  if (out_channels != 1 && out_channels != 3)
    throw std::invalid_argument("init_mlp: out_channels must be 1 or 3");
  if (!(act.omega0 > 0.0)) throw std::invalid_argument("init_mlp: omega0 must be positive");

  const int in_dim = 2;
  std::vector<int> dims;
  dims.push_back(in_dim);
  for (int l = 0; l < hidden_layers; ++l) dims.push_back(width);
  dims.push_back(out_channels);

  std::mt19937_64 rng(seed);
  MlpParams params;
  params.activation = act.kind;
  params.omega0 = act.omega0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const int fan_in = dims[l];
    const int fan_out = dims[l + 1];
    const double bound =
        l == 0 ? 1.0 / fan_in : std::sqrt(6.0 / fan_in) / act.omega0;
    std::uniform_real_distribution<double> uw(-bound, bound);
    Layer layer;
    layer.w.resize(fan_out, fan_in);
    for (Eigen::Index r = 0; r < layer.w.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.w.cols(); ++c) layer.w(r, c) = uw(rng);
    layer.b = Eigen::VectorXd::Zero(fan_out);
    const bool is_output = l + 2 == dims.size();
    if (act.kind == Activation::Finer && !is_output) {
      std::uniform_real_distribution<double> ub(-act.finer_bias_scale,
                                                act.finer_bias_scale);
      for (Eigen::Index r = 0; r < layer.b.size(); ++r) layer.b(r) = ub(rng);
    }
    params.layers.push_back(std::move(layer));
  }
  return params;
}

namespace detail {

inline Eigen::ArrayXXd activate(const Eigen::ArrayXXd& z, Activation act, double w0) {
  if (act == Activation::Sine) return (w0 * z).sin();
  return (w0 * (z.abs() + 1.0) * z).sin();
}

inline Eigen::ArrayXXd activate_grad(const Eigen::ArrayXXd& z, Activation act, double w0) {
  if (act == Activation::Sine) return w0 * (w0 * z).cos();
  return w0 * (2.0 * z.abs() + 1.0) * (w0 * (z.abs() + 1.0) * z).cos();
}

}  // namespace detail

/// Batched forward pass; returns the unclamped N x out_dim predictions.
inline Eigen::MatrixXd forward(const MlpParams& params, const Eigen::MatrixXd& coords) {
  if (coords.cols() != params.in_dim())
    throw std::invalid_argument("forward: coordinate dimension mismatch");
  Eigen::MatrixXd h = coords;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const Layer& layer = params.layers[l];
    if (h.cols() != layer.w.cols())
      throw std::invalid_argument("forward: layer dimension mismatch");
    Eigen::MatrixXd z = (h * layer.w.transpose()).rowwise() + layer.b.transpose();
    if (l + 1 < params.layers.size())
      h = detail::activate(z.array(), params.activation, params.omega0).matrix();
    else
      h = std::move(z);
  }
  return h;
}

struct LossGrad {
  double loss = 0.0;
  std::vector<Layer> grads;  // shaped like MlpParams::layers
};

/// Loss and exact reverse-mode gradients.
///
/// Unweighted: mean of squared residuals over all N*C elements. Weighted:
/// sum(w .* r.^2) / sum(w), the mask-normalized form; with w identically 1
/// the two losses and their gradients coincide, and rescaling all weights by
/// a positive constant changes nothing.
inline LossGrad loss_and_grad(const MlpParams& params, const CoordBatch& batch,
                              bool weighted) {
  const Eigen::Index n = batch.coords.rows();
  if (n == 0) throw std::invalid_argument("loss_and_grad: empty batch");
  if (batch.targets.rows() != n ||
      (weighted && batch.weights.rows() != n))
    throw std::invalid_argument("loss_and_grad: batch size mismatch");
  if (batch.targets.cols() != params.out_dim())
    throw std::invalid_argument("loss_and_grad: target channel mismatch");

  const std::size_t depth = params.layers.size();
  std::vector<Eigen::MatrixXd> inputs(depth);   // input to each layer
  std::vector<Eigen::MatrixXd> preacts(depth);  // z = x*W^T + b
  Eigen::MatrixXd h = batch.coords;
  for (std::size_t l = 0; l < depth; ++l) {
    const Layer& layer = params.layers[l];
    if (h.cols() != layer.w.cols())
      throw std::invalid_argument("loss_and_grad: layer dimension mismatch");
    inputs[l] = h;
    preacts[l] = (h * layer.w.transpose()).rowwise() + layer.b.transpose();
    if (l + 1 < depth)
      h = detail::activate(preacts[l].array(), params.activation, params.omega0).matrix();
  }
  const Eigen::MatrixXd& pred = preacts.back();

  Eigen::MatrixXd residual = pred - batch.targets;
  LossGrad out;
  Eigen::MatrixXd dpred;
  if (weighted) {
    if (batch.weights.cols() != batch.targets.cols())
      throw std::invalid_argument("loss_and_grad: weight channel mismatch");
    const double wsum = batch.weights.sum();
    if (!(wsum > 0.0) || !std::isfinite(wsum))
      throw std::invalid_argument("loss_and_grad: weight sum must be positive");
    out.loss = (batch.weights.array() * residual.array().square()).sum() / wsum;
    dpred = (2.0 / wsum) * (batch.weights.array() * residual.array()).matrix();
  } else {
    const double count = static_cast<double>(n) * params.out_dim();
    out.loss = residual.array().square().sum() / count;
    dpred = (2.0 / count) * residual;
  }

  out.grads.resize(depth);
  Eigen::MatrixXd delta = std::move(dpred);  // dL/dz for the current layer
  for (std::size_t l = depth; l-- > 0;) {
    out.grads[l].w = delta.transpose() * inputs[l];
    out.grads[l].b = delta.colwise().sum();
    if (l > 0) {
      Eigen::MatrixXd dh = delta * params.layers[l].w;
      delta = (dh.array() *
               detail::activate_grad(preacts[l - 1].array(), params.activation,
                                     params.omega0))
                  .matrix();
    }
  }
  return out;
}

}  // namespace hff
