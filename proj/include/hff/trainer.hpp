#pragma once

#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "hff/adam.hpp"
#include "hff/image.hpp"
#include "hff/mask.hpp"
#include "hff/metrics.hpp"
#include "hff/mlp.hpp"

namespace hff {

struct TrainConfig {
  int stage1_epochs = 200;  // high-frequency weighted stage
  int stage2_epochs = 300;  // full-image MSE stage
  double learning_rate = 1e-4;
  int hidden_layers = 3;
  int width = 256;
  ActivationSpec activation;      // backbone, omega0, finer bias scale
  MaskConfig mask;                // tau=0.3, alpha=50, n=8
  std::uint64_t seed = 0;
  int eval_every = 50;            // epochs between history snapshots; <1 disables
  bool reset_adam_between_stages = false;
  double region_threshold = 0.5;  // HF/LF split for the final report
  bool log_progress = false;      // per-snapshot lines on stderr

  void validate() const {
    if (stage1_epochs < 0 || stage2_epochs < 0 || stage1_epochs + stage2_epochs < 1)
      throw std::invalid_argument("TrainConfig: total epochs must be >= 1");
    if (!(learning_rate > 0.0))
      throw std::invalid_argument("TrainConfig: learning rate must be positive");
    if (hidden_layers < 1 || width < 1)
      throw std::invalid_argument("TrainConfig: bad architecture");
    if (!(region_threshold > 0.0 && region_threshold < 1.0))
      throw std::invalid_argument("TrainConfig: region threshold must lie in (0,1)");
    mask.validate();
  }
};

struct Snapshot {
  int epoch = 0;          // global epoch index, 1-based across both stages
  std::string stage;      // "hf" or "full"
  double loss = 0.0;
  Psnr psnr;
  double ssim = std::numeric_limits<double>::quiet_NaN();
};

struct TrainResult {
  MlpParams params;
  Image reconstruction;
  Psnr psnr;
  double ssim = std::numeric_limits<double>::quiet_NaN();
  RegionReport regions;
  std::vector<Snapshot> history;
};

/// Row-major coordinate grid over [-1,1]^2. Pixel (i,j) maps to
/// x = 2j/(w-1) - 1 and y = 2i/(h-1) - 1; a degenerate dimension maps to 0.
inline Eigen::MatrixXd coord_grid(int h, int w) {
  if (h < 1 || w < 1) throw std::invalid_argument("coord_grid: dimensions must be >= 1");
  Eigen::MatrixXd grid(static_cast<Eigen::Index>(h) * w, 2);
  for (int i = 0; i < h; ++i) {
    double y = h == 1 ? 0.0 : 2.0 * i / (h - 1) - 1.0;
    for (int j = 0; j < w; ++j) {
      double x = w == 1 ? 0.0 : 2.0 * j / (w - 1) - 1.0;
      grid(static_cast<Eigen::Index>(i) * w + j, 0) = x;
      grid(static_cast<Eigen::Index>(i) * w + j, 1) = y;
    }
  }
  return grid;
}

/// Evaluates the network on the full coordinate grid and materializes an
/// Image, clamping to [0,1]. The representation is continuous, so any target
/// resolution is valid.
inline Image reconstruct(const MlpParams& params, int h, int w) {
  Eigen::MatrixXd pred = forward(params, coord_grid(h, w));
  Image img(h, w, params.out_dim());
  for (Eigen::Index i = 0; i < pred.rows(); ++i)
    for (Eigen::Index c = 0; c < pred.cols(); ++c)
      img.data[static_cast<std::size_t>(i) * params.out_dim() + c] =
          clamp01(pred(i, c));
  return img;
}

namespace detail {

inline double safe_ssim(const Image& a, const Image& b) {
  SsimConfig cfg;
  if (a.height < cfg.window() || a.width < cfg.window())
    return std::numeric_limits<double>::quiet_NaN();
  return ssim(a, b, cfg);
}

}  // namespace detail

/// Two-stage fit: stage 1 minimizes the mask-weighted loss over every pixel,
/// stage 2 the plain per-element MSE. The network, coordinate grid, and
/// optimizer state are shared across the boundary (the loss is the only
/// change); with stage1_epochs = 0 this is exactly baseline training and the
/// mask is never computed for the training loop.
inline TrainResult fit(const Image& img, const TrainConfig& cfg) {
  cfg.validate();
  const int n_pixels = img.height * img.width;
  const int channels = img.channels;

  CoordBatch batch;
  batch.coords = coord_grid(img.height, img.width);
  batch.targets.resize(n_pixels, channels);
  for (int k = 0; k < n_pixels; ++k)
    for (int c = 0; c < channels; ++c)
      batch.targets(k, c) = img.data[static_cast<std::size_t>(k) * channels + c];
  batch.weights = Eigen::MatrixXd::Ones(n_pixels, channels);

  SoftMask train_mask;
  if (cfg.stage1_epochs > 0) {
    train_mask = compute_mask(img, cfg.mask);
    double peak = 0.0;
    for (double v : train_mask.data) peak = std::max(peak, v);
    if (peak < 1e-12)
      throw std::runtime_error(
          "fit: degenerate mask, every weight is below 1e-12; "
          "lower alpha or tau before stage 1 can run");
    for (int k = 0; k < n_pixels; ++k)
      for (int c = 0; c < channels; ++c)
        batch.weights(k, c) = train_mask.data[static_cast<std::size_t>(k) * channels + c];
  }

  MlpParams params = init_mlp(cfg.hidden_layers, cfg.width, channels,
                              cfg.activation, cfg.seed);
  AdamState adam = make_adam_state(params, {.learning_rate = cfg.learning_rate});

  TrainResult result;
  const int total = cfg.stage1_epochs + cfg.stage2_epochs;
  auto snapshot = [&](int epoch, const char* stage, double loss) {
    Snapshot s;
    s.epoch = epoch;
    s.stage = stage;
    s.loss = loss;
    Image recon = reconstruct(params, img.height, img.width);
    s.psnr = psnr(img, recon);
    s.ssim = detail::safe_ssim(img, recon);
    if (cfg.log_progress)
      std::cerr << "epoch=" << epoch << " stage=" << stage << " loss=" << loss
                << " psnr=" << s.psnr.str() << "\n";
    result.history.push_back(std::move(s));
  };

  for (int epoch = 1; epoch <= total; ++epoch) {
    const bool hf_stage = epoch <= cfg.stage1_epochs;
    if (!hf_stage && epoch == cfg.stage1_epochs + 1 && cfg.reset_adam_between_stages)
      adam = make_adam_state(params, {.learning_rate = cfg.learning_rate});
    LossGrad lg = loss_and_grad(params, batch, hf_stage);
    adam_step(adam, params, lg.grads);
    const bool due = cfg.eval_every >= 1 && epoch % cfg.eval_every == 0;
    if (due || epoch == total) snapshot(epoch, hf_stage ? "hf" : "full", lg.loss);
  }

  result.params = std::move(params);
  result.reconstruction = reconstruct(result.params, img.height, img.width);
  result.psnr = psnr(img, result.reconstruction);
  result.ssim = detail::safe_ssim(img, result.reconstruction);
  // The region report always uses an image-derived mask so baseline runs get
  // the same HF/LF split as their weighted twins.
  SoftMask eval_mask =
      cfg.stage1_epochs > 0 ? train_mask : compute_mask(img, cfg.mask);
  result.regions =
      region_psnr(img, result.reconstruction, eval_mask, cfg.region_threshold);
  return result;
}

}  // namespace hff
