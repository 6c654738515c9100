// Test-only reference implementations. Each oracle recomputes its quantity by
// the most direct route available (explicit padded grids, per-window double
// loops, central differences) and stays independent of the library path it
// checks.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "hff/image.hpp"
#include "hff/mask.hpp"
#include "hff/mlp.hpp"

namespace oracle {

inline hff::Image random_image(int h, int w, int c, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  hff::Image img(h, w, c);
  for (double& v : img.data) v = uni(rng);
  return img;
}

// Builds the padded image as an explicit grid, then scans every offset.
inline hff::Image mask_oracle(const hff::Image& img, double tau, double alpha,
                              int n, hff::PadMode pad = hff::PadMode::Edge) {
  const int p = n == 12 ? 2 : 1;
  const int ph = img.height + 2 * p, pw = img.width + 2 * p;
  std::vector<double> padded(static_cast<std::size_t>(ph) * pw * img.channels);
  auto src_row = [&](int i) {
    if (i >= 0 && i < img.height) return i;
    if (pad == hff::PadMode::Edge) return i < 0 ? 0 : img.height - 1;
    return i < 0 ? -i - 1 : 2 * img.height - i - 1;
  };
  auto src_col = [&](int j) {
    if (j >= 0 && j < img.width) return j;
    if (pad == hff::PadMode::Edge) return j < 0 ? 0 : img.width - 1;
    return j < 0 ? -j - 1 : 2 * img.width - j - 1;
  };
  for (int i = -p; i < img.height + p; ++i)
    for (int j = -p; j < img.width + p; ++j)
      for (int c = 0; c < img.channels; ++c)
        padded[(static_cast<std::size_t>(i + p) * pw + (j + p)) * img.channels + c] =
            img.at(src_row(i), src_col(j), c);

  static constexpr std::pair<int, int> all[12] = {
      {-1, 0}, {1, 0},  {0, -1}, {0, 1},  {-1, -1}, {-1, 1},
      {1, -1}, {1, 1},  {-2, 0}, {2, 0},  {0, -2},  {0, 2}};
  std::vector<std::pair<int, int>> offsets(all, all + n);

  hff::Image mask(img.height, img.width, img.channels);
  for (int i = 0; i < img.height; ++i)
    for (int j = 0; j < img.width; ++j)
      for (int c = 0; c < img.channels; ++c) {
        double delta = 0.0;
        for (auto [di, dj] : offsets) {
          double nb = padded[(static_cast<std::size_t>(i + di + p) * pw + (j + dj + p)) *
                                 img.channels + c];
          delta = std::max(delta, std::fabs(nb - img.at(i, j, c)));
        }
        mask.at(i, j, c) = 1.0 / (1.0 + std::exp(-alpha * (delta - tau)));
      }
  return mask;
}

// Same scan without the sigmoid, for checking the difference map.
inline hff::Image diff_oracle(const hff::Image& img, int n,
                              hff::PadMode pad = hff::PadMode::Edge) {
  auto src = [&](int i, int size) {
    if (i >= 0 && i < size) return i;
    if (pad == hff::PadMode::Edge) return i < 0 ? 0 : size - 1;
    return i < 0 ? -i - 1 : 2 * size - i - 1;
  };
  static constexpr std::pair<int, int> all[12] = {
      {-1, 0}, {1, 0},  {0, -1}, {0, 1},  {-1, -1}, {-1, 1},
      {1, -1}, {1, 1},  {-2, 0}, {2, 0},  {0, -2},  {0, 2}};
  std::vector<std::pair<int, int>> offsets(all, all + n);
  hff::Image diff(img.height, img.width, img.channels);
  for (int i = 0; i < img.height; ++i)
    for (int j = 0; j < img.width; ++j)
      for (int c = 0; c < img.channels; ++c) {
        double delta = 0.0;
        for (auto [di, dj] : offsets)
          delta = std::max(delta, std::fabs(img.at(src(i + di, img.height),
                                                   src(j + dj, img.width), c) -
                                            img.at(i, j, c)));
        diff.at(i, j, c) = delta;
      }
  return diff;
}

// Scalar bilinear interpolation, one output pixel at a time.
inline hff::Image bilinear_oracle(const hff::Image& img, int nh, int nw) {
  hff::Image out(nh, nw, img.channels);
  for (int i = 0; i < nh; ++i)
    for (int j = 0; j < nw; ++j)
      for (int c = 0; c < img.channels; ++c) {
        double fy = (i + 0.5) * img.height / nh - 0.5;
        double fx = (j + 0.5) * img.width / nw - 0.5;
        fy = std::min(std::max(fy, 0.0), img.height - 1.0);
        fx = std::min(std::max(fx, 0.0), img.width - 1.0);
        int y0 = static_cast<int>(std::floor(fy));
        int x0 = static_cast<int>(std::floor(fx));
        int y1 = std::min(y0 + 1, img.height - 1);
        int x1 = std::min(x0 + 1, img.width - 1);
        double ty = fy - y0, tx = fx - x0;
        out.at(i, j, c) =
            (1 - ty) * ((1 - tx) * img.at(y0, x0, c) + tx * img.at(y0, x1, c)) +
            ty * ((1 - tx) * img.at(y1, x0, c) + tx * img.at(y1, x1, c));
      }
  return out;
}

// Naive windowed SSIM: for every pixel, loop the full 11x11 window with
// clamped indices and a directly normalized 2-D Gaussian.
inline double ssim_oracle(const hff::Image& p, const hff::Image& q,
                          int radius = 5, double sigma = 1.5, double k1 = 0.01,
                          double k2 = 0.03, double dynamic_range = 1.0) {
  const int win = 2 * radius + 1;
  std::vector<double> w(static_cast<std::size_t>(win) * win);
  double wsum = 0.0;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx) {
      double g = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      w[(dy + radius) * win + (dx + radius)] = g;
      wsum += g;
    }
  for (double& v : w) v /= wsum;

  const double c1 = (k1 * dynamic_range) * (k1 * dynamic_range);
  const double c2 = (k2 * dynamic_range) * (k2 * dynamic_range);
  auto clampi = [](int v, int hi) { return v < 0 ? 0 : (v > hi ? hi : v); };

  double total = 0.0;
  for (int c = 0; c < p.channels; ++c)
    for (int i = 0; i < p.height; ++i)
      for (int j = 0; j < p.width; ++j) {
        double mp = 0, mq = 0, spp = 0, sqq = 0, spq = 0;
        for (int dy = -radius; dy <= radius; ++dy)
          for (int dx = -radius; dx <= radius; ++dx) {
            double wk = w[(dy + radius) * win + (dx + radius)];
            double a = p.at(clampi(i + dy, p.height - 1), clampi(j + dx, p.width - 1), c);
            double b = q.at(clampi(i + dy, q.height - 1), clampi(j + dx, q.width - 1), c);
            mp += wk * a;
            mq += wk * b;
            spp += wk * a * a;
            sqq += wk * b * b;
            spq += wk * a * b;
          }
        double vp = spp - mp * mp;
        double vq = sqq - mq * mq;
        double cov = spq - mp * mq;
        total += ((2 * mp * mq + c1) * (2 * cov + c2)) /
                 ((mp * mp + mq * mq + c1) * (vp + vq + c2));
      }
  return total / (static_cast<double>(p.height) * p.width * p.channels);
}

// Central finite differences of the library loss over every parameter.
inline std::vector<hff::Layer> fd_gradients(const hff::MlpParams& params,
                                            const hff::CoordBatch& batch,
                                            bool weighted, double step = 1e-5) {
  hff::MlpParams probe = params;
  std::vector<hff::Layer> grads;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    hff::Layer g;
    g.w = Eigen::MatrixXd::Zero(params.layers[l].w.rows(), params.layers[l].w.cols());
    g.b = Eigen::VectorXd::Zero(params.layers[l].b.size());
    for (Eigen::Index r = 0; r < g.w.rows(); ++r)
      for (Eigen::Index c = 0; c < g.w.cols(); ++c) {
        double saved = probe.layers[l].w(r, c);
        probe.layers[l].w(r, c) = saved + step;
        double up = hff::loss_and_grad(probe, batch, weighted).loss;
        probe.layers[l].w(r, c) = saved - step;
        double dn = hff::loss_and_grad(probe, batch, weighted).loss;
        probe.layers[l].w(r, c) = saved;
        g.w(r, c) = (up - dn) / (2.0 * step);
      }
    for (Eigen::Index r = 0; r < g.b.size(); ++r) {
      double saved = probe.layers[l].b(r);
      probe.layers[l].b(r) = saved + step;
      double up = hff::loss_and_grad(probe, batch, weighted).loss;
      probe.layers[l].b(r) = saved - step;
      double dn = hff::loss_and_grad(probe, batch, weighted).loss;
      probe.layers[l].b(r) = saved;
      g.b(r) = (up - dn) / (2.0 * step);
    }
    grads.push_back(std::move(g));
  }
  return grads;
}

// Hand-stepped scalar Adam with textbook bias correction.
struct ScalarAdam {
  double m = 0, v = 0;
  long t = 0;
  double step(double theta, double g, double lr, double beta1 = 0.9,
              double beta2 = 0.999, double eps = 1e-8) {
    m = beta1 * m + (1 - beta1) * g;
    v = beta2 * v + (1 - beta2) * g * g;
    ++t;
    double mhat = m / (1 - std::pow(beta1, static_cast<double>(t)));
    double vhat = v / (1 - std::pow(beta2, static_cast<double>(t)));
    return theta - lr * mhat / (std::sqrt(vhat) + eps);
  }
};

}  // namespace oracle
