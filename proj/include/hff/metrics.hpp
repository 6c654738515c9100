#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hff/image.hpp"

namespace hff {

/// PSNR outcome. Infinite marks a zero-MSE comparison; Undefined marks a
/// region with no member pixels.
struct Psnr {
  enum class State { Finite, Infinite, Undefined };
  State state = State::Undefined;
  double db = 0.0;

  static Psnr finite(double v) { return {State::Finite, v}; }
  static Psnr infinite() { return {State::Infinite, 0.0}; }
  static Psnr undefined() { return {State::Undefined, 0.0}; }

  bool is_finite() const { return state == State::Finite; }
  bool is_infinite() const { return state == State::Infinite; }

  std::string str() const {
    if (state == State::Infinite) return "inf";
    if (state == State::Undefined) return "undef";
    std::ostringstream os;
    os.precision(10);
    os << db;
    return os.str();
  }
};

/// Mean squared error over all height*width*channels elements.
inline double mse(const Image& p, const Image& q) {
  if (!p.same_shape(q)) throw std::invalid_argument("mse: shape mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    double d = p.data[k] - q.data[k];
    acc += d * d;
  }
  return acc / static_cast<double>(p.size());
}

inline double psnr_db(double mse_value, double max_value) {
  return 10.0 * std::log10(max_value * max_value / mse_value);
}

inline Psnr psnr(const Image& p, const Image& q, double max_value = 1.0) {
  if (!(max_value > 0.0)) throw std::invalid_argument("psnr: max_value must be positive");
  double m = mse(p, q);
  if (m == 0.0) return Psnr::infinite();
  return Psnr::finite(psnr_db(m, max_value));
}

/// Single-scale SSIM configuration: 11x11 Gaussian window (sigma 1.5,
/// normalized to sum 1), K1=0.01, K2=0.03 on a unit dynamic range.
struct SsimConfig {
  int radius = 5;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;

  int window() const { return 2 * radius + 1; }
  double c1() const { return (k1 * dynamic_range) * (k1 * dynamic_range); }
  double c2() const { return (k2 * dynamic_range) * (k2 * dynamic_range); }
  double c3() const { return c2() / 2.0; }
};

namespace detail {

inline std::vector<double> gaussian_kernel(int radius, double sigma) {
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int d = -radius; d <= radius; ++d) {
    k[d + radius] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    sum += k[d + radius];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable Gaussian blur of one channel plane with edge-clamped sampling.
inline std::vector<double> gaussian_blur(const std::vector<double>& plane, int h,
                                         int w, const std::vector<double>& kernel) {
  const int radius = static_cast<int>(kernel.size()) / 2;
  std::vector<double> tmp(plane.size()), out(plane.size());
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) {
      double acc = 0.0;
      for (int d = -radius; d <= radius; ++d) {
        int jj = std::clamp(j + d, 0, w - 1);
        acc += kernel[d + radius] * plane[static_cast<std::size_t>(i) * w + jj];
      }
      tmp[static_cast<std::size_t>(i) * w + j] = acc;
    }
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) {
      double acc = 0.0;
      for (int d = -radius; d <= radius; ++d) {
        int ii = std::clamp(i + d, 0, h - 1);
        acc += kernel[d + radius] * tmp[static_cast<std::size_t>(ii) * w + j];
      }
      out[static_cast<std::size_t>(i) * w + j] = acc;
    }
  return out;
}

}  // namespace detail

/// Mean single-scale SSIM: Gaussian-weighted local statistics per channel
/// with edge-replicated windows, the usual C3 = C2/2 collapse, averaged over
/// every pixel and channel.
inline double ssim(const Image& p, const Image& q, const SsimConfig& cfg = {}) {
  if (!p.same_shape(q)) throw std::invalid_argument("ssim: shape mismatch");
  if (p.height < cfg.window() || p.width < cfg.window())
    throw std::invalid_argument("ssim: image smaller than the filter window");

  const auto kernel = detail::gaussian_kernel(cfg.radius, cfg.sigma);
  const double c1 = cfg.c1(), c2 = cfg.c2();
  const std::size_t hw = static_cast<std::size_t>(p.height) * p.width;

  double total = 0.0;
  std::vector<double> a(hw), b(hw), aa(hw), bb(hw), ab(hw);
  for (int c = 0; c < p.channels; ++c) {
    for (std::size_t k = 0; k < hw; ++k) {
      a[k] = p.data[k * p.channels + c];
      b[k] = q.data[k * p.channels + c];
      aa[k] = a[k] * a[k];
      bb[k] = b[k] * b[k];
      ab[k] = a[k] * b[k];
    }
    auto mu_a = detail::gaussian_blur(a, p.height, p.width, kernel);
    auto mu_b = detail::gaussian_blur(b, p.height, p.width, kernel);
    auto e_aa = detail::gaussian_blur(aa, p.height, p.width, kernel);
    auto e_bb = detail::gaussian_blur(bb, p.height, p.width, kernel);
    auto e_ab = detail::gaussian_blur(ab, p.height, p.width, kernel);
    for (std::size_t k = 0; k < hw; ++k) {
      double va = e_aa[k] - mu_a[k] * mu_a[k];
      double vb = e_bb[k] - mu_b[k] * mu_b[k];
      double cov = e_ab[k] - mu_a[k] * mu_b[k];
      total += ((2.0 * mu_a[k] * mu_b[k] + c1) * (2.0 * cov + c2)) /
               ((mu_a[k] * mu_a[k] + mu_b[k] * mu_b[k] + c1) * (va + vb + c2));
    }
  }
  return total / (static_cast<double>(hw) * p.channels);
}

/// PSNR split by mask value: elements at or above the threshold form the
/// high-frequency region, the rest the low-frequency region.
struct RegionReport {
  Psnr overall;
  Psnr hf;
  Psnr lf;
  std::int64_t hf_count = 0;
  std::int64_t lf_count = 0;
};

inline RegionReport region_psnr(const Image& p, const Image& q, const SoftMask& mask,
                                double threshold) {
  if (!p.same_shape(q) || !p.same_shape(mask))
    throw std::invalid_argument("region_psnr: shape mismatch");
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("region_psnr: threshold must lie in (0,1)");

  double sse_hf = 0.0, sse_lf = 0.0;
  std::int64_t n_hf = 0, n_lf = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    double d = p.data[k] - q.data[k];
    if (mask.data[k] >= threshold) {
      sse_hf += d * d;
      ++n_hf;
    } else {
      sse_lf += d * d;
      ++n_lf;
    }
  }
  auto region = [](double sse, std::int64_t n) {
    if (n == 0) return Psnr::undefined();
    if (sse == 0.0) return Psnr::infinite();
    return Psnr::finite(psnr_db(sse / static_cast<double>(n), 1.0));
  };
  RegionReport report;
  report.overall = psnr(p, q, 1.0);
  report.hf = region(sse_hf, n_hf);
  report.lf = region(sse_lf, n_lf);
  report.hf_count = n_hf;
  report.lf_count = n_lf;
  return report;
}

}  // namespace hff
