#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hff {

inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

/// Row-major, channel-last grid of real intensities in [0,1].
/// The same container carries derived per-pixel grids (neighbor-difference
/// maps, soft masks) whose value ranges differ but whose layout is identical.
struct Image {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<double> data;

  Image() = default;

  Image(int h, int w, int c, double fill = 0.0)
      : height(h), width(w), channels(c),
        data(static_cast<std::size_t>(h) * static_cast<std::size_t>(w) *
                 static_cast<std::size_t>(c),
             fill) {
    if (h < 1 || w < 1 || (c != 1 && c != 3))
      throw std::invalid_argument("Image: dimensions must be positive and channels 1 or 3");
  }

  std::size_t index(int i, int j, int c) const {
    return (static_cast<std::size_t>(i) * width + j) * channels + c;
  }

  double& at(int i, int j, int c) { return data[index(i, j, c)]; }
  double at(int i, int j, int c) const { return data[index(i, j, c)]; }

  std::size_t size() const { return data.size(); }

  bool same_shape(const Image& o) const {
    return height == o.height && width == o.width && channels == o.channels;
  }
};

using DiffMap = Image;   // non-negative max-neighbor differences
using SoftMask = Image;  // sigmoid weights in (0,1)

/// BT.601 luma conversion. Single-channel input passes through unchanged.
inline Image to_grayscale(const Image& img) {
  if (img.channels == 1) return img;
  Image out(img.height, img.width, 1);
  for (int i = 0; i < img.height; ++i)
    for (int j = 0; j < img.width; ++j)
      out.at(i, j, 0) = clamp01(0.299 * img.at(i, j, 0) + 0.587 * img.at(i, j, 1) +
                                0.114 * img.at(i, j, 2));
  return out;
}

/// Bilinear resample with half-pixel-centered sample coordinates and edge
/// clamping. Resizing to the source dimensions reproduces the input exactly.
inline Image resize(const Image& img, int new_h, int new_w) {
  if (new_h < 1 || new_w < 1)
    throw std::invalid_argument("resize: target dimensions must be >= 1");
  Image out(new_h, new_w, img.channels);
  const double scale_y = static_cast<double>(img.height) / new_h;
  const double scale_x = static_cast<double>(img.width) / new_w;
  for (int i = 0; i < new_h; ++i) {
    double fy = std::clamp((i + 0.5) * scale_y - 0.5, 0.0, img.height - 1.0);
    int y0 = static_cast<int>(fy);
    int y1 = std::min(y0 + 1, img.height - 1);
    double ty = fy - y0;
    for (int j = 0; j < new_w; ++j) {
      double fx = std::clamp((j + 0.5) * scale_x - 0.5, 0.0, img.width - 1.0);
      int x0 = static_cast<int>(fx);
      int x1 = std::min(x0 + 1, img.width - 1);
      double tx = fx - x0;
      for (int c = 0; c < img.channels; ++c) {
        double top = (1.0 - tx) * img.at(y0, x0, c) + tx * img.at(y0, x1, c);
        double bot = (1.0 - tx) * img.at(y1, x0, c) + tx * img.at(y1, x1, c);
        out.at(i, j, c) = (1.0 - ty) * top + ty * bot;
      }
    }
  }
  return out;
}

}  // namespace hff
