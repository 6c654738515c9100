#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hff/image.hpp"

namespace hff {

/// Out-of-bounds policy for neighbor lookups.
/// Edge duplicates the border row/column (pad(-1) = row 0, pad(-2) = row 0);
/// Mirror reflects about the border keeping the border sample
/// (pad(-1) = row 0, pad(-2) = row 1).
enum class PadMode { Edge, Mirror };

struct MaskConfig {
  double tau = 0.3;    // difference threshold
  double alpha = 50.0; // sigmoid sharpness
  int n = 8;           // neighborhood size: 4, 8, or 12
  PadMode pad = PadMode::Edge;

  void validate() const {
    if (!(tau > 0.0 && tau < 1.0))
      throw std::invalid_argument("MaskConfig: tau must lie in (0,1)");
    if (!(alpha > 0.0))
      throw std::invalid_argument("MaskConfig: alpha must be positive");
    if (n != 4 && n != 8 && n != 12)
      throw std::invalid_argument("MaskConfig: n must be 4, 8, or 12");
  }
};

/// Offset sets: n=4 the axial neighbors, n=8 adds diagonals, n=12 adds the
/// axial distance-2 neighbors.
inline std::vector<std::pair<int, int>> neighborhood_offsets(int n) {
  static constexpr std::pair<int, int> all[12] = {
      {-1, 0}, {1, 0},  {0, -1}, {0, 1},   // axial
      {-1, -1}, {-1, 1}, {1, -1}, {1, 1},  // diagonal
      {-2, 0}, {2, 0},  {0, -2}, {0, 2}};  // axial, distance 2
  if (n != 4 && n != 8 && n != 12)
    throw std::invalid_argument("neighborhood_offsets: n must be 4, 8, or 12");
  return {all, all + n};
}

/// Numerically stable logistic sigmoid.
inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

namespace detail {
inline int pad_index(int i, int size, PadMode pad) {
  if (i >= 0 && i < size) return i;
  if (pad == PadMode::Edge) return i < 0 ? 0 : size - 1;
  return i < 0 ? -i - 1 : 2 * size - i - 1;
}
}  // namespace detail

/// Per-pixel, per-channel maximum absolute difference against the chosen
/// neighborhood, with out-of-bounds neighbors resolved by `pad`.
inline DiffMap max_neighbor_diff(const Image& img, int n,
                                 PadMode pad = PadMode::Edge) {
  const auto offsets = neighborhood_offsets(n);
  const int required = n == 12 ? 2 : 1;
  if (img.height < required || img.width < required)
    throw std::invalid_argument("max_neighbor_diff: image smaller than pad width");
  DiffMap diff(img.height, img.width, img.channels);
  for (int i = 0; i < img.height; ++i) {
    for (int j = 0; j < img.width; ++j) {
      for (int c = 0; c < img.channels; ++c) {
        double best = 0.0;
        for (auto [di, dj] : offsets) {
          int ni = detail::pad_index(i + di, img.height, pad);
          int nj = detail::pad_index(j + dj, img.width, pad);
          best = std::max(best, std::fabs(img.at(ni, nj, c) - img.at(i, j, c)));
        }
        diff.at(i, j, c) = best;
      }
    }
  }
  return diff;
}

/// Element-wise shifted, scaled sigmoid: M = 1 / (1 + exp(-alpha*(d - tau))).
inline SoftMask soft_mask(const DiffMap& diff, double tau, double alpha) {
  if (!(tau > 0.0 && tau < 1.0))
    throw std::invalid_argument("soft_mask: tau must lie in (0,1)");
  if (!(alpha > 0.0))
    throw std::invalid_argument("soft_mask: alpha must be positive");
  SoftMask mask = diff;
  for (double& v : mask.data) v = sigmoid(alpha * (v - tau));
  return mask;
}

/// Neighbor-aware soft mask: sigmoid-thresholded max-neighbor differences.
inline SoftMask compute_mask(const Image& img, const MaskConfig& cfg) {
  cfg.validate();
  return soft_mask(max_neighbor_diff(img, cfg.n, cfg.pad), cfg.tau, cfg.alpha);
}

}  // namespace hff
