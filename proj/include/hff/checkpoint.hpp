#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "hff/mlp.hpp"

namespace hff {

// Flat little-endian binary checkpoint:
//   char[8]  magic "HFFITCK1"
//   u32      layer count
//   per layer: u32 out_dim, u32 in_dim
//   u32      activation id (0 = sine, 1 = finer)
//   f64      omega0
//   per layer: f64 weights row-major, then f64 biases
inline constexpr char kCheckpointMagic[8] = {'H', 'F', 'F', 'I', 'T', 'C', 'K', '1'};

inline void save_checkpoint(const MlpParams& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  auto put_u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
  auto put_f64 = [&](double v) { out.write(reinterpret_cast<const char*>(&v), 8); };

  out.write(kCheckpointMagic, 8);
  put_u32(static_cast<std::uint32_t>(params.layers.size()));
  for (const Layer& layer : params.layers) {
    put_u32(static_cast<std::uint32_t>(layer.w.rows()));
    put_u32(static_cast<std::uint32_t>(layer.w.cols()));
  }
  put_u32(static_cast<std::uint32_t>(params.activation));
  put_f64(params.omega0);
  for (const Layer& layer : params.layers) {
    for (Eigen::Index r = 0; r < layer.w.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.w.cols(); ++c) put_f64(layer.w(r, c));
    for (Eigen::Index r = 0; r < layer.b.size(); ++r) put_f64(layer.b(r));
  }
  if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

inline MlpParams load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  auto get_u32 = [&] {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 4);
    return v;
  };
  auto get_f64 = [&] {
    double v = 0;
    in.read(reinterpret_cast<char*>(&v), 8);
    return v;
  };

  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kCheckpointMagic, 8) != 0)
    throw std::runtime_error("load_checkpoint: bad magic in " + path);
  const std::uint32_t count = get_u32();
  if (count == 0 || count > 1024)
    throw std::runtime_error("load_checkpoint: corrupt header in " + path);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> dims(count);
  for (auto& d : dims) {
    d.first = get_u32();
    d.second = get_u32();
  }
  const std::uint32_t act = get_u32();
  if (!in || act > 1)
    throw std::runtime_error("load_checkpoint: corrupt header in " + path);

  MlpParams params;
  params.activation = static_cast<Activation>(act);
  params.omega0 = get_f64();
  for (auto [rows, cols] : dims) {
    Layer layer;
    layer.w.resize(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r)
      for (std::uint32_t c = 0; c < cols; ++c) layer.w(r, c) = get_f64();
    layer.b.resize(rows);
    for (std::uint32_t r = 0; r < rows; ++r) layer.b(r) = get_f64();
    params.layers.push_back(std::move(layer));
  }
  if (!in) throw std::runtime_error("load_checkpoint: truncated file " + path);
  return params;
}

}  // namespace hff
