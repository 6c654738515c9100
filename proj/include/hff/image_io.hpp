#pragma once

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hff/image.hpp"

namespace hff {

namespace detail {

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::FILE* fp = nullptr;
  ~PngReader() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (fp) std::fclose(fp);
  }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::FILE* fp = nullptr;
  ~PngWriter() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    if (fp) std::fclose(fp);
  }
};

inline Image load_png(const std::string& path) {
  PngReader r;
  r.fp = std::fopen(path.c_str(), "rb");
  if (!r.fp) throw std::runtime_error("load_image: cannot open " + path);
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  r.info = r.png ? png_create_info_struct(r.png) : nullptr;
  if (!r.png || !r.info) throw std::runtime_error("load_image: libpng init failed");
  if (setjmp(png_jmpbuf(r.png)))
    throw std::runtime_error("load_image: failed to decode PNG " + path);

  png_init_io(r.png, r.fp);
  png_read_info(r.png, r.info);

  const png_byte color_type = png_get_color_type(r.png, r.info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(r.png, r.info) < 8)
    png_set_expand_gray_1_2_4_to_8(r.png);
  if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png);
  png_set_strip_alpha(r.png);
  png_set_interlace_handling(r.png);
  png_read_update_info(r.png, r.info);

  const int h = static_cast<int>(png_get_image_height(r.png, r.info));
  const int w = static_cast<int>(png_get_image_width(r.png, r.info));
  const int channels = png_get_channels(r.png, r.info);
  const int bit_depth = png_get_bit_depth(r.png, r.info);
  if (channels != 1 && channels != 3)
    throw std::runtime_error("load_image: unsupported color model in " + path);
  if (bit_depth != 8 && bit_depth != 16)
    throw std::runtime_error("load_image: unsupported bit depth in " + path);

  const std::size_t rowbytes = png_get_rowbytes(r.png, r.info);
  std::vector<png_byte> rowdata(static_cast<std::size_t>(h) * rowbytes);
  std::vector<png_bytep> rows(h);
  for (int i = 0; i < h; ++i) rows[i] = rowdata.data() + i * rowbytes;
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);

  Image img(h, w, channels);
  if (bit_depth == 8) {
    for (std::size_t k = 0; k < img.size(); ++k)
      img.data[k] = rowdata[k] / 255.0;
  } else {
    // 16-bit samples are big-endian in the PNG stream.
    for (std::size_t k = 0; k < img.size(); ++k) {
      unsigned v = (static_cast<unsigned>(rowdata[2 * k]) << 8) | rowdata[2 * k + 1];
      img.data[k] = v / 65535.0;
    }
  }
  return img;
}

inline int pnm_next_int(std::istream& in, const std::string& path) {
  // Skips whitespace and '#' comments between header tokens.
  int ch = in.get();
  while (in) {
    if (ch == '#') {
      while (in && ch != '\n') ch = in.get();
    } else if (!std::isspace(ch)) {
      break;
    }
    ch = in.get();
  }
  if (!in || !std::isdigit(ch))
    throw std::runtime_error("load_image: malformed PNM header in " + path);
  long value = 0;
  while (in && std::isdigit(ch)) {
    value = value * 10 + (ch - '0');
    if (value > 1 << 30) throw std::runtime_error("load_image: PNM header overflow");
    ch = in.get();
  }
  if (in) in.unget();
  return static_cast<int>(value);
}

inline Image load_pnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_image: cannot open " + path);
  char magic[2];
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6'))
    throw std::runtime_error("load_image: not a binary PGM/PPM file: " + path);
  const int channels = magic[1] == '5' ? 1 : 3;
  const int w = pnm_next_int(in, path);
  const int h = pnm_next_int(in, path);
  const int maxval = pnm_next_int(in, path);
  if (w < 1 || h < 1 || maxval < 1 || maxval > 65535)
    throw std::runtime_error("load_image: unsupported PNM header in " + path);
  in.get();  // single whitespace byte before the raster

  Image img(h, w, channels);
  const bool wide = maxval > 255;
  std::vector<unsigned char> raw(img.size() * (wide ? 2 : 1));
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!in) throw std::runtime_error("load_image: truncated PNM raster in " + path);
  if (wide) {
    for (std::size_t k = 0; k < img.size(); ++k) {
      unsigned v = (static_cast<unsigned>(raw[2 * k]) << 8) | raw[2 * k + 1];
      img.data[k] = v / 65535.0;
    }
  } else {
    for (std::size_t k = 0; k < img.size(); ++k) img.data[k] = raw[k] / 255.0;
  }
  return img;
}

}  // namespace detail

/// Decodes a PNG or binary PGM/PPM file into a normalized Image. 8-bit
/// samples map to [0,1] by /255, 16-bit by /65535; alpha is dropped.
inline Image load_image(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw std::runtime_error("load_image: cannot open " + path);
  unsigned char sig[8] = {};
  probe.read(reinterpret_cast<char*>(sig), 8);
  probe.close();
  if (png_sig_cmp(sig, 0, 8) == 0) return detail::load_png(path);
  if (sig[0] == 'P' && (sig[1] == '5' || sig[1] == '6')) return detail::load_pnm(path);
  throw std::runtime_error("load_image: unsupported file format: " + path);
}

/// Writes an 8-bit PNG (grayscale or RGB). Values are clamped to [0,1] and
/// quantized by round(v*255), so a save/load round trip moves any in-range
/// element by at most 1/510.
inline void save_image(const Image& img, const std::string& path) {
  if (img.height < 1 || img.width < 1 || (img.channels != 1 && img.channels != 3) ||
      img.data.size() != img.size())
    throw std::invalid_argument("save_image: malformed image");

  detail::PngWriter w;
  w.fp = std::fopen(path.c_str(), "wb");
  if (!w.fp) throw std::runtime_error("save_image: cannot open " + path + " for writing");
  w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  w.info = w.png ? png_create_info_struct(w.png) : nullptr;
  if (!w.png || !w.info) throw std::runtime_error("save_image: libpng init failed");
  if (setjmp(png_jmpbuf(w.png)))
    throw std::runtime_error("save_image: failed to encode PNG " + path);

  png_init_io(w.png, w.fp);
  png_set_IHDR(w.png, w.info, img.width, img.height, 8,
               img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(w.png, w.info);

  std::vector<png_byte> bytes(img.size());
  for (std::size_t k = 0; k < img.size(); ++k)
    bytes[k] = static_cast<png_byte>(std::lround(clamp01(img.data[k]) * 255.0));
  std::vector<png_bytep> rows(img.height);
  const std::size_t rowbytes = static_cast<std::size_t>(img.width) * img.channels;
  for (int i = 0; i < img.height; ++i) rows[i] = bytes.data() + i * rowbytes;
  png_write_image(w.png, rows.data());
  png_write_end(w.png, nullptr);
}

}  // namespace hff
