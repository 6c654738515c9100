#include "hff/image.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "hff/image_io.hpp"
#include "oracles.hpp"

using hff::Image;

namespace {

// Reference PNG streams produced by an independent encoder (Pillow), frozen
// here so the decoder is checked against bytes it did not write itself.

// 1x1 gray, sample 255
inline constexpr unsigned char kPng1x1White[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49,
    0x48, 0x44, 0x52, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x08, 0x00,
    0x00, 0x00, 0x00, 0x3a, 0x7e, 0x9b, 0x55, 0x00, 0x00, 0x00, 0x0a, 0x49, 0x44,
    0x41, 0x54, 0x78, 0x9c, 0x63, 0xf8, 0x0f, 0x00, 0x01, 0x01, 0x01, 0x00, 0xb1,
    0x38, 0xf6, 0x14, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42,
    0x60, 0x82};

// 1x1 gray, sample 0
inline constexpr unsigned char kPng1x1Black[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49,
    0x48, 0x44, 0x52, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x08, 0x00,
    0x00, 0x00, 0x00, 0x3a, 0x7e, 0x9b, 0x55, 0x00, 0x00, 0x00, 0x0a, 0x49, 0x44,
    0x41, 0x54, 0x78, 0x9c, 0x63, 0x60, 0x00, 0x00, 0x00, 0x02, 0x00, 0x01, 0x48,
    0xaf, 0xa4, 0x71, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42,
    0x60, 0x82};

// 2x2 RGB, row-major bytes 10..220
inline constexpr unsigned char kPng2x2Rgb[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49,
    0x48, 0x44, 0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x02, 0x08, 0x02,
    0x00, 0x00, 0x00, 0xfd, 0xd4, 0x9a, 0x73, 0x00, 0x00, 0x00, 0x16, 0x49, 0x44,
    0x41, 0x54, 0x78, 0x9c, 0x63, 0xe4, 0x12, 0x91, 0x93, 0x93, 0x93, 0x63, 0x70,
    0x0b, 0x88, 0x3a, 0x71, 0xe9, 0x0e, 0x00, 0x0f, 0x76, 0x03, 0xfe, 0xe1, 0xa8,
    0x9d, 0x99, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60,
    0x82};
inline constexpr unsigned char kPng2x2RgbBytes[12] = {10, 20,  30,  40,  50,  60,
                                                      70, 80,  90,  200, 210, 220};

// 2x2 RGBA; the alpha plane must be dropped on load
inline constexpr unsigned char kPng2x2Rgba[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49,
    0x48, 0x44, 0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x02, 0x08, 0x06,
    0x00, 0x00, 0x00, 0x72, 0xb6, 0x0d, 0x24, 0x00, 0x00, 0x00, 0x1a, 0x49, 0x44,
    0x41, 0x54, 0x78, 0x9c, 0x63, 0x60, 0x64, 0x62, 0x6e, 0x60, 0x61, 0x65, 0xfb,
    0xcf, 0xc8, 0xce, 0xc1, 0xc9, 0xc0, 0xcc, 0xcc, 0xec, 0x00, 0x00, 0x13, 0x22,
    0x01, 0xf7, 0x14, 0x8a, 0x98, 0x49, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e,
    0x44, 0xae, 0x42, 0x60, 0x82};
inline constexpr unsigned char kPng2x2RgbaRgbBytes[12] = {1, 2, 3, 4,  5,  6,
                                                          7, 8, 9, 10, 11, 12};

// 2x1 16-bit grayscale, samples 0 and 65535
inline constexpr unsigned char kPng2x1Gray16[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49,
    0x48, 0x44, 0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x01, 0x10, 0x00,
    0x00, 0x00, 0x00, 0x81, 0xd9, 0xfc, 0x15, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x44,
    0x41, 0x54, 0x78, 0x9c, 0x63, 0x60, 0x60, 0xf8, 0xff, 0x1f, 0x00, 0x03, 0x02,
    0x01, 0xff, 0xe6, 0x77, 0x0b, 0xae, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e,
    0x44, 0xae, 0x42, 0x60, 0x82};

std::filesystem::path write_temp(const char* name, const unsigned char* bytes,
                                 std::size_t len) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes), static_cast<std::streamsize>(len));
  return path;
}

}  // namespace

TEST(LoadImage, OneByOneEndpoints) {
  auto white = write_temp("hff_white.png", kPng1x1White, sizeof kPng1x1White);
  auto black = write_temp("hff_black.png", kPng1x1Black, sizeof kPng1x1Black);
  Image w = hff::load_image(white.string());
  EXPECT_EQ(w.height, 1);
  EXPECT_EQ(w.width, 1);
  EXPECT_EQ(w.channels, 1);
  EXPECT_DOUBLE_EQ(w.data[0], 1.0);
  Image b = hff::load_image(black.string());
  EXPECT_DOUBLE_EQ(b.data[0], 0.0);
  std::filesystem::remove(white);
  std::filesystem::remove(black);
}

TEST(LoadImage, RgbBytesMatchReferenceDecoder) {
  auto path = write_temp("hff_rgb.png", kPng2x2Rgb, sizeof kPng2x2Rgb);
  Image img = hff::load_image(path.string());
  EXPECT_EQ(img.height, 2);
  EXPECT_EQ(img.width, 2);
  EXPECT_EQ(img.channels, 3);
  for (int k = 0; k < 12; ++k)
    EXPECT_DOUBLE_EQ(img.data[k], kPng2x2RgbBytes[k] / 255.0) << "k=" << k;
  std::filesystem::remove(path);
}

TEST(LoadImage, AlphaChannelDropped) {
  auto path = write_temp("hff_rgba.png", kPng2x2Rgba, sizeof kPng2x2Rgba);
  Image img = hff::load_image(path.string());
  EXPECT_EQ(img.channels, 3);
  for (int k = 0; k < 12; ++k)
    EXPECT_DOUBLE_EQ(img.data[k], kPng2x2RgbaRgbBytes[k] / 255.0);
  std::filesystem::remove(path);
}

TEST(LoadImage, SixteenBitNormalizedBy65535) {
  auto path = write_temp("hff_gray16.png", kPng2x1Gray16, sizeof kPng2x1Gray16);
  Image img = hff::load_image(path.string());
  EXPECT_EQ(img.height, 1);
  EXPECT_EQ(img.width, 2);
  EXPECT_EQ(img.channels, 1);
  EXPECT_DOUBLE_EQ(img.data[0], 0.0);
  EXPECT_DOUBLE_EQ(img.data[1], 1.0);
  std::filesystem::remove(path);
}

TEST(LoadImage, BinaryPgmAndPpm) {
  // P5 2x2 maxval 255 with a comment line
  const char pgm[] = "P5\n# test\n2 2\n255\n";
  auto pgm_path = std::filesystem::temp_directory_path() / "hff_test.pgm";
  {
    std::ofstream out(pgm_path, std::ios::binary);
    out.write(pgm, sizeof pgm - 1);
    unsigned char raster[4] = {0, 51, 102, 255};
    out.write(reinterpret_cast<char*>(raster), 4);
  }
  Image g = hff::load_image(pgm_path.string());
  EXPECT_EQ(g.channels, 1);
  EXPECT_DOUBLE_EQ(g.data[0], 0.0);
  EXPECT_DOUBLE_EQ(g.data[1], 51 / 255.0);
  EXPECT_DOUBLE_EQ(g.data[2], 102 / 255.0);
  EXPECT_DOUBLE_EQ(g.data[3], 1.0);

  // P6 1x1 maxval 65535: 16-bit big-endian samples
  auto ppm_path = std::filesystem::temp_directory_path() / "hff_test.ppm";
  {
    std::ofstream out(ppm_path, std::ios::binary);
    out << "P6 1 1 65535\n";
    unsigned char raster[6] = {0xff, 0xff, 0x00, 0x00, 0x80, 0x00};
    out.write(reinterpret_cast<char*>(raster), 6);
  }
  Image c = hff::load_image(ppm_path.string());
  EXPECT_EQ(c.channels, 3);
  EXPECT_DOUBLE_EQ(c.data[0], 1.0);
  EXPECT_DOUBLE_EQ(c.data[1], 0.0);
  EXPECT_DOUBLE_EQ(c.data[2], 0x8000 / 65535.0);
  std::filesystem::remove(pgm_path);
  std::filesystem::remove(ppm_path);
}

TEST(LoadImage, TruncatedPngFailsCleanly) {
  // Valid signature and header, raster stream cut short.
  auto path = write_temp("hff_trunc.png", kPng2x2Rgb, sizeof kPng2x2Rgb - 30);
  EXPECT_THROW(hff::load_image(path.string()), std::runtime_error);
  std::filesystem::remove(path);
}

TEST(LoadImage, RejectsMissingAndUnsupportedFiles) {
  EXPECT_THROW(hff::load_image("/nonexistent/nope.png"), std::runtime_error);
  auto path = std::filesystem::temp_directory_path() / "hff_not_an_image.txt";
  {
    std::ofstream out(path);
    out << "plain text, not pixels";
  }
  EXPECT_THROW(hff::load_image(path.string()), std::runtime_error);
  // ASCII PGM is out of contract
  auto ascii = std::filesystem::temp_directory_path() / "hff_ascii.pgm";
  {
    std::ofstream out(ascii);
    out << "P2\n1 1\n255\n128\n";
  }
  EXPECT_THROW(hff::load_image(ascii.string()), std::runtime_error);
  std::filesystem::remove(path);
  std::filesystem::remove(ascii);
}

TEST(SaveImage, AllOnesEncodeTo255) {
  Image img(2, 3, 1, 1.0);
  auto path = std::filesystem::temp_directory_path() / "hff_ones.png";
  hff::save_image(img, path.string());
  Image back = hff::load_image(path.string());
  for (double v : back.data) EXPECT_DOUBLE_EQ(v, 1.0);
  std::filesystem::remove(path);
}

TEST(SaveImage, QuantizationGridRoundTripsExactly) {
  Image img(1, 8, 3);
  std::mt19937 rng(4);
  for (double& v : img.data) v = (rng() % 256) / 255.0;
  auto path = std::filesystem::temp_directory_path() / "hff_grid.png";
  hff::save_image(img, path.string());
  Image back = hff::load_image(path.string());
  for (std::size_t k = 0; k < img.size(); ++k) EXPECT_DOUBLE_EQ(back.data[k], img.data[k]);
  std::filesystem::remove(path);
}

TEST(SaveImage, RoundTripErrorBound) {
  Image img = oracle::random_image(13, 9, 3, 77);
  auto path = std::filesystem::temp_directory_path() / "hff_rt.png";
  hff::save_image(img, path.string());
  Image back = hff::load_image(path.string());
  double worst = 0.0;
  for (std::size_t k = 0; k < img.size(); ++k)
    worst = std::max(worst, std::fabs(back.data[k] - img.data[k]));
  EXPECT_LE(worst, 1.0 / 510.0 + 1e-15);
  std::filesystem::remove(path);
}

TEST(SaveImage, OutOfRangeValuesClamp) {
  Image img(1, 2, 1);
  img.data = {-0.75, 1.25};
  auto path = std::filesystem::temp_directory_path() / "hff_clamp.png";
  hff::save_image(img, path.string());
  Image back = hff::load_image(path.string());
  EXPECT_DOUBLE_EQ(back.data[0], 0.0);
  EXPECT_DOUBLE_EQ(back.data[1], 1.0);
  std::filesystem::remove(path);
}

TEST(SaveImage, UnwritablePathFails) {
  Image img(1, 1, 1, 0.5);
  EXPECT_THROW(hff::save_image(img, "/nonexistent_dir/deep/img.png"), std::runtime_error);
}

TEST(ToGrayscale, AnchorsAndOracle) {
  Image white(1, 1, 3, 1.0);
  EXPECT_DOUBLE_EQ(hff::to_grayscale(white).data[0], 1.0);

  Image red(1, 1, 3);
  red.data = {1.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(hff::to_grayscale(red).data[0], 0.299);

  Image img = oracle::random_image(6, 5, 3, 42);
  Image gray = hff::to_grayscale(img);
  ASSERT_EQ(gray.channels, 1);
  for (int i = 0; i < img.height; ++i)
    for (int j = 0; j < img.width; ++j) {
      double want = hff::clamp01(0.299 * img.at(i, j, 0) + 0.587 * img.at(i, j, 1) +
                                 0.114 * img.at(i, j, 2));
      ASSERT_DOUBLE_EQ(gray.at(i, j, 0), want);
    }
}

TEST(ToGrayscale, SingleChannelPassesThrough) {
  Image img = oracle::random_image(4, 4, 1, 2);
  Image out = hff::to_grayscale(img);
  EXPECT_EQ(out.channels, 1);
  for (std::size_t k = 0; k < img.size(); ++k) EXPECT_EQ(out.data[k], img.data[k]);
}

TEST(Resize, IdentityAtSameDimensions) {
  Image img = oracle::random_image(7, 9, 3, 11);
  Image out = hff::resize(img, 7, 9);
  for (std::size_t k = 0; k < img.size(); ++k) ASSERT_EQ(out.data[k], img.data[k]);
}

TEST(Resize, TwoByTwoAverageToSinglePixel) {
  Image img(2, 2, 1);
  img.data = {0.0, 1.0, 0.0, 1.0};
  Image out = hff::resize(img, 1, 1);
  EXPECT_DOUBLE_EQ(out.data[0], 0.5);
}

TEST(Resize, RampDownsampleMatchesScalarOracle) {
  Image img(4, 4, 1);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) img.at(i, j, 0) = (4 * i + j) / 15.0;
  Image got = hff::resize(img, 2, 2);
  Image want = oracle::bilinear_oracle(img, 2, 2);
  for (std::size_t k = 0; k < got.size(); ++k) ASSERT_NEAR(got.data[k], want.data[k], 1e-12);
}

TEST(Resize, UpsampleStaysInRangeAndMatchesOracle) {
  Image img = oracle::random_image(5, 3, 3, 23);
  Image got = hff::resize(img, 11, 8);
  Image want = oracle::bilinear_oracle(img, 11, 8);
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t k = 0; k < got.size(); ++k) {
    ASSERT_NEAR(got.data[k], want.data[k], 1e-12);
    ASSERT_GE(got.data[k], 0.0);
    ASSERT_LE(got.data[k], 1.0);
  }
}

TEST(Resize, RejectsBadTargets) {
  Image img(2, 2, 1, 0.5);
  EXPECT_THROW(hff::resize(img, 0, 2), std::invalid_argument);
  EXPECT_THROW(hff::resize(img, 2, -1), std::invalid_argument);
}
