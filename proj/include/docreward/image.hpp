#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace docreward {

// Row-major 8-bit RGB.
class RasterImage {
 public:
  RasterImage(int width, int height, std::vector<std::uint8_t> pixels);
  RasterImage(int width, int height);  // black

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const std::uint8_t> pixels() const { return pixels_; }

  const std::uint8_t* at(int x, int y) const { return &pixels_[index(x, y)]; }
  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);

  // Copy of the width x height region whose top-left corner is (x0, y0).
  RasterImage crop(int x0, int y0, int width, int height) const;

  bool operator==(const RasterImage&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * 3;
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
};

// PNG (any libpng-readable layout) or binary PPM (P6, maxval 255).
// Throws ImageError.
RasterImage decode_image(std::span<const std::uint8_t> bytes);
RasterImage load_image(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_png(const RasterImage& img);

// Area-averaging resample: each output pixel is the coverage-weighted mean
// of the source pixels under it. Works for up- and downscaling.
RasterImage resize_box(const RasterImage& img, int width, int height);

// Same filter on luma (0.299 R + 0.587 G + 0.114 B); returns width*height
// values, row-major.
std::vector<double> resize_box_gray(const RasterImage& img, int width, int height);

// Tiles the image into rows x cols patches, left-to-right then
// top-to-bottom. Each patch is floor(W/cols) x floor(H/rows); the last
// column and last row absorb the remainder. Throws ContractError if the
// image is smaller than the grid.
std::vector<RasterImage> make_patches(const RasterImage& img, int rows, int cols);

}  // namespace docreward
