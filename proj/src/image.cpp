#include "docreward/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "docreward/errors.hpp"

namespace docreward {

RasterImage::RasterImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width <= 0 || height <= 0) throw ContractError("image dimensions must be positive");
  if (pixels_.size() != 3 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw ContractError("pixel buffer length must be 3*width*height");
}

RasterImage::RasterImage(int width, int height)
    : RasterImage(width, height,
                  std::vector<std::uint8_t>(3 * static_cast<std::size_t>(std::max(width, 0)) *
                                            static_cast<std::size_t>(std::max(height, 0)))) {}

void RasterImage::set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  std::uint8_t* p = &pixels_[index(x, y)];
  p[0] = r;
  p[1] = g;
  p[2] = b;
}

RasterImage RasterImage::crop(int x0, int y0, int width, int height) const {
  if (x0 < 0 || y0 < 0 || width <= 0 || height <= 0 || x0 + width > width_ ||
      y0 + height > height_)
    throw ContractError("crop region outside image");
  std::vector<std::uint8_t> out;
  out.reserve(3 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (int y = y0; y < y0 + height; ++y) {
    const auto* row = &pixels_[index(x0, y)];
    out.insert(out.end(), row, row + 3 * static_cast<std::size_t>(width));
  }
  return RasterImage(width, height, std::move(out));
}

namespace {

RasterImage decode_png(std::span<const std::uint8_t> bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
    throw ImageError(std::string("PNG decode failed: ") + image.message);
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw ImageError("PNG decode failed: " + msg);
  }
  return RasterImage(static_cast<int>(image.width), static_cast<int>(image.height),
                     std::move(pixels));
}

RasterImage decode_ppm(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 2;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&] {
    skip_space();
    long value = 0;
    std::size_t start = pos;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9' && value < 1 << 20)
      value = value * 10 + (bytes[pos++] - '0');
    if (pos == start) throw ImageError("PPM decode failed: bad header");
    return static_cast<int>(value);
  };
  const int w = read_int();
  const int h = read_int();
  const int maxval = read_int();
  if (maxval != 255) throw ImageError("PPM decode failed: only maxval 255 is supported");
  if (pos >= bytes.size() || !std::isspace(bytes[pos]))
    throw ImageError("PPM decode failed: bad header");
  ++pos;
  const std::size_t need = 3 * static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (w <= 0 || h <= 0 || bytes.size() - pos < need)
    throw ImageError("PPM decode failed: truncated pixel data");
  return RasterImage(w, h, std::vector<std::uint8_t>(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                                     bytes.begin() + static_cast<std::ptrdiff_t>(pos + need)));
}

}  // namespace

RasterImage decode_image(std::span<const std::uint8_t> bytes) {
  static constexpr std::uint8_t kPngMagic[] = {0x89, 'P', 'N', 'G'};
  if (bytes.size() >= 4 && std::equal(std::begin(kPngMagic), std::end(kPngMagic), bytes.begin()))
    return decode_png(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') return decode_ppm(bytes);
  throw ImageError("unrecognized image format (expected PNG or binary PPM)");
}

RasterImage load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageError("cannot open image '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_image(bytes);
  } catch (const ImageError& e) {
    throw ImageError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_png(const RasterImage& img) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_RGB;

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.pixels().data(), 0, nullptr))
    throw ImageError(std::string("PNG encode failed: ") + image.message);
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, img.pixels().data(), 0, nullptr))
    throw ImageError(std::string("PNG encode failed: ") + image.message);
  out.resize(size);
  return out;
}

namespace {

// For each output index, the (source index, weight) pairs covering it.
// Weights of one output sum to 1.
std::vector<std::vector<std::pair<int, double>>> box_weights(int src, int dst) {
  std::vector<std::vector<std::pair<int, double>>> out(static_cast<std::size_t>(dst));
  const double scale = static_cast<double>(src) / dst;
  for (int o = 0; o < dst; ++o) {
    const double lo = o * scale;
    const double hi = (o + 1) * scale;
    auto& w = out[static_cast<std::size_t>(o)];
    for (int s = static_cast<int>(lo); s < src && s < hi; ++s) {
      const double overlap = std::min<double>(hi, s + 1) - std::max<double>(lo, s);
      if (overlap > 0) w.emplace_back(s, overlap / scale);
    }
  }
  return out;
}

// Separable area resample of `channels` interleaved planes.
std::vector<double> resample(const std::vector<double>& src, int sw, int sh, int channels,
                             int dw, int dh) {
  const auto wx = box_weights(sw, dw);
  const auto wy = box_weights(sh, dh);
  const auto c = static_cast<std::size_t>(channels);

  std::vector<double> horiz(static_cast<std::size_t>(dw) * static_cast<std::size_t>(sh) * c, 0.0);
  for (int y = 0; y < sh; ++y)
    for (int x = 0; x < dw; ++x)
      for (auto [s, w] : wx[static_cast<std::size_t>(x)])
        for (std::size_t k = 0; k < c; ++k)
          horiz[(static_cast<std::size_t>(y) * dw + x) * c + k] +=
              w * src[(static_cast<std::size_t>(y) * sw + s) * c + k];

  std::vector<double> out(static_cast<std::size_t>(dw) * static_cast<std::size_t>(dh) * c, 0.0);
  for (int y = 0; y < dh; ++y)
    for (auto [s, w] : wy[static_cast<std::size_t>(y)])
      for (int x = 0; x < dw; ++x)
        for (std::size_t k = 0; k < c; ++k)
          out[(static_cast<std::size_t>(y) * dw + x) * c + k] +=
              w * horiz[(static_cast<std::size_t>(s) * dw + x) * c + k];
  return out;
}

void check_target(int width, int height) {
  if (width <= 0 || height <= 0) throw ContractError("resize target must be positive");
}

}  // namespace

RasterImage resize_box(const RasterImage& img, int width, int height) {
  check_target(width, height);
  if (width == img.width() && height == img.height()) return img;
  std::vector<double> src(img.pixels().begin(), img.pixels().end());
  const auto out = resample(src, img.width(), img.height(), 3, width, height);
  std::vector<std::uint8_t> pixels(out.size());
  std::transform(out.begin(), out.end(), pixels.begin(), [](double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  });
  return RasterImage(width, height, std::move(pixels));
}

std::vector<double> resize_box_gray(const RasterImage& img, int width, int height) {
  check_target(width, height);
  const auto px = img.pixels();
  std::vector<double> gray(px.size() / 3);
  for (std::size_t i = 0; i < gray.size(); ++i)
    gray[i] = 0.299 * px[3 * i] + 0.587 * px[3 * i + 1] + 0.114 * px[3 * i + 2];
  return resample(gray, img.width(), img.height(), 1, width, height);
}

std::vector<RasterImage> make_patches(const RasterImage& img, int rows, int cols) {
  if (rows <= 0 || cols <= 0) throw ContractError("patch grid must be positive");
  if (img.width() < cols || img.height() < rows)
    throw ContractError("image " + std::to_string(img.width()) + "x" +
                        std::to_string(img.height()) + " is smaller than the " +
                        std::to_string(rows) + "x" + std::to_string(cols) + " patch grid");
  const int pw = img.width() / cols;
  const int ph = img.height() / rows;
  std::vector<RasterImage> out;
  out.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  for (int r = 0; r < rows; ++r) {
    const int h = r == rows - 1 ? img.height() - ph * (rows - 1) : ph;
    for (int c = 0; c < cols; ++c) {
      const int w = c == cols - 1 ? img.width() - pw * (cols - 1) : pw;
      out.push_back(img.crop(c * pw, r * ph, w, h));
    }
  }
  return out;
}

}  // namespace docreward
