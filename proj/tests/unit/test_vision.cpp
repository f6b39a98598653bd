#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "../oracles.hpp"
#include "docreward/embedding.hpp"
#include "docreward/errors.hpp"
#include "docreward/image.hpp"
#include "docreward/vision_reward.hpp"

using namespace docreward;

namespace {

const std::filesystem::path kImages = DOCREWARD_FIXTURE_DIR "/images";

// 224x224 image of 8x8 uniform 28-pixel blocks; colors[by][bx].
using oracle::Blocks;

Blocks random_blocks(std::mt19937_64& rng) {
  Blocks b(8, std::vector<std::array<int, 3>>(8));
  for (auto& row : b)
    for (auto& c : row) c = {static_cast<int>(rng() % 256), static_cast<int>(rng() % 256),
                             static_cast<int>(rng() % 256)};
  return b;
}

RasterImage paint(const Blocks& b) {
  RasterImage img(224, 224);
  for (int y = 0; y < 224; ++y)
    for (int x = 0; x < 224; ++x) {
      const auto& c = b[y / 28][x / 28];
      img.set(x, y, static_cast<std::uint8_t>(c[0]), static_cast<std::uint8_t>(c[1]),
              static_cast<std::uint8_t>(c[2]));
    }
  return img;
}

}  // namespace

TEST_CASE("RasterImage contracts") {
  CHECK_THROWS_AS(RasterImage(0, 1), ContractError);
  CHECK_THROWS_AS(RasterImage(2, 2, std::vector<std::uint8_t>(11)), ContractError);
  RasterImage img(2, 2);
  img.set(1, 0, 1, 2, 3);
  CHECK(img.at(1, 0)[2] == 3);
  CHECK(img.crop(1, 0, 1, 1).at(0, 0)[0] == 1);
}

TEST_CASE("decode PNG written by an independent encoder") {
  const auto rgb = load_image(kImages / "rgb_3x2.png");
  CHECK(rgb.width() == 3);
  CHECK(rgb.height() == 2);
  CHECK(rgb.at(0, 0)[0] == 255);
  CHECK(rgb.at(2, 0)[2] == 255);
  CHECK(rgb.at(1, 1)[0] == 40);
  CHECK(rgb.at(2, 1)[2] == 90);
  CHECK(load_image(kImages / "palette_3x2.png") == rgb);

  const auto gray = load_image(kImages / "gray_2x2.png");
  CHECK(gray.at(1, 0)[0] == 64);
  CHECK(gray.at(1, 0)[1] == 64);
  CHECK(gray.at(0, 1)[2] == 128);

  const auto rgba = load_image(kImages / "rgba_2x1.png");
  CHECK(rgba.at(0, 0)[1] == 100);
  CHECK(rgba.at(1, 0)[2] == 3);

  const auto bytes = encode_png(rgb);
  CHECK(decode_image(bytes) == rgb);
}

TEST_CASE("decode PPM and bad input") {
  const std::string pixels("\x01\x02\x03\xff\x00\x10", 6);
  const std::string ppm = "P6\n# c\n2 1\n255\n" + pixels;
  const auto img = decode_image({reinterpret_cast<const std::uint8_t*>(ppm.data()), ppm.size()});
  CHECK(img.width() == 2);
  CHECK(img.at(1, 0)[0] == 255);
  CHECK(img.at(1, 0)[2] == 16);
  const std::string junk = "not an image";
  CHECK_THROWS_AS(decode_image({reinterpret_cast<const std::uint8_t*>(junk.data()), junk.size()}),
                  ImageError);
  CHECK_THROWS_AS(load_image(kImages / "missing.png"), ImageError);
}

TEST_CASE("resize_box") {
  RasterImage img(4, 2);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 2; ++y) img.set(x, y, x < 2 ? 0 : 200, 100, 50);
  const auto half = resize_box(img, 2, 1);
  CHECK(half.at(0, 0)[0] == 0);
  CHECK(half.at(1, 0)[0] == 200);
  CHECK(resize_box(img, 4, 2) == img);
  // 3 -> 2 averages with fractional coverage: (10*1 + 40*0.5) / 1.5 = 20
  RasterImage row(3, 1);
  row.set(0, 0, 10, 10, 10);
  row.set(1, 0, 40, 40, 40);
  row.set(2, 0, 40, 40, 40);
  CHECK(resize_box(row, 2, 1).at(0, 0)[0] == 20);
  CHECK(resize_box_gray(row, 1, 1)[0] == doctest::Approx(30.0));
}

TEST_CASE("make_patches") {
  RasterImage four(4, 4);
  auto p = make_patches(four, 2, 2);
  REQUIRE(p.size() == 4);
  for (const auto& q : p) {
    CHECK(q.width() == 2);
    CHECK(q.height() == 2);
  }
  RasterImage five(5, 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 5; ++x) five.set(x, y, static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(y), 0);
  p = make_patches(five, 2, 2);
  CHECK(p[0].width() == 2);
  CHECK(p[1].width() == 3);
  CHECK(p[3].width() == 3);
  CHECK(p[1].at(0, 0)[0] == 2);
  CHECK(p[2].at(0, 0)[1] == 2);
  std::size_t area = 0;
  for (const auto& q : p) area += static_cast<std::size_t>(q.width() * q.height());
  CHECK(area == 20);
  CHECK(make_patches(five, 1, 1)[0] == five);
  CHECK_THROWS_AS(make_patches(five, 5, 1), ContractError);
  CHECK_THROWS_AS(make_patches(five, 1, 6), ContractError);
}

TEST_CASE("cosine_similarity") {
  const EmbeddingVector x({1.0, 2.0, 3.0}), e1({1.0, 0.0}), e2({0.0, 1.0}), m1({-1.0, 0.0});
  CHECK(cosine_similarity(x, x) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cosine_similarity(e1, e2) == 0.0);
  CHECK(cosine_similarity(e1, m1) == -1.0);
  CHECK_THROWS_AS(cosine_similarity(x, e1), ContractError);
  CHECK_THROWS_AS(EmbeddingVector({0.0, 0.0}), ContractError);
  CHECK_THROWS_AS(EmbeddingVector({}), ContractError);
  CHECK_THROWS_AS(EmbeddingVector({NAN}), ContractError);
}

TEST_CASE("stub_embed") {
  std::mt19937_64 rng(4);
  const auto img = paint(random_blocks(rng));
  const auto v = stub_embed(img);
  CHECK(v == stub_embed(img));
  CHECK(v.dim() == 64);
  double n = 0;
  for (double x : v.values()) n += x * x;
  CHECK(std::sqrt(n) == doctest::Approx(1.0).epsilon(1e-9));

  RasterImage black(30, 20), white(7, 9);
  for (int y = 0; y < 9; ++y)
    for (int x = 0; x < 7; ++x) white.set(x, y, 255, 255, 255);
  CHECK(stub_embed(black) == stub_embed(white));
  CHECK(stub_embed(black).values()[0] == 1.0 / 8.0);
}

TEST_CASE("vision reward against the stub arithmetic oracle") {
  std::mt19937_64 rng(8);
  StubBackend stub;
  VisionRewardConfig cfg;
  cfg.grid_rows = cfg.grid_cols = 2;
  cfg.omega_global = 0.3;
  cfg.omega_local = 0.7;
  for (int k = 0; k < 5; ++k) {
    auto a = random_blocks(rng), b = random_blocks(rng);
    if (k == 0) {
      // make one patch flat in both images and another flat in one of them
      for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) {
          a[y][x] = {9, 9, 9};
          b[y][x] = {200, 10, 10};
          a[y][x + 4] = {50, 60, 70};
        }
    }
    double global = 0, local = 0;
    oracle::block_vision_reward(a, b, 0.3, 0.7, &global, &local);
    const auto s = multiscale_vision_score(paint(a), paint(b), cfg, stub);
    CHECK(s.global == doctest::Approx(global).epsilon(1e-9));
    CHECK(s.local_mean == doctest::Approx(local).epsilon(1e-9));
    CHECK(s.reward == doctest::Approx(0.3 * global + 0.7 * local).epsilon(1e-9));
  }
}

TEST_CASE("vision reward properties") {
  std::mt19937_64 rng(12);
  StubBackend stub;
  const auto a = paint(random_blocks(rng)), b = paint(random_blocks(rng));
  VisionRewardConfig cfg;
  CHECK(multiscale_vision_reward(a, a, cfg, stub) == doctest::Approx(1.0).epsilon(1e-9));
  cfg.omega_global = 1.0;
  cfg.omega_local = 0.0;
  const auto s = multiscale_vision_score(a, b, cfg, stub);
  CHECK(s.reward == s.global);

  cfg.omega_global = 0.6;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.omega_local = 0.4;
  cfg.grid_rows = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
