#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>

#include "cmdsr/image.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cmdsr;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const auto dir = fs::temp_directory_path() / "cmdsr_image_tests";
  fs::create_directories(dir);
  return dir;
}

Image constant_image(int c, int h, int w, double v) {
  Image img(c, h, w);
  for (double& e : img.data) e = v;
  return img;
}

Image random_image(int c, int h, int w, uint64_t seed) {
  Rng rng(seed);
  Image img(c, h, w);
  for (double& e : img.data) e = rng.uniform();
  return img;
}

}  // namespace

TEST_CASE("png round trip preserves 8-bit levels") {
  const auto path = temp_dir() / "levels.png";

  Image white = constant_image(3, 2, 2, 1.0);
  save_png(white, path);
  Image back = load_png(path);
  for (double v : back.data) CHECK(v == 1.0);

  Image black = constant_image(3, 2, 2, 0.0);
  save_png(black, path);
  back = load_png(path);
  for (double v : back.data) CHECK(v == 0.0);

  Image mid = constant_image(3, 2, 2, 128.0 / 255.0);
  save_png(mid, path);
  back = load_png(path);
  for (double v : back.data) CHECK(v == doctest::Approx(128.0 / 255.0).epsilon(1e-12));
}

TEST_CASE("png io: gray images and quantization") {
  const auto path = temp_dir() / "gray.png";
  Image g = constant_image(1, 4, 5, 0.5);
  save_png(g, path);
  Image back = load_png(path);
  CHECK(back.channels == 1);
  CHECK(back.height == 4);
  CHECK(back.width == 5);
  // 0.5*255 = 127.5 rounds to 128.
  CHECK(back.data[0] == doctest::Approx(128.0 / 255.0));
}

TEST_CASE("load_png rejects missing files") {
  CHECK_THROWS(load_png(temp_dir() / "does_not_exist.png"));
}

TEST_CASE("load_png rejects non-png bytes") {
  const auto path = temp_dir() / "not_a_png.png";
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  std::fputs("definitely not png data", f);
  std::fclose(f);
  CHECK_THROWS(load_png(path));
}

TEST_CASE("random_crops yields requested patch shapes") {
  Image img = random_image(3, 100, 100, 7);
  Rng rng(11);
  auto crops = random_crops(img, 20, 48, 48, rng);
  REQUIRE(crops.size() == 20);
  for (const auto& [patch, rc] : crops) {
    CHECK(patch.height == 48);
    CHECK(patch.width == 48);
    CHECK(rc.top >= 0);
    CHECK(rc.left >= 0);
    CHECK(rc.top + rc.height <= 100);
    CHECK(rc.left + rc.width <= 100);
  }
}

TEST_CASE("random_crops on an exact-size image returns the image") {
  Image img = random_image(3, 48, 48, 3);
  Rng rng(5);
  auto crops = random_crops(img, 1, 48, 48, rng);
  REQUIRE(crops.size() == 1);
  CHECK(crops[0].second.top == 0);
  CHECK(crops[0].second.left == 0);
  CHECK(crops[0].first.data == img.data);
}

TEST_CASE("random_crops is reproducible for a fixed seed") {
  Image img = random_image(3, 64, 80, 21);
  Rng a(99), b(99);
  auto ca = random_crops(img, 8, 16, 16, a);
  auto cb = random_crops(img, 8, 16, 16, b);
  for (size_t i = 0; i < ca.size(); ++i) {
    CHECK(ca[i].second.top == cb[i].second.top);
    CHECK(ca[i].second.left == cb[i].second.left);
    CHECK(ca[i].first.data == cb[i].first.data);
  }
}

TEST_CASE("random_crops reflect-pads images smaller than the patch") {
  Image img = random_image(3, 20, 30, 13);
  Rng rng(1);
  auto crops = random_crops(img, 4, 48, 48, rng);
  for (const auto& [patch, rc] : crops) {
    CHECK(patch.height == 48);
    CHECK(patch.width == 48);
    CHECK(rc.top == 0);  // only one valid crop after padding to 48x48
    CHECK(rc.left == 0);
  }
}

TEST_CASE("reflect_pad mirrors edges symmetrically") {
  Image img(1, 2, 3);
  // rows: [0 1 2; 3 4 5]
  for (int i = 0; i < 6; ++i) img.data[static_cast<size_t>(i)] = i;
  Image p = reflect_pad(img, 1, 1, 2, 2);
  CHECK(p.height == 4);
  CHECK(p.width == 7);
  // row -1 reflects row 0; col -1 reflects col 0, col -2 reflects col 1.
  CHECK(p.at(0, 0, 2) == 0.0);
  CHECK(p.at(0, 0, 1) == 0.0);
  CHECK(p.at(0, 0, 0) == 1.0);
  CHECK(p.at(0, 1, 2) == 0.0);
  CHECK(p.at(0, 3, 2) == 3.0);   // row 2 reflects row 1
  CHECK(p.at(0, 1, 5) == 2.0);   // col 3 reflects col 2
  CHECK(p.at(0, 1, 6) == 1.0);   // col 4 reflects col 1
}

TEST_CASE("reflect_index folds deep pads") {
  CHECK(reflect_index(-1, 4) == 0);
  CHECK(reflect_index(-2, 4) == 1);
  CHECK(reflect_index(4, 4) == 3);
  CHECK(reflect_index(5, 4) == 2);
  CHECK(reflect_index(-9, 4) == 0);
  CHECK(reflect_index(-5, 1) == 0);
  CHECK(reflect_index(17, 1) == 0);
}

TEST_CASE("psnr: identical images hit the infinity sentinel") {
  Image a = random_image(3, 16, 16, 2);
  CHECK(std::isinf(psnr(a, a, 0, ChannelMode::rgb)));
  CHECK(std::isinf(psnr(a, a, 0, ChannelMode::y)));
}

TEST_CASE("psnr matches the closed-form value for a uniform offset") {
  // Keep a and a+10/255 inside [0,1] so the psnr input clamp is inactive.
  Image a = constant_image(3, 32, 32, 0.4);
  Image b = a;
  for (double& v : b.data) v += 10.0 / 255.0;
  const double expected = testkit::psnr_for_uniform_offset(10.0 / 255.0);
  CHECK(expected == doctest::Approx(28.130804).epsilon(1e-6));
  CHECK(psnr(a, b, 0, ChannelMode::rgb) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("psnr border crop ignores a corrupted frame") {
  Image a = random_image(3, 24, 24, 31);
  Image b = a;
  // Corrupt a 4-pixel frame.
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < 24; ++y)
      for (int x = 0; x < 24; ++x)
        if (y < 4 || y >= 20 || x < 4 || x >= 20) b.at(c, y, x) = 0.0;
  CHECK(std::isinf(psnr(a, b, 4, ChannelMode::rgb)));
  CHECK(psnr(a, b, 0, ChannelMode::rgb) < 40.0);
}

TEST_CASE("psnr is symmetric") {
  for (uint64_t seed = 0; seed < 4; ++seed) {
    Image a = random_image(3, 12, 18, seed * 2 + 1);
    Image b = random_image(3, 12, 18, seed * 2 + 2);
    CHECK(psnr(a, b, 1, ChannelMode::rgb) == doctest::Approx(psnr(b, a, 1, ChannelMode::rgb)));
    CHECK(psnr(a, b, 1, ChannelMode::y) == doctest::Approx(psnr(b, a, 1, ChannelMode::y)));
  }
}

TEST_CASE("psnr decreases as noise grows") {
  Image a = constant_image(3, 32, 32, 0.5);
  double prev = std::numeric_limits<double>::infinity();
  for (double level : {2.0, 8.0, 25.0}) {
    Rng rng(17);
    Image b = a;
    for (double& v : b.data) v += level / 255.0 * rng.normal();
    const double p = psnr(a, b, 0, ChannelMode::rgb);
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("psnr rejects mismatched shapes and oversized borders") {
  Image a = random_image(3, 8, 8, 1);
  Image b = random_image(3, 8, 9, 1);
  CHECK_THROWS(psnr(a, b, 0, ChannelMode::rgb));
  Image c = random_image(3, 8, 8, 2);
  CHECK_THROWS(psnr(a, c, 4, ChannelMode::rgb));
}

TEST_CASE("to_y_channel matches the BT.601 formula") {
  Image white = constant_image(3, 2, 2, 1.0);
  const double y_white = (65.481 + 128.553 + 24.966 + 16.0) / 255.0;
  CHECK(y_white == doctest::Approx(0.92157).epsilon(1e-4));
  Image yw = to_y_channel(white);
  CHECK(yw.channels == 1);
  CHECK(yw.at(0, 0, 0) == doctest::Approx(y_white).epsilon(1e-12));

  Image black = constant_image(3, 2, 2, 0.0);
  CHECK(to_y_channel(black).at(0, 0, 0) == doctest::Approx(16.0 / 255.0).epsilon(1e-12));
}

TEST_CASE("to_y_channel rejects single-channel input") {
  Image g = constant_image(1, 2, 2, 0.5);
  CHECK_THROWS(to_y_channel(g));
}

TEST_CASE("crop_to_multiple trims to divisible sides") {
  Image img = random_image(3, 301, 299, 4);
  Image c = crop_to_multiple(img, 4);
  CHECK(c.height == 300);
  CHECK(c.width == 296);
  CHECK(c.at(1, 10, 10) == img.at(1, 10, 10));
}
