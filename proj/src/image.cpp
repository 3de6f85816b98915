#include "cmdsr/image.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

#include "cmdsr/check.hpp"

namespace cmdsr {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

Image load_png(const std::filesystem::path& path) {
  CMDSR_REQUIRE(std::filesystem::exists(path), "load_png: no such file: " << path.string());
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  CMDSR_REQUIRE(fp != nullptr, "load_png: cannot open " << path.string());

  png_byte header[8];
  if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8) != 0) {
    fail("load_png: not a PNG file: " + path.string());
  }

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  CMDSR_REQUIRE(png, "load_png: png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    fail("load_png: png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail("load_png: decode error in " + path.string());
  }

  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const int depth = png_get_bit_depth(png, info);
  const int color = png_get_color_type(png, info);

  if (depth == 16) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail("load_png: 16-bit PNG not supported: " + path.string());
  }

  // Normalize to 8-bit gray or RGB.
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const int channels = png_get_channels(png, info);
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail("load_png: unsupported channel layout in " + path.string());
  }

  std::vector<png_byte> row(png_get_rowbytes(png, info));
  Image img(channels, static_cast<int>(h), static_cast<int>(w));
  for (png_uint_32 y = 0; y < h; ++y) {
    png_read_row(png, row.data(), nullptr);
    for (png_uint_32 x = 0; x < w; ++x) {
      for (int c = 0; c < channels; ++c) {
        img.at(c, static_cast<int>(y), static_cast<int>(x)) =
            static_cast<double>(row[x * channels + c]) / 255.0;
      }
    }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

void save_png(const Image& img, const std::filesystem::path& path) {
  CMDSR_REQUIRE(img.channels == 1 || img.channels == 3,
                "save_png: need 1 or 3 channels, got " << img.channels);
  CMDSR_REQUIRE(img.height >= 1 && img.width >= 1, "save_png: empty image");

  FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  CMDSR_REQUIRE(fp != nullptr, "save_png: cannot open " << path.string() << " for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  CMDSR_REQUIRE(png, "save_png: png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    fail("save_png: png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail("save_png: encode error for " + path.string());
  }

  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
               static_cast<png_uint_32>(img.height), 8,
               img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  std::vector<png_byte> row(static_cast<size_t>(img.width) * img.channels);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < img.channels; ++c) {
        double v = img.at(c, y, x);
        v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
        row[static_cast<size_t>(x) * img.channels + c] =
            static_cast<png_byte>(std::lround(v * 255.0));
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

Image crop(const Image& img, const PatchCoords& rc) {
  CMDSR_REQUIRE(rc.top >= 0 && rc.left >= 0 && rc.height >= 1 && rc.width >= 1 &&
                    rc.top + rc.height <= img.height && rc.left + rc.width <= img.width,
                "crop: rectangle (" << rc.top << "," << rc.left << "," << rc.height << ","
                                    << rc.width << ") outside " << img.height << "x" << img.width);
  Image out(img.channels, rc.height, rc.width);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < rc.height; ++y)
      for (int x = 0; x < rc.width; ++x)
        out.at(c, y, x) = img.at(c, rc.top + y, rc.left + x);
  return out;
}

int reflect_index(int64_t i, int n) {
  if (n == 1) return 0;
  const int64_t period = 2 * static_cast<int64_t>(n);
  int64_t m = i % period;
  if (m < 0) m += period;
  if (m >= n) m = period - 1 - m;
  return static_cast<int>(m);
}

Image reflect_pad(const Image& img, int top, int bottom, int left, int right) {
  CMDSR_REQUIRE(top >= 0 && bottom >= 0 && left >= 0 && right >= 0, "reflect_pad: negative pad");
  Image out(img.channels, img.height + top + bottom, img.width + left + right);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < out.height; ++y) {
      const int sy = reflect_index(static_cast<int64_t>(y) - top, img.height);
      for (int x = 0; x < out.width; ++x) {
        const int sx = reflect_index(static_cast<int64_t>(x) - left, img.width);
        out.at(c, y, x) = img.at(c, sy, sx);
      }
    }
  return out;
}

Image crop_to_multiple(const Image& img, int factor) {
  CMDSR_REQUIRE(factor >= 1, "crop_to_multiple: factor must be >= 1");
  const int h = (img.height / factor) * factor;
  const int w = (img.width / factor) * factor;
  CMDSR_REQUIRE(h >= factor && w >= factor,
                "crop_to_multiple: image " << img.height << "x" << img.width
                                           << " smaller than factor " << factor);
  if (h == img.height && w == img.width) return img;
  return crop(img, {0, 0, h, w});
}

std::vector<std::pair<Image, PatchCoords>> random_crops(const Image& img, int n,
                                                        int h, int w, Rng& rng) {
  CMDSR_REQUIRE(n >= 1, "random_crops: n must be >= 1");
  CMDSR_REQUIRE(h >= 1 && w >= 1, "random_crops: empty patch requested");

  const Image* src = &img;
  Image padded;
  if (img.height < h || img.width < w) {
    const int dy = std::max(0, h - img.height);
    const int dx = std::max(0, w - img.width);
    padded = reflect_pad(img, dy / 2, dy - dy / 2, dx / 2, dx - dx / 2);
    src = &padded;
  }

  std::vector<std::pair<Image, PatchCoords>> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    PatchCoords rc;
    rc.top = static_cast<int>(rng.uniform_int(0, src->height - h));
    rc.left = static_cast<int>(rng.uniform_int(0, src->width - w));
    rc.height = h;
    rc.width = w;
    out.emplace_back(crop(*src, rc), rc);
  }
  return out;
}

Image to_y_channel(const Image& img) {
  CMDSR_REQUIRE(img.channels == 3, "to_y_channel: need 3 channels, got " << img.channels);
  Image y(1, img.height, img.width);
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c)
      y.at(0, r, c) = (65.481 * img.at(0, r, c) + 128.553 * img.at(1, r, c) +
                       24.966 * img.at(2, r, c) + 16.0) / 255.0;
  return y;
}

double psnr(const Image& a, const Image& b, int border, ChannelMode mode) {
  CMDSR_REQUIRE(a.height == b.height && a.width == b.width && a.channels == b.channels,
                "psnr: shape mismatch " << a.height << "x" << a.width << "x" << a.channels
                                        << " vs " << b.height << "x" << b.width << "x"
                                        << b.channels);
  CMDSR_REQUIRE(border >= 0, "psnr: negative border");
  CMDSR_REQUIRE(a.height > 2 * border && a.width > 2 * border,
                "psnr: border " << border << " leaves no pixels");

  Image ca = a, cb = b;
  if (mode == ChannelMode::y) {
    ca = to_y_channel(a);
    cb = to_y_channel(b);
  }

  auto clamp01 = [](double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); };
  double se = 0.0;
  int64_t count = 0;
  for (int c = 0; c < ca.channels; ++c)
    for (int y = border; y < ca.height - border; ++y)
      for (int x = border; x < ca.width - border; ++x) {
        const double d = clamp01(ca.at(c, y, x)) - clamp01(cb.at(c, y, x));
        se += d * d;
        ++count;
      }
  const double mse = se / static_cast<double>(count);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

}  // namespace cmdsr
