#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "cmdsr/rng.hpp"

namespace cmdsr {

// Planar CHW image with values nominally in [0,1]. Math never clamps;
// quantization and clamping happen at save time and inside psnr only.
struct Image {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<double> data;  // [c][y][x]

  Image() = default;
  Image(int c, int h, int w)
      : height(h), width(w), channels(c),
        data(static_cast<size_t>(c) * h * w, 0.0) {}

  double& at(int c, int y, int x) {
    return data[(static_cast<size_t>(c) * height + y) * width + x];
  }
  double at(int c, int y, int x) const {
    return data[(static_cast<size_t>(c) * height + y) * width + x];
  }
  int64_t plane() const { return static_cast<int64_t>(height) * width; }
  int64_t numel() const { return static_cast<int64_t>(data.size()); }
};

struct PatchCoords {
  int top = 0;
  int left = 0;
  int height = 0;
  int width = 0;
};

enum class ChannelMode { rgb, y };

// 8-bit PNG in (gray or RGB; alpha is stripped, palette expanded). Values are
// scaled to [0,1] by division with 255. Anything else is a decode error.
Image load_png(const std::filesystem::path& path);

// Clamps to [0,1], quantizes with round(v*255), writes 8-bit gray or RGB.
void save_png(const Image& img, const std::filesystem::path& path);

Image crop(const Image& img, const PatchCoords& rc);

// Symmetric reflection padding (edge pixel included, folds repeatedly for
// pads wider than the image).
Image reflect_pad(const Image& img, int top, int bottom, int left, int right);

// Index into [0,n) by symmetric reflection; valid for any int i, any n >= 1.
int reflect_index(int64_t i, int n);

// Largest top-left crop whose sides are multiples of `factor`.
Image crop_to_multiple(const Image& img, int factor);

// n uniform random crops of size h x w (overlap allowed). Images smaller than
// the patch are reflect-padded up to the patch size first; returned coords
// refer to the (possibly padded) source.
std::vector<std::pair<Image, PatchCoords>> random_crops(const Image& img, int n,
                                                        int h, int w, Rng& rng);

// BT.601 luma on [0,1] inputs: Y = (65.481 R + 128.553 G + 24.966 B + 16)/255.
Image to_y_channel(const Image& img);

// 10*log10(1/MSE) on [0,1]-clamped pixels after cropping `border` pixels from
// every side; ChannelMode::y converts both images to luma first. Returns
// +infinity when the compared regions are identical.
double psnr(const Image& a, const Image& b, int border, ChannelMode mode);

}  // namespace cmdsr
