#pragma once

#include <string>
#include <vector>

#include "cmdsr/image.hpp"
#include "cmdsr/rng.hpp"

namespace cmdsr {

// Normalized nonnegative blur kernel, size x size, size odd.
struct BlurKernel {
  int size = 0;
  std::vector<double> w;  // row-major [size][size]

  double at(int y, int x) const { return w[static_cast<size_t>(y) * size + x]; }
  double& at(int y, int x) { return w[static_cast<size_t>(y) * size + x]; }
};

enum class KernelKind { isotropic, anisotropic };

// One task's degradation pattern: blur kernel parameters, scale factor and
// noise level (0-255 scale).
struct DegradationSpec {
  KernelKind kind = KernelKind::isotropic;
  double sigma_g = 0.0;   // isotropic width
  double lambda1 = 0.0;   // anisotropic principal widths
  double lambda2 = 0.0;
  double theta = 0.0;     // anisotropic rotation, radians
  int kernel_size = 15;
  int scale = 4;
  double sigma_n = 0.0;   // AWGN level on the 0-255 scale

  BlurKernel make_kernel() const;
  // Stable identity hash over the canonical field encoding; equal specs get
  // equal ids.
  uint64_t id() const;
};

// weights ~ exp(-(x^2+y^2)/(2 sigma^2)) on integer offsets, normalized.
BlurKernel make_isotropic_kernel(int size, double sigma);

// weights ~ exp(-0.5 x^T Sigma^-1 x), Sigma = R(theta) diag(l1^2, l2^2) R(theta)^T.
// Requires l1 >= l2 > 0.
BlurKernel make_anisotropic_kernel(int size, double lambda1, double lambda2, double theta);

// Per-channel 2-D correlation with symmetric reflection at borders; output
// shape equals input shape. Isotropic (separable) kernels take a two-pass
// path, general kernels the direct one.
Image blur(const Image& img, const BlurKernel& kernel);

// Catmull-Rom cubic (a = -0.5) resampling to an arbitrary size, with the
// kernel support widened by the shrink ratio per axis (antialias) and weights
// normalized per output pixel. Border handling is symmetric reflection.
Image bicubic_resize(const Image& img, int out_h, int out_w);

// Decimation by an integer factor; dimensions must be divisible by scale.
Image bicubic_downsample(const Image& img, int scale);

// Adds independent N(0, (sigma_n/255)^2) per pixel per channel; no clipping.
Image add_awgn(const Image& img, double sigma_n, Rng& rng);

// blur -> bicubic_downsample -> add_awgn.
Image degrade(const Image& hr, const DegradationSpec& spec, Rng& rng);

// simple | middle | severe test degradations.
DegradationSpec preset(const std::string& name);

}  // namespace cmdsr
