#include "cmdsr/degradation.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "cmdsr/check.hpp"

namespace cmdsr {

namespace {

void validate_kernel_size(int size) {
  CMDSR_REQUIRE(size >= 1 && size % 2 == 1, "blur kernel size must be odd and >= 1, got " << size);
}

// Horizontal 1-D correlation with symmetric reflection, per channel.
Image correlate_rows(const Image& img, const std::vector<double>& taps) {
  const int r = static_cast<int>(taps.size()) / 2;
  Image pad = reflect_pad(img, 0, 0, r, r);
  Image out(img.channels, img.height, img.width);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < img.height; ++y) {
      const double* src = &pad.at(c, y, 0);
      double* dst = &out.at(c, y, 0);
      for (int t = 0; t < static_cast<int>(taps.size()); ++t) {
        const double k = taps[static_cast<size_t>(t)];
        const double* s = src + t;
        for (int x = 0; x < img.width; ++x) dst[x] += k * s[x];
      }
    }
  return out;
}

Image correlate_cols(const Image& img, const std::vector<double>& taps) {
  const int r = static_cast<int>(taps.size()) / 2;
  Image pad = reflect_pad(img, r, r, 0, 0);
  Image out(img.channels, img.height, img.width);
  for (int c = 0; c < img.channels; ++c)
    for (int t = 0; t < static_cast<int>(taps.size()); ++t) {
      const double k = taps[static_cast<size_t>(t)];
      for (int y = 0; y < img.height; ++y) {
        const double* s = &pad.at(c, y + t, 0);
        double* dst = &out.at(c, y, 0);
        for (int x = 0; x < img.width; ++x) dst[x] += k * s[x];
      }
    }
  return out;
}

// Catmull-Rom cubic, a = -0.5.
double cubic_kernel(double t) {
  t = std::fabs(t);
  if (t <= 1.0) return (1.5 * t - 2.5) * t * t + 1.0;
  if (t < 2.0) return ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0;
  return 0.0;
}

struct TapSet {
  std::vector<int> index;      // reflected source indices
  std::vector<double> weight;  // normalized
};

std::vector<TapSet> make_taps(int in_size, int out_size) {
  const double ratio = static_cast<double>(in_size) / out_size;
  const double kscale = std::max(1.0, ratio);  // antialias when shrinking
  const double support = 2.0 * kscale;
  std::vector<TapSet> taps(static_cast<size_t>(out_size));
  for (int i = 0; i < out_size; ++i) {
    const double x = (i + 0.5) * ratio - 0.5;
    const int jlo = static_cast<int>(std::ceil(x - support));
    const int jhi = static_cast<int>(std::floor(x + support));
    TapSet& t = taps[static_cast<size_t>(i)];
    double sum = 0.0;
    for (int j = jlo; j <= jhi; ++j) {
      const double w = cubic_kernel((j - x) / kscale);
      if (w == 0.0) continue;
      t.index.push_back(reflect_index(j, in_size));
      t.weight.push_back(w);
      sum += w;
    }
    for (double& w : t.weight) w /= sum;
  }
  return taps;
}

}  // namespace

BlurKernel make_isotropic_kernel(int size, double sigma) {
  validate_kernel_size(size);
  CMDSR_REQUIRE(sigma > 0.0, "isotropic kernel width must be positive, got " << sigma);
  const int r = size / 2;
  std::vector<double> profile(static_cast<size_t>(size));
  for (int i = -r; i <= r; ++i)
    profile[static_cast<size_t>(i + r)] = std::exp(-0.5 * i * i / (sigma * sigma));

  BlurKernel k;
  k.size = size;
  k.w.resize(static_cast<size_t>(size) * size);
  double sum = 0.0;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double v = profile[static_cast<size_t>(y)] * profile[static_cast<size_t>(x)];
      k.at(y, x) = v;
      sum += v;
    }
  for (double& v : k.w) v /= sum;
  return k;
}

BlurKernel make_anisotropic_kernel(int size, double lambda1, double lambda2, double theta) {
  validate_kernel_size(size);
  CMDSR_REQUIRE(lambda2 > 0.0 && lambda1 >= lambda2,
                "anisotropic widths must satisfy lambda1 >= lambda2 > 0, got "
                    << lambda1 << ", " << lambda2);
  // Inverse covariance of R(theta) diag(l1^2, l2^2) R(theta)^T.
  const double c = std::cos(theta), s = std::sin(theta);
  const double i1 = 1.0 / (lambda1 * lambda1), i2 = 1.0 / (lambda2 * lambda2);
  const double a = c * c * i1 + s * s * i2;
  const double b = c * s * (i1 - i2);
  const double d = s * s * i1 + c * c * i2;

  const int r = size / 2;
  BlurKernel k;
  k.size = size;
  k.w.resize(static_cast<size_t>(size) * size);
  double sum = 0.0;
  for (int y = -r; y <= r; ++y)
    for (int x = -r; x <= r; ++x) {
      const double e = a * x * x + 2.0 * b * x * y + d * y * y;
      const double v = std::exp(-0.5 * e);
      k.at(y + r, x + r) = v;
      sum += v;
    }
  for (double& v : k.w) v /= sum;
  return k;
}

Image blur(const Image& img, const BlurKernel& kernel) {
  validate_kernel_size(kernel.size);
  CMDSR_REQUIRE(static_cast<int>(kernel.w.size()) == kernel.size * kernel.size,
                "blur: kernel size/weights mismatch");

  // Rank-1 kernels (isotropic Gaussians in particular) run as two 1-D passes.
  const int n = kernel.size;
  const int c0 = n / 2;
  const double center = kernel.at(c0, c0);
  if (center > 0.0) {
    std::vector<double> col(static_cast<size_t>(n)), row(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      col[static_cast<size_t>(i)] = kernel.at(i, c0);
      row[static_cast<size_t>(i)] = kernel.at(c0, i) / center;
    }
    bool rank1 = true;
    for (int y = 0; y < n && rank1; ++y)
      for (int x = 0; x < n; ++x) {
        const double approx = col[static_cast<size_t>(y)] * row[static_cast<size_t>(x)];
        if (std::fabs(approx - kernel.at(y, x)) > 1e-14) {
          rank1 = false;
          break;
        }
      }
    if (rank1) return correlate_cols(correlate_rows(img, row), col);
  }

  const int r = n / 2;
  Image pad = reflect_pad(img, r, r, r, r);
  Image out(img.channels, img.height, img.width);
  for (int c = 0; c < img.channels; ++c)
    for (int ky = 0; ky < n; ++ky)
      for (int kx = 0; kx < n; ++kx) {
        const double kv = kernel.at(ky, kx);
        for (int y = 0; y < img.height; ++y) {
          const double* s = &pad.at(c, y + ky, kx);
          double* dst = &out.at(c, y, 0);
          for (int x = 0; x < img.width; ++x) dst[x] += kv * s[x];
        }
      }
  return out;
}

Image bicubic_resize(const Image& img, int out_h, int out_w) {
  CMDSR_REQUIRE(out_h >= 1 && out_w >= 1, "bicubic_resize: empty output requested");
  const std::vector<TapSet> hx = make_taps(img.width, out_w);
  const std::vector<TapSet> hy = make_taps(img.height, out_h);

  // Horizontal pass.
  Image mid(img.channels, img.height, out_w);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < out_w; ++x) {
        const TapSet& t = hx[static_cast<size_t>(x)];
        double acc = 0.0;
        for (size_t j = 0; j < t.index.size(); ++j)
          acc += t.weight[j] * img.at(c, y, t.index[j]);
        mid.at(c, y, x) = acc;
      }

  // Vertical pass.
  Image out(img.channels, out_h, out_w);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < out_h; ++y) {
      const TapSet& t = hy[static_cast<size_t>(y)];
      for (int x = 0; x < out_w; ++x) {
        double acc = 0.0;
        for (size_t j = 0; j < t.index.size(); ++j)
          acc += t.weight[j] * mid.at(c, t.index[j], x);
        out.at(c, y, x) = acc;
      }
    }
  return out;
}

Image bicubic_downsample(const Image& img, int scale) {
  CMDSR_REQUIRE(scale >= 1, "bicubic_downsample: scale must be >= 1");
  CMDSR_REQUIRE(img.height % scale == 0 && img.width % scale == 0,
                "bicubic_downsample: " << img.height << "x" << img.width
                                       << " not divisible by scale " << scale);
  return bicubic_resize(img, img.height / scale, img.width / scale);
}

Image add_awgn(const Image& img, double sigma_n, Rng& rng) {
  CMDSR_REQUIRE(sigma_n >= 0.0 && sigma_n <= 75.0,
                "add_awgn: noise level must be in [0,75], got " << sigma_n);
  if (sigma_n == 0.0) return img;
  const double sd = sigma_n / 255.0;
  Image out = img;
  for (double& v : out.data) v += sd * rng.normal();
  return out;
}

Image degrade(const Image& hr, const DegradationSpec& spec, Rng& rng) {
  CMDSR_REQUIRE(hr.height % spec.scale == 0 && hr.width % spec.scale == 0,
                "degrade: HR " << hr.height << "x" << hr.width
                               << " not divisible by scale " << spec.scale);
  const Image blurred = blur(hr, spec.make_kernel());
  const Image down = bicubic_downsample(blurred, spec.scale);
  return add_awgn(down, spec.sigma_n, rng);
}

BlurKernel DegradationSpec::make_kernel() const {
  if (kind == KernelKind::isotropic) return make_isotropic_kernel(kernel_size, sigma_g);
  return make_anisotropic_kernel(kernel_size, lambda1, lambda2, theta);
}

uint64_t DegradationSpec::id() const {
  auto bits = [](double d) {
    uint64_t u;
    std::memcpy(&u, &d, sizeof(u));
    return u;
  };
  uint64_t s = kind == KernelKind::isotropic ? 0x69736fULL : 0x616e69ULL;
  for (uint64_t u : {bits(sigma_g), bits(lambda1), bits(lambda2), bits(theta),
                     static_cast<uint64_t>(kernel_size), static_cast<uint64_t>(scale),
                     bits(sigma_n)}) {
    s ^= u + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
    (void)splitmix64(s);
  }
  return splitmix64(s);
}

DegradationSpec preset(const std::string& name) {
  DegradationSpec s;
  s.kernel_size = 7;
  s.scale = 4;
  if (name == "simple") {
    s.kind = KernelKind::isotropic;
    s.sigma_g = 0.2;
    s.sigma_n = 15.0;
  } else if (name == "middle") {
    s.kind = KernelKind::isotropic;
    s.sigma_g = 2.6;
    s.sigma_n = 15.0;
  } else if (name == "severe") {
    s.kind = KernelKind::anisotropic;
    s.lambda1 = 4.0;
    s.lambda2 = 1.0;
    s.theta = -0.5;
    s.sigma_n = 50.0;
  } else {
    fail("unknown degradation preset: " + name + " (expected simple | middle | severe)");
  }
  return s;
}

}  // namespace cmdsr
