#include "oracles.hpp"

#include <cmath>

#include "cmdsr/check.hpp"

namespace cmdsr::testkit {

namespace {

int reflect(int64_t i, int n) {
  // Independent symmetric-reflection indexer (edge pixel included).
  if (n == 1) return 0;
  const int64_t p = 2 * static_cast<int64_t>(n);
  int64_t m = i % p;
  if (m < 0) m += p;
  if (m >= n) m = p - 1 - m;
  return static_cast<int>(m);
}

}  // namespace

Image conv2d_reference(const Image& img, const BlurKernel& kernel) {
  const int r = kernel.size / 2;
  Image out(img.channels, img.height, img.width);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x) {
        double acc = 0.0;
        for (int ky = 0; ky < kernel.size; ++ky)
          for (int kx = 0; kx < kernel.size; ++kx) {
            const int sy = reflect(static_cast<int64_t>(y) + ky - r, img.height);
            const int sx = reflect(static_cast<int64_t>(x) + kx - r, img.width);
            acc += kernel.at(ky, kx) * img.at(c, sy, sx);
          }
        out.at(c, y, x) = acc;
      }
  return out;
}

double finite_difference_at(const std::function<double(const std::vector<double>&)>& fn,
                            std::vector<double> point, size_t i, double step) {
  const double h = step * std::max(1.0, std::fabs(point[i]));
  const double x0 = point[i];
  point[i] = x0 + h;
  const double fp = fn(point);
  point[i] = x0 - h;
  const double fm = fn(point);
  point[i] = x0;
  CMDSR_REQUIRE(std::isfinite(fp) && std::isfinite(fm),
                "finite_difference_at: non-finite evaluation at coordinate " << i);
  return (fp - fm) / (2.0 * h);
}

std::vector<double> finite_difference_grad(
    const std::function<double(const std::vector<double>&)>& fn,
    const std::vector<double>& point, double step) {
  std::vector<double> g(point.size());
  for (size_t i = 0; i < point.size(); ++i) g[i] = finite_difference_at(fn, point, i, step);
  return g;
}

KernelMoments kernel_moments(const BlurKernel& kernel) {
  const int r = kernel.size / 2;
  double mxx = 0.0, myy = 0.0, mxy = 0.0;
  for (int y = -r; y <= r; ++y)
    for (int x = -r; x <= r; ++x) {
      const double w = kernel.at(y + r, x + r);
      mxx += w * x * x;
      myy += w * y * y;
      mxy += w * x * y;
    }
  // Eigen-decomposition of [[mxx, mxy], [mxy, myy]].
  const double tr = mxx + myy;
  const double det = mxx * myy - mxy * mxy;
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  KernelMoments m;
  m.eig1 = tr / 2.0 + disc;
  m.eig2 = tr / 2.0 - disc;
  // Principal eigenvector of the larger eigenvalue.
  double vx, vy;
  if (std::fabs(mxy) > 1e-300) {
    vx = m.eig1 - myy;
    vy = mxy;
  } else if (mxx >= myy) {
    vx = 1.0;
    vy = 0.0;
  } else {
    vx = 0.0;
    vy = 1.0;
  }
  double ang = std::atan2(vy, vx);
  if (ang <= -1.5707963267948966) ang += 3.141592653589793;
  if (ang > 1.5707963267948966) ang -= 3.141592653589793;
  m.angle = ang;
  return m;
}

double separability_ratio(const std::vector<std::vector<double>>& features,
                          const std::vector<int>& labels) {
  CMDSR_REQUIRE(features.size() == labels.size() && features.size() >= 2,
                "separability_ratio: need labelled rows");
  auto dist = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      s += d * d;
    }
    return std::sqrt(s);
  };
  double inner = 0.0, cross = 0.0;
  int64_t n_inner = 0, n_cross = 0;
  for (size_t i = 0; i < features.size(); ++i)
    for (size_t j = i + 1; j < features.size(); ++j) {
      const double d = dist(features[i], features[j]);
      if (labels[i] == labels[j]) {
        inner += d;
        ++n_inner;
      } else {
        cross += d;
        ++n_cross;
      }
    }
  CMDSR_REQUIRE(n_inner > 0 && n_cross > 0, "separability_ratio: need both pair kinds");
  return (cross / n_cross) / (inner / n_inner);
}

}  // namespace cmdsr::testkit
