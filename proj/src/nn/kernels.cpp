#include "cmdsr/nn/kernels.hpp"

#include <cmath>

#include "cmdsr/check.hpp"
#include "cmdsr/image.hpp"  // reflect_index

namespace cmdsr::nn {

namespace {

// Padded copy of a [C,H,W] tensor by `p` on every side.
Tensor pad_input(const Tensor& x, int p, PadMode mode) {
  const int C = x.dim(0), H = x.dim(1), W = x.dim(2);
  Tensor xp({C, H + 2 * p, W + 2 * p});
  const int Hp = H + 2 * p, Wp = W + 2 * p;
  for (int c = 0; c < C; ++c) {
    if (mode == PadMode::zero) {
      for (int y = 0; y < H; ++y) {
        const double* src = &x.v[(static_cast<size_t>(c) * H + y) * W];
        double* dst = &xp.v[(static_cast<size_t>(c) * Hp + y + p) * Wp + p];
        for (int i = 0; i < W; ++i) dst[i] = src[i];
      }
    } else {
      for (int y = 0; y < Hp; ++y) {
        const int sy = reflect_index(static_cast<int64_t>(y) - p, H);
        for (int xx = 0; xx < Wp; ++xx) {
          const int sx = reflect_index(static_cast<int64_t>(xx) - p, W);
          xp.v[(static_cast<size_t>(c) * Hp + y) * Wp + xx] =
              x.v[(static_cast<size_t>(c) * H + sy) * W + sx];
        }
      }
    }
  }
  return xp;
}

// Folds a padded gradient back onto the unpadded tensor.
void fold_padded_grad(const Tensor& gxp, int p, PadMode mode, Tensor& gx) {
  const int C = gx.dim(0), H = gx.dim(1), W = gx.dim(2);
  const int Hp = H + 2 * p, Wp = W + 2 * p;
  for (int c = 0; c < C; ++c)
    for (int y = 0; y < Hp; ++y)
      for (int xx = 0; xx < Wp; ++xx) {
        const double g = gxp.v[(static_cast<size_t>(c) * Hp + y) * Wp + xx];
        if (g == 0.0) continue;
        const int sy = y - p, sx = xx - p;
        if (mode == PadMode::zero) {
          if (sy < 0 || sy >= H || sx < 0 || sx >= W) continue;
          gx.v[(static_cast<size_t>(c) * H + sy) * W + sx] += g;
        } else {
          gx.v[(static_cast<size_t>(c) * H + reflect_index(sy, H)) * W +
               reflect_index(sx, W)] += g;
        }
      }
}

void check_conv_shapes(const Tensor& x, const Tensor& w, const Tensor& b) {
  CMDSR_REQUIRE(x.rank() == 3 && w.rank() == 4, "conv2d: bad tensor ranks");
  CMDSR_REQUIRE(w.dim(2) == w.dim(3) && w.dim(2) % 2 == 1,
                "conv2d: kernel must be square with odd size, got " << w.dim(2) << "x"
                                                                    << w.dim(3));
  CMDSR_REQUIRE(x.dim(0) == w.dim(1), "conv2d: input channels " << x.dim(0)
                                                                << " != weight Cin "
                                                                << w.dim(1));
  if (b.numel() > 0)
    CMDSR_REQUIRE(b.numel() == w.dim(0), "conv2d: bias length mismatch");
}

}  // namespace

double dot(const double* a, const double* b, int64_t n) {
  constexpr int64_t kLanes = 8;
  double lane[kLanes] = {0, 0, 0, 0, 0, 0, 0, 0};
  int64_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    for (int64_t j = 0; j < kLanes; ++j) lane[j] += a[i + j] * b[i + j];
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return ((lane[0] + lane[1]) + (lane[2] + lane[3])) +
         ((lane[4] + lane[5]) + (lane[6] + lane[7])) + tail;
}

void conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, PadMode pad,
                    Tensor& y) {
  check_conv_shapes(x, w, b);
  const int Cin = x.dim(0), H = x.dim(1), W = x.dim(2);
  const int Cout = w.dim(0), k = w.dim(2), p = k / 2;
  const Tensor xp = pad_input(x, p, pad);
  const int Wp = W + 2 * p;

  y = Tensor({Cout, H, W});
  for (int oc = 0; oc < Cout; ++oc) {
    double* yp = &y.v[static_cast<size_t>(oc) * H * W];
    if (b.numel() > 0) {
      const double bv = b[oc];
      for (int64_t i = 0; i < static_cast<int64_t>(H) * W; ++i) yp[i] = bv;
    }
    for (int ic = 0; ic < Cin; ++ic) {
      const double* plane = &xp.v[static_cast<size_t>(ic) * (H + 2 * p) * Wp];
      for (int ky = 0; ky < k; ++ky)
        for (int kx = 0; kx < k; ++kx) {
          const double coef = w.at4(oc, ic, ky, kx);
          if (coef == 0.0) continue;
          for (int oy = 0; oy < H; ++oy) {
            const double* src = plane + static_cast<size_t>(oy + ky) * Wp + kx;
            double* dst = yp + static_cast<size_t>(oy) * W;
            for (int ox = 0; ox < W; ++ox) dst[ox] += coef * src[ox];
          }
        }
    }
  }
}

void conv2d_backward(const Tensor& x, const Tensor& w, PadMode pad, const Tensor& gy,
                     Tensor* gx, Tensor* gw, Tensor* gb) {
  const int Cin = x.dim(0), H = x.dim(1), W = x.dim(2);
  const int Cout = w.dim(0), k = w.dim(2), p = k / 2;
  CMDSR_REQUIRE(gy.shape == std::vector<int>({Cout, H, W}), "conv2d_backward: bad gy shape");
  const int Wp = W + 2 * p;

  if (gb) {
    for (int oc = 0; oc < Cout; ++oc) {
      const double* g = &gy.v[static_cast<size_t>(oc) * H * W];
      double acc = 0.0;
      for (int64_t i = 0; i < static_cast<int64_t>(H) * W; ++i) acc += g[i];
      (*gb)[oc] += acc;
    }
  }

  if (gw) {
    const Tensor xp = pad_input(x, p, pad);
    for (int oc = 0; oc < Cout; ++oc) {
      const double* g = &gy.v[static_cast<size_t>(oc) * H * W];
      for (int ic = 0; ic < Cin; ++ic) {
        const double* plane = &xp.v[static_cast<size_t>(ic) * (H + 2 * p) * Wp];
        for (int ky = 0; ky < k; ++ky)
          for (int kx = 0; kx < k; ++kx) {
            double acc = 0.0;
            for (int oy = 0; oy < H; ++oy)
              acc += dot(g + static_cast<size_t>(oy) * W,
                         plane + static_cast<size_t>(oy + ky) * Wp + kx, W);
            gw->at4(oc, ic, ky, kx) += acc;
          }
      }
    }
  }

  if (gx) {
    Tensor gxp({Cin, H + 2 * p, Wp});
    for (int oc = 0; oc < Cout; ++oc) {
      const double* g = &gy.v[static_cast<size_t>(oc) * H * W];
      for (int ic = 0; ic < Cin; ++ic) {
        double* plane = &gxp.v[static_cast<size_t>(ic) * (H + 2 * p) * Wp];
        for (int ky = 0; ky < k; ++ky)
          for (int kx = 0; kx < k; ++kx) {
            const double coef = w.at4(oc, ic, ky, kx);
            if (coef == 0.0) continue;
            for (int oy = 0; oy < H; ++oy) {
              double* dst = plane + static_cast<size_t>(oy + ky) * Wp + kx;
              const double* src = g + static_cast<size_t>(oy) * W;
              for (int ox = 0; ox < W; ++ox) dst[ox] += coef * src[ox];
            }
          }
      }
    }
    fold_padded_grad(gxp, p, pad, *gx);
  }
}

void relu_forward(const Tensor& x, Tensor& y) {
  y = Tensor(x.shape);
  for (int64_t i = 0; i < x.numel(); ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward(const Tensor& x, const Tensor& gy, Tensor& gx) {
  for (int64_t i = 0; i < x.numel(); ++i)
    if (x[i] > 0.0) gx[i] += gy[i];
}

void avgpool2_forward(const Tensor& x, Tensor& y) {
  const int C = x.dim(0), H = x.dim(1), W = x.dim(2);
  CMDSR_REQUIRE(H % 2 == 0 && W % 2 == 0, "avgpool2: H and W must be even, got " << H
                                                                                 << "x" << W);
  y = Tensor({C, H / 2, W / 2});
  for (int c = 0; c < C; ++c)
    for (int oy = 0; oy < H / 2; ++oy)
      for (int ox = 0; ox < W / 2; ++ox)
        y.at3(c, oy, ox) = 0.25 * (x.at3(c, 2 * oy, 2 * ox) + x.at3(c, 2 * oy, 2 * ox + 1) +
                                   x.at3(c, 2 * oy + 1, 2 * ox) +
                                   x.at3(c, 2 * oy + 1, 2 * ox + 1));
}

void avgpool2_backward(const Tensor& gy, Tensor& gx) {
  const int C = gy.dim(0), Ho = gy.dim(1), Wo = gy.dim(2);
  for (int c = 0; c < C; ++c)
    for (int oy = 0; oy < Ho; ++oy)
      for (int ox = 0; ox < Wo; ++ox) {
        const double g = 0.25 * gy.at3(c, oy, ox);
        gx.at3(c, 2 * oy, 2 * ox) += g;
        gx.at3(c, 2 * oy, 2 * ox + 1) += g;
        gx.at3(c, 2 * oy + 1, 2 * ox) += g;
        gx.at3(c, 2 * oy + 1, 2 * ox + 1) += g;
      }
}

void pixel_shuffle_forward(const Tensor& x, int r, Tensor& y) {
  const int C = x.dim(0), H = x.dim(1), W = x.dim(2);
  CMDSR_REQUIRE(C % (r * r) == 0, "pixel_shuffle: channels " << C << " not divisible by r^2");
  const int Co = C / (r * r);
  y = Tensor({Co, H * r, W * r});
  for (int c = 0; c < Co; ++c)
    for (int oy = 0; oy < H * r; ++oy)
      for (int ox = 0; ox < W * r; ++ox)
        y.at3(c, oy, ox) = x.at3(c * r * r + (oy % r) * r + (ox % r), oy / r, ox / r);
}

void pixel_shuffle_backward(const Tensor& gy, int r, Tensor& gx) {
  const int Co = gy.dim(0), Ho = gy.dim(1), Wo = gy.dim(2);
  for (int c = 0; c < Co; ++c)
    for (int oy = 0; oy < Ho; ++oy)
      for (int ox = 0; ox < Wo; ++ox)
        gx.at3(c * r * r + (oy % r) * r + (ox % r), oy / r, ox / r) += gy.at3(c, oy, ox);
}

void global_avg_forward(const Tensor& x, Tensor& y) {
  const int C = x.dim(0);
  const int64_t plane = static_cast<int64_t>(x.dim(1)) * x.dim(2);
  y = Tensor({C});
  for (int c = 0; c < C; ++c) {
    const double* p = &x.v[static_cast<size_t>(c) * plane];
    double acc = 0.0;
    for (int64_t i = 0; i < plane; ++i) acc += p[i];
    y[c] = acc / static_cast<double>(plane);
  }
}

void global_avg_backward(const Tensor& gy, Tensor& gx) {
  const int C = gx.dim(0);
  const int64_t plane = static_cast<int64_t>(gx.dim(1)) * gx.dim(2);
  for (int c = 0; c < C; ++c) {
    const double g = gy[c] / static_cast<double>(plane);
    double* p = &gx.v[static_cast<size_t>(c) * plane];
    for (int64_t i = 0; i < plane; ++i) p[i] += g;
  }
}

void linear_forward(const Tensor& A, const Tensor& b, const Tensor& x, Tensor& y) {
  const int out = A.dim(0), in = A.dim(1);
  CMDSR_REQUIRE(x.numel() == in, "linear: input length " << x.numel() << " != " << in);
  CMDSR_REQUIRE(b.numel() == 0 || b.numel() == out, "linear: bias length mismatch");
  y = Tensor({out});
  for (int o = 0; o < out; ++o)
    y[o] = (b.numel() ? b[o] : 0.0) + dot(&A.v[static_cast<size_t>(o) * in], x.data(), in);
}

void linear_backward(const Tensor& A, const Tensor& x, const Tensor& gy, Tensor* gA,
                     Tensor* gb, Tensor* gx) {
  const int out = A.dim(0), in = A.dim(1);
  for (int o = 0; o < out; ++o) {
    const double g = gy[o];
    if (gb) (*gb)[o] += g;
    if (gA) {
      double* row = &gA->v[static_cast<size_t>(o) * in];
      for (int i = 0; i < in; ++i) row[i] += g * x[i];
    }
    if (gx) {
      const double* row = &A.v[static_cast<size_t>(o) * in];
      for (int i = 0; i < in; ++i) (*gx)[i] += g * row[i];
    }
  }
}

void scale_channels_forward(const Tensor& w, const Tensor& c, Tensor& y) {
  const int Q = w.dim(0);
  CMDSR_REQUIRE(c.numel() == Q, "scale_channels: " << c.numel() << " coefficients for " << Q
                                                   << " channels");
  const int64_t slice = w.numel() / Q;
  y = Tensor(w.shape);
  for (int q = 0; q < Q; ++q) {
    const double s = c[q];
    const double* src = &w.v[static_cast<size_t>(q) * slice];
    double* dst = &y.v[static_cast<size_t>(q) * slice];
    for (int64_t i = 0; i < slice; ++i) dst[i] = src[i] * s;
  }
}

void scale_channels_backward(const Tensor& w, const Tensor& c, const Tensor& gy,
                             Tensor* gw, Tensor* gc) {
  const int Q = w.dim(0);
  const int64_t slice = w.numel() / Q;
  for (int q = 0; q < Q; ++q) {
    const double* g = &gy.v[static_cast<size_t>(q) * slice];
    if (gw) {
      const double s = c[q];
      double* dst = &gw->v[static_cast<size_t>(q) * slice];
      for (int64_t i = 0; i < slice; ++i) dst[i] += s * g[i];
    }
    if (gc) (*gc)[q] += dot(g, &w.v[static_cast<size_t>(q) * slice], slice);
  }
}

}  // namespace cmdsr::nn
