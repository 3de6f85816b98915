#pragma once

// Tensor math shared by the training graph and the direct inference paths.
// All convolutions are "same" shape with padding (k-1)/2, stride 1.

#include "cmdsr/tensor.hpp"

namespace cmdsr::nn {

enum class PadMode { zero, reflect };

// x: [Cin,H,W], w: [Cout,Cin,k,k] (k odd), b: [Cout] or empty. y: [Cout,H,W].
void conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, PadMode pad,
                    Tensor& y);

// Accumulates into whichever gradients are non-null (they must be pre-shaped).
void conv2d_backward(const Tensor& x, const Tensor& w, PadMode pad, const Tensor& gy,
                     Tensor* gx, Tensor* gw, Tensor* gb);

void relu_forward(const Tensor& x, Tensor& y);
void relu_backward(const Tensor& x, const Tensor& gy, Tensor& gx);

// 2x2 average pooling; H and W must be even.
void avgpool2_forward(const Tensor& x, Tensor& y);
void avgpool2_backward(const Tensor& gy, Tensor& gx);

// [C*r*r, H, W] -> [C, H*r, W*r]; out(c, y, x) = in(c*r*r + (y%r)*r + x%r, y/r, x/r).
void pixel_shuffle_forward(const Tensor& x, int r, Tensor& y);
void pixel_shuffle_backward(const Tensor& gy, int r, Tensor& gx);

// [C,H,W] -> [C] spatial mean.
void global_avg_forward(const Tensor& x, Tensor& y);
void global_avg_backward(const Tensor& gy, Tensor& gx);

// y = A x + b with A: [out,in], x: [in], b: [out].
void linear_forward(const Tensor& A, const Tensor& b, const Tensor& x, Tensor& y);
void linear_backward(const Tensor& A, const Tensor& x, const Tensor& gy, Tensor* gA,
                     Tensor* gb, Tensor* gx);

// y[q, ...] = w[q, ...] * c[q] over the leading dimension.
void scale_channels_forward(const Tensor& w, const Tensor& c, Tensor& y);
void scale_channels_backward(const Tensor& w, const Tensor& c, const Tensor& gy,
                             Tensor* gw, Tensor* gc);

// Blocked dot product with a fixed deterministic summation order.
double dot(const double* a, const double* b, int64_t n);

}  // namespace cmdsr::nn
