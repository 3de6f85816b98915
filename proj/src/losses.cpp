#include "cmdsr/losses.hpp"

#include <cmath>

#include "cmdsr/check.hpp"

namespace cmdsr {

double softplus(double x) {
  if (x > 30.0) return x;
  if (x < -30.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double l1_reconstruction(const Tensor& sr, const Tensor& hr) {
  CMDSR_REQUIRE(sr.same_shape(hr), "l1_reconstruction: shape mismatch");
  double acc = 0.0;
  for (int64_t i = 0; i < sr.numel(); ++i) acc += std::fabs(sr[i] - hr[i]);
  return acc / static_cast<double>(sr.numel());
}

double l1_reconstruction(const std::vector<Tensor>& sr_batch,
                         const std::vector<Tensor>& hr_batch) {
  CMDSR_REQUIRE(sr_batch.size() == hr_batch.size() && !sr_batch.empty(),
                "l1_reconstruction: batch size mismatch");
  double acc = 0.0;
  int64_t count = 0;
  for (size_t b = 0; b < sr_batch.size(); ++b) {
    const Tensor& sr = sr_batch[b];
    const Tensor& hr = hr_batch[b];
    CMDSR_REQUIRE(sr.same_shape(hr), "l1_reconstruction: shape mismatch at entry " << b);
    for (int64_t i = 0; i < sr.numel(); ++i) acc += std::fabs(sr[i] - hr[i]);
    count += sr.numel();
  }
  return acc / static_cast<double>(count);
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  CMDSR_REQUIRE(a.size() == b.size(), "feature length mismatch: " << a.size() << " vs "
                                                                  << b.size());
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace

double inner_task_loss(std::span<const double> f1, std::span<const double> f2) {
  return squared_distance(f1, f2);
}

double cross_task_loss(std::span<const double> fi, std::span<const double> fj) {
  return squared_distance(fi, fj);
}

double task_contrastive_loss(double l_inner, double l_cross) {
  return softplus(-l_cross) + softplus(l_inner);
}

double combined_loss(double l_con, double l_res, double lambda) {
  CMDSR_REQUIRE(lambda >= 0.0, "combined_loss: lambda must be >= 0");
  return l_con + lambda * l_res;
}

}  // namespace cmdsr
