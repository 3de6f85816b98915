#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "cmdsr/tensor.hpp"

namespace cmdsr {

// Scalar loss with a component breakdown for logging.
struct LossValue {
  double value = 0.0;
  std::map<std::string, double> components;
};

// Overflow-safe softplus ln(1 + e^x): x for x > 30, e^x for x < -30.
double softplus(double x);
double sigmoid(double x);

// Mean absolute difference over all pixels, channels and batch entries.
double l1_reconstruction(const Tensor& sr, const Tensor& hr);
double l1_reconstruction(const std::vector<Tensor>& sr_batch,
                         const std::vector<Tensor>& hr_batch);

// Squared Euclidean distance between two feature vectors.
double inner_task_loss(std::span<const double> f1, std::span<const double> f2);
double cross_task_loss(std::span<const double> fi, std::span<const double> fj);

// ln(1 + e^{-l_cross}) + ln(1 + e^{l_inner}).
double task_contrastive_loss(double l_inner, double l_cross);

// l_con + lambda * l_res.
double combined_loss(double l_con, double l_res, double lambda);

}  // namespace cmdsr
