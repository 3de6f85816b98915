#pragma once

// Brute-force oracles used by the test suites. These implementations are
// deliberately slow and share no code with the production paths they verify.

#include <functional>
#include <string>
#include <vector>

#include "cmdsr/degradation.hpp"
#include "cmdsr/image.hpp"

namespace cmdsr::testkit {

// Quadruple-loop per-channel 2-D correlation with symmetric reflection.
Image conv2d_reference(const Image& img, const BlurKernel& kernel);

// Central differences (f(x+h) - f(x-h)) / 2h with h = step * max(1, |x_i|).
std::vector<double> finite_difference_grad(
    const std::function<double(const std::vector<double>&)>& fn,
    const std::vector<double>& point, double step);

struct GradCheckReport {
  std::string name;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
};

inline double rel_error(double a, double n) {
  const double denom = std::max({std::fabs(a), std::fabs(n), 1e-12});
  return std::fabs(a - n) / denom;
}

// Central difference for a single coordinate of fn's input.
double finite_difference_at(const std::function<double(const std::vector<double>&)>& fn,
                            std::vector<double> point, size_t i, double step);

// Second-moment analysis of a kernel grid: principal axis angle in
// (-pi/2, pi/2] and the moment eigenvalues (largest first).
struct KernelMoments {
  double angle = 0.0;
  double eig1 = 0.0;
  double eig2 = 0.0;
};
KernelMoments kernel_moments(const BlurKernel& kernel);

// mean pairwise cross-group L2 distance / mean pairwise inner-group distance
// over a labelled feature table.
double separability_ratio(const std::vector<std::vector<double>>& features,
                          const std::vector<int>& labels);

// Closed forms for images differing by a constant offset.
inline double psnr_for_uniform_offset(double offset) {
  return 10.0 * std::log10(1.0 / (offset * offset));
}
inline double l1_for_uniform_offset(double offset) { return std::fabs(offset); }

}  // namespace cmdsr::testkit
