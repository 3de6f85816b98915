#pragma once

#include <cstdint>
#include <vector>

namespace cmdsr {

// Dense row-major tensor of doubles. Rank is small (<= 4) everywhere in this
// project; shapes are carried as plain int vectors.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> v;

  Tensor() = default;
  explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
    v.assign(static_cast<size_t>(numel_of(shape)), 0.0);
  }

  static int64_t numel_of(const std::vector<int>& s) {
    int64_t n = 1;
    for (int d : s) n *= d;
    return n;
  }

  static Tensor zeros(std::vector<int> s) { return Tensor(std::move(s)); }

  static Tensor full(std::vector<int> s, double x) {
    Tensor t(std::move(s));
    for (double& e : t.v) e = x;
    return t;
  }

  static Tensor scalar(double x) {
    Tensor t({1});
    t.v[0] = x;
    return t;
  }

  int64_t numel() const { return static_cast<int64_t>(v.size()); }
  int rank() const { return static_cast<int>(shape.size()); }
  int dim(int i) const { return shape[static_cast<size_t>(i)]; }
  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  double* data() { return v.data(); }
  const double* data() const { return v.data(); }

  double& operator[](int64_t i) { return v[static_cast<size_t>(i)]; }
  double operator[](int64_t i) const { return v[static_cast<size_t>(i)]; }

  // Unchecked indexers for the common ranks.
  double& at3(int c, int y, int x) {
    return v[(static_cast<size_t>(c) * shape[1] + y) * shape[2] + x];
  }
  double at3(int c, int y, int x) const {
    return v[(static_cast<size_t>(c) * shape[1] + y) * shape[2] + x];
  }
  double& at4(int o, int c, int y, int x) {
    return v[((static_cast<size_t>(o) * shape[1] + c) * shape[2] + y) * shape[3] + x];
  }
  double at4(int o, int c, int y, int x) const {
    return v[((static_cast<size_t>(o) * shape[1] + c) * shape[2] + y) * shape[3] + x];
  }

  void fill(double x) {
    for (double& e : v) e = x;
  }
};

}  // namespace cmdsr
