#pragma once

// Small eager reverse-mode autodiff over Tensor values. Nodes are created in
// execution order; backward() walks them in reverse. Branches that reach no
// grad-requiring leaf are pruned automatically via requires_grad propagation.

#include <deque>
#include <functional>
#include <vector>

#include "cmdsr/nn/kernels.hpp"
#include "cmdsr/tensor.hpp"

namespace cmdsr::nn {

struct Node {
  Tensor value;
  Tensor grad;
  bool requires_grad = false;
  bool has_grad = false;  // grad tensor allocated and live
  std::function<void(Node&)> backprop;

  void accumulate(const Tensor& g);
  Tensor& ensure_grad();
};

class Graph {
 public:
  Node* leaf(Tensor value, bool requires_grad);

  Node* conv2d(Node* x, Node* w, Node* b, PadMode pad);
  Node* relu(Node* x);
  Node* avgpool2(Node* x);
  Node* pixel_shuffle(Node* x, int r);
  Node* global_avg(Node* x);
  Node* linear(Node* A, Node* b, Node* x);
  Node* scale_channels(Node* w, Node* c);
  Node* add(Node* a, Node* b);

  // Scalar-valued reductions.
  Node* l1_mean(Node* a, Node* b);
  Node* l2sq(Node* a, Node* b);
  // softplus(-l_cross) + softplus(l_inner); both inputs scalar.
  Node* task_contrastive(Node* l_inner, Node* l_cross);
  // sum_i weights[i] * xs[i]; all xs scalar.
  Node* weighted_sum(const std::vector<Node*>& xs, const std::vector<double>& weights);

  // Seeds d(root)/d(root) = 1 and runs all reachable backprop closures.
  void backward(Node* root);

  size_t size() const { return nodes_.size(); }

 private:
  Node* make(Tensor value, bool requires_grad, std::function<void(Node&)> backprop);
  std::deque<Node> nodes_;
};

}  // namespace cmdsr::nn
