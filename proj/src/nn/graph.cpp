#include "cmdsr/nn/graph.hpp"

#include <cmath>

#include "cmdsr/check.hpp"
#include "cmdsr/losses.hpp"

namespace cmdsr::nn {

Tensor& Node::ensure_grad() {
  if (!has_grad) {
    grad = Tensor(value.shape);
    has_grad = true;
  }
  return grad;
}

void Node::accumulate(const Tensor& g) {
  Tensor& dst = ensure_grad();
  for (int64_t i = 0; i < g.numel(); ++i) dst[i] += g[i];
}

Node* Graph::make(Tensor value, bool requires_grad, std::function<void(Node&)> backprop) {
  nodes_.emplace_back();
  Node& n = nodes_.back();
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  n.backprop = std::move(backprop);
  return &n;
}

Node* Graph::leaf(Tensor value, bool requires_grad) {
  return make(std::move(value), requires_grad, nullptr);
}

Node* Graph::conv2d(Node* x, Node* w, Node* b, PadMode pad) {
  Tensor y;
  conv2d_forward(x->value, w->value, b ? b->value : Tensor{}, pad, y);
  const bool rg = x->requires_grad || w->requires_grad || (b && b->requires_grad);
  return make(std::move(y), rg, [x, w, b, pad](Node& self) {
    Tensor* gx = x->requires_grad ? &x->ensure_grad() : nullptr;
    Tensor* gw = w->requires_grad ? &w->ensure_grad() : nullptr;
    Tensor* gb = (b && b->requires_grad) ? &b->ensure_grad() : nullptr;
    conv2d_backward(x->value, w->value, pad, self.grad, gx, gw, gb);
  });
}

Node* Graph::relu(Node* x) {
  Tensor y;
  relu_forward(x->value, y);
  return make(std::move(y), x->requires_grad, [x](Node& self) {
    if (x->requires_grad) relu_backward(x->value, self.grad, x->ensure_grad());
  });
}

Node* Graph::avgpool2(Node* x) {
  Tensor y;
  avgpool2_forward(x->value, y);
  return make(std::move(y), x->requires_grad, [x](Node& self) {
    if (x->requires_grad) avgpool2_backward(self.grad, x->ensure_grad());
  });
}

Node* Graph::pixel_shuffle(Node* x, int r) {
  Tensor y;
  pixel_shuffle_forward(x->value, r, y);
  return make(std::move(y), x->requires_grad, [x, r](Node& self) {
    if (x->requires_grad) pixel_shuffle_backward(self.grad, r, x->ensure_grad());
  });
}

Node* Graph::global_avg(Node* x) {
  Tensor y;
  global_avg_forward(x->value, y);
  return make(std::move(y), x->requires_grad, [x](Node& self) {
    if (x->requires_grad) global_avg_backward(self.grad, x->ensure_grad());
  });
}

Node* Graph::linear(Node* A, Node* b, Node* x) {
  Tensor y;
  linear_forward(A->value, b ? b->value : Tensor{}, x->value, y);
  const bool rg = A->requires_grad || x->requires_grad || (b && b->requires_grad);
  return make(std::move(y), rg, [A, b, x](Node& self) {
    linear_backward(A->value, x->value, self.grad,
                    A->requires_grad ? &A->ensure_grad() : nullptr,
                    (b && b->requires_grad) ? &b->ensure_grad() : nullptr,
                    x->requires_grad ? &x->ensure_grad() : nullptr);
  });
}

Node* Graph::scale_channels(Node* w, Node* c) {
  Tensor y;
  scale_channels_forward(w->value, c->value, y);
  const bool rg = w->requires_grad || c->requires_grad;
  return make(std::move(y), rg, [w, c](Node& self) {
    scale_channels_backward(w->value, c->value, self.grad,
                            w->requires_grad ? &w->ensure_grad() : nullptr,
                            c->requires_grad ? &c->ensure_grad() : nullptr);
  });
}

Node* Graph::add(Node* a, Node* b) {
  CMDSR_REQUIRE(a->value.same_shape(b->value), "add: shape mismatch");
  Tensor y(a->value.shape);
  for (int64_t i = 0; i < y.numel(); ++i) y[i] = a->value[i] + b->value[i];
  const bool rg = a->requires_grad || b->requires_grad;
  return make(std::move(y), rg, [a, b](Node& self) {
    if (a->requires_grad) a->accumulate(self.grad);
    if (b->requires_grad) b->accumulate(self.grad);
  });
}

Node* Graph::l1_mean(Node* a, Node* b) {
  CMDSR_REQUIRE(a->value.same_shape(b->value), "l1_mean: shape mismatch");
  const int64_t n = a->value.numel();
  double acc = 0.0;
  for (int64_t i = 0; i < n; ++i) acc += std::fabs(a->value[i] - b->value[i]);
  const bool rg = a->requires_grad || b->requires_grad;
  return make(Tensor::scalar(acc / static_cast<double>(n)), rg, [a, b, n](Node& self) {
    const double g = self.grad[0] / static_cast<double>(n);
    Tensor* ga = a->requires_grad ? &a->ensure_grad() : nullptr;
    Tensor* gb = b->requires_grad ? &b->ensure_grad() : nullptr;
    for (int64_t i = 0; i < n; ++i) {
      const double d = a->value[i] - b->value[i];
      const double s = d > 0.0 ? g : (d < 0.0 ? -g : 0.0);
      if (ga) (*ga)[i] += s;
      if (gb) (*gb)[i] -= s;
    }
  });
}

Node* Graph::l2sq(Node* a, Node* b) {
  CMDSR_REQUIRE(a->value.same_shape(b->value), "l2sq: shape mismatch");
  const int64_t n = a->value.numel();
  double acc = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    const double d = a->value[i] - b->value[i];
    acc += d * d;
  }
  const bool rg = a->requires_grad || b->requires_grad;
  return make(Tensor::scalar(acc), rg, [a, b, n](Node& self) {
    const double g = self.grad[0];
    Tensor* ga = a->requires_grad ? &a->ensure_grad() : nullptr;
    Tensor* gb = b->requires_grad ? &b->ensure_grad() : nullptr;
    for (int64_t i = 0; i < n; ++i) {
      const double d = 2.0 * g * (a->value[i] - b->value[i]);
      if (ga) (*ga)[i] += d;
      if (gb) (*gb)[i] -= d;
    }
  });
}

Node* Graph::task_contrastive(Node* l_inner, Node* l_cross) {
  CMDSR_REQUIRE(l_inner->value.numel() == 1 && l_cross->value.numel() == 1,
                "task_contrastive: scalar inputs required");
  const double li = l_inner->value[0], lc = l_cross->value[0];
  const double v = task_contrastive_loss(li, lc);
  const bool rg = l_inner->requires_grad || l_cross->requires_grad;
  return make(Tensor::scalar(v), rg, [l_inner, l_cross, li, lc](Node& self) {
    const double g = self.grad[0];
    if (l_inner->requires_grad) l_inner->ensure_grad()[0] += g * sigmoid(li);
    if (l_cross->requires_grad) l_cross->ensure_grad()[0] -= g * sigmoid(-lc);
  });
}

Node* Graph::weighted_sum(const std::vector<Node*>& xs, const std::vector<double>& weights) {
  CMDSR_REQUIRE(xs.size() == weights.size() && !xs.empty(), "weighted_sum: size mismatch");
  double acc = 0.0;
  bool rg = false;
  for (size_t i = 0; i < xs.size(); ++i) {
    CMDSR_REQUIRE(xs[i]->value.numel() == 1, "weighted_sum: scalar inputs required");
    acc += weights[i] * xs[i]->value[0];
    rg = rg || xs[i]->requires_grad;
  }
  auto xs_copy = xs;
  auto w_copy = weights;
  return make(Tensor::scalar(acc), rg, [xs_copy, w_copy](Node& self) {
    const double g = self.grad[0];
    for (size_t i = 0; i < xs_copy.size(); ++i)
      if (xs_copy[i]->requires_grad) xs_copy[i]->ensure_grad()[0] += g * w_copy[i];
  });
}

void Graph::backward(Node* root) {
  CMDSR_REQUIRE(root->value.numel() == 1, "backward: root must be scalar");
  CMDSR_REQUIRE(root->requires_grad, "backward: root does not require grad");
  root->ensure_grad()[0] += 1.0;
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    Node& n = *it;
    if (n.backprop && n.requires_grad && n.has_grad) n.backprop(n);
  }
}

}  // namespace cmdsr::nn
