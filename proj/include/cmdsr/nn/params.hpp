#pragma once

#include <string>
#include <vector>

#include "cmdsr/nn/graph.hpp"
#include "cmdsr/tensor.hpp"

namespace cmdsr::nn {

// Named persistent parameter. Models own their Params; optimizers and the
// checkpoint code hold pointers, so model objects must stay put once training
// machinery is attached.
struct Param {
  std::string name;
  Tensor value;
};

// Graph leaves for a parameter list, index-aligned with `params`.
struct BoundParams {
  std::vector<Param*> params;
  std::vector<Node*> nodes;
};

inline BoundParams bind(Graph& g, std::vector<Param*> params, bool requires_grad) {
  BoundParams b;
  b.params = std::move(params);
  b.nodes.reserve(b.params.size());
  for (Param* p : b.params) b.nodes.push_back(g.leaf(p->value, requires_grad));
  return b;
}

}  // namespace cmdsr::nn
