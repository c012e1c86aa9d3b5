// Copyright 2026 The hodgeflow Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace hodgeflow::nn {

using Matrix = Eigen::MatrixXd;

// sign(x) * max(|x| - |tau|, 0). Odd in x, bit-exactly.
double soft_threshold(double x, double tau);
Matrix soft_threshold(const Matrix& x, double tau);

Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

class Tape;

// Handle to a node recorded on a Tape.
class Var {
 public:
  Var() = default;
  int id() const { return id_; }

 private:
  friend class Tape;
  explicit Var(int id) : id_(id) {}
  int id_ = -1;
};

// Append-only record of dense matrix operations for reverse-mode
// differentiation. Nodes are stored in creation order, which is a topological
// order of the computation graph, so backward() is a single reverse sweep.
// A Tape is single-threaded; use one per worker.
class Tape {
 public:
  Var leaf(Matrix value);      // differentiable input
  Var constant(Matrix value);  // no gradient

  const Matrix& value(Var v) const;
  // Gradient of the last backward() root with respect to v. Zero-shaped
  // matrix for nodes that do not require a gradient.
  const Matrix& grad(Var v) const;
  int size() const { return static_cast<int>(nodes_.size()); }

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var scale(Var a, double s);
  // Elementwise soft-threshold with a 1x1 threshold node.
  Var soft_threshold(Var x, Var tau);
  Var relu(Var x);
  // input: C_in x L. weight: C_out x (C_in * kernel), column c * kernel + t
  // multiplies input channel c at offset t. bias: C_out x 1. Valid padding.
  Var conv1d(Var input, Var weight, Var bias, int kernel, int stride);
  // Non-overlapping max over windows of `width` columns per row; width <= 0
  // pools each row globally.
  Var max_pool(Var x, int width);
  // C x L -> (C * L) x 1, row by row.
  Var flatten(Var x);
  // weight (k x d) * x (d x 1) + bias (k x 1).
  Var affine(Var x, Var weight, Var bias);
  // Scalar -log softmax(logits)[label].
  Var softmax_cross_entropy(Var logits, int label);
  // Scalar mean over `rows` of (pred(r, 0) - target[r])^2.
  Var masked_mse(Var pred, const Eigen::VectorXd& target, std::span<const int> rows);
  // Scalar sum of squared entries.
  Var sum_squares(Var x);

  // Seeds d(root)/d(root) = 1 for a 1x1 root and propagates to all nodes.
  void backward(Var root);

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    std::function<void(Tape&, int)> backprop;
  };

  Var push(Matrix value, bool requires_grad, std::function<void(Tape&, int)> backprop);
  Node& node(Var v);
  const Node& node(Var v) const;
  bool needs(Var v) const { return node(v).requires_grad; }
  void accumulate(Var v, const Matrix& g);

  std::vector<Node> nodes_;
};

}  // namespace hodgeflow::nn
