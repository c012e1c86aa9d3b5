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

#include "hodgeflow/autodiff.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hodgeflow/error.hpp"

namespace hodgeflow::nn {

namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorCode::kShapeMismatch, std::string(op) + ": " + shape(a) + " vs " + shape(b));
  }
}

}  // namespace

double soft_threshold(double x, double tau) {
  const double mag = std::abs(x) - std::abs(tau);
  if (mag <= 0.0) return 0.0;
  return x > 0.0 ? mag : -mag;
}

Matrix soft_threshold(const Matrix& x, double tau) {
  return x.unaryExpr([tau](double v) { return soft_threshold(v, tau); });
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  const double m = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - m).exp().matrix();
  return e / e.sum();
}

Var Tape::push(Matrix value, bool requires_grad, std::function<void(Tape&, int)> backprop) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  if (requires_grad) n.backprop = std::move(backprop);
  nodes_.push_back(std::move(n));
  return Var(static_cast<int>(nodes_.size()) - 1);
}

Tape::Node& Tape::node(Var v) {
  if (v.id_ < 0 || v.id_ >= size()) fail(ErrorCode::kInvalidArgument, "variable not on this tape");
  return nodes_[static_cast<std::size_t>(v.id_)];
}

const Tape::Node& Tape::node(Var v) const {
  if (v.id_ < 0 || v.id_ >= size()) fail(ErrorCode::kInvalidArgument, "variable not on this tape");
  return nodes_[static_cast<std::size_t>(v.id_)];
}

void Tape::accumulate(Var v, const Matrix& g) {
  Node& n = node(v);
  if (!n.requires_grad) return;
  if (n.grad.size() == 0) {
    n.grad = g;
  } else {
    n.grad += g;
  }
}

Var Tape::leaf(Matrix value) { return push(std::move(value), true, [](Tape&, int) {}); }

Var Tape::constant(Matrix value) { return push(std::move(value), false, nullptr); }

const Matrix& Tape::value(Var v) const { return node(v).value; }

const Matrix& Tape::grad(Var v) const { return node(v).grad; }

Var Tape::matmul(Var a, Var b) {
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (av.cols() != bv.rows()) {
    fail(ErrorCode::kShapeMismatch, "matmul: " + shape(av) + " * " + shape(bv));
  }
  return push(av * bv, needs(a) || needs(b), [a, b](Tape& t, int self) {
    const Matrix& g = t.nodes_[self].grad;
    if (t.needs(a)) t.accumulate(a, g * t.value(b).transpose());
    if (t.needs(b)) t.accumulate(b, t.value(a).transpose() * g);
  });
}

Var Tape::add(Var a, Var b) {
  require_same_shape(value(a), value(b), "add");
  return push(value(a) + value(b), needs(a) || needs(b), [a, b](Tape& t, int self) {
    const Matrix& g = t.nodes_[self].grad;
    t.accumulate(a, g);
    t.accumulate(b, g);
  });
}

Var Tape::scale(Var a, double s) {
  return push(s * value(a), needs(a), [a, s](Tape& t, int self) {
    t.accumulate(a, s * t.nodes_[self].grad);
  });
}

Var Tape::soft_threshold(Var x, Var tau) {
  const Matrix& tv = value(tau);
  if (tv.size() != 1) fail(ErrorCode::kShapeMismatch, "soft_threshold: threshold must be 1x1");
  const double t = tv(0, 0);
  return push(nn::soft_threshold(value(x), t), needs(x) || needs(tau),
              [x, tau, t](Tape& tape, int self) {
                const Matrix& g = tape.nodes_[self].grad;
                const Matrix& xv = tape.value(x);
                const double at = std::abs(t);
                // Active where |x| > |tau|: d/dx = 1, d/dtau = -sign(x) sign(tau).
                const Matrix active =
                    (xv.array().abs() > at).cast<double>().matrix();
                if (tape.needs(x)) tape.accumulate(x, g.cwiseProduct(active));
                if (tape.needs(tau)) {
                  const double tau_sign = t < 0.0 ? -1.0 : 1.0;
                  const double s =
                      -(g.array() * active.array() * xv.array().sign()).sum() * tau_sign;
                  tape.accumulate(tau, Matrix::Constant(1, 1, s));
                }
              });
}

Var Tape::relu(Var x) {
  return push(value(x).cwiseMax(0.0), needs(x), [x](Tape& t, int self) {
    const Matrix mask = (t.value(x).array() > 0.0).cast<double>().matrix();
    t.accumulate(x, t.nodes_[self].grad.cwiseProduct(mask));
  });
}

Var Tape::conv1d(Var input, Var weight, Var bias, int kernel, int stride) {
  const Matrix& in = value(input);
  const Matrix& w = value(weight);
  const Matrix& b = value(bias);
  const Eigen::Index c_in = in.rows();
  const Eigen::Index len = in.cols();
  if (kernel < 1 || stride < 1) fail(ErrorCode::kShapeChainBroken, "conv1d: kernel and stride must be positive");
  if (w.cols() != c_in * kernel) {
    fail(ErrorCode::kShapeChainBroken, "conv1d: weight " + shape(w) + " for " +
                                           std::to_string(c_in) + " input channels, kernel " +
                                           std::to_string(kernel));
  }
  if (b.rows() != w.rows() || b.cols() != 1) {
    fail(ErrorCode::kShapeChainBroken, "conv1d: bias " + shape(b) + " for weight " + shape(w));
  }
  if (len < kernel) {
    fail(ErrorCode::kShapeChainBroken, "conv1d: input length " + std::to_string(len) +
                                           " shorter than kernel " + std::to_string(kernel));
  }
  const Eigen::Index out_len = (len - kernel) / stride + 1;
  Matrix patches(c_in * kernel, out_len);
  for (Eigen::Index j = 0; j < out_len; ++j) {
    for (Eigen::Index c = 0; c < c_in; ++c) {
      patches.block(c * kernel, j, kernel, 1) = in.block(c, j * stride, 1, kernel).transpose();
    }
  }
  Matrix out = w * patches;
  out.colwise() += b.col(0);
  return push(std::move(out), needs(input) || needs(weight) || needs(bias),
              [input, weight, bias, kernel, stride, patches](Tape& t, int self) {
                const Matrix& g = t.nodes_[self].grad;
                if (t.needs(weight)) t.accumulate(weight, g * patches.transpose());
                if (t.needs(bias)) t.accumulate(bias, g.rowwise().sum());
                if (t.needs(input)) {
                  const Matrix dp = t.value(weight).transpose() * g;
                  const Matrix& in = t.value(input);
                  Matrix din = Matrix::Zero(in.rows(), in.cols());
                  for (Eigen::Index j = 0; j < dp.cols(); ++j) {
                    for (Eigen::Index c = 0; c < in.rows(); ++c) {
                      din.block(c, j * stride, 1, kernel) +=
                          dp.block(c * kernel, j, kernel, 1).transpose();
                    }
                  }
                  t.accumulate(input, din);
                }
              });
}

Var Tape::max_pool(Var x, int width) {
  const Matrix& xv = value(x);
  const Eigen::Index w = width <= 0 ? xv.cols() : width;
  if (w == 0 || xv.cols() < w) {
    fail(ErrorCode::kShapeChainBroken, "max_pool: width " + std::to_string(w) +
                                           " exceeds length " + std::to_string(xv.cols()));
  }
  const Eigen::Index out_len = xv.cols() / w;
  Matrix out(xv.rows(), out_len);
  Eigen::MatrixXi arg(xv.rows(), out_len);
  for (Eigen::Index r = 0; r < xv.rows(); ++r) {
    for (Eigen::Index j = 0; j < out_len; ++j) {
      Eigen::Index best = j * w;
      for (Eigen::Index c = j * w + 1; c < (j + 1) * w; ++c) {
        if (xv(r, c) > xv(r, best)) best = c;
      }
      out(r, j) = xv(r, best);
      arg(r, j) = static_cast<int>(best);
    }
  }
  return push(std::move(out), needs(x), [x, arg](Tape& t, int self) {
    const Matrix& g = t.nodes_[self].grad;
    const Matrix& xv = t.value(x);
    Matrix dx = Matrix::Zero(xv.rows(), xv.cols());
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      for (Eigen::Index j = 0; j < g.cols(); ++j) dx(r, arg(r, j)) += g(r, j);
    }
    t.accumulate(x, dx);
  });
}

Var Tape::flatten(Var x) {
  const Matrix& xv = value(x);
  const Eigen::Index rows = xv.rows();
  const Eigen::Index cols = xv.cols();
  Matrix out(rows * cols, 1);
  for (Eigen::Index r = 0; r < rows; ++r) out.block(r * cols, 0, cols, 1) = xv.row(r).transpose();
  return push(std::move(out), needs(x), [x, rows, cols](Tape& t, int self) {
    const Matrix& g = t.nodes_[self].grad;
    Matrix dx(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) dx.row(r) = g.block(r * cols, 0, cols, 1).transpose();
    t.accumulate(x, dx);
  });
}

Var Tape::affine(Var x, Var weight, Var bias) {
  const Matrix& xv = value(x);
  const Matrix& w = value(weight);
  const Matrix& b = value(bias);
  if (xv.cols() != 1 || w.cols() != xv.rows() || b.rows() != w.rows() || b.cols() != 1) {
    fail(ErrorCode::kShapeChainBroken,
         "affine: weight " + shape(w) + ", input " + shape(xv) + ", bias " + shape(b));
  }
  return push(w * xv + b, needs(x) || needs(weight) || needs(bias),
              [x, weight, bias](Tape& t, int self) {
                const Matrix& g = t.nodes_[self].grad;
                if (t.needs(weight)) t.accumulate(weight, g * t.value(x).transpose());
                if (t.needs(bias)) t.accumulate(bias, g);
                if (t.needs(x)) t.accumulate(x, t.value(weight).transpose() * g);
              });
}

Var Tape::softmax_cross_entropy(Var logits, int label) {
  const Matrix& z = value(logits);
  if (z.cols() != 1) fail(ErrorCode::kShapeMismatch, "softmax_cross_entropy: logits must be a column");
  if (label < 0 || label >= z.rows()) {
    fail(ErrorCode::kLabelOutOfRange, "label " + std::to_string(label) + " for " +
                                          std::to_string(z.rows()) + " classes");
  }
  const Eigen::VectorXd p = softmax(z.col(0));
  const double m = z.maxCoeff();
  const double lse = m + std::log((z.array() - m).exp().sum());
  return push(Matrix::Constant(1, 1, lse - z(label, 0)), needs(logits),
              [logits, label, p](Tape& t, int self) {
                Matrix g = p;
                g(label, 0) -= 1.0;
                t.accumulate(logits, t.nodes_[self].grad(0, 0) * g);
              });
}

Var Tape::masked_mse(Var pred, const Eigen::VectorXd& target, std::span<const int> rows) {
  const Matrix& pv = value(pred);
  if (rows.empty()) fail(ErrorCode::kEmptyMask, "masked_mse needs at least one row");
  if (pv.cols() != 1 || pv.rows() != target.size()) {
    fail(ErrorCode::kShapeMismatch, "masked_mse: prediction " + shape(pv) + " vs target length " +
                                        std::to_string(target.size()));
  }
  const double inv = 1.0 / static_cast<double>(rows.size());
  Matrix resid = Matrix::Zero(pv.rows(), 1);
  double loss = 0.0;
  for (int r : rows) {
    if (r < 0 || r >= pv.rows()) fail(ErrorCode::kShapeMismatch, "masked_mse: row out of range");
    const double d = pv(r, 0) - target[r];
    resid(r, 0) += d;
    loss += d * d;
  }
  return push(Matrix::Constant(1, 1, loss * inv), needs(pred),
              [pred, resid, inv](Tape& t, int self) {
                t.accumulate(pred, (2.0 * inv * t.nodes_[self].grad(0, 0)) * resid);
              });
}

Var Tape::sum_squares(Var x) {
  return push(Matrix::Constant(1, 1, value(x).squaredNorm()), needs(x), [x](Tape& t, int self) {
    t.accumulate(x, 2.0 * t.nodes_[self].grad(0, 0) * t.value(x));
  });
}

void Tape::backward(Var root) {
  const Node& r = node(root);
  if (r.value.size() != 1) fail(ErrorCode::kShapeMismatch, "backward root must be 1x1");
  for (auto& n : nodes_) {
    if (n.requires_grad) n.grad = Matrix::Zero(n.value.rows(), n.value.cols());
  }
  if (!r.requires_grad) return;
  nodes_[static_cast<std::size_t>(root.id_)].grad(0, 0) = 1.0;
  for (int i = root.id_; i >= 0; --i) {
    Node& n = nodes_[static_cast<std::size_t>(i)];
    if (n.requires_grad && n.backprop) n.backprop(*this, i);
  }
}

}  // namespace hodgeflow::nn
