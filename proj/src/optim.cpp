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

#include "hodgeflow/optim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hodgeflow/error.hpp"

namespace hodgeflow::nn {

void Adam::step(std::span<Matrix* const> params, std::span<const Matrix> grads) {
  if (params.size() != grads.size()) {
    fail(ErrorCode::kShapeMismatch, "adam: " + std::to_string(params.size()) + " params vs " +
                                        std::to_string(grads.size()) + " gradients");
  }
  if (m_.empty()) {
    for (const Matrix* p : params) {
      m_.push_back(Matrix::Zero(p->rows(), p->cols()));
      v_.push_back(Matrix::Zero(p->rows(), p->cols()));
    }
  }
  if (m_.size() != params.size()) fail(ErrorCode::kShapeMismatch, "adam: parameter count changed");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i]->rows() != grads[i].rows() || params[i]->cols() != grads[i].cols() ||
        m_[i].rows() != grads[i].rows() || m_[i].cols() != grads[i].cols()) {
      fail(ErrorCode::kShapeMismatch, "adam: shape mismatch for parameter " + std::to_string(i));
    }
  }
  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * grads[i];
    v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * grads[i].cwiseAbs2();
    const auto m_hat = m_[i].array() / c1;
    const auto v_hat = v_[i].array() / c2;
    params[i]->array() -= config_.lr * m_hat / (v_hat.sqrt() + config_.eps);
  }
}

double grad_check(const Objective& fn, std::span<const Matrix> point, double h) {
  std::vector<Matrix> analytic;
  fn(point, &analytic);
  if (analytic.size() != point.size()) {
    fail(ErrorCode::kShapeMismatch, "grad_check: objective returned wrong gradient count");
  }
  std::vector<Matrix> probe(point.begin(), point.end());
  double worst = 0.0;
  for (std::size_t p = 0; p < probe.size(); ++p) {
    for (Eigen::Index k = 0; k < probe[p].size(); ++k) {
      const double orig = probe[p](k);
      probe[p](k) = orig + h;
      const double up = fn(probe, nullptr);
      probe[p](k) = orig - h;
      const double down = fn(probe, nullptr);
      probe[p](k) = orig;
      const double numeric = (up - down) / (2.0 * h);
      const double err = std::abs(analytic[p](k) - numeric) / std::max(1.0, std::abs(numeric));
      worst = std::max(worst, err);
    }
  }
  return worst;
}

}  // namespace hodgeflow::nn
