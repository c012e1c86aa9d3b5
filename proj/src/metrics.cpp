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

#include "hodgeflow/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hodgeflow/error.hpp"

namespace hodgeflow {

double psnr(const Eigen::VectorXd& f_true, const Eigen::VectorXd& f_pred,
            std::span<const int> eval_set) {
  if (eval_set.empty()) fail(ErrorCode::kEmptyEvalSet, "psnr needs at least one evaluated entry");
  if (f_true.size() != f_pred.size()) fail(ErrorCode::kLengthMismatch, "psnr vector lengths differ");
  double sse = 0.0;
  for (int e : eval_set) {
    if (e < 0 || e >= f_true.size()) fail(ErrorCode::kDimensionMismatch, "psnr index out of range");
    const double d = f_true[e] - f_pred[e];
    sse += d * d;
  }
  const double mse = sse / static_cast<double>(eval_set.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  const double peak = f_true.cwiseAbs().maxCoeff();
  return 10.0 * std::log10(peak * peak / mse);
}

double accuracy(std::span<const int> labels_true, std::span<const int> labels_pred) {
  if (labels_true.size() != labels_pred.size()) {
    fail(ErrorCode::kLengthMismatch, std::to_string(labels_true.size()) + " vs " +
                                         std::to_string(labels_pred.size()) + " labels");
  }
  if (labels_true.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels_true.size(); ++i) hits += labels_true[i] == labels_pred[i];
  return static_cast<double>(hits) / static_cast<double>(labels_true.size());
}

}  // namespace hodgeflow
