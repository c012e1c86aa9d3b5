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

#include <span>

#include <Eigen/Core>

namespace hodgeflow {

// 10 log10(peak^2 / MSE) in dB, with peak = max |f_true| over all entries and
// the MSE taken over eval_set. +inf when the MSE is zero.
double psnr(const Eigen::VectorXd& f_true, const Eigen::VectorXd& f_pred,
            std::span<const int> eval_set);

double accuracy(std::span<const int> labels_true, std::span<const int> labels_pred);

}  // namespace hodgeflow
