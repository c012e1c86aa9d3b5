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

#include "hodgeflow/autodiff.hpp"

namespace hodgeflow::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction. Moments are allocated on the first step and
// must keep their shapes afterwards.
class Adam {
 public:
  explicit Adam(AdamConfig config = {}) : config_(config) {}

  void step(std::span<Matrix* const> params, std::span<const Matrix> grads);

  long step_count() const { return t_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  long t_ = 0;
};

// Scalar objective over a list of parameter arrays. When grads is non-null the
// function fills it with d(objective)/d(params), one array per parameter.
using Objective = std::function<double(std::span<const Matrix> params, std::vector<Matrix>* grads)>;

// Largest |analytic - numeric| / max(1, |numeric|) over every coordinate,
// with numeric derivatives from central differences of step h.
double grad_check(const Objective& fn, std::span<const Matrix> point, double h = 1e-5);

}  // namespace hodgeflow::nn
