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

#include <optional>
#include <span>

#include "hodgeflow/graph.hpp"

namespace hodgeflow {

struct ConvOptConfig {
  double ridge = 1e-6;
};

// Fills unobserved edges with argmin ||B f||^2 + ridge ||f_unobserved||^2
// subject to f = f_obs on the observed edges. A singular system (ridge 0 and
// unobserved edges closing a cycle) is retried with ridge 1e-8.
FlowSignal convopt_interpolate(const FlowSignal& f_obs, std::span<const int> observed,
                               const Graph& g, const ConvOptConfig& config = {});

struct KrigingConfig {
  int embed_dim = 2;
  // Unset values are estimated from the data: lengthscale as the median
  // pairwise distance between observed edge midpoints, variance as the sample
  // variance of the observed magnitudes.
  std::optional<double> lengthscale;
  std::optional<double> variance;
  double noise_floor = 1e-6;
};

// Gaussian-process regression of |f| over spectral-embedding edge midpoints.
// The result is unsigned: |f_obs| on observed edges, predictions elsewhere.
FlowSignal kriging_interpolate(const FlowSignal& f_obs, std::span<const int> observed,
                               const Graph& g, const KrigingConfig& config = {});

}  // namespace hodgeflow
